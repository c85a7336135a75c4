#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rlcdae/linalg.hpp"
#include "rlcdae/netlist.hpp"

namespace rlcdae {

using IMat = Eigen::MatrixXi;

/// Reduced incidence matrices split by branch kind. Column j of a block maps to ids[j].
struct IncidenceSet {
    IMat Ar, Ac, Al, Av, As;
    std::vector<std::string> r_ids, c_ids, l_ids, v_ids, s_ids;
    int d = 0;  // max row sparsity of the full matrix

    int nodes() const { return static_cast<int>(Ar.rows()); }
    /// [Ar Ac Al As Av]
    IMat full() const;
};

IncidenceSet reduced_incidence(const Circuit& c);

/// Incidence over all branches in netlist order.
IMat branch_incidence(const Circuit& c);

Mat to_real(const IMat& A);

struct Laplacian {
    Mat AAt;
    double lambda_max = 0;
    int d = 0;  // max row sparsity of A
    bool within_bound = true;
};

Laplacian reduced_laplacian(const Mat& A);

bool has_capacitive_spanning_tree(const Circuit& c);

struct LoopCutset {
    std::optional<std::vector<std::string>> vc_loop;
    std::optional<std::vector<std::string>> il_cutset;
};

/// Rank tests decide; the branch lists are witnesses from graph search.
LoopCutset detect_vc_loop_il_cutset(const Circuit& c, double tau_rank = 1e-10);

/// Throws CircuitError for ill-posed circuits.
int classify_index_topological(const Circuit& c, double tau_rank = 1e-10);

}  // namespace rlcdae
