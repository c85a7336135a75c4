#pragma once

#include <cstdint>
#include <vector>

#include "rlcdae/dae_solver.hpp"
#include "rlcdae/linalg.hpp"

namespace rlcdae {

/// Block system L y = psi_in over (m+1) time blocks x (k+1) Taylor blocks x N entries.
/// Only A h and the right-hand side blocks are stored.
struct HistorySystem {
    Mat Ah;
    Vec f;
    Vec x0;
    double h = 0;
    int m = 0;
    int k = 0;

    Eigen::Index n() const { return Ah.rows(); }
    Eigen::Index dim() const { return static_cast<Eigen::Index>(m + 1) * (k + 1) * n(); }

    Vec rhs() const;
    Vec apply(const Vec& y) const;             // L y
    Vec apply_transpose(const Vec& z) const;   // L^T z
    Vec solve(const Vec& r) const;             // L^{-1} r
    Vec solve_transpose(const Vec& r) const;   // L^{-T} r
};

/// Refuses systems larger than max_dim entries.
HistorySystem build_history_system(const Mat& A, const Vec& f, const Vec& y0, double h, int m, int k,
                                   Eigen::Index max_dim = 50'000'000);

/// Dense L for small systems only (dim <= 5000).
Mat dense_history_matrix(const HistorySystem& hs);

struct HistoryState {
    std::vector<double> amplitudes;  // ||x_j|| / Z
    std::vector<Vec> directions;     // x_j / ||x_j|| (zero when x_j = 0)
    double Z = 0;

    Vec stacked() const;  // unit vector sum_j |j> x_j / Z
};

HistoryState make_history_state(const std::vector<Vec>& xs);
HistoryState extract_history_state(const Trajectory& tr);
double history_distance(const HistoryState& a, const HistoryState& b);

struct ConditionEstimate {
    double sigma_max = 0;
    double sigma_min = 0;
    double kappa = 0;
    int iterations = 0;
};

/// Power iteration on L^T L and L^{-T} L^{-1}, matrix-free.
ConditionEstimate estimate_condition(const HistorySystem& hs, int max_iter = 500, double rtol = 1e-10,
                                     std::uint64_t seed = 7);

struct HistorySolution {
    std::vector<Vec> slices;  // Taylor-index-0 block of each time block
    HistoryState state;
    ConditionEstimate cond;
    double exp_norm = 0;      // C(A) over [0, m h]
    double kappa_bound = 0;   // 4 sqrt(k) e^2 m C(A)
    bool kappa_ok = false;
};

HistorySolution solve_history(const HistorySystem& hs, bool with_condition = true);

}  // namespace rlcdae
