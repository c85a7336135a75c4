#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rlcdae/linalg.hpp"
#include "rlcdae/mna.hpp"
#include "rlcdae/netlist.hpp"
#include "rlcdae/projectors.hpp"

namespace rlcdae {

/// sup_{t in [0,T]} ||exp(At)|| sampled on a log+uniform grid and refined once near the argmax.
/// A lower approximation of the true supremum.
double exp_norm(const Mat& A, double T, int grid_points = 256);
double exp_norm_serial(const Mat& A, double T, int grid_points = 256);

/// Sample times used by exp_norm before refinement.
std::vector<double> exp_norm_grid(double T, int grid_points);

/// (||exp(Bt)||, ||exp(Ht)||) with H the Hermitian part of B.
std::pair<double, double> hermitian_part_check(const Mat& B, double t);

struct BoundCheck {
    std::string name;
    double actual = 0;
    double bound = 0;
    bool pass = false;
    bool informational = false;  // reported but not part of ok()
};

struct CircuitParams {
    int d = 0;
    int d_l = 0;  // max(d, 1 + mutual partners), row bound for L
    double c_max = 0, c_min = 0;
    double l_max = 0;        // largest self inductance
    double lambda_min_L = 0;
    double lambda_max_L = 0;
    double g_max = 0;        // 1 / r_min, 0 without resistors
    double i_max = 0, v_max = 0;
    double lambda_min_plus_AcAct = 0;
    double sigma = 0;        // min{c_min lambda+(Ac Ac^T), lambda_min(L)}
};

struct SaddlePoint {
    double sigma_min_B = 0;    // sigma_min(Av^T Qc), inf without voltage sources
    double min_wGw = 0;        // min over unit w in ker(Av^T Qc), inf when the kernel is trivial
    double norm_Gc = 0;
    double gamma = 0;
    double sigma_min_K22 = 0;
};

/// Saddle-point quantities of the index-1 block K22; throws NumericError when ker(Ac^T) is trivial.
SaddlePoint saddle_point(const MnaSystem& sys, double tau_rank = 1e-10);

struct ReportOptions {
    double C_const = 1.0;  // absolute constant in the index-1/2 forcing term
    int grid_points = 256;
};

struct SpectralReport {
    int index = 0;
    double T = 0;
    CircuitParams params;

    double norm_K = 0, norm_M = 0;
    double lambda_max_M = 0, lambda_min_M = 0;  // lambda_min^+ when M is singular
    double kappa_M = 0;
    double sigma_min_M1 = 0, sigma_min_M2 = 0, tau = 0;
    double kappa_M_Q0 = 0;
    SaddlePoint saddle;  // index 1 only
    bool has_saddle = false;

    double norm_A = 0;
    double C_A = 0;
    double norm_f = 0;
    double mu = 0, g = 0, xT_norm = 0;
    double dt = 0;
    int m = 0;
    double C_f = 0;          // ODE-solver form, history normalization
    double C_f_final = 0;    // ODE-solver form, final-state normalization
    double C_f_circuit = 0;  // circuit-parameter form for the given index
    bool degenerate_forcing = false;

    double alpha_M = 0, alpha_K = 0;

    std::vector<BoundCheck> checks;

    bool ok() const;
};

SpectralReport spectral_report(const Circuit& c, const MnaSystem& sys, const ProjectorChain& chain, double T,
                               const ReportOptions& opts = {});

struct CostTerm {
    std::string name;
    std::string formula;
    double value = 0;
};

struct QuantumCost {
    double kappa = 0;
    double kappa_squared = 0;
    int k = 0;
    double eps = 0;
    std::vector<CostTerm> terms;
    std::vector<std::string> symbolic;  // sufficiency conditions that are not evaluated
};

QuantumCost quantum_cost_report(const SpectralReport& rep, double T, double eps);

}  // namespace rlcdae
