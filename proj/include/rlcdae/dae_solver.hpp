#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "rlcdae/linalg.hpp"
#include "rlcdae/mna.hpp"
#include "rlcdae/projectors.hpp"

namespace rlcdae {

/// Inherent ODE  y' = A y + f_ode  plus the algebraic map  x = y + Gz y + cz.
struct DecoupledSystem {
    int index = 0;
    Mat A;
    Vec f_ode;
    Mat Py;  // I, P0 or P0 P1
    Mat Gz;
    Vec cz;

    Vec project(const Vec& x0) const { return Py * x0; }
    Vec reconstruct(const Vec& y) const { return y + Gz * y + cz; }
};

DecoupledSystem decouple(const Mat& M, const Mat& K, const Vec& f, const ProjectorChain& chain);
DecoupledSystem decouple(const MnaSystem& sys, const ProjectorChain& chain);

struct Trajectory {
    std::vector<double> times;
    std::vector<Vec> states;
    std::vector<Vec> ode_states;
    Layout layout;
    double h = 0;
    int m = 0;
    int k = 0;
    int index = 0;
    double consistency_gap = 0;

    std::vector<double> norms() const;
};

/// (T_k(Ah), S_k(Ah)); throws NumericError when ||A|| h > 1.
std::pair<Mat, Mat> taylor_propagators(const Mat& A, double h, int k);

enum class OrderMode { history, final_state };

/// Taylor order for accuracy delta; mu_or_xT is mu in history mode and ||x(T)|| in final mode.
int choose_taylor_order(double delta, int m, double T, double f_norm, double mu_or_xT, OrderMode mode);

/// y_{j+1} = T_k(Ah) y_j + h S_k(Ah) f for j < m.
std::vector<Vec> taylor_steps(const Mat& A, const Vec& f, const Vec& y0, double h, int m, int k);

struct SimOptions {
    std::optional<double> h;
    std::optional<int> k;
    std::optional<double> delta;
    std::optional<double> mu;  // overrides the coarse pre-solve estimate
    OrderMode mode = OrderMode::final_state;
    double tau_rank = 1e-10;
};

/// Default step from the decoupled system: sigma_min(M)/||K|| for index 0, 1/||A|| otherwise.
double default_step(const Mat& M, const Mat& K, const DecoupledSystem& dec);

struct OrderChoice {
    int k;
    double mu;
    double xT_norm;
};

/// Picks k from delta via a coarse pre-solve (step 10h, order 10).
OrderChoice estimate_order(const DecoupledSystem& dec, const Vec& y0, double T, double h, int m, double delta,
                           OrderMode mode, std::optional<double> mu_override = std::nullopt);

Trajectory simulate(const MnaSystem& sys, const Vec& x0, double T, const SimOptions& opts = {});
Trajectory simulate(const Mat& M, const Mat& K, const Vec& f, const Vec& x0, double T, const SimOptions& opts = {});

/// x(t) = e^{At} x0 + int_0^t e^{A(t-s)} f ds via the augmented exponential.
Trajectory reference_solve(const Mat& A, const Vec& f, const Vec& x0, const std::vector<double>& times);

/// Step count and uniform step covering [0, T] with steps no longer than h.
std::pair<int, double> uniform_grid(double T, double h);

}  // namespace rlcdae
