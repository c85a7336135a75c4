#include "rlcdae/dae_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rlcdae {

namespace {

Mat solve_left(const Mat& A, const Mat& B)
{
    Eigen::PartialPivLU<Mat> lu(A);
    return lu.solve(B);
}

}  // namespace

DecoupledSystem decouple(const Mat& M, const Mat& K, const Vec& f, const ProjectorChain& ch)
{
    const Eigen::Index n = M.rows();
    const Mat I = Mat::Identity(n, n);
    DecoupledSystem d;
    d.index = ch.index;
    d.Gz = Mat::Zero(n, n);
    d.cz = Vec::Zero(n);

    if (ch.index == 0) {
        if (!is_nonsingular(M, ch.tau_rank)) throw NumericError("M is numerically singular");
        d.A = -solve_left(M, K);
        d.f_ode = solve_left(M, f);
        d.Py = I;
        return d;
    }
    if (ch.index == 1) {
        if (!is_nonsingular(ch.M1, ch.tau_rank)) throw NumericError("M1 is numerically singular");
        Mat WK = solve_left(ch.M1, K);
        Vec Wf = solve_left(ch.M1, f);
        d.A = -ch.P0 * WK * ch.P0;
        d.f_ode = ch.P0 * Wf;
        d.Py = ch.P0;
        d.Gz = -ch.Q0 * WK;
        d.cz = ch.Q0 * Wf;
        return d;
    }
    if (ch.index == 2) {
        if (!is_nonsingular(ch.M2, ch.tau_rank)) throw NumericError("M2 is numerically singular");
        const Mat P0P1 = ch.P0 * ch.P1;
        const Mat K2 = ch.K1 * ch.P1;
        Eigen::PartialPivLU<Mat> lu(ch.M2);
        Mat W = lu.inverse();
        Mat WK = W * K;
        Mat WK2 = W * K2;
        const Mat& Q0 = ch.Q0;
        const Mat& Q1 = ch.Q1;
        Mat G2 = Q0 * Q1 * WK2 * WK2 + Q0 * (2 * Q1 - I) * WK - Q1 * WK;
        Mat F2 = -Q0 * Q1 * WK2 * W + Q0 * (I - 2 * Q1) * W + Q1 * W;
        d.A = -P0P1 * WK * P0P1;
        d.f_ode = P0P1 * (W * f);
        d.Py = P0P1;
        d.Gz = G2;
        d.cz = F2 * f;
        return d;
    }
    throw NumericError("unsupported tractability index");
}

DecoupledSystem decouple(const MnaSystem& sys, const ProjectorChain& chain)
{
    return decouple(sys.M, sys.K, sys.f, chain);
}

std::vector<double> Trajectory::norms() const
{
    std::vector<double> out;
    out.reserve(states.size());
    for (const auto& x : states) out.push_back(x.norm());
    return out;
}

std::pair<Mat, Mat> taylor_propagators(const Mat& A, double h, int k)
{
    if (k < 1) throw std::invalid_argument("Taylor order must be at least 1");
    double nh = norm2(A) * h;
    if (nh > 1 + 1e-12) throw NumericError("||A|| h = " + std::to_string(nh) + " exceeds 1");
    const Eigen::Index n = A.rows();
    const Mat I = Mat::Identity(n, n);
    const Mat Z = A * h;
    Mat S = I;
    for (int j = k; j >= 2; --j) S = I + (Z / j) * S;
    Mat T = I + Z * S;
    return {T, S};
}

int choose_taylor_order(double delta, int m, double T, double f_norm, double mu_or_xT, OrderMode mode)
{
    if (!(delta > 0 && delta < 1)) throw std::invalid_argument("delta must lie in (0, 1)");
    if (m < 1) throw std::invalid_argument("m must be positive");
    if (!(mu_or_xT > 0)) throw std::invalid_argument("normalization must be positive");
    const double e = std::exp(1.0);
    const double factor = mode == OrderMode::history ? 4.0 : 2.0;
    const double omega = factor * m * e * e * e / delta * (1 + T * e * e * f_norm / mu_or_xT);
    const double lo = std::log(omega);
    int k = std::max(3, static_cast<int>(std::ceil(2 * lo / std::log(lo))));
    while (std::lgamma(k + 2.0) < lo) ++k;
    return k;
}

std::vector<Vec> taylor_steps(const Mat& A, const Vec& f, const Vec& y0, double h, int m, int k)
{
    auto [T, S] = taylor_propagators(A, h, k);
    Vec g = h * (S * f);
    std::vector<Vec> ys;
    ys.reserve(m + 1);
    ys.push_back(y0);
    for (int j = 0; j < m; ++j) ys.push_back(T * ys.back() + g);
    return ys;
}

std::pair<int, double> uniform_grid(double T, double h)
{
    if (!(T > 0) || !(h > 0)) throw std::invalid_argument("T and h must be positive");
    int m = std::max(1, static_cast<int>(std::ceil(T / h - 1e-9)));
    return {m, T / m};
}

double default_step(const Mat& M, const Mat& K, const DecoupledSystem& dec)
{
    if (dec.index == 0) {
        double nk = norm2(K);
        return nk > 0 ? sigma_min(M) / nk : 0.0;
    }
    double na = norm2(dec.A);
    return na > 0 ? 1.0 / na : 0.0;
}

OrderChoice estimate_order(const DecoupledSystem& dec, const Vec& y0, double T, double h, int m, double delta,
                           OrderMode mode, std::optional<double> mu_override)
{
    double hc = std::min(10 * h, T);
    double na = norm2(dec.A);
    if (na > 0) hc = std::min(hc, 1.0 / na);
    auto [mc, hc2] = uniform_grid(T, hc);
    auto ys = taylor_steps(dec.A, dec.f_ode, y0, hc2, mc, 10);
    double s = 0;
    for (int j = 1; j <= mc; ++j) s += ys[j].squaredNorm();
    OrderChoice oc{0, std::sqrt(s / mc), ys.back().norm()};
    if (mu_override) oc.mu = *mu_override;
    double norm_ref = mode == OrderMode::history ? oc.mu : oc.xT_norm;
    double fn = dec.f_ode.norm();
    if (norm_ref == 0 && fn == 0) {
        oc.k = 3;  // the solution is identically zero
        return oc;
    }
    oc.k = choose_taylor_order(delta, m, T, fn, norm_ref, mode);
    return oc;
}

Trajectory simulate(const Mat& M, const Mat& K, const Vec& f, const Vec& x0, double T, const SimOptions& opts)
{
    if (!(T > 0)) throw std::invalid_argument("final time must be positive");
    if (x0.size() != M.rows()) throw std::invalid_argument("initial state has the wrong dimension");
    ProjectorChain ch = build_chain(M, K, opts.tau_rank);
    DecoupledSystem dec = decouple(M, K, f, ch);

    double h0 = opts.h ? *opts.h : default_step(M, K, dec);
    if (!(h0 > 0) || h0 > T) h0 = T;
    auto [m, h] = uniform_grid(T, h0);

    Trajectory tr;
    tr.h = h;
    tr.m = m;
    tr.index = ch.index;
    tr.layout = {static_cast<int>(M.rows()), 0, 0};

    Vec y0 = dec.project(x0);
    if (opts.k)
        tr.k = *opts.k;
    else
        tr.k = estimate_order(dec, y0, T, h, m, opts.delta.value_or(1e-6), opts.mode, opts.mu).k;

    tr.ode_states = taylor_steps(dec.A, dec.f_ode, y0, h, m, tr.k);
    tr.times.resize(m + 1);
    tr.states.resize(m + 1);
    for (int j = 0; j <= m; ++j) {
        tr.times[j] = j * h;
        tr.states[j] = j == 0 ? x0 : dec.reconstruct(tr.ode_states[j]);
    }
    tr.consistency_gap = (x0 - dec.reconstruct(y0)).norm();
    return tr;
}

Trajectory simulate(const MnaSystem& sys, const Vec& x0, double T, const SimOptions& opts)
{
    Trajectory tr = simulate(sys.M, sys.K, sys.f, x0, T, opts);
    tr.layout = sys.layout;
    return tr;
}

Trajectory reference_solve(const Mat& A, const Vec& f, const Vec& x0, const std::vector<double>& times)
{
    if (!std::is_sorted(times.begin(), times.end())) throw std::invalid_argument("times must be sorted");
    const Eigen::Index n = A.rows();
    Mat aug = Mat::Zero(n + 1, n + 1);
    aug.topLeftCorner(n, n) = A;
    aug.topRightCorner(n, 1) = f;
    Trajectory tr;
    tr.times = times;
    tr.layout = {static_cast<int>(n), 0, 0};
    tr.m = times.empty() ? 0 : static_cast<int>(times.size()) - 1;
    if (times.size() > 1) tr.h = times[1] - times[0];
    for (double t : times) {
        Mat E = expm(aug * t);
        tr.states.push_back(E.topLeftCorner(n, n) * x0 + E.topRightCorner(n, 1));
    }
    tr.ode_states = tr.states;
    return tr;
}

}  // namespace rlcdae
