#include "rlcdae/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "rlcdae/dae_solver.hpp"
#include "rlcdae/topology.hpp"

namespace rlcdae {

namespace {

constexpr double kSlack = 1e-9;
const double kInf = std::numeric_limits<double>::infinity();

std::vector<double> refine_grid(const std::vector<double>& grid, size_t at)
{
    double lo = grid[at == 0 ? 0 : at - 1];
    double hi = grid[std::min(at + 1, grid.size() - 1)];
    std::vector<double> out;
    if (!(hi > lo)) return out;
    for (int j = 1; j < 32; ++j) out.push_back(lo + (hi - lo) * j / 32.0);
    return out;
}

size_t argmax(const std::vector<double>& v) { return static_cast<size_t>(std::max_element(v.begin(), v.end()) - v.begin()); }

std::vector<double> norms_parallel(const Mat& A, const std::vector<double>& ts)
{
    std::vector<double> out(ts.size());
    const long n = static_cast<long>(ts.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) out[i] = norm2(expm(A * ts[i]));
    return out;
}

std::vector<double> norms_serial(const Mat& A, const std::vector<double>& ts)
{
    std::vector<double> out;
    out.reserve(ts.size());
    for (double t : ts) out.push_back(norm2(expm(A * t)));
    return out;
}

template <class F>
double exp_norm_with(const Mat& A, double T, int grid_points, F norms)
{
    if (A.size() == 0) return 1.0;
    auto grid = exp_norm_grid(T, grid_points);
    auto vals = norms(A, grid);
    size_t i = argmax(vals);
    double best = vals[i];
    auto fine = refine_grid(grid, i);
    if (!fine.empty()) {
        auto fv = norms(A, fine);
        best = std::max(best, *std::max_element(fv.begin(), fv.end()));
    }
    return best;
}

double lambda_max_sym(const Mat& S)
{
    if (S.size() == 0) return 0;
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (S + S.transpose()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

double lambda_min_sym(const Mat& S)
{
    if (S.size() == 0) return kInf;
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (S + S.transpose()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

// smallest eigenvalue above tol * largest
double lambda_min_plus(const Mat& S, double tol)
{
    if (S.size() == 0) return kInf;
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (S + S.transpose()), Eigen::EigenvaluesOnly);
    const Vec& ev = es.eigenvalues();
    double top = ev.maxCoeff(), best = kInf;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev(i) > tol * top) best = std::min(best, ev(i));
    return best;
}

double source_norm(const Circuit& c, Kind k)
{
    double s = 0;
    for (const Branch* b : c.of_kind(k)) s += b->value * b->value;
    return std::sqrt(s);
}

CircuitParams circuit_params(const Circuit& c, const MnaSystem& sys, double tol)
{
    CircuitParams p;
    p.d = sys.inc.d;
    std::map<std::string, int> partners;
    for (const auto& mu : c.mutuals) {
        ++partners[mu.a];
        ++partners[mu.b];
    }
    int most = 0;
    for (const auto& [id, n] : partners) most = std::max(most, n);
    p.d_l = std::max(p.d, 1 + most);
    if (sys.C.size()) {
        p.c_max = sys.C.maxCoeff();
        p.c_min = sys.C.minCoeff();
    }
    if (sys.L.size()) {
        p.l_max = sys.L.diagonal().maxCoeff();
        p.lambda_min_L = lambda_min_sym(sys.L);
        p.lambda_max_L = lambda_max_sym(sys.L);
    }
    if (sys.G.size()) p.g_max = sys.G.maxCoeff();
    p.i_max = source_norm(c, Kind::I);
    p.v_max = source_norm(c, Kind::V);
    Mat Ac = to_real(sys.inc.Ac);
    if (Ac.cols() > 0) p.lambda_min_plus_AcAct = lambda_min_plus(Ac * Ac.transpose(), tol);
    double s = kInf;
    if (sys.C.size()) s = std::min(s, p.c_min * p.lambda_min_plus_AcAct);
    if (sys.L.size()) s = std::min(s, p.lambda_min_L);
    p.sigma = std::isfinite(s) ? s : 0.0;
    return p;
}

BoundCheck check(std::string name, double actual, double bound, bool informational = false)
{
    return {std::move(name), actual, bound, actual <= bound * (1 + kSlack) + 1e-300, informational};
}

}  // namespace

std::vector<double> exp_norm_grid(double T, int grid_points)
{
    if (grid_points < 32) grid_points = 32;
    std::vector<double> g{0.0};
    if (!(T > 0)) return g;
    const int nlog = grid_points / 2;
    const int nuni = grid_points - nlog;
    const double lo = std::log(T * 1e-4), hi = std::log(T);
    for (int j = 0; j < nlog; ++j) g.push_back(std::exp(lo + (hi - lo) * j / (nlog - 1)));
    for (int j = 1; j < nuni; ++j) g.push_back(T * j / (nuni - 1));
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

double exp_norm(const Mat& A, double T, int grid_points) { return exp_norm_with(A, T, grid_points, norms_parallel); }

double exp_norm_serial(const Mat& A, double T, int grid_points) { return exp_norm_with(A, T, grid_points, norms_serial); }

std::pair<double, double> hermitian_part_check(const Mat& B, double t)
{
    Mat H = 0.5 * (B + B.transpose());
    return {norm2(expm(B * t)), norm2(expm(H * t))};
}

SaddlePoint saddle_point(const MnaSystem& sys, double tau_rank)
{
    const Mat Ac = to_real(sys.inc.Ac), Ar = to_real(sys.inc.Ar), Av = to_real(sys.inc.Av);
    const int n = sys.layout.nu;
    Mat Uc = kernel_basis(Ac.cols() ? Mat(Ac.transpose()) : Mat(0, n), tau_rank);
    if (Uc.cols() == 0) throw NumericError("saddle-point bound needs a nontrivial ker(Ac^T)");

    SaddlePoint s;
    Mat Gt = Ar.cols() ? Mat(Ar * sys.G.asDiagonal() * Ar.transpose()) : Mat::Zero(n, n);
    Mat Gc = Uc.transpose() * Gt * Uc;
    s.norm_Gc = norm2(Gc);

    const Eigen::Index q = Uc.cols(), nv = Av.cols();
    Mat B = Av.transpose() * Uc;  // nv x q
    Mat Z;
    if (nv == 0) {
        s.sigma_min_B = kInf;
        Z = Mat::Identity(q, q);
    } else {
        Eigen::JacobiSVD<Mat> svd(B);
        s.sigma_min_B = nv <= q ? svd.singularValues()(nv - 1) : 0.0;
        Z = kernel_basis(B, tau_rank);
    }
    s.min_wGw = Z.cols() ? lambda_min_sym(Z.transpose() * Gc * Z) : kInf;
    double den = std::isfinite(s.sigma_min_B) ? 1 + s.norm_Gc / s.sigma_min_B : 1.0;
    s.gamma = std::min(s.sigma_min_B, s.min_wGw) / den;

    Mat K22 = Mat::Zero(q + nv, q + nv);
    K22.topLeftCorner(q, q) = Gc;
    K22.topRightCorner(q, nv) = B.transpose();
    K22.bottomLeftCorner(nv, q) = -B;
    s.sigma_min_K22 = sigma_min(K22);
    return s;
}

bool SpectralReport::ok() const
{
    return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& b) { return b.pass || b.informational; });
}

SpectralReport spectral_report(const Circuit& c, const MnaSystem& sys, const ProjectorChain& chain, double T,
                               const ReportOptions& opts)
{
    if (!(T > 0)) throw std::invalid_argument("final time must be positive");
    SpectralReport r;
    r.index = chain.index;
    r.T = T;
    const double tol = chain.tau_rank;
    const CircuitParams& p = r.params = circuit_params(c, sys, tol);
    const double d = p.d;

    r.norm_K = norm2(sys.K);
    r.norm_M = norm2(sys.M);
    r.lambda_max_M = lambda_max_sym(sys.M);
    r.lambda_min_M = chain.index == 0 ? lambda_min_sym(sys.M) : lambda_min_plus(sys.M, tol);
    r.kappa_M = r.lambda_max_M / r.lambda_min_M;
    r.sigma_min_M1 = chain.sigma_min_M1;
    r.sigma_min_M2 = chain.sigma_min_M2;
    r.tau = chain.tau;
    {
        Mat MQ = sys.M + chain.Q0;
        r.kappa_M_Q0 = lambda_max_sym(MQ) / lambda_min_sym(MQ);
    }

    const Mat A_full = to_real(sys.inc.full());
    const Mat Ar = to_real(sys.inc.Ar), Ac = to_real(sys.inc.Ac), Al = to_real(sys.inc.Al), Av = to_real(sys.inc.Av);
    auto lam_aat = [](const Mat& X) { return X.cols() ? lambda_max_sym(X * X.transpose()) : 0.0; };

    r.checks.push_back(check("lambda_max(A A^T) <= 2d", reduced_laplacian(A_full).lambda_max, 2 * d));
    const double k_struct = (Ar.cols() ? lambda_max_sym(Ar * sys.G.asDiagonal() * Ar.transpose()) : 0.0) +
                            std::sqrt(lam_aat(Al) + lam_aat(Av));
    r.checks.push_back(
        check("||K|| <= lambda_max(G~) + sqrt(lambda_max(Al Al^T) + lambda_max(Av Av^T))", r.norm_K, k_struct));
    r.checks.push_back(check("||K|| <= 2d/r_min + sqrt(2d)", r.norm_K, 2 * d * p.g_max + std::sqrt(2 * d)));
    {
        double ct = Ac.cols() ? lambda_max_sym(Ac * sys.C.asDiagonal() * Ac.transpose()) : 0.0;
        r.checks.push_back(
            check("lambda_max(M) <= max{lambda_max(C~), lambda_max(L)}", r.lambda_max_M, std::max(ct, p.lambda_max_L)));
    }
    r.checks.push_back(
        check("lambda_max(M) <= max{2d c_max, lambda_max(L)}", r.lambda_max_M, std::max(2 * d * p.c_max, p.lambda_max_L)));
    r.checks.push_back(check("lambda_max(M) <= 2d c_max + d_L l_max", r.lambda_max_M, 2 * d * p.c_max + p.d_l * p.l_max));
    if (p.sigma > 0)
        r.checks.push_back(check(chain.index == 0 ? "kappa(M) <= max{2d c_max, d_L l_max}/sigma"
                                                  : "kappa_eff(M) <= max{2d c_max, d_L l_max}/sigma",
                                 r.kappa_M, std::max(2 * d * p.c_max, p.d_l * p.l_max) / p.sigma));
    if (chain.index >= 1) r.checks.push_back(check("||M1|| <= ||M|| + ||K||", norm2(chain.M1), r.norm_M + r.norm_K));
    if (chain.index == 2 && r.tau > 0)
        r.checks.push_back(check("||M2|| <= ||M|| + ||K||(1 + 1/tau)", norm2(chain.M2), r.norm_M + r.norm_K * (1 + 1 / r.tau)));

    DecoupledSystem dec = decouple(sys, chain);
    r.norm_A = norm2(dec.A);
    r.C_A = exp_norm(dec.A, T, opts.grid_points);
    r.norm_f = dec.f_ode.norm();

    if (chain.index == 0) {
        r.checks.push_back(check("C(-M^-1 K) <= sqrt(kappa(M))", r.C_A, std::sqrt(r.kappa_M)));
    } else if (chain.index == 1) {
        r.checks.push_back(check("C(-P0 M1^-1 K P0) <= kappa(M + Q0)", r.C_A, r.kappa_M_Q0));
        if (p.sigma > 0)
            r.checks.push_back(check("kappa(M + Q0) <= max{2d c_max, d_L l_max, 1}/min{sigma, 1}", r.kappa_M_Q0,
                                     std::max({2 * d * p.c_max, p.d_l * p.l_max, 1.0}) / std::min(p.sigma, 1.0)));
        r.saddle = saddle_point(sys, tol);
        r.has_saddle = true;
        r.checks.push_back(check("Gamma_G <= sigma_min(K22)", r.saddle.gamma, r.saddle.sigma_min_K22));
        double lamD = lambda_min_plus(sys.M, tol);
        double G = r.saddle.gamma;
        if (G > 0 && std::isfinite(lamD))
            r.checks.push_back(check("||M1^-1|| <= sqrt(2) max{(1 + ||K||/Gamma_G)/lambda_D, 1/Gamma_G}",
                                     1.0 / r.sigma_min_M1, std::sqrt(2.0) * std::max((1 + k_struct / G) / lamD, 1 / G)));
    } else {
        r.checks.push_back(check("C(-P0 P1 M2^-1 K P0 P1) <= kappa(M + Q0)", r.C_A, r.kappa_M_Q0, true));
    }

    // sample the consistent solution on dt = 1/||A|| for mu, g and ||x(T)||
    const Vec x0 = initial_state(c, sys);
    const Vec y0 = dec.project(x0);
    r.dt = r.norm_A > 0 ? std::min(T, 1.0 / r.norm_A) : T;
    auto [m, dt] = uniform_grid(T, r.dt);
    r.m = m;
    r.dt = dt;
    const int samples = std::min(m, 20000);
    const double ds = T / samples;
    const Eigen::Index n = dec.A.rows();
    Mat aug = Mat::Zero(n + 1, n + 1);
    aug.topLeftCorner(n, n) = dec.A;
    aug.topRightCorner(n, 1) = dec.f_ode;
    Mat E = expm(aug * ds);
    Vec y = y0;
    double s2 = 0, gmax = dec.reconstruct(y0).norm();
    for (int j = 1; j <= samples; ++j) {
        y = E.topLeftCorner(n, n) * y + E.topRightCorner(n, 1);
        double nx = dec.reconstruct(y).norm();
        s2 += nx * nx;
        gmax = std::max(gmax, nx);
        if (j == samples) r.xT_norm = nx;
    }
    r.mu = std::sqrt(s2 / samples);
    r.g = r.xT_norm > 0 ? gmax / r.xT_norm : kInf;

    const double e2 = std::exp(2.0);
    r.degenerate_forcing = r.norm_f == 0;
    auto cf = [&](double num, double den) { return num == 0 ? 0.0 : (den > 0 ? std::log1p(num / den) : kInf); };
    r.C_f = cf(T * e2 * r.norm_f, r.mu);
    r.C_f_final = cf(T * e2 * r.norm_f, r.xT_norm);
    const double gamma_sv = std::sqrt(2 * d) * p.i_max + p.v_max;
    if (chain.index == 0)
        r.C_f_circuit = cf(2 * T * e2 * d * p.i_max, r.mu);
    else if (chain.index == 1)
        r.C_f_circuit = cf(opts.C_const * T * d * p.g_max * gamma_sv, r.mu * p.sigma * r.saddle.gamma);
    else
        r.C_f_circuit = cf(opts.C_const * T * d * p.g_max * gamma_sv / std::max(r.tau, 1e-300), r.mu * p.sigma * r.sigma_min_M2);

    r.alpha_M = 2 * d * p.c_max + d * p.l_max;
    r.alpha_K = 2 * d * p.g_max + 4 * std::sqrt(2 * d);
    return r;
}

QuantumCost quantum_cost_report(const SpectralReport& rep, double T, double eps)
{
    QuantumCost q;
    q.eps = eps;
    q.kappa = T * rep.norm_A * rep.C_A;
    q.kappa_squared = q.kappa * q.kappa;
    const int m = std::max(1, static_cast<int>(std::ceil(T * rep.norm_A)));
    q.k = rep.mu > 0 && eps > 0 && eps < 1 ? choose_taylor_order(eps, m, T, rep.norm_f, rep.mu, OrderMode::history) : 3;

    auto at_least_one = [](double v) { return std::max(v, 1.0); };
    const double le = at_least_one(std::log(1 / eps));
    const double lk = at_least_one(std::log(q.kappa));
    const double cf = at_least_one(rep.C_f);
    const double cff = at_least_one(rep.C_f_final);
    q.terms = {
        {"uses_U_A_history", "kappa^2 * C_f * log(1/eps) * log(kappa)", q.kappa_squared * cf * le * lk},
        {"uses_O_x_O_f_history", "kappa * C_f * log(1/eps)", q.kappa * cf * le},
        {"uses_U_A_final", "g * kappa * C_f_final * log(1/eps) * log(kappa)", rep.g * q.kappa * cff * le * lk},
        {"uses_O_x_O_f_final", "g * kappa * log(1/eps)", rep.g * q.kappa * le},
        {"alpha_L_inverse", "4 e kappa", 4 * std::exp(1.0) * q.kappa},
        {"alpha_M", "2 d c_max + d l_max", rep.alpha_M},
        {"alpha_K", "2 d / r_min + 4 sqrt(2 d)", rep.alpha_K},
    };
    q.symbolic = {
        "eps_A = o(eps * kappa^-3 / poly(C_f, log kappa, log 1/eps))",
        "eps_M = eps_K = poly(sigma * eps / (T d r_min^-1 kappa_M C_f))",
        "a_M = a_K = O(log N)",
    };
    return q;
}

}  // namespace rlcdae
