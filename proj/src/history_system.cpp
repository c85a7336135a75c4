#include "rlcdae/history_system.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "rlcdae/diagnostics.hpp"

namespace rlcdae {

namespace {

struct Blocks {
    Eigen::Index n;
    int k;

    Eigen::Index at(int i, int j) const { return (static_cast<Eigen::Index>(i) * (k + 1) + j) * n; }
    Eigen::Index width() const { return static_cast<Eigen::Index>(k + 1) * n; }
};

// D v = Collect (I - TaylorShift)^{-1} v; output lives in Taylor block 0
Vec collect_shift(const HistorySystem& hs, const Eigen::Ref<const Vec>& v)
{
    const Eigen::Index n = hs.n();
    Vec w = v.segment(0, n);
    Vec out = w;
    for (int j = 0; j < hs.k; ++j) {
        w = v.segment((j + 1) * n, n) + hs.Ah * w / (j + 1);
        out += w;
    }
    Vec full = Vec::Zero(static_cast<Eigen::Index>(hs.k + 1) * n);
    full.head(n) = out;
    return full;
}

Vec collect_shift_transpose(const HistorySystem& hs, const Eigen::Ref<const Vec>& u)
{
    const Eigen::Index n = hs.n();
    Vec u0 = u.head(n);
    Vec full(static_cast<Eigen::Index>(hs.k + 1) * n);
    Vec w = u0;
    full.segment(static_cast<Eigen::Index>(hs.k) * n, n) = w;
    for (int j = hs.k - 1; j >= 0; --j) {
        w = u0 + hs.Ah.transpose() * w / (j + 1);
        full.segment(static_cast<Eigen::Index>(j) * n, n) = w;
    }
    return full;
}

}  // namespace

HistorySystem build_history_system(const Mat& A, const Vec& f, const Vec& y0, double h, int m, int k,
                                   Eigen::Index max_dim)
{
    if (m < 1 || k < 1) throw std::invalid_argument("history system needs m >= 1 and k >= 1");
    if (A.rows() != A.cols() || f.size() != A.rows() || y0.size() != A.rows())
        throw std::invalid_argument("history system dimensions do not match");
    if (norm2(A) * h > 1 + 1e-12) throw NumericError("||A|| h exceeds 1");
    HistorySystem hs{A * h, f, y0, h, m, k};
    if (hs.dim() > max_dim) throw NumericError("history system dimension " + std::to_string(hs.dim()) + " too large");
    return hs;
}

Vec HistorySystem::rhs() const
{
    Blocks b{n(), k};
    Vec r = Vec::Zero(dim());
    r.segment(b.at(0, 0), n()) = x0;
    for (int i = 0; i < m; ++i) r.segment(b.at(i, 1), n()) = h * f;
    return r;
}

Vec HistorySystem::apply(const Vec& y) const
{
    Blocks b{n(), k};
    Vec out = y;
    for (int i = 0; i < m; ++i) out.segment(b.at(i + 1, 0), b.width()) -= collect_shift(*this, y.segment(b.at(i, 0), b.width()));
    return out;
}

Vec HistorySystem::apply_transpose(const Vec& z) const
{
    Blocks b{n(), k};
    Vec out = z;
    for (int i = 0; i < m; ++i)
        out.segment(b.at(i, 0), b.width()) -= collect_shift_transpose(*this, z.segment(b.at(i + 1, 0), b.width()));
    return out;
}

Vec HistorySystem::solve(const Vec& r) const
{
    Blocks b{n(), k};
    Vec y = r;
    for (int i = 0; i < m; ++i) y.segment(b.at(i + 1, 0), b.width()) += collect_shift(*this, y.segment(b.at(i, 0), b.width()));
    return y;
}

Vec HistorySystem::solve_transpose(const Vec& r) const
{
    Blocks b{n(), k};
    Vec z = r;
    for (int i = m - 1; i >= 0; --i)
        z.segment(b.at(i, 0), b.width()) += collect_shift_transpose(*this, z.segment(b.at(i + 1, 0), b.width()));
    return z;
}

Mat dense_history_matrix(const HistorySystem& hs)
{
    const Eigen::Index d = hs.dim();
    if (d > 5000) throw NumericError("dense history matrix refused above 5000 rows");
    Mat L(d, d);
    Vec e = Vec::Zero(d);
    for (Eigen::Index c = 0; c < d; ++c) {
        e(c) = 1;
        L.col(c) = hs.apply(e);
        e(c) = 0;
    }
    return L;
}

Vec HistoryState::stacked() const
{
    if (directions.empty()) return Vec();
    const Eigen::Index n = directions[0].size();
    Vec out(static_cast<Eigen::Index>(directions.size()) * n);
    for (size_t j = 0; j < directions.size(); ++j) out.segment(j * n, n) = amplitudes[j] * directions[j];
    return out;
}

HistoryState make_history_state(const std::vector<Vec>& xs)
{
    HistoryState s;
    double z2 = 0;
    for (const auto& x : xs) z2 += x.squaredNorm();
    if (!(z2 > 0)) throw NumericError("history state of an all-zero trajectory");
    s.Z = std::sqrt(z2);
    for (const auto& x : xs) {
        double nx = x.norm();
        s.amplitudes.push_back(nx / s.Z);
        s.directions.push_back(nx > 0 ? Vec(x / nx) : Vec(Vec::Zero(x.size())));
    }
    return s;
}

HistoryState extract_history_state(const Trajectory& tr) { return make_history_state(tr.ode_states.empty() ? tr.states : tr.ode_states); }

double history_distance(const HistoryState& a, const HistoryState& b) { return (a.stacked() - b.stacked()).norm(); }

ConditionEstimate estimate_condition(const HistorySystem& hs, int max_iter, double rtol, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N01;
    auto power = [&](auto&& op, int& iters) {
        Vec v(hs.dim());
        for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = N01(rng);
        v.normalize();
        double lam = 0;
        for (int it = 0; it < max_iter; ++it) {
            Vec w = op(v);
            double nl = w.norm();
            iters = it + 1;
            if (nl == 0) return 0.0;
            v = w / nl;
            if (std::abs(nl - lam) <= rtol * nl) {
                lam = nl;
                break;
            }
            lam = nl;
        }
        return lam;
    };
    ConditionEstimate c;
    int i1 = 0, i2 = 0;
    double lmax = power([&](const Vec& v) { return hs.apply_transpose(hs.apply(v)); }, i1);
    double linv = power([&](const Vec& v) { return hs.solve(hs.solve_transpose(v)); }, i2);
    c.sigma_max = std::sqrt(lmax);
    c.sigma_min = linv > 0 ? 1.0 / std::sqrt(linv) : 0.0;
    c.kappa = c.sigma_min > 0 ? c.sigma_max / c.sigma_min : INFINITY;
    c.iterations = i1 + i2;
    return c;
}

HistorySolution solve_history(const HistorySystem& hs, bool with_condition)
{
    HistorySolution out;
    Blocks b{hs.n(), hs.k};
    Vec y = hs.solve(hs.rhs());
    double z2 = 0;
    for (int i = 0; i <= hs.m; ++i) {
        out.slices.push_back(y.segment(b.at(i, 0), hs.n()));
        z2 += out.slices.back().squaredNorm();
    }
    if (z2 > 0) {
        out.state = make_history_state(out.slices);
    } else {
        out.state.amplitudes.assign(out.slices.size(), 0.0);
        out.state.directions.assign(out.slices.size(), Vec::Zero(hs.n()));
    }
    if (with_condition) {
        out.cond = estimate_condition(hs);
        Mat A = hs.Ah / hs.h;
        out.exp_norm = exp_norm(A, hs.m * hs.h);
        const double e = std::exp(1.0);
        out.kappa_bound = 4 * std::sqrt(double(hs.k)) * e * e * hs.m * out.exp_norm;
        out.kappa_ok = out.cond.kappa <= out.kappa_bound * (1 + 1e-9);
    }
    return out;
}

}  // namespace rlcdae
