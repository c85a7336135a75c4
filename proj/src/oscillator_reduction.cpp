#include "rlcdae/oscillator_reduction.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "rlcdae/dae_solver.hpp"
#include "rlcdae/projectors.hpp"

namespace rlcdae {

int OscillatorInstance::sparsity() const
{
    int d = 0;
    for (Eigen::Index j = 0; j < kappa.rows(); ++j) {
        int r = 0;
        for (Eigen::Index l = 0; l < kappa.cols(); ++l) r += kappa(j, l) != 0;
        d = std::max(d, r);
    }
    return d;
}

Mat OscillatorInstance::force_matrix() const
{
    const Eigen::Index n = size();
    Mat F = -kappa;
    for (Eigen::Index j = 0; j < n; ++j) F(j, j) = kappa.row(j).sum();
    return F;
}

void OscillatorInstance::validate() const
{
    const Eigen::Index n = size();
    if (n == 0) throw std::invalid_argument("oscillator has no masses");
    if (kappa.rows() != n || kappa.cols() != n) throw std::invalid_argument("spring matrix has the wrong size");
    for (Eigen::Index j = 0; j < n; ++j)
        if (!(masses(j) > 0) || !std::isfinite(masses(j))) throw std::invalid_argument("masses must be positive");
    bool any = false;
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index l = 0; l < n; ++l) {
            if (!(kappa(j, l) >= 0) || !std::isfinite(kappa(j, l))) throw std::invalid_argument("spring constants must be non-negative");
            if (kappa(j, l) != kappa(l, j)) throw std::invalid_argument("spring matrix must be symmetric");
            any = any || kappa(j, l) > 0;
        }
    if (!any) throw std::invalid_argument("oscillator needs at least one positive spring");
}

Eigen::Index pair_column(Eigen::Index k, Eigen::Index l, Eigen::Index n)
{
    // pairs (k, l) with k <= l, rows before k contribute n, n-1, ... columns
    return k * n - k * (k - 1) / 2 + (l - k);
}

Mat build_b_matrix(const OscillatorInstance& inst)
{
    inst.validate();
    const Eigen::Index n = inst.size();
    Mat B = Mat::Zero(n, n * (n + 1) / 2);
    for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index l = k; l < n; ++l) {
            const double s = std::sqrt(inst.kappa(k, l));
            const Eigen::Index c = pair_column(k, l, n);
            if (k == l) {
                B(k, c) = s / std::sqrt(inst.masses(k));
            } else {
                B(k, c) = s / std::sqrt(inst.masses(k));
                B(l, c) = -s / std::sqrt(inst.masses(l));
            }
        }
    return B;
}

Mat nonzero_b_columns(const OscillatorInstance& inst)
{
    Mat B = build_b_matrix(inst);
    const Eigen::Index n = inst.size();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index l = k; l < n; ++l)
            if (inst.kappa(k, l) > 0) keep.push_back(pair_column(k, l, n));
    Mat out(n, static_cast<Eigen::Index>(keep.size()));
    for (size_t j = 0; j < keep.size(); ++j) out.col(j) = B.col(keep[j]);
    return out;
}

Circuit oscillator_to_lc(const OscillatorInstance& inst)
{
    inst.validate();
    const Eigen::Index n = inst.size();
    Circuit c;
    auto node = [](Eigen::Index j) { return "n" + std::to_string(j + 1); };
    for (Eigen::Index j = 0; j < n; ++j) {
        c.nodes.push_back(node(j));
        c.branches.push_back({"C" + std::to_string(j + 1), Kind::C, node(j), "0", inst.masses(j)});
    }
    for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index l = k; l < n; ++l) {
            if (!(inst.kappa(k, l) > 0)) continue;
            std::string id = "L" + std::to_string(k + 1) + "_" + std::to_string(l + 1);
            c.branches.push_back({id, Kind::L, node(k), k == l ? "0" : node(l), 1.0 / inst.kappa(k, l)});
        }
    return c;
}

Mat lc_coupling_matrix(const MnaSystem& sys)
{
    const int n = sys.layout.nu;
    Vec cdiag = sys.M.topLeftCorner(n, n).diagonal();
    Mat Al = to_real(sys.inc.Al);
    Eigen::SelfAdjointEigenSolver<Mat> es(sys.L);
    Mat Lis = es.operatorInverseSqrt();
    return cdiag.cwiseSqrt().cwiseInverse().asDiagonal() * Al * Lis;
}

ReductionReport verify_reduction(const OscillatorInstance& inst, const Circuit& circuit, double T, const Vec& x0,
                                 const Vec& v0, int order)
{
    inst.validate();
    const Eigen::Index n = inst.size();
    if (x0.size() != n || v0.size() != n) throw std::invalid_argument("initial state has the wrong length");

    ReductionReport rep;
    MnaSystem sys = assemble_mna(circuit);
    ProjectorChain ch = build_chain(sys.M, sys.K);
    rep.index = ch.index;
    if (ch.index != 0) throw NumericError("LC circuit from the oscillator is not index 0");

    const Mat B = nonzero_b_columns(inst);
    const Mat Bc = lc_coupling_matrix(sys);
    if (Bc.rows() != B.rows() || Bc.cols() != B.cols()) throw NumericError("inductor count does not match the springs");
    rep.b_identity_error = (Bc - B).cwiseAbs().maxCoeff();
    const Vec sm = inst.masses.cwiseSqrt();
    const Mat F = inst.force_matrix();
    const Mat target = sm.cwiseInverse().asDiagonal() * F * sm.cwiseInverse().asDiagonal();
    rep.gram_error = (B * B.transpose() - target).cwiseAbs().maxCoeff();

    // y = (sqrt(M) v, B^T sqrt(M) x) evolves under [[0, -B], [B^T, 0]]
    const Eigen::Index p = B.cols();
    Mat H = Mat::Zero(n + p, n + p);
    H.topRightCorner(n, p) = -B;
    H.bottomLeftCorner(p, n) = B.transpose();
    Vec y0(n + p);
    y0 << sm.cwiseProduct(v0), B.transpose() * sm.cwiseProduct(x0);

    const double rate = std::max(norm2(H), norm2(Mat(sys.M.ldlt().solve(sys.K))));
    const double h = std::min(T, 0.5 / rate);
    auto [m, hh] = uniform_grid(T, h);
    rep.steps = m;
    rep.order = order;
    auto ys = taylor_steps(H, Vec::Zero(n + p), y0, hh, m, order);

    // LC initial state: u = v0, i = L^{-1/2} y0_tail
    Eigen::SelfAdjointEigenSolver<Mat> es(sys.L);
    const Mat Ls = es.operatorSqrt();
    const Mat Lis = es.operatorInverseSqrt();
    Vec xlc(sys.layout.size());
    xlc << v0, Lis * y0.tail(p);
    SimOptions opts;
    opts.h = hh;
    opts.k = order;
    Trajectory tr = simulate(sys, xlc, T, opts);

    Mat Z = Mat::Zero(2 * n, 2 * n);
    Z.topRightCorner(n, n) = Mat::Identity(n, n);
    Z.bottomLeftCorner(n, n) = -(inst.masses.cwiseInverse().asDiagonal() * F);
    Vec z0(2 * n);
    z0 << x0, v0;
    const Mat step = expm(Z * hh);
    Vec z = z0;

    for (int j = 0; j <= m; ++j) {
        const Vec& s = tr.states[j];
        Vec ylc(n + p);
        ylc << sm.cwiseProduct(s.head(n)), Ls * s.tail(p);
        Vec yo(n + p);
        yo << sm.cwiseProduct(z.tail(n)), B.transpose() * sm.cwiseProduct(z.head(n));
        rep.max_deviation = std::max(rep.max_deviation, (ylc - ys[j]).norm());
        rep.max_oracle_deviation = std::max(rep.max_oracle_deviation, (ylc - yo).norm());
        for (Eigen::Index q = 0; q < n; ++q) {
            double ec = 0.5 * inst.masses(q) * s(q) * s(q);
            double ek = 0.5 * inst.masses(q) * z(n + q) * z(n + q);
            rep.max_energy_deviation = std::max(rep.max_energy_deviation, std::abs(ec - ek));
        }
        z = step * z;
    }
    return rep;
}

OscillatorInstance parse_oscillator_json(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("oscillator JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("masses") || !j["masses"].is_array())
        throw std::invalid_argument("oscillator JSON needs a 'masses' array");
    OscillatorInstance inst;
    const auto& ms = j["masses"];
    const Eigen::Index n = static_cast<Eigen::Index>(ms.size());
    inst.masses.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!ms[i].is_number()) throw std::invalid_argument("masses must be numbers");
        inst.masses(i) = ms[i].get<double>();
    }
    inst.kappa = Mat::Zero(n, n);
    if (j.contains("springs")) {
        if (!j["springs"].is_array()) throw std::invalid_argument("'springs' must be an array");
        for (const auto& s : j["springs"]) {
            if (!s.is_array() || s.size() != 3 || !s[0].is_number_integer() || !s[1].is_number_integer() || !s[2].is_number())
                throw std::invalid_argument("each spring is [k, l, value]");
            long k = s[0].get<long>(), l = s[1].get<long>();
            if (k < 0 || l < 0 || k >= n || l >= n) throw std::invalid_argument("spring index out of range");
            if (inst.kappa(k, l) != 0) throw std::invalid_argument("duplicate spring");
            inst.kappa(k, l) = inst.kappa(l, k) = s[2].get<double>();
        }
    }
    inst.validate();
    return inst;
}

}  // namespace rlcdae
