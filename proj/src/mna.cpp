#include "rlcdae/mna.hpp"

#include <algorithm>
#include <stdexcept>

namespace rlcdae {

MnaSystem assemble_mna(const Circuit& c)
{
    MnaSystem s;
    s.inc = reduced_incidence(c);
    const IncidenceSet& inc = s.inc;
    const int n = inc.nodes();
    const int nl = static_cast<int>(inc.Al.cols());
    const int nv = static_cast<int>(inc.Av.cols());
    s.layout = {n, nl, nv};

    auto values = [&](const std::vector<std::string>& ids) {
        Vec v(static_cast<Eigen::Index>(ids.size()));
        for (size_t j = 0; j < ids.size(); ++j) v(j) = c.find(ids[j])->value;
        return v;
    };
    s.C = values(inc.c_ids);
    s.G = values(inc.r_ids).cwiseInverse();
    Vec is = values(inc.s_ids);
    Vec vv = values(inc.v_ids);

    s.L = values(inc.l_ids).asDiagonal();
    for (const auto& m : c.mutuals) {
        int a = static_cast<int>(std::find(inc.l_ids.begin(), inc.l_ids.end(), m.a) - inc.l_ids.begin());
        int b = static_cast<int>(std::find(inc.l_ids.begin(), inc.l_ids.end(), m.b) - inc.l_ids.begin());
        s.L(a, b) = m.value;
        s.L(b, a) = m.value;
    }
    if (nl > 0) {
        Eigen::LLT<Mat> llt(s.L);
        if (llt.info() != Eigen::Success) throw CircuitError("inductance matrix is not positive definite");
    }

    const Mat Ar = to_real(inc.Ar), Ac = to_real(inc.Ac), Al = to_real(inc.Al), Av = to_real(inc.Av),
              As = to_real(inc.As);
    const int N = s.layout.size();
    s.M = Mat::Zero(N, N);
    s.K = Mat::Zero(N, N);
    s.f = Vec::Zero(N);

    s.M.topLeftCorner(n, n) = Ac * s.C.asDiagonal() * Ac.transpose();
    s.M.block(n, n, nl, nl) = s.L;

    s.K.topLeftCorner(n, n) = Ar * s.G.asDiagonal() * Ar.transpose();
    s.K.block(0, n, n, nl) = Al;
    s.K.block(0, n + nl, n, nv) = Av;
    s.K.block(n, 0, nl, n) = -Al.transpose();
    s.K.block(n + nl, 0, nv, n) = -Av.transpose();

    s.f.head(n) = -As * is;
    s.f.tail(nv) = -vv;
    return s;
}

Vec initial_state(const Circuit& c, const MnaSystem& sys)
{
    Vec x = Vec::Zero(sys.layout.size());
    for (const auto& [node, v] : c.ic_voltage) x(c.row(node)) = v;
    for (const auto& [id, i] : c.ic_current) {
        const auto& l = sys.inc.l_ids;
        const auto& v = sys.inc.v_ids;
        if (auto it = std::find(l.begin(), l.end(), id); it != l.end())
            x(sys.layout.nu + (it - l.begin())) = i;
        else if (auto jt = std::find(v.begin(), v.end(), id); jt != v.end())
            x(sys.layout.nu + sys.layout.nl + (jt - v.begin())) = i;
    }
    return x;
}

std::vector<double> dae_residual(const MnaSystem& sys, const std::vector<double>& times, const std::vector<Vec>& states)
{
    const size_t n = times.size();
    if (n < 3 || states.size() != n) throw std::invalid_argument("dae_residual needs at least 3 matching samples");
    for (const auto& x : states)
        if (x.size() != sys.layout.size()) throw std::invalid_argument("state dimension does not match the system");
    const double h = times[1] - times[0];
    std::vector<double> r(n);
    for (size_t j = 0; j < n; ++j) {
        Vec dx;
        if (j == 0)
            dx = (-3 * states[0] + 4 * states[1] - states[2]) / (2 * h);
        else if (j == n - 1)
            dx = (3 * states[n - 1] - 4 * states[n - 2] + states[n - 3]) / (2 * h);
        else
            dx = (states[j + 1] - states[j - 1]) / (2 * h);
        r[j] = (sys.M * dx + sys.K * states[j] - sys.f).norm();
    }
    return r;
}

Vec node_voltages_from_branch(const Circuit& c, const Vec& v0, double tol)
{
    Mat A = to_real(branch_incidence(c));
    if (v0.size() != A.cols()) throw std::invalid_argument("branch-voltage vector has the wrong length");
    Mat AAt = A * A.transpose();
    Vec u = AAt.ldlt().solve(A * v0);
    double gap = (A.transpose() * u - v0).norm();
    if (gap > tol * v0.norm())
        throw CircuitError("branch voltages violate Kirchhoff's voltage law (gap " + std::to_string(gap) + ")");
    return u;
}

}  // namespace rlcdae
