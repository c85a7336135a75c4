#include "rlcdae/observables.hpp"

#include <algorithm>
#include <stdexcept>

#include "rlcdae/topology.hpp"

namespace rlcdae {

namespace {

std::vector<int> all_columns(Eigen::Index n)
{
    std::vector<int> c(static_cast<size_t>(n));
    for (Eigen::Index j = 0; j < n; ++j) c[j] = static_cast<int>(j);
    return c;
}

std::vector<int> columns_of(const std::vector<std::string>& ids, const IdSet& subset, const char* kind)
{
    if (!subset) return all_columns(static_cast<Eigen::Index>(ids.size()));
    std::vector<int> out;
    for (const auto& id : *subset) {
        auto it = std::find(ids.begin(), ids.end(), id);
        if (it == ids.end()) throw std::invalid_argument("'" + id + "' is not a " + kind);
        int j = static_cast<int>(it - ids.begin());
        if (std::find(out.begin(), out.end(), j) == out.end()) out.push_back(j);
    }
    return out;
}

struct Selection {
    std::vector<int> c, l, r;
};

Selection select(const MnaSystem& sys, const EnergySubsets& s)
{
    return {columns_of(sys.inc.c_ids, s.capacitors, "capacitor"), columns_of(sys.inc.l_ids, s.inductors, "inductor"),
            columns_of(sys.inc.r_ids, s.resistors, "resistor")};
}

void fill(const MnaSystem& sys, const Selection& sel, const Mat& Ac, const Mat& Ar, const Vec& x, double& ec, double& el,
          double& pr)
{
    const Layout& lay = sys.layout;
    Vec u = x.head(lay.nu);
    Vec i = x.segment(lay.nu, lay.nl);
    ec = capacitor_energy(u, sys.C, Ac, sel.c);
    el = inductor_energy(i, sys.L, sel.l);
    pr = dissipated_power(u, sys.G, Ar, sel.r);
}

}  // namespace

double capacitor_energy(const Vec& u, const Vec& C, const Mat& Ac, const std::vector<int>& cols)
{
    if (Ac.rows() != u.size() || Ac.cols() != C.size()) throw std::invalid_argument("capacitor dimensions do not match");
    double e = 0;
    for (int j : cols) {
        double v = Ac.col(j).dot(u);
        e += C(j) * v * v;
    }
    return 0.5 * e;
}

double capacitor_energy(const Vec& u, const Vec& C, const Mat& Ac) { return capacitor_energy(u, C, Ac, all_columns(C.size())); }

double inductor_energy(const Vec& i, const Mat& L, const std::vector<int>& cols)
{
    if (L.rows() != i.size() || L.cols() != i.size()) throw std::invalid_argument("inductor dimensions do not match");
    double e = 0;
    for (int a : cols)
        for (int b : cols) e += i(a) * L(a, b) * i(b);
    return 0.5 * e;
}

double inductor_energy(const Vec& i, const Mat& L) { return inductor_energy(i, L, all_columns(L.rows())); }

double dissipated_power(const Vec& u, const Vec& G, const Mat& Ar, const std::vector<int>& cols)
{
    if (Ar.rows() != u.size() || Ar.cols() != G.size()) throw std::invalid_argument("resistor dimensions do not match");
    double p = 0;
    for (int j : cols) {
        double v = Ar.col(j).dot(u);
        p += G(j) * v * v;
    }
    return p;
}

double dissipated_power(const Vec& u, const Vec& G, const Mat& Ar) { return dissipated_power(u, G, Ar, all_columns(G.size())); }

double capacitor_energy(const MnaSystem& sys, const Vec& x, const IdSet& subset)
{
    return capacitor_energy(x.head(sys.layout.nu), sys.C, to_real(sys.inc.Ac), columns_of(sys.inc.c_ids, subset, "capacitor"));
}

double inductor_energy(const MnaSystem& sys, const Vec& x, const IdSet& subset)
{
    return inductor_energy(x.segment(sys.layout.nu, sys.layout.nl), sys.L, columns_of(sys.inc.l_ids, subset, "inductor"));
}

double dissipated_power(const MnaSystem& sys, const Vec& x, const IdSet& subset)
{
    return dissipated_power(x.head(sys.layout.nu), sys.G, to_real(sys.inc.Ar), columns_of(sys.inc.r_ids, subset, "resistor"));
}

double quadratic_form(const Vec& x, const Mat& O)
{
    if (O.rows() != x.size() || O.cols() != x.size()) throw std::invalid_argument("observable dimensions do not match");
    double scale = O.cwiseAbs().maxCoeff();
    if (O.size() && (O - O.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw std::invalid_argument("observable must be symmetric");
    return x.dot(O * x);
}

Mat capacitor_energy_observable(const MnaSystem& sys)
{
    const int n = sys.layout.size();
    Mat O = Mat::Zero(n, n);
    O.topLeftCorner(sys.layout.nu, sys.layout.nu) = sys.M.topLeftCorner(sys.layout.nu, sys.layout.nu);
    return O;
}

EnergyTrace energy_trace(const MnaSystem& sys, const Trajectory& tr, const EnergySubsets& subsets)
{
    const Selection sel = select(sys, subsets);
    const Mat Ac = to_real(sys.inc.Ac), Ar = to_real(sys.inc.Ar);
    const long n = static_cast<long>(tr.states.size());
    EnergyTrace et;
    et.times = tr.times;
    et.E_C.resize(n);
    et.E_L.resize(n);
    et.P_R.resize(n);
    et.E_total.resize(n);
#pragma omp parallel for
    for (long j = 0; j < n; ++j) {
        fill(sys, sel, Ac, Ar, tr.states[j], et.E_C[j], et.E_L[j], et.P_R[j]);
        et.E_total[j] = et.E_C[j] + et.E_L[j];
    }
    return et;
}

EnergyTrace energy_trace_serial(const MnaSystem& sys, const Trajectory& tr, const EnergySubsets& subsets)
{
    const Selection sel = select(sys, subsets);
    const Mat Ac = to_real(sys.inc.Ac), Ar = to_real(sys.inc.Ar);
    EnergyTrace et;
    et.times = tr.times;
    for (const Vec& x : tr.states) {
        double ec, el, pr;
        fill(sys, sel, Ac, Ar, x, ec, el, pr);
        et.E_C.push_back(ec);
        et.E_L.push_back(el);
        et.P_R.push_back(pr);
        et.E_total.push_back(ec + el);
    }
    return et;
}

}  // namespace rlcdae
