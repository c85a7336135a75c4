// One line per acceptance criterion; exit status is the number of failures.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "rlcdae/dae_solver.hpp"
#include "rlcdae/diagnostics.hpp"
#include "rlcdae/history_system.hpp"
#include "rlcdae/mna.hpp"
#include "rlcdae/netlist.hpp"
#include "rlcdae/observables.hpp"
#include "rlcdae/oscillator_reduction.hpp"
#include "rlcdae/projectors.hpp"
#include "rlcdae/random_circuits.hpp"
#include "rlcdae/topology.hpp"

using namespace rlcdae;

namespace {

std::string slurp(const std::string& name)
{
    std::ifstream in(std::string(RLCDAE_FIXTURES) + "/" + name);
    if (!in) throw std::runtime_error("missing fixture " + name);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Circuit fixture(const std::string& name) { return parse_netlist(slurp(name)); }

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

Outcome analytic_rc()
{
    Circuit c = fixture("rc.net");
    MnaSystem s = assemble_mna(c);
    SimOptions o;
    o.h = 0.1;
    o.k = 15;
    Trajectory tr = simulate(s, initial_state(c, s), 1.0, o);
    double err = 0;
    for (size_t j = 0; j < tr.times.size(); ++j) err = std::max(err, std::abs(tr.states[j](0) - std::exp(-tr.times[j])));
    return {err <= 1e-8, fmt("max |u_j - exp(-t_j)| = %.3e over %g steps", err, tr.m)};
}

Outcome lc_energy()
{
    Circuit c = fixture("lc_star.net");
    MnaSystem s = assemble_mna(c);
    SimOptions o;
    o.delta = 1e-12;
    Trajectory tr = simulate(s, initial_state(c, s), 10.0, o);
    EnergyTrace et = energy_trace(s, tr);
    double drift = 0;
    for (double e : et.E_total) drift = std::max(drift, std::abs(e - et.E_total[0]));
    drift /= et.E_total[0];
    return {drift <= 1e-8, fmt("relative drift %.3e (h = %g, k = %g)", drift, tr.h, tr.k)};
}

Outcome index_classes()
{
    const char* names[] = {"lc_star.net", "lc_no_ctree.net", "vrc.net", "rc_isrc.net", "v_par_c.net", "i_series_l.net"};
    int agree = 0;
    std::string classes;
    for (const char* n : names) {
        Circuit c = fixture(n);
        MnaSystem s = assemble_mna(c);
        int topo = classify_index_topological(c);
        int alg = build_chain(s.M, s.K).index;
        agree += topo == alg;
        classes += std::to_string(topo) + "/" + std::to_string(alg) + " ";
    }
    return {agree == 6, fmt("%g of 6 agree (topological/algebraic: ", agree) + classes + ")"};
}

Outcome projector_laws()
{
    Rng rng(2024);
    double worst = 0;
    int idx2 = 0;
    for (int t = 0; t < 200; ++t) {
        int n = 4 + static_cast<int>(rng() % 7);
        int index = 1 + (t % 2);
        int r = 1 + static_cast<int>(rng() % (index == 2 ? n / 2 : n - 1));
        PlantedPencil pp = planted_pencil(rng, n, r, index);
        ProjectorChain ch = build_chain(pp.M, pp.K);
        idx2 += ch.index == 2;
        auto rel = [](const Mat& X, double scale) { return norm2(X) / std::max(scale, 1.0); };
        double e = rel(ch.Q0 * ch.Q0 - ch.Q0, 1);
        e = std::max(e, rel(ch.Q1 * ch.Q1 - ch.Q1, norm2(ch.Q1)));
        e = std::max(e, rel(ch.Q1 * ch.Q0, norm2(ch.Q1)));
        e = std::max(e, rel(ch.M1 * ch.P0 - pp.M, norm2(pp.M)));
        e = std::max(e, rel(ch.M1 * ch.Q1, norm2(ch.M1) * norm2(ch.Q1)));
        int dim_ker = pp.M.rows() - numerical_rank(ch.M1, 1e-10);
        int rank_q1 = numerical_rank(ch.Q1, 1e-8);
        if (dim_ker != rank_q1 || ch.index != pp.index) e = INFINITY;
        worst = std::max(worst, e);
    }
    return {worst <= 1e-8, fmt("worst relative defect %.3e on 200 pencils (%g of index 2)", worst, idx2)};
}

Outcome decoupling()
{
    double worst_res = 0, worst_ref = 0;
    std::string idx;
    for (const char* n : {"vrc.net", "rlc_series.net", "v_par_c.net", "i_series_l.net"}) {
        Circuit c = fixture(n);
        MnaSystem s = assemble_mna(c);
        ProjectorChain ch = build_chain(s.M, s.K);
        DecoupledSystem dec = decouple(s, ch);
        SimOptions o;
        o.h = 1e-3;
        o.delta = 1e-12;
        Vec x0 = initial_state(c, s);
        Trajectory tr = simulate(s, x0, 1.0, o);
        Vec y0 = dec.project(x0);
        tr.states[0] = dec.reconstruct(y0);
        auto res = dae_residual(s, tr.times, tr.states);
        Trajectory ref = reference_solve(dec.A, dec.f_ode, y0, tr.times);
        double scale = 1;
        for (size_t j = 0; j < tr.times.size(); ++j) {
            Vec xr = dec.reconstruct(ref.states[j]);
            scale = std::max(scale, xr.norm());
            worst_ref = std::max(worst_ref, (xr - tr.states[j]).norm());
            worst_res = std::max(worst_res, res[j]);
        }
        worst_ref /= scale;
        idx += std::to_string(ch.index);
    }
    return {worst_res <= 1e-6 && worst_ref <= 1e-7,
            fmt("max residual %.3e, max deviation from expm reference %.3e (indices ", worst_res, worst_ref) + idx + ")"};
}

Outcome taylor_truncation()
{
    Rng rng(77);
    int fails = 0, count = 0;
    double worst_ratio = 0;
    for (int t = 0; t < 50; ++t) {
        int n = 1 + static_cast<int>(rng() % 8);
        LinearSystem ls = random_stable_system(rng, n);
        double T = 1.0 + (rng() % 400) / 100.0;
        for (double delta : {1e-2, 1e-4}) {
            auto [m, h] = uniform_grid(T, 1.0 / norm2(ls.A));
            Vec xT = reference_solve(ls.A, ls.f, ls.x0, {T}).states[0];
            int k = choose_taylor_order(delta, m, T, ls.f.norm(), xT.norm(), OrderMode::final_state);
            Vec xt = taylor_steps(ls.A, ls.f, ls.x0, h, m, k).back();
            double ratio = (xT - xt).norm() / (delta * xT.norm());
            worst_ratio = std::max(worst_ratio, ratio);
            fails += ratio > 1;
            ++count;
        }
    }
    return {fails == 0, fmt("%g of %g cases within delta, worst error/(delta ||x(T)||) = %.3e", count - fails, count, worst_ratio)};
}

Outcome history_equivalence()
{
    Rng rng(99);
    double worst = 0, worst_kappa = 0;
    bool bound_ok = true;
    for (int t = 0; t < 30; ++t) {
        int n = 1 + static_cast<int>(rng() % 5);
        LinearSystem ls = random_stable_system(rng, n);
        int m = 1 + static_cast<int>(rng() % 20);
        int k = 1 + static_cast<int>(rng() % 10);
        double h = (0.3 + 0.7 * (rng() % 1000) / 1000.0) / norm2(ls.A);
        HistorySystem hs = build_history_system(ls.A, ls.f, ls.x0, h, m, k);
        HistorySolution sol = solve_history(hs);
        auto ys = taylor_steps(ls.A, ls.f, ls.x0, h, m, k);
        for (int j = 0; j <= m; ++j)
            worst = std::max(worst, (sol.slices[j] - ys[j]).norm() / std::max(ys[j].norm(), 1e-300));
        bound_ok = bound_ok && sol.kappa_ok;
        worst_kappa = std::max(worst_kappa, sol.cond.kappa / sol.kappa_bound);
    }
    return {worst <= 1e-12 && bound_ok,
            fmt("max relative slice error %.3e, max kappa_L / (4 sqrt(k) e^2 m C(A)) = %.3f", worst, worst_kappa)};
}

Outcome bound_dominance()
{
    Rng rng(4242);
    int failures = 0, idx[3] = {0, 0, 0};
    std::string first;
    for (int t = 0; t < 100; ++t) {
        RandomCircuitOptions o;
        o.nodes = 2 + static_cast<int>(rng() % 29);
        o.degree = 2 + static_cast<int>(rng() % 3);
        o.target_index = t % 5 < 2 ? 0 : (t % 5 < 4 ? 1 : 2);
        Circuit c = random_circuit(rng, o);
        MnaSystem s = assemble_mna(c);
        ProjectorChain ch = build_chain(s.M, s.K);
        ++idx[ch.index];
        SpectralReport r = spectral_report(c, s, ch, 2.0);
        for (const auto& b : r.checks) {
            if (b.informational || b.pass) continue;
            ++failures;
            if (first.empty()) first = " first: " + b.name + fmt(" actual %.6g bound %.6g", b.actual, b.bound);
        }
    }
    Rng mrng(5);
    int herm_fail = 0;
    for (int t = 0; t < 100; ++t) {
        int n = 1 + static_cast<int>(mrng() % 8);
        Mat B = random_gaussian(mrng, n, n);
        for (int q = 0; q < 10; ++q) {
            double tt = std::uniform_real_distribution<double>(0.0, 3.0)(mrng);
            auto [a, b] = hermitian_part_check(B, tt);
            herm_fail += a > b * (1 + 1e-9);
        }
    }
    return {failures == 0 && herm_fail == 0,
            fmt("%g failed circuit checks (index mix %g/", failures, idx[0]) + fmt("%g/%g)", idx[1], idx[2]) +
                fmt(", %g Hermitian-part violations in 1000 samples", herm_fail) + first};
}

Outcome oscillator()
{
    OscillatorInstance inst = parse_oscillator_json(slurp("chain3.json"));
    Circuit c = oscillator_to_lc(inst);
    Rng rng(3);
    Vec x0 = random_gaussian(rng, 3, 1), v0 = random_gaussian(rng, 3, 1);
    ReductionReport rep = verify_reduction(inst, c, 10.0, x0, v0);
    bool ok = rep.max_deviation <= 1e-6 && rep.max_oracle_deviation <= 1e-6 && rep.b_identity_error <= 1e-12;
    return {ok, fmt("trajectory deviation %.3e (oracle %.3e), max |C^-1/2 Al L^-1/2 - B| = %.3e", rep.max_deviation,
                    rep.max_oracle_deviation, rep.b_identity_error)};
}

Outcome dissipation()
{
    Circuit c = fixture("rlc_series.net");
    MnaSystem s = assemble_mna(c);
    double errs[2];
    const double hs[2] = {0.1, 0.05};
    for (int q = 0; q < 2; ++q) {
        SimOptions o;
        o.h = hs[q];
        o.delta = 1e-12;
        Vec x0 = initial_state(c, s);
        Trajectory tr = simulate(s, x0, 5.0, o);
        EnergyTrace et = energy_trace(s, tr);
        double e = 0;
        for (size_t j = 1; j + 1 < et.times.size(); ++j) {
            double dE = (et.E_total[j + 1] - et.E_total[j]) / (et.times[j + 1] - et.times[j]);
            double pr = 0.5 * (et.P_R[j] + et.P_R[j + 1]);
            e = std::max(e, std::abs(dE + pr));
        }
        errs[q] = e;
    }
    bool ok = errs[0] <= 5 * hs[0] && errs[1] <= 5 * hs[1] && errs[1] <= 0.5 * errs[0] * 1.05;
    return {ok, fmt("max |dE/dt + P_R| = %.3e at h = 0.1, %.3e at h = 0.05 (ratio %.3f)", errs[0], errs[1], errs[1] / errs[0])};
}

}  // namespace

int main()
{
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"analytic RC", analytic_rc},
        {"LC energy conservation", lc_energy},
        {"index classification", index_classes},
        {"projector laws", projector_laws},
        {"decoupling correctness", decoupling},
        {"Taylor truncation bound", taylor_truncation},
        {"history-system equivalence", history_equivalence},
        {"bound dominance", bound_dominance},
        {"oscillator reduction", oscillator},
        {"dissipation balance", dissipation},
    };
    int failures = 0, n = 0;
    for (const auto& [name, fn] : criteria) {
        ++n;
        Outcome o{false, ""};
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("criterion %2d %s: %s: %s\n", n, o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
    }
    return failures;
}
