#include "rlcdae/cli.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "rlcdae/dae_solver.hpp"
#include "rlcdae/diagnostics.hpp"
#include "rlcdae/history_system.hpp"
#include "rlcdae/mna.hpp"
#include "rlcdae/netlist.hpp"
#include "rlcdae/observables.hpp"
#include "rlcdae/oscillator_reduction.hpp"
#include "rlcdae/projectors.hpp"
#include "rlcdae/topology.hpp"

namespace rlcdae {

namespace {

using nlohmann::json;

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path)
{
    if (path.empty()) throw InputError("no input file given");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string num(double v)
{
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

json to_json(const Mat& A)
{
    json rows = json::array();
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        json r = json::array();
        for (Eigen::Index j = 0; j < A.cols(); ++j) r.push_back(A(i, j));
        rows.push_back(r);
    }
    return rows;
}

json to_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json mna_json(const MnaSystem& s)
{
    return {{"layout", {{"nu", s.layout.nu}, {"nl", s.layout.nl}, {"nv", s.layout.nv}}},
            {"M", to_json(s.M)},
            {"K", to_json(s.K)},
            {"f", to_json(s.f)}};
}

std::vector<std::string> state_labels(const Circuit& c, const MnaSystem& s)
{
    std::vector<std::string> out;
    for (const auto& n : c.nodes) out.push_back("u(" + n + ")");
    for (const auto& id : s.inc.l_ids) out.push_back("i(" + id + ")");
    for (const auto& id : s.inc.v_ids) out.push_back("i(" + id + ")");
    return out;
}

std::string pick_format(const RunConfig& cfg, const std::string& fallback, std::initializer_list<const char*> allowed)
{
    std::string f = cfg.format.empty() ? fallback : cfg.format;
    for (const char* a : allowed)
        if (f == a) return f;
    throw InputError("format '" + f + "' is not available for " + cfg.subcommand);
}

double need_tfinal(const RunConfig& cfg)
{
    if (!cfg.tfinal) throw InputError(cfg.subcommand + " needs --tfinal");
    if (!(*cfg.tfinal > 0)) throw InputError("--tfinal must be positive");
    return *cfg.tfinal;
}

SimOptions sim_options(const RunConfig& cfg, OrderMode mode)
{
    SimOptions o;
    if (cfg.dt) {
        if (!(*cfg.dt > 0)) throw InputError("--dt must be positive");
        o.h = cfg.dt;
    }
    if (cfg.order) {
        if (*cfg.order < 1) throw InputError("--order must be at least 1");
        o.k = cfg.order;
    }
    if (cfg.delta) {
        if (!(*cfg.delta > 0 && *cfg.delta < 1)) throw InputError("--delta must lie in (0, 1)");
        o.delta = cfg.delta;
    }
    o.mode = mode;
    o.tau_rank = cfg.rank_tol;
    return o;
}

struct Loaded {
    Circuit c;
    MnaSystem sys;
};

Loaded load(const RunConfig& cfg)
{
    Circuit c = parse_netlist(read_file(cfg.input));
    validate_well_posed(c);
    MnaSystem s = assemble_mna(c);
    return {std::move(c), std::move(s)};
}

void add_mna(const RunConfig& cfg, const MnaSystem& s, json& j)
{
    if (cfg.dump_mna) j["mna"] = mna_json(s);
}

std::string cmd_parse(const RunConfig& cfg)
{
    Circuit c = parse_netlist(read_file(cfg.input));
    std::string fmt = pick_format(cfg, cfg.dump_mna ? "json" : "text", {"text", "json"});
    if (fmt == "text") {
        if (cfg.dump_mna) throw InputError("--dump-mna needs --format json");
        return serialize_netlist(c);
    }
    json j{{"netlist", serialize_netlist(c)}, {"nodes", c.nodes}, {"reference", c.reference}};
    if (cfg.dump_mna) j["mna"] = mna_json(assemble_mna(c));
    return j.dump(2) + "\n";
}

std::string cmd_classify(const RunConfig& cfg)
{
    pick_format(cfg, "json", {"json"});
    Circuit c = parse_netlist(read_file(cfg.input));
    WellPosedReport wp = validate_well_posed(c);
    json j;
    j["well_posed"] = wp.well_posed();
    j["max_degree"] = wp.max_nonref_degree;
    if (!wp.well_posed()) {
        j["offending"] = wp.offending_branch_ids;
        throw CircuitError("circuit is ill-posed: " + j.dump());
    }
    MnaSystem s = assemble_mna(c);
    int topo = classify_index_topological(c, cfg.rank_tol);
    LoopCutset lc = detect_vc_loop_il_cutset(c, cfg.rank_tol);
    ProjectorChain ch = build_chain(s.M, s.K, cfg.rank_tol, cfg.seed);
    j["topological"] = topo;
    j["algebraic"] = ch.index;
    j["agree"] = topo == ch.index;
    j["capacitive_tree"] = has_capacitive_spanning_tree(c);
    j["vc_loop"] = lc.vc_loop ? json(*lc.vc_loop) : json(nullptr);
    j["il_cutset"] = lc.il_cutset ? json(*lc.il_cutset) : json(nullptr);
    json dec = json::array();
    for (const auto& d : ch.decisions)
        dec.push_back({{"matrix", d.matrix}, {"rank", d.gap.rank}, {"sigma_max", d.gap.sigma_max},
                       {"below", d.gap.below}, {"above", d.gap.above}});
    j["rank_decisions"] = dec;
    add_mna(cfg, s, j);
    return j.dump(2) + "\n";
}

std::string cmd_simulate(const RunConfig& cfg)
{
    std::string fmt = pick_format(cfg, "json", {"json", "csv"});
    double T = need_tfinal(cfg);
    Loaded L = load(cfg);
    Trajectory tr = simulate(L.sys, initial_state(L.c, L.sys), T, sim_options(cfg, OrderMode::final_state));
    auto labels = state_labels(L.c, L.sys);
    if (fmt == "csv") {
        if (cfg.dump_mna) throw InputError("--dump-mna needs --format json");
        std::string s = "t";
        for (const auto& l : labels) s += "," + l;
        s += "\n";
        for (size_t j = 0; j < tr.times.size(); ++j) {
            s += num(tr.times[j]);
            for (Eigen::Index q = 0; q < tr.states[j].size(); ++q) s += "," + num(tr.states[j](q));
            s += "\n";
        }
        return s;
    }
    json states = json::array();
    for (const auto& x : tr.states) states.push_back(to_json(x));
    json j{{"index", tr.index}, {"h", tr.h}, {"m", tr.m}, {"k", tr.k}, {"consistency_gap", tr.consistency_gap},
           {"labels", labels}, {"times", tr.times}, {"states", states}};
    add_mna(cfg, L.sys, j);
    return j.dump(2) + "\n";
}

std::string cmd_history(const RunConfig& cfg)
{
    pick_format(cfg, "json", {"json"});
    double T = need_tfinal(cfg);
    Loaded L = load(cfg);
    SimOptions o = sim_options(cfg, OrderMode::history);
    Trajectory tr = simulate(L.sys, initial_state(L.c, L.sys), T, o);
    ProjectorChain ch = build_chain(L.sys.M, L.sys.K, cfg.rank_tol, cfg.seed);
    DecoupledSystem dec = decouple(L.sys, ch);
    HistorySystem hs = build_history_system(dec.A, dec.f_ode, tr.ode_states.front(), tr.h, tr.m, tr.k);
    HistorySolution sol = solve_history(hs);
    HistoryState stepper = extract_history_state(tr);
    json j{{"index", tr.index},
           {"h", tr.h},
           {"m", tr.m},
           {"k", tr.k},
           {"dim", hs.dim()},
           {"distance", history_distance(sol.state, stepper)},
           {"amplitudes_linear_system", sol.state.amplitudes},
           {"amplitudes_stepper", stepper.amplitudes},
           {"Z_linear_system", sol.state.Z},
           {"Z_stepper", stepper.Z},
           {"kappa_L", sol.cond.kappa},
           {"kappa_bound", sol.kappa_bound},
           {"kappa_ok", sol.kappa_ok},
           {"exp_norm", sol.exp_norm}};
    add_mna(cfg, L.sys, j);
    return j.dump(2) + "\n";
}

std::string cmd_bounds(const RunConfig& cfg, bool& failed)
{
    pick_format(cfg, "json", {"json"});
    double T = need_tfinal(cfg);
    Loaded L = load(cfg);
    ProjectorChain ch = build_chain(L.sys.M, L.sys.K, cfg.rank_tol, cfg.seed);
    SpectralReport r = spectral_report(L.c, L.sys, ch, T);
    double eps = cfg.delta.value_or(1e-3);
    if (!(eps > 0 && eps < 1)) throw InputError("--delta must lie in (0, 1)");
    QuantumCost q = quantum_cost_report(r, T, eps);
    const CircuitParams& p = r.params;

    json checks = json::array();
    for (const auto& b : r.checks)
        checks.push_back({{"name", b.name}, {"actual", b.actual}, {"bound", b.bound}, {"pass", b.pass},
                          {"informational", b.informational}});
    json actuals{{"norm_K", r.norm_K},
                 {"lambda_max_M", r.lambda_max_M},
                 {ch.index == 0 ? "lambda_min_M" : "lambda_min_plus_M", r.lambda_min_M},
                 {"kappa_M", r.kappa_M},
                 {"sigma_min_M1", r.sigma_min_M1},
                 {"sigma_min_M2", r.sigma_min_M2},
                 {"tau", r.tau},
                 {"kappa_M_plus_Q0", r.kappa_M_Q0},
                 {"norm_A", r.norm_A},
                 {"C_A", r.C_A},
                 {"C_f", r.C_f},
                 {"C_f_final", r.C_f_final},
                 {"C_f_circuit", r.C_f_circuit},
                 {"g", r.g},
                 {"mu", r.mu},
                 {"x_T_norm", r.xT_norm}};
    if (r.has_saddle) {
        actuals["Gamma_G"] = r.saddle.gamma;
        actuals["sigma_min_K22"] = r.saddle.sigma_min_K22;
    }
    json params{{"d", p.d}, {"c_max", p.c_max}, {"c_min", p.c_min}, {"l_max", p.l_max},
                {"lambda_min_L", p.lambda_min_L}, {"g_max", p.g_max}, {"i_max", p.i_max}, {"v_max", p.v_max},
                {"lambda_min_plus_AcAcT", p.lambda_min_plus_AcAct}, {"sigma", p.sigma}};
    json terms = json::array();
    for (const auto& t : q.terms) terms.push_back({{"name", t.name}, {"formula", t.formula}, {"value", t.value}});
    json quantum{{"kappa", q.kappa}, {"kappa_squared", q.kappa_squared}, {"k", q.k}, {"eps", q.eps},
                 {"terms", terms}, {"symbolic", q.symbolic}, {"degenerate_forcing", r.degenerate_forcing}};
    json j{{"index", r.index}, {"T", T}, {"ok", r.ok()}, {"params", params}, {"actuals", actuals},
           {"checks", checks}, {"quantum", quantum}};
    add_mna(cfg, L.sys, j);
    failed = !r.ok();
    return j.dump(2) + "\n";
}

std::string cmd_energy(const RunConfig& cfg)
{
    std::string fmt = pick_format(cfg, "csv", {"csv", "json"});
    double T = need_tfinal(cfg);
    Loaded L = load(cfg);
    Trajectory tr = simulate(L.sys, initial_state(L.c, L.sys), T, sim_options(cfg, OrderMode::final_state));
    EnergyTrace et = energy_trace(L.sys, tr);
    if (fmt == "json") {
        json j{{"t", et.times}, {"E_C", et.E_C}, {"E_L", et.E_L}, {"P_R", et.P_R}, {"E_total", et.E_total}};
        add_mna(cfg, L.sys, j);
        return j.dump(2) + "\n";
    }
    if (cfg.dump_mna) throw InputError("--dump-mna needs --format json");
    std::string s = "t,E_C,E_L,P_R,E_total\n";
    for (size_t j = 0; j < et.times.size(); ++j)
        s += num(et.times[j]) + "," + num(et.E_C[j]) + "," + num(et.E_L[j]) + "," + num(et.P_R[j]) + "," +
             num(et.E_total[j]) + "\n";
    return s;
}

std::string cmd_reduce(const RunConfig& cfg)
{
    pick_format(cfg, "text", {"text"});
    OscillatorInstance inst = parse_oscillator_json(read_file(cfg.input));
    return serialize_netlist(oscillator_to_lc(inst));
}

void emit(const RunConfig& cfg, std::ostream& out, const std::string& body)
{
    if (cfg.out.empty()) {
        out << body;
        return;
    }
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw InputError("cannot write '" + cfg.out + "'");
    f << body;
}

int fail(std::ostream& out, int code, const std::string& kind, const std::string& msg, int line = 0, int column = 0)
{
    json j{{"error", msg}, {"kind", kind}};
    if (line > 0) {
        j["line"] = line;
        j["column"] = column;
    }
    out << j.dump() << "\n";
    return code;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out)
{
    try {
        const std::string& s = cfg.subcommand;
        bool failed = false;
        std::string body;
        if (s == "parse")
            body = cmd_parse(cfg);
        else if (s == "classify")
            body = cmd_classify(cfg);
        else if (s == "simulate")
            body = cmd_simulate(cfg);
        else if (s == "history")
            body = cmd_history(cfg);
        else if (s == "bounds")
            body = cmd_bounds(cfg, failed);
        else if (s == "energy")
            body = cmd_energy(cfg);
        else if (s == "reduce")
            body = cmd_reduce(cfg);
        else
            throw InputError("unknown subcommand '" + s + "'");
        emit(cfg, out, body);
        return failed ? kNumericFailure : kOk;
    } catch (const NetlistError& e) {
        return fail(out, kInputError, "netlist", e.what(), e.line(), e.column());
    } catch (const InputError& e) {
        return fail(out, kInputError, "input", e.what());
    } catch (const CircuitError& e) {
        return fail(out, kInputError, "circuit", e.what());
    } catch (const std::invalid_argument& e) {
        return fail(out, kInputError, "input", e.what());
    } catch (const NumericError& e) {
        return fail(out, kNumericFailure, "numeric", e.what());
    } catch (const std::exception& e) {
        return fail(out, kNumericFailure, "internal", e.what());
    }
}

}  // namespace rlcdae
