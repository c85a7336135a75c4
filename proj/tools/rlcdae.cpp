#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rlcdae/cli.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Transient analysis of linear RLC circuits through the MNA system"};
    app.require_subcommand(1);
    rlcdae::RunConfig cfg;
    std::string netlist_flag;

    const std::pair<const char*, const char*> commands[] = {
        {"parse", "echo the canonical netlist"},
        {"classify", "topological and algebraic index"},
        {"simulate", "Taylor-series trajectory"},
        {"history", "history state from the block linear system and from the stepper"},
        {"bounds", "spectral quantities against their bounds"},
        {"energy", "stored energy and dissipated power over time"},
        {"reduce", "coupled oscillator JSON to an LC netlist"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("input", cfg.input, "netlist (oscillator JSON for reduce)");
        sub->add_option("--netlist", netlist_flag, "input file");
        sub->add_option("--tfinal", cfg.tfinal, "final time in seconds");
        sub->add_option("--dt", cfg.dt, "time step");
        sub->add_option("--order", cfg.order, "Taylor order k");
        sub->add_option("--delta", cfg.delta, "target accuracy (quantum-cost epsilon for bounds)");
        sub->add_option("--rank-tol", cfg.rank_tol, "relative singular-value threshold");
        sub->add_option("--out", cfg.out, "output file");
        sub->add_option("--format", cfg.format, "json, csv or text");
        sub->add_option("--seed", cfg.seed, "seed for the pencil regularity test");
        sub->add_flag("--dump-mna", cfg.dump_mna, "include M, K and f in JSON output");
        sub->callback([&cfg, name = std::string(name)] { cfg.subcommand = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cout << nlohmann::json{{"error", e.what()}, {"kind", "usage"}}.dump() << "\n";
        return rlcdae::kInputError;
    }
    if (!netlist_flag.empty()) {
        if (!cfg.input.empty() && cfg.input != netlist_flag) {
            std::cout << nlohmann::json{{"error", "two different input files given"}, {"kind", "usage"}}.dump() << "\n";
            return rlcdae::kInputError;
        }
        cfg.input = netlist_flag;
    }
    return rlcdae::run(cfg, std::cout);
}
