#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace rlcdae {

struct RunConfig {
    std::string subcommand;  // parse, classify, simulate, history, bounds, energy, reduce
    std::string input;       // netlist, or oscillator JSON for reduce
    std::optional<double> tfinal;
    std::optional<double> dt;
    std::optional<int> order;
    std::optional<double> delta;
    double rank_tol = 1e-10;
    std::string out;     // empty writes to the stream
    std::string format;  // json, csv or text; empty picks the subcommand default
    std::uint64_t seed = 0x5eed;
    bool dump_mna = false;
};

enum ExitCode { kOk = 0, kNumericFailure = 1, kInputError = 2 };

/// Runs one subcommand; artifacts go to cfg.out or `out`, errors to `out` as {"error": ...}.
int run(const RunConfig& cfg, std::ostream& out);

}  // namespace rlcdae
