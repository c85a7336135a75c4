#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace rlcdae {

enum class Kind { R, L, C, I, V };

char kind_letter(Kind k);

struct Branch {
    std::string id;
    Kind kind;
    std::string from;
    std::string to;
    double value;

    bool operator==(const Branch&) const = default;
};

struct Mutual {
    std::string a;
    std::string b;
    double value;

    bool operator==(const Mutual&) const = default;
};

struct Circuit {
    std::vector<std::string> nodes;  // non-reference nodes, first-appearance order
    std::string reference = "0";
    std::vector<Branch> branches;
    std::vector<Mutual> mutuals;
    std::map<std::string, double> ic_voltage;  // node -> volt
    std::map<std::string, double> ic_current;  // inductor or voltage source id -> ampere

    /// Matrix row of a node, or -1 for the reference.
    int row(const std::string& node) const;
    const Branch* find(const std::string& id) const;
    std::vector<const Branch*> of_kind(Kind k) const;

    bool operator==(const Circuit&) const = default;
};

/// Syntax and validation errors raised while reading a netlist.
class NetlistError : public std::runtime_error {
public:
    NetlistError(const std::string& what, int line, int column);
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

/// Structural problems of a parsed circuit (disconnected, ill-posed, ...).
class CircuitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Circuit parse_netlist(const std::string& text);
std::string serialize_netlist(const Circuit& c);

struct WellPosedReport {
    bool has_v_loop = false;
    bool has_i_cutset = false;
    std::vector<std::string> offending_branch_ids;
    int max_nonref_degree = 0;
    int max_mutual_partners = 0;

    bool well_posed() const { return !has_v_loop && !has_i_cutset; }
};

bool is_connected(const Circuit& c);

/// Throws CircuitError when the circuit is disconnected.
WellPosedReport validate_well_posed(const Circuit& c);

}  // namespace rlcdae
