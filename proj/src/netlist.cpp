#include "rlcdae/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "graph_util.hpp"

namespace rlcdae {

char kind_letter(Kind k)
{
    switch (k) {
    case Kind::R: return 'R';
    case Kind::L: return 'L';
    case Kind::C: return 'C';
    case Kind::I: return 'I';
    case Kind::V: return 'V';
    }
    return '?';
}

int Circuit::row(const std::string& node) const
{
    auto it = std::find(nodes.begin(), nodes.end(), node);
    return it == nodes.end() ? -1 : static_cast<int>(it - nodes.begin());
}

const Branch* Circuit::find(const std::string& id) const
{
    for (const auto& b : branches)
        if (b.id == id) return &b;
    return nullptr;
}

std::vector<const Branch*> Circuit::of_kind(Kind k) const
{
    std::vector<const Branch*> out;
    for (const auto& b : branches)
        if (b.kind == k) out.push_back(&b);
    return out;
}

NetlistError::NetlistError(const std::string& what, int line, int column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
      line_(line), column_(column)
{
}

namespace {

struct Token {
    std::string text;
    int column;
};

std::vector<Token> tokenize(const std::string& line)
{
    std::vector<Token> out;
    size_t i = 0;
    while (i < line.size()) {
        if (line[i] == '#') break;
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) && line[j] != '#') ++j;
        out.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
        i = j;
    }
    return out;
}

double parse_value(const Token& t, int line)
{
    double v = 0;
    const char* first = t.text.data();
    const char* last = first + t.text.size();
    if (first != last && *first == '+') ++first;
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || p != last || !std::isfinite(v))
        throw NetlistError("invalid numeric value '" + t.text + "'", line, t.column);
    return v;
}

struct Pending {
    int line;
    int column;
};

}  // namespace

Circuit parse_netlist(const std::string& text)
{
    Circuit c;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;

    std::vector<std::string> seen_nodes;  // all nodes in order, reference included
    auto touch = [&](const std::string& n) {
        if (std::find(seen_nodes.begin(), seen_nodes.end(), n) == seen_nodes.end()) seen_nodes.push_back(n);
    };

    bool have_ref = false;
    Pending ref_at{0, 0};
    std::vector<std::pair<Mutual, Pending>> mutual_lines;
    std::vector<std::tuple<std::string, double, Pending>> icv_lines, ici_lines;

    while (std::getline(in, raw)) {
        ++lineno;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        auto tok = tokenize(raw);
        if (tok.empty()) continue;

        auto expect = [&](size_t n) {
            if (tok.size() < n) {
                int col = static_cast<int>(raw.size()) + 1;
                throw NetlistError("expected " + std::to_string(n - 1) + " arguments after '" + tok[0].text + "'",
                                   lineno, col);
            }
            if (tok.size() > n) throw NetlistError("unexpected token '" + tok[n].text + "'", lineno, tok[n].column);
        };

        const std::string& head = tok[0].text;
        if (head == ".ref") {
            expect(2);
            if (have_ref) throw NetlistError("duplicate .ref directive", lineno, tok[0].column);
            have_ref = true;
            c.reference = tok[1].text;
            ref_at = {lineno, tok[1].column};
        } else if (head == ".ic") {
            expect(4);
            double v = parse_value(tok[3], lineno);
            Pending at{lineno, tok[2].column};
            if (tok[1].text == "v")
                icv_lines.emplace_back(tok[2].text, v, at);
            else if (tok[1].text == "i")
                ici_lines.emplace_back(tok[2].text, v, at);
            else
                throw NetlistError("expected 'v' or 'i' after .ic", lineno, tok[1].column);
        } else if (head == "K") {
            expect(4);
            Mutual m{tok[1].text, tok[2].text, parse_value(tok[3], lineno)};
            mutual_lines.push_back({m, {lineno, tok[1].column}});
        } else if (head.size() == 1 && std::string("RLCIV").find(head[0]) != std::string::npos) {
            expect(5);
            Kind k = head == "R" ? Kind::R : head == "L" ? Kind::L : head == "C" ? Kind::C : head == "I" ? Kind::I : Kind::V;
            Branch b{tok[1].text, k, tok[2].text, tok[3].text, parse_value(tok[4], lineno)};
            if (c.find(b.id)) throw NetlistError("duplicate branch id '" + b.id + "'", lineno, tok[1].column);
            if ((k == Kind::R || k == Kind::L || k == Kind::C) && !(b.value > 0))
                throw NetlistError("non-positive component value for '" + b.id + "'", lineno, tok[4].column);
            if (b.from == b.to)
                throw NetlistError("branch '" + b.id + "' connects node '" + b.from + "' to itself", lineno,
                                   tok[3].column);
            touch(b.from);
            touch(b.to);
            c.branches.push_back(std::move(b));
        } else {
            throw NetlistError("unknown directive '" + head + "'", lineno, tok[0].column);
        }
    }

    if (c.branches.empty()) throw NetlistError("netlist has no branches", lineno, 1);
    if (std::find(seen_nodes.begin(), seen_nodes.end(), c.reference) == seen_nodes.end()) {
        if (have_ref) throw NetlistError("unknown reference node '" + c.reference + "'", ref_at.line, ref_at.column);
        throw NetlistError("reference node '0' does not appear in any branch", 1, 1);
    }
    for (const auto& n : seen_nodes)
        if (n != c.reference) c.nodes.push_back(n);

    std::set<std::pair<std::string, std::string>> pairs;
    for (auto& [m, at] : mutual_lines) {
        for (const auto* id : {&m.a, &m.b}) {
            const Branch* b = c.find(*id);
            if (!b || b->kind != Kind::L)
                throw NetlistError("mutual references '" + *id + "', which is not an inductor", at.line, at.column);
        }
        if (m.a == m.b) throw NetlistError("mutual couples '" + m.a + "' with itself", at.line, at.column);
        auto key = std::minmax(m.a, m.b);
        if (!pairs.insert({key.first, key.second}).second)
            throw NetlistError("duplicate mutual between '" + m.a + "' and '" + m.b + "'", at.line, at.column);
        c.mutuals.push_back(m);
    }

    for (auto& [node, v, at] : icv_lines) {
        if (node == c.reference)
            throw NetlistError("initial voltage given for the reference node", at.line, at.column);
        if (c.row(node) < 0) throw NetlistError("unknown node '" + node + "' in .ic", at.line, at.column);
        if (!c.ic_voltage.emplace(node, v).second)
            throw NetlistError("duplicate .ic for node '" + node + "'", at.line, at.column);
    }
    for (auto& [id, v, at] : ici_lines) {
        const Branch* b = c.find(id);
        if (!b || (b->kind != Kind::L && b->kind != Kind::V))
            throw NetlistError("unknown inductor or voltage source '" + id + "' in .ic", at.line, at.column);
        if (!c.ic_current.emplace(id, v).second)
            throw NetlistError("duplicate .ic for branch '" + id + "'", at.line, at.column);
    }
    return c;
}

namespace {

std::string fmt_value(double v)
{
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

}  // namespace

std::string serialize_netlist(const Circuit& c)
{
    std::ostringstream out;
    out << ".ref " << c.reference << '\n';
    for (const auto& b : c.branches)
        out << kind_letter(b.kind) << ' ' << b.id << ' ' << b.from << ' ' << b.to << ' ' << fmt_value(b.value) << '\n';
    for (const auto& m : c.mutuals) out << "K " << m.a << ' ' << m.b << ' ' << fmt_value(m.value) << '\n';
    for (const auto& [n, v] : c.ic_voltage) out << ".ic v " << n << ' ' << fmt_value(v) << '\n';
    for (const auto& [id, v] : c.ic_current) out << ".ic i " << id << ' ' << fmt_value(v) << '\n';
    return out.str();
}

bool is_connected(const Circuit& c)
{
    detail::DisjointSets ds(detail::vertex_count(c));
    int comps = detail::vertex_count(c);
    for (const auto& b : c.branches)
        if (ds.unite(detail::vertex(c, b.from), detail::vertex(c, b.to))) --comps;
    return comps == 1;
}

WellPosedReport validate_well_posed(const Circuit& c)
{
    if (!is_connected(c)) throw CircuitError("circuit is not connected");
    WellPosedReport rep;
    const int nv = detail::vertex_count(c);

    std::vector<int> degree(nv, 0);
    for (const auto& b : c.branches) {
        degree[detail::vertex(c, b.from)]++;
        degree[detail::vertex(c, b.to)]++;
    }
    rep.max_nonref_degree = nv > 1 ? *std::max_element(degree.begin(), degree.end() - 1) : 0;

    std::map<std::string, int> partners;
    for (const auto& m : c.mutuals) {
        partners[m.a]++;
        partners[m.b]++;
    }
    for (const auto& [id, n] : partners) rep.max_mutual_partners = std::max(rep.max_mutual_partners, n);

    detail::DisjointSets vs(nv);
    for (const auto* b : c.of_kind(Kind::V)) {
        if (!vs.unite(detail::vertex(c, b->from), detail::vertex(c, b->to))) {
            rep.has_v_loop = true;
            rep.offending_branch_ids.push_back(b->id);
        }
    }

    detail::DisjointSets rest(nv);
    for (const auto& b : c.branches)
        if (b.kind != Kind::I) rest.unite(detail::vertex(c, b.from), detail::vertex(c, b.to));
    for (const auto* b : c.of_kind(Kind::I)) {
        if (rest.find(detail::vertex(c, b->from)) != rest.find(detail::vertex(c, b->to))) {
            rep.has_i_cutset = true;
            rep.offending_branch_ids.push_back(b->id);
        }
    }
    return rep;
}

}  // namespace rlcdae
