#include "rlcdae/random_circuits.hpp"

#include <map>
#include <stdexcept>

#include "rlcdae/topology.hpp"

namespace rlcdae {

namespace {

struct Builder {
    Rng& rng;
    Circuit c;
    std::map<char, int> counters;
    std::map<std::string, int> degree;

    std::string add(Kind k, const std::string& a, const std::string& b, double value)
    {
        char letter = kind_letter(k);
        std::string id = std::string(1, letter) + std::to_string(++counters[letter]);
        c.branches.push_back({id, k, a, b, value});
        if (a != "0") ++degree[a];
        if (b != "0") ++degree[b];
        return id;
    }

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
    bool coin(double p) { return std::bernoulli_distribution(p)(rng); }
    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }
};

std::string node_name(int j) { return "n" + std::to_string(j + 1); }

void finish_nodes(Circuit& c)
{
    c.nodes.clear();
    for (const auto& b : c.branches)
        for (const auto* s : {&b.from, &b.to})
            if (*s != c.reference && std::find(c.nodes.begin(), c.nodes.end(), *s) == c.nodes.end()) c.nodes.push_back(*s);
}

Circuit attempt(Rng& rng, const RandomCircuitOptions& o)
{
    Builder b{rng, {}, {}, {}};
    const int n = o.nodes;
    std::vector<std::string> vs{"0"};
    std::vector<bool> has_c(n, false);
    // index 2 either from a voltage source across a capacitor or from a leaf reached only through an inductor
    const bool il_leaf = o.target_index == 2 && (o.degree == 2 || b.coin(0.5));

    if (o.target_index == 0) {
        for (int j = 0; j < n; ++j) {
            b.add(Kind::C, node_name(j), "0", b.uniform(0.5, 2.0));
            has_c[j] = true;
        }
    }
    // tree: each node hangs from an earlier vertex with spare degree
    for (int j = 0; j < n; ++j) {
        std::string me = node_name(j);
        std::vector<std::string> open;
        for (const auto& v : vs)
            if (v == "0" || b.degree[v] < o.degree) open.push_back(v);
        const std::string& to = open[b.pick(static_cast<int>(open.size()))];
        Kind k = o.target_index == 0 ? (b.coin(0.5) ? Kind::R : Kind::L) : Kind::R;
        if (il_leaf && j == n - 1) k = Kind::L;
        b.add(k, me, to, b.uniform(0.5, 2.0));
        vs.push_back(me);
    }
    if (o.target_index != 0) {
        for (int j = 0; j < n; ++j)
            if (b.degree[node_name(j)] < o.degree && b.coin(0.6) && !(il_leaf && j == n - 1)) {
                b.add(Kind::C, node_name(j), "0", b.uniform(0.5, 2.0));
                has_c[j] = true;
            }
        if (std::all_of(has_c.begin(), has_c.end(), [](bool x) { return x; })) return {};
    }
    // extra chords
    const int extra = n / 2 + 1;
    for (int t = 0; t < extra; ++t) {
        int a = b.pick(n), z = b.pick(n + 1) - 1;
        std::string na = node_name(a), nz = z < 0 ? std::string("0") : node_name(z);
        if (na == nz || b.degree[na] >= o.degree || (nz != "0" && b.degree[nz] >= o.degree)) continue;
        Kind k = b.coin(0.5) ? Kind::L : (b.coin(0.5) ? Kind::R : Kind::C);
        if (o.target_index != 0 && k == Kind::C) k = Kind::R;
        b.add(k, na, nz, b.uniform(0.5, 2.0));
    }
    if (o.sources) {
        int a = b.pick(n);
        if (b.degree[node_name(a)] < o.degree) b.add(Kind::I, "0", node_name(a), b.uniform(-1.0, 1.0));
        if (o.target_index >= 1) {
            for (int j = 0; j < n; ++j)
                if (!has_c[j] && b.degree[node_name(j)] < o.degree) {
                    b.add(Kind::V, node_name(j), "0", b.uniform(-1.0, 1.0));
                    break;
                }
        }
    }
    if (o.target_index == 2 && !il_leaf) {
        std::vector<int> cand;
        for (int j = 0; j < n; ++j)
            if (has_c[j] && b.degree[node_name(j)] < o.degree) cand.push_back(j);
        if (cand.empty()) return {};
        b.add(Kind::V, node_name(cand[b.pick(static_cast<int>(cand.size()))]), "0", b.uniform(-1.0, 1.0));
    }

    Circuit c = std::move(b.c);
    finish_nodes(c);
    for (const auto& nd : c.nodes)
        if (b.coin(0.5)) c.ic_voltage[nd] = b.uniform(-1.0, 1.0);
    for (const Branch* l : c.of_kind(Kind::L))
        if (b.coin(0.5)) c.ic_current[l->id] = b.uniform(-1.0, 1.0);
    return c;
}

}  // namespace

Circuit random_circuit(Rng& rng, const RandomCircuitOptions& opts)
{
    if (opts.nodes < 1 || opts.degree < 2) throw std::invalid_argument("random circuits need nodes >= 1 and degree >= 2");
    if (opts.target_index < 0 || opts.target_index > 2) throw std::invalid_argument("target index must be 0, 1 or 2");
    for (int t = 0; t < opts.max_tries; ++t) {
        Circuit c = attempt(rng, opts);
        if (c.branches.empty()) continue;
        if (reduced_incidence(c).d > opts.degree) continue;
        try {
            if (classify_index_topological(c) == opts.target_index) return c;
        } catch (const CircuitError&) {
        }
    }
    throw std::runtime_error("no random circuit with the requested index found");
}

Mat random_gaussian(Rng& rng, int rows, int cols)
{
    std::normal_distribution<double> N01;
    Mat G(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) G(i, j) = N01(rng);
    return G;
}

PlantedPencil planted_pencil(Rng& rng, int n, int r, int index)
{
    if (index == 0) r = 0;
    if (r < 0 || r > n || (index > 0 && r == 0)) throw std::invalid_argument("kernel dimension out of range");
    if (index == 2 && 2 * r > n) throw std::invalid_argument("index 2 needs n >= 2r");
    if (index < 0 || index > 2) throw std::invalid_argument("planted index must be 0, 1 or 2");
    const int p = n - r;
    std::uniform_real_distribution<double> U(0.5, 2.0);
    Mat Mh = Mat::Zero(n, n);
    for (int i = 0; i < p; ++i) Mh(i, i) = U(rng);
    Mat Kh = random_gaussian(rng, n, n);
    if (index == 1) Kh.bottomRightCorner(r, r) += 2.0 * r * Mat::Identity(r, r);
    if (index == 2) Kh.bottomRightCorner(r, r).setZero();
    Eigen::HouseholderQR<Mat> qr(random_gaussian(rng, n, n));
    Mat Q = qr.householderQ();
    return {Q * Mh * Q.transpose(), Q * Kh * Q.transpose(), index, r};
}

LinearSystem random_stable_system(Rng& rng, int n)
{
    Mat G = random_gaussian(rng, n, n);
    Mat S = random_gaussian(rng, n, n);
    Mat A = -(G * G.transpose() / n + 0.1 * Mat::Identity(n, n)) + 0.5 * (S - S.transpose());
    return {A, random_gaussian(rng, n, 1), random_gaussian(rng, n, 1)};
}

}  // namespace rlcdae
