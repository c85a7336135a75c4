#pragma once

#include <numeric>
#include <vector>

#include "rlcdae/netlist.hpp"

namespace rlcdae::detail {

struct DisjointSets {
    std::vector<int> parent;

    explicit DisjointSets(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

    int find(int x)
    {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }

    bool unite(int a, int b)
    {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[a] = b;
        return true;
    }
};

// Graph vertex of a node: matrix row for ordinary nodes, N for the reference.
inline int vertex(const Circuit& c, const std::string& node)
{
    int r = c.row(node);
    return r < 0 ? static_cast<int>(c.nodes.size()) : r;
}

inline int vertex_count(const Circuit& c) { return static_cast<int>(c.nodes.size()) + 1; }

}  // namespace rlcdae::detail
