#pragma once

#include <random>

#include "rlcdae/linalg.hpp"
#include "rlcdae/netlist.hpp"

namespace rlcdae {

using Rng = std::mt19937_64;

struct RandomCircuitOptions {
    int nodes = 10;
    int degree = 3;
    int target_index = 0;  // 0, 1 or 2 (topological class)
    bool sources = true;
    int max_tries = 500;
};

/// Connected, well-posed circuit with max non-reference degree <= degree and the requested index.
/// Throws std::runtime_error when no such circuit turns up within max_tries.
Circuit random_circuit(Rng& rng, const RandomCircuitOptions& opts);

struct PlantedPencil {
    Mat M, K;
    int index = 0;
    int kernel_dim = 0;
};

/// M = U diag(D, 0) U^T with a kernel of dimension r and K built so the pencil has the given index (0, 1, 2).
PlantedPencil planted_pencil(Rng& rng, int n, int r, int index);

struct LinearSystem {
    Mat A;
    Vec f;
    Vec x0;
};

/// A with negative definite symmetric part plus a skew part; f and x0 standard normal.
LinearSystem random_stable_system(Rng& rng, int n);

Mat random_gaussian(Rng& rng, int rows, int cols);

}  // namespace rlcdae
