#pragma once

#include <vector>

#include "rlcdae/linalg.hpp"
#include "rlcdae/netlist.hpp"
#include "rlcdae/topology.hpp"

namespace rlcdae {

struct Layout {
    int nu = 0;
    int nl = 0;
    int nv = 0;

    int size() const { return nu + nl + nv; }
};

struct MnaSystem {
    Mat M;
    Mat K;
    Vec f;
    Layout layout;
    Vec C;  // farad, one per capacitor column
    Vec G;  // siemens, one per resistor column
    Mat L;  // henry, inductance matrix including mutuals
    IncidenceSet inc;
};

/// Throws CircuitError when L is not positive definite.
MnaSystem assemble_mna(const Circuit& c);

/// Initial state from the circuit's .ic entries (zeros elsewhere).
Vec initial_state(const Circuit& c, const MnaSystem& sys);

/// ||M Dx_j + K x_j - f|| with central differences (one-sided at the ends).
std::vector<double> dae_residual(const MnaSystem& sys, const std::vector<double>& times, const std::vector<Vec>& states);

/// u0 solving A A^T u0 = A v0 over all branches; throws CircuitError when v0 violates KVL.
Vec node_voltages_from_branch(const Circuit& c, const Vec& v0, double tol = 1e-9);

}  // namespace rlcdae
