#pragma once

#include <string>

#include "rlcdae/linalg.hpp"
#include "rlcdae/mna.hpp"
#include "rlcdae/netlist.hpp"

namespace rlcdae {

/// Masses m_j and a symmetric spring matrix; kappa(j, j) is the wall spring of mass j.
struct OscillatorInstance {
    Vec masses;
    Mat kappa;

    Eigen::Index size() const { return masses.size(); }
    int sparsity() const;
    /// F with M x'' = -F x.
    Mat force_matrix() const;
    /// Throws std::invalid_argument when the instance is malformed.
    void validate() const;
};

/// Column of the pair (k, l), k <= l, zero based, in lexicographic order.
Eigen::Index pair_column(Eigen::Index k, Eigen::Index l, Eigen::Index n);

/// N x N(N+1)/2 matrix with B B^T = M^{-1/2} F M^{-1/2}.
Mat build_b_matrix(const OscillatorInstance& inst);

/// B without the columns of zero springs, in the same order as the circuit's inductors.
Mat nonzero_b_columns(const OscillatorInstance& inst);

/// Star of capacitors C_j = m_j plus one inductor 1/kappa per nonzero spring.
Circuit oscillator_to_lc(const OscillatorInstance& inst);

/// C^{-1/2} Al L^{-1/2} of an assembled LC circuit (Ac = I).
Mat lc_coupling_matrix(const MnaSystem& sys);

struct ReductionReport {
    int index = 0;
    double b_identity_error = 0;     // max |coupling - B| over entries
    double gram_error = 0;           // max |B B^T - M^{-1/2} F M^{-1/2}|
    double max_deviation = 0;        // LC vs first-order oscillator, mapped coordinates
    double max_oracle_deviation = 0; // LC vs exp of [[0, I], [-M^{-1} F, 0]]
    double max_energy_deviation = 0; // capacitor energy vs kinetic energy, per mass
    int steps = 0;
    int order = 0;
};

/// Simulates the LC circuit and the oscillator from positions x0 and velocities v0 on [0, T].
ReductionReport verify_reduction(const OscillatorInstance& inst, const Circuit& circuit, double T, const Vec& x0,
                                 const Vec& v0, int order = 20);

/// {"masses": [...], "springs": [[k, l, value], ...]} with zero-based mass indices.
OscillatorInstance parse_oscillator_json(const std::string& text);

}  // namespace rlcdae
