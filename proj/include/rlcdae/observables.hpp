#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rlcdae/dae_solver.hpp"
#include "rlcdae/linalg.hpp"
#include "rlcdae/mna.hpp"

namespace rlcdae {

/// Branch ids selecting a subset; nullopt selects every branch of the kind.
using IdSet = std::optional<std::vector<std::string>>;

/// 1/2 (Ac^T u)^T C (Ac^T u) over the selected columns.
double capacitor_energy(const Vec& u, const Vec& C, const Mat& Ac, const std::vector<int>& cols);
double capacitor_energy(const Vec& u, const Vec& C, const Mat& Ac);
/// 1/2 i^T L i on the principal submatrix; mutual terms survive only between selected inductors.
double inductor_energy(const Vec& i, const Mat& L, const std::vector<int>& cols);
double inductor_energy(const Vec& i, const Mat& L);
/// (Ar^T u)^T G (Ar^T u) over the selected columns.
double dissipated_power(const Vec& u, const Vec& G, const Mat& Ar, const std::vector<int>& cols);
double dissipated_power(const Vec& u, const Vec& G, const Mat& Ar);

/// Same quantities from a full MNA state. Throws std::invalid_argument for ids of the wrong kind.
double capacitor_energy(const MnaSystem& sys, const Vec& x, const IdSet& subset = std::nullopt);
double inductor_energy(const MnaSystem& sys, const Vec& x, const IdSet& subset = std::nullopt);
double dissipated_power(const MnaSystem& sys, const Vec& x, const IdSet& subset = std::nullopt);

/// x^T O x for symmetric O.
double quadratic_form(const Vec& x, const Mat& O);

/// O with x^T O x = 2 E_C.
Mat capacitor_energy_observable(const MnaSystem& sys);

struct EnergySubsets {
    IdSet capacitors;
    IdSet inductors;
    IdSet resistors;
};

struct EnergyTrace {
    std::vector<double> times;
    std::vector<double> E_C, E_L, P_R, E_total;
};

EnergyTrace energy_trace(const MnaSystem& sys, const Trajectory& tr, const EnergySubsets& subsets = {});
EnergyTrace energy_trace_serial(const MnaSystem& sys, const Trajectory& tr, const EnergySubsets& subsets = {});

}  // namespace rlcdae
