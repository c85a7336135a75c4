#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rlcdae/linalg.hpp"

namespace rlcdae {

class ChainError : public NumericError {
public:
    using NumericError::NumericError;
};

/// One singular-value rank decision made while building the chain.
struct RankDecision {
    std::string matrix;
    SvGap gap;
};

struct ProjectorChain {
    Mat Q0, P0;
    Mat M1, K1;
    Mat Qt1;  // orthogonal projector onto ker(M1)
    Mat Q1, P1;
    Mat M2;
    int index = 0;
    double tau_rank = 1e-10;

    double sigma_min_plus_M = 0;
    double sigma_min_M1 = 0;
    double sigma_min_M2 = 0;
    double tau = 0;  // sigma_min^+(P0 Qt1)
    std::vector<RankDecision> decisions;
};

/// Orthogonal projector onto ker(A).
Mat kernel_projector(const Mat& A, double tau_rank = 1e-10);

/// Q1 = Qt1 (P0 Qt1)^+ P0; zero when M1 is nonsingular.
Mat admissible_q1(const Mat& M1, const Mat& P0, double tau_rank = 1e-10);

bool is_nonsingular(const Mat& A, double tau_rank);

ProjectorChain build_chain(const Mat& M, const Mat& K, double tau_rank = 1e-10, std::uint64_t seed = 0x5eed);

}  // namespace rlcdae
