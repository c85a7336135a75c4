#include "rlcdae/projectors.hpp"

#include <random>

namespace rlcdae {

Mat kernel_projector(const Mat& A, double tau_rank)
{
    Mat B = kernel_basis(A, tau_rank);
    Mat Q = B * B.transpose();
    return 0.5 * (Q + Q.transpose());
}

bool is_nonsingular(const Mat& A, double tau_rank)
{
    if (A.size() == 0) return true;
    return numerical_rank(A, tau_rank) == A.rows();
}

Mat admissible_q1(const Mat& M1, const Mat& P0, double tau_rank)
{
    const Eigen::Index n = M1.rows();
    Mat Qt1 = kernel_projector(M1, tau_rank);
    int r = numerical_rank(Qt1, 0.5);
    if (r == 0) return Mat::Zero(n, n);
    Mat PQ = P0 * Qt1;
    if (numerical_rank(PQ, tau_rank) < r)
        throw ChainError("P0 Qt1 is rank deficient: ker(M) and ker(M1) intersect");
    return Qt1 * pinv(PQ, tau_rank) * P0;
}

ProjectorChain build_chain(const Mat& M, const Mat& K, double tau_rank, std::uint64_t seed)
{
    const Eigen::Index n = M.rows();
    if (M.cols() != n || K.rows() != n || K.cols() != n) throw ChainError("M and K must be square and equal in size");

    ProjectorChain ch;
    ch.tau_rank = tau_rank;
    const Mat I = Mat::Identity(n, n);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.5, 2.0);
    double nm = norm2(M), nk = norm2(K);
    double scale = nm > 0 ? nk / nm : 1.0;
    if (scale == 0) scale = 1.0;
    bool regular = false;
    for (int trial = 0; trial < 3 && !regular; ++trial) regular = is_nonsingular(U(rng) * scale * M + K, tau_rank);
    if (!regular) throw ChainError("matrix pencil is singular");

    ch.decisions.push_back({"M", singular_gap(M, tau_rank)});
    ch.sigma_min_plus_M = ch.decisions.back().gap.above;
    ch.Q0 = kernel_projector(M, tau_rank);
    ch.P0 = I - ch.Q0;
    ch.M1 = M + K * ch.Q0;
    ch.K1 = K * ch.P0;
    ch.Qt1 = Mat::Zero(n, n);
    ch.Q1 = Mat::Zero(n, n);
    ch.P1 = I;
    ch.M2 = ch.M1;

    if (is_nonsingular(M, tau_rank)) {
        ch.index = 0;
        ch.sigma_min_M1 = sigma_min(M);
        ch.sigma_min_M2 = ch.sigma_min_M1;
        return ch;
    }

    ch.decisions.push_back({"M1", singular_gap(ch.M1, tau_rank)});
    ch.sigma_min_M1 = sigma_min(ch.M1);
    if (is_nonsingular(ch.M1, tau_rank)) {
        ch.index = 1;
        ch.sigma_min_M2 = ch.sigma_min_M1;
        return ch;
    }

    ch.Qt1 = kernel_projector(ch.M1, tau_rank);
    ch.decisions.push_back({"P0*Qt1", singular_gap(ch.P0 * ch.Qt1, tau_rank)});
    ch.tau = ch.decisions.back().gap.above;
    ch.Q1 = admissible_q1(ch.M1, ch.P0, tau_rank);
    ch.P1 = I - ch.Q1;
    ch.M2 = ch.M1 + ch.K1 * ch.Q1;
    ch.decisions.push_back({"M2", singular_gap(ch.M2, tau_rank)});
    ch.sigma_min_M2 = sigma_min(ch.M2);
    if (!is_nonsingular(ch.M2, tau_rank)) throw ChainError("tractability index exceeds 2");
    ch.index = 2;
    return ch;
}

}  // namespace rlcdae
