#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace rlcdae {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Raised when a numerical precondition fails (step too large, singular block, ...).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Spectral norm (largest singular value).
double norm2(const Mat& A);

/// Smallest singular value; 0 for an empty matrix.
double sigma_min(const Mat& A);

/// Smallest singular value above tol * sigma_max, or 0 if none.
double sigma_min_plus(const Mat& A, double tol);

int numerical_rank(const Mat& A, double tol);

/// Moore-Penrose pseudoinverse, discarding singular values <= tol * sigma_max.
Mat pinv(const Mat& A, double tol);

/// Orthonormal basis of ker(A) as columns.
Mat kernel_basis(const Mat& A, double tol);

/// Dense matrix exponential (Pade, independent of the Taylor stepper).
Mat expm(const Mat& A);

struct SvGap {
    double sigma_max = 0;
    double below = 0;  // largest singular value treated as zero
    double above = 0;  // smallest singular value kept
    int rank = 0;
};

SvGap singular_gap(const Mat& A, double tol);

}  // namespace rlcdae
