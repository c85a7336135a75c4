#include "rlcdae/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace rlcdae {

namespace {

Vec singular_values(const Mat& A)
{
    if (A.size() == 0) return Vec();
    Eigen::JacobiSVD<Mat> svd(A);
    return svd.singularValues();
}

}  // namespace

double norm2(const Mat& A)
{
    Vec s = singular_values(A);
    return s.size() ? s(0) : 0.0;
}

double sigma_min(const Mat& A)
{
    Vec s = singular_values(A);
    return s.size() ? s(s.size() - 1) : 0.0;
}

SvGap singular_gap(const Mat& A, double tol)
{
    SvGap g;
    Vec s = singular_values(A);
    if (s.size() == 0) return g;
    g.sigma_max = s(0);
    double cut = tol * s(0);
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > cut && s(0) > 0) {
            g.rank++;
            g.above = s(i);
        } else if (g.below == 0) {
            g.below = s(i);
        }
    }
    return g;
}

double sigma_min_plus(const Mat& A, double tol)
{
    return singular_gap(A, tol).above;
}

int numerical_rank(const Mat& A, double tol)
{
    return singular_gap(A, tol).rank;
}

Mat pinv(const Mat& A, double tol)
{
    Mat out = Mat::Zero(A.cols(), A.rows());
    if (A.size() == 0) return out;
    Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vec& s = svd.singularValues();
    if (s(0) == 0) return out;
    double cut = tol * s(0);
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) <= cut) break;
        out += svd.matrixV().col(i) * (1.0 / s(i)) * svd.matrixU().col(i).transpose();
    }
    return out;
}

Mat kernel_basis(const Mat& A, double tol)
{
    const Eigen::Index n = A.cols();
    if (A.rows() == 0) return Mat::Identity(n, n);
    Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullV);
    const Vec& s = svd.singularValues();
    int r = 0;
    if (s.size() && s(0) > 0) {
        double cut = tol * s(0);
        while (r < s.size() && s(r) > cut) ++r;
    }
    return svd.matrixV().rightCols(n - r);
}

Mat expm(const Mat& A)
{
    if (A.size() == 0) return A;
    return A.exp();
}

}  // namespace rlcdae
