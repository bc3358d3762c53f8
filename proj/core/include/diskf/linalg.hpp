#pragma once

#include <Eigen/Dense>

namespace diskf::linalg {

// Jitter added (once) to a symmetric matrix whose Cholesky factorization
// failed, before the second and final attempt.
inline constexpr double kSpdJitter = 1e-9;

// Singular values below kRankRelTol * sigma_max count as zero.
inline constexpr double kRankRelTol = 1e-9;

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& a);

bool is_symmetric(const Eigen::MatrixXd& a, double tol = 1e-9);

// Eigenvalues >= -tol * max(1, |lambda|_max).
bool is_psd(const Eigen::MatrixXd& a, double tol = 1e-9);

// Inverse of a symmetric positive definite matrix via Cholesky. If the
// factorization fails, retries once on a + kSpdJitter * I; a second failure
// throws ConditioningError.
Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& a);

// Solves a * x = b under the same factorization-and-jitter policy.
Eigen::MatrixXd spd_solve(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

// Rank by SVD with the relative threshold above. The zero matrix has rank 0.
int numerical_rank(const Eigen::MatrixXd& a);

// A factor L with L * L^T = a for symmetric PSD a; negative eigenvalues from
// roundoff are clamped to zero. Used to shape unit-variance noise draws.
Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& a);

}  // namespace diskf::linalg
