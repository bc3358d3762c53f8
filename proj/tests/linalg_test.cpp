#include "diskf/linalg.hpp"

#include <limits>

#include <gtest/gtest.h>

#include "diskf/errors.hpp"

namespace la = diskf::linalg;

namespace {

Eigen::MatrixXd mat2(double a, double b, double c, double d) {
    Eigen::MatrixXd m(2, 2);
    m << a, b, c, d;
    return m;
}

}  // namespace

TEST(Linalg, SymmetrizedAverages) {
    const Eigen::MatrixXd s = la::symmetrized(mat2(1.0, 2.0, 0.0, 1.0));
    EXPECT_DOUBLE_EQ(s(0, 1), 1.0);
    EXPECT_DOUBLE_EQ(s(1, 0), 1.0);
    EXPECT_DOUBLE_EQ(s(0, 0), 1.0);
}

TEST(Linalg, IsSymmetricRelativeTolerance) {
    EXPECT_TRUE(la::is_symmetric(mat2(1.0, 2.0, 2.0, 3.0)));
    EXPECT_FALSE(la::is_symmetric(mat2(1.0, 2.0, 2.5, 3.0)));
    // Skew part 1e-4 against entries of order 1e8 is within tolerance.
    EXPECT_TRUE(la::is_symmetric(mat2(1e8, 1e8, 1e8 + 1e-4, 1e8)));
}

TEST(Linalg, IsPsd) {
    EXPECT_TRUE(la::is_psd(mat2(2.0, 1.0, 1.0, 2.0)));
    EXPECT_TRUE(la::is_psd(Eigen::MatrixXd::Zero(2, 2)));
    EXPECT_FALSE(la::is_psd(mat2(1.0, 0.0, 0.0, -1.0)));
    EXPECT_FALSE(la::is_psd(mat2(1.0, 2.0, 0.0, 1.0)));  // not symmetric
}

TEST(Linalg, SpdInverseKnownValue) {
    // inv([[4,1],[1,3]]) = 1/11 [[3,-1],[-1,4]]
    const Eigen::MatrixXd inv = la::spd_inverse(mat2(4.0, 1.0, 1.0, 3.0));
    EXPECT_NEAR(inv(0, 0), 3.0 / 11.0, 1e-14);
    EXPECT_NEAR(inv(0, 1), -1.0 / 11.0, 1e-14);
    EXPECT_NEAR(inv(1, 0), -1.0 / 11.0, 1e-14);
    EXPECT_NEAR(inv(1, 1), 4.0 / 11.0, 1e-14);
}

TEST(Linalg, SpdInverseIsSymmetric) {
    const Eigen::MatrixXd inv = la::spd_inverse(mat2(5.0, 2.0, 2.0, 3.0));
    EXPECT_EQ(inv(0, 1), inv(1, 0));
}

TEST(Linalg, SpdInverseJittersSingularMatrix) {
    // [[1,0],[0,0]] fails Cholesky; the retry inverts [[1+e,0],[0,e]] with
    // e = 1e-9, so the (1,1) entry lands at 1e9.
    const Eigen::MatrixXd inv = la::spd_inverse(mat2(1.0, 0.0, 0.0, 0.0));
    EXPECT_NEAR(inv(0, 0), 1.0, 1e-6);
    EXPECT_NEAR(inv(1, 1), 1e9, 1.0);
    EXPECT_NEAR(inv(0, 1), 0.0, 1e-12);
}

TEST(Linalg, SpdInverseThrowsWhenJitterCannotHelp) {
    EXPECT_THROW(la::spd_inverse(mat2(1.0, 0.0, 0.0, -1.0)),
                 diskf::ConditioningError);
    EXPECT_THROW(la::spd_inverse(mat2(1.0, 0.0, 0.0,
                                      std::numeric_limits<double>::quiet_NaN())),
                 diskf::ConditioningError);
}

TEST(Linalg, SpdInverseTinyPositiveNeedsNoJitter) {
    // Cholesky succeeds for any strictly positive diagonal, however small.
    const Eigen::MatrixXd inv =
        la::spd_inverse(1e-12 * Eigen::MatrixXd::Identity(2, 2));
    EXPECT_NEAR(inv(0, 0), 1e12, 1.0);
}

TEST(Linalg, SpdSolveMatchesInverse) {
    const Eigen::MatrixXd a = mat2(4.0, 1.0, 1.0, 3.0);
    Eigen::VectorXd b(2);
    b << 1.0, 2.0;
    const Eigen::VectorXd x = la::spd_solve(a, b);
    EXPECT_NEAR((a * x - b).cwiseAbs().maxCoeff(), 0.0, 1e-12);
    EXPECT_THROW(la::spd_solve(a, Eigen::MatrixXd::Zero(3, 1)),
                 diskf::ConditioningError);
}

TEST(Linalg, NumericalRankThreshold) {
    EXPECT_EQ(la::numerical_rank(Eigen::MatrixXd::Identity(3, 3)), 3);
    EXPECT_EQ(la::numerical_rank(Eigen::MatrixXd::Zero(2, 2)), 0);
    // Relative cutoff at 1e-9 * sigma_max.
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = 1e-12;
    EXPECT_EQ(la::numerical_rank(d), 1);
    d(1, 1) = 1e-6;
    EXPECT_EQ(la::numerical_rank(d), 2);
    // Scale invariance: same ratios, larger magnitudes.
    d(0, 0) = 1e5;
    d(1, 1) = 1e-5;
    EXPECT_EQ(la::numerical_rank(d), 1);
}

TEST(Linalg, NumericalRankTallMatrix) {
    Eigen::MatrixXd g(2, 1);
    g << 1.0, 1.0;
    EXPECT_EQ(la::numerical_rank(g), 1);
}

TEST(Linalg, PsdFactorReconstructs) {
    const Eigen::MatrixXd a = mat2(2.0, 1.0, 1.0, 2.0);
    const Eigen::MatrixXd l = la::psd_factor(a);
    EXPECT_NEAR((l * l.transpose() - a).cwiseAbs().maxCoeff(), 0.0, 1e-12);
}

TEST(Linalg, PsdFactorOfZeroIsZero) {
    const Eigen::MatrixXd l = la::psd_factor(Eigen::MatrixXd::Zero(2, 2));
    EXPECT_EQ(l.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Linalg, PsdFactorClampsRoundoffNegatives) {
    // Eigenvalues {1, -1e-15}: the tiny negative one must clamp to zero
    // instead of producing NaN through sqrt.
    Eigen::MatrixXd a = mat2(0.5, 0.5, 0.5, 0.5);
    a -= 1e-15 * Eigen::MatrixXd::Identity(2, 2) * 0.5;
    const Eigen::MatrixXd l = la::psd_factor(a);
    EXPECT_TRUE(l.allFinite());
}
