#include "diskf/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "diskf/errors.hpp"

namespace diskf::linalg {

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& a) {
    return 0.5 * (a + a.transpose());
}

bool is_symmetric(const Eigen::MatrixXd& a, double tol) {
    if (a.rows() != a.cols()) return false;
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    return (a - a.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

bool is_psd(const Eigen::MatrixXd& a, double tol) {
    if (!is_symmetric(a, tol)) return false;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrized(a),
                                                      Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) return false;
    const double lmax = es.eigenvalues().cwiseAbs().maxCoeff();
    return es.eigenvalues().minCoeff() >= -tol * std::max(1.0, lmax);
}

namespace {

// One factorization attempt, one jitter retry, then give up.
Eigen::LLT<Eigen::MatrixXd> factor_spd(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols()) {
        throw ConditioningError("factor_spd: matrix is not square");
    }
    if (!a.allFinite()) {
        throw ConditioningError("factor_spd: matrix has non-finite entries");
    }
    Eigen::MatrixXd sym = symmetrized(a);
    Eigen::LLT<Eigen::MatrixXd> llt(sym);
    if (llt.info() == Eigen::Success) return llt;
    sym.diagonal().array() += kSpdJitter;
    llt.compute(sym);
    if (llt.info() == Eigen::Success) return llt;
    throw ConditioningError(
        "factor_spd: matrix is not positive definite after jitter");
}

}  // namespace

Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& a) {
    const auto llt = factor_spd(a);
    Eigen::MatrixXd inv =
        llt.solve(Eigen::MatrixXd::Identity(a.rows(), a.rows()));
    return symmetrized(inv);
}

Eigen::MatrixXd spd_solve(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.rows() != b.rows()) {
        throw ConditioningError("spd_solve: dimension mismatch");
    }
    return factor_spd(a).solve(b);
}

int numerical_rank(const Eigen::MatrixXd& a) {
    if (a.size() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) <= 0.0) return 0;
    const double thresh = kRankRelTol * sv(0);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > thresh) ++rank;
    }
    return rank;
}

Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols()) {
        throw ConditioningError("psd_factor: matrix is not square");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrized(a));
    if (es.info() != Eigen::Success) {
        throw ConditioningError("psd_factor: eigendecomposition failed");
    }
    Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * lam.cwiseSqrt().asDiagonal();
}

}  // namespace diskf::linalg
