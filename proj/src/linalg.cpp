#include "lde/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace lde {

double hermitian_defect(const CMat& m) {
    if (m.rows() != m.cols())
        return std::numeric_limits<double>::infinity();
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const CMat& m, double tol) { return hermitian_defect(m) <= tol; }

double min_hermitian_eigenvalue(const CMat& m) {
    Eigen::SelfAdjointEigenSolver<CMat> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

CMat hermitian_sqrt(const CMat& m) {
    Eigen::SelfAdjointEigenSolver<CMat> es(m);
    RVec vals = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
}

CMat pseudo_inverse(const CMat& m, double rtol) {
    Eigen::JacobiSVD<CMat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVec& sv = svd.singularValues();
    double cutoff = rtol * (sv.size() > 0 ? sv(0) : 0.0);
    RVec inv = RVec::Zero(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff)
            inv(i) = 1.0 / sv(i);
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

CMat solve_hermitian(const CMat& b, const CMat& rhs, const std::string& what, double tol) {
    Eigen::LDLT<CMat> ldlt(b);
    CMat x = ldlt.solve(rhs);
    double rhs_norm = rhs.norm();
    if (rhs_norm == 0.0)
        return CMat::Zero(rhs.rows(), rhs.cols());
    // The residual is the ground truth; LDLT::info is not a reliable
    // definiteness test.
    double rel_residual = (b * x - rhs).norm() / rhs_norm;
    if (!x.allFinite() || !(rel_residual <= tol))
        throw std::runtime_error(what + ": singular system (relative residual " +
                                 std::to_string(rel_residual) + ")");
    return x;
}

} // namespace lde
