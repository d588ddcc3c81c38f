#include "lde/robust.hpp"

#include "lde/linalg.hpp"

#include <cmath>

namespace lde {

double robust_mse(const CMat& A, const CMatList& P_list, const RobustContext& ctx) {
    return detail::mse_impl(A, P_list, ctx.H_hat, ctx.model, ctx.sigma2_csi);
}

CMat robust_update_combiner(const CMatList& P_list, const RobustContext& ctx) {
    return detail::combiner_impl(P_list, ctx.H_hat, ctx.model, ctx.sigma2_csi);
}

namespace {

double combiner_ridge(const CMat& A, double sigma2_csi) {
    return sigma2_csi == 0.0 ? 0.0 : sigma2_csi * A.squaredNorm();
}

} // namespace

CMat robust_update_precoder(int n, const CMat& A, const CMatList& P_list, double lambda,
                            const RobustContext& ctx) {
    require(lambda >= 0.0, "robust_update_precoder: lambda must be >= 0");
    return detail::precoder_from_dual(
        detail::precoder_system(n, A, P_list, ctx.H_hat, ctx.model,
                                combiner_ridge(A, ctx.sigma2_csi)),
        lambda);
}

double robust_solve_dual(int n, const CMat& A, const CMatList& P_list, const RobustContext& ctx,
                         double rho_n) {
    return detail::solve_dual_impl(
        detail::precoder_system(n, A, P_list, ctx.H_hat, ctx.model,
                                combiner_ridge(A, ctx.sigma2_csi)),
        rho_n);
}

std::pair<DigitalTransceiver, BcdTrace> robust_bcd_design(const RobustContext& ctx,
                                                          const SystemConfig& cfg, Rng& init_rng) {
    require(ctx.sigma2_csi >= 0.0, "robust_bcd_design: sigma2_csi must be >= 0");
    return detail::bcd_loop(ctx.H_hat, ctx.model, ctx.sigma2_csi, cfg, init_rng);
}

CMat lemma1_rhs(const CMat& H_hat, double sigma2_csi, const CMat& K) {
    CMat kk = K * K.adjoint();
    return H_hat * kk * H_hat.adjoint() +
           sigma2_csi * kk.trace().real() * CMat::Identity(H_hat.rows(), H_hat.rows());
}

CMat lemma1_cross_rhs(const CMat& H_hat_n, const CMat& H_hat_j, const CMat& K) {
    return H_hat_n * (K * K.adjoint()) * H_hat_j.adjoint();
}

namespace {

template <typename DrawTerm>
McMatrixStats mc_matrix_mean(Eigen::Index rows, Eigen::Index cols, int trials, DrawTerm draw) {
    require(trials >= 1, "lemma1 MC: trials must be >= 1");
    CMat sum = CMat::Zero(rows, cols);
    RMat sumsq_re = RMat::Zero(rows, cols);
    RMat sumsq_im = RMat::Zero(rows, cols);
    for (int t = 0; t < trials; ++t) {
        CMat term = draw();
        sum += term;
        sumsq_re += term.real().cwiseAbs2();
        sumsq_im += term.imag().cwiseAbs2();
    }
    McMatrixStats stats;
    stats.mean = sum / static_cast<double>(trials);
    const double nt = static_cast<double>(trials);
    RMat var_re = (sumsq_re / nt - stats.mean.real().cwiseAbs2()).cwiseMax(0.0);
    RMat var_im = (sumsq_im / nt - stats.mean.imag().cwiseAbs2()).cwiseMax(0.0);
    stats.std_error = ((var_re + var_im) / nt).cwiseSqrt();
    return stats;
}

} // namespace

McMatrixStats lemma1_lhs_mc_stats(const CMat& H_hat, double sigma2_csi, const CMat& K, int trials,
                                  Rng& rng) {
    CMat kk = K * K.adjoint();
    if (sigma2_csi == 0.0) // every draw is the same deterministic matrix
        return {CMat(H_hat * kk * H_hat.adjoint()), RMat::Zero(H_hat.rows(), H_hat.rows())};
    return mc_matrix_mean(H_hat.rows(), H_hat.rows(), trials, [&]() {
        CMat h = H_hat + rng.cgauss_matrix(H_hat.rows(), H_hat.cols(), sigma2_csi);
        return CMat(h * kk * h.adjoint());
    });
}

McMatrixStats lemma1_cross_lhs_mc_stats(const CMat& H_hat_n, const CMat& H_hat_j,
                                        double sigma2_csi, const CMat& K, int trials, Rng& rng) {
    CMat kk = K * K.adjoint();
    if (sigma2_csi == 0.0)
        return {CMat(H_hat_n * kk * H_hat_j.adjoint()),
                RMat::Zero(H_hat_n.rows(), H_hat_j.rows())};
    return mc_matrix_mean(H_hat_n.rows(), H_hat_j.rows(), trials, [&]() {
        CMat hn = H_hat_n + rng.cgauss_matrix(H_hat_n.rows(), H_hat_n.cols(), sigma2_csi);
        CMat hj = H_hat_j + rng.cgauss_matrix(H_hat_j.rows(), H_hat_j.cols(), sigma2_csi);
        return CMat(hn * kk * hj.adjoint());
    });
}

CMat lemma1_lhs_mc(const CMat& H_hat, double sigma2_csi, const CMat& K, int trials, Rng& rng) {
    return lemma1_lhs_mc_stats(H_hat, sigma2_csi, K, trials, rng).mean;
}

CMat lemma1_cross_lhs_mc(const CMat& H_hat_n, const CMat& H_hat_j, double sigma2_csi,
                         const CMat& K, int trials, Rng& rng) {
    return lemma1_cross_lhs_mc_stats(H_hat_n, H_hat_j, sigma2_csi, K, trials, rng).mean;
}

} // namespace lde
