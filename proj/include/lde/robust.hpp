#pragma once

#include "lde/digital_bcd.hpp"

namespace lde {

/// Design context under CSI uncertainty: only channel estimates are known,
/// the error is CN(0, sigma2_csi) per entry.
struct RobustContext {
    CMatList H_hat;
    double sigma2_csi = 0.0;
    ObservationModel model;
};

/// Average MSE over the CSI error: the perfect-CSI expression on H_hat plus
/// the inflation term sigma2_csi * (sum_n Tr[P_n Q_n P_n^H]) * ||A||_F^2.
double robust_mse(const CMat& A, const CMatList& P_list, const RobustContext& ctx);

CMat robust_update_combiner(const CMatList& P_list, const RobustContext& ctx);

CMat robust_update_precoder(int n, const CMat& A, const CMatList& P_list, double lambda,
                            const RobustContext& ctx);

double robust_solve_dual(int n, const CMat& A, const CMatList& P_list, const RobustContext& ctx,
                         double rho_n);

/// BCD loop with the robust updates and robust_mse as the objective. At
/// sigma2_csi = 0 it follows exactly the same computation as bcd_design.
std::pair<DigitalTransceiver, BcdTrace> robust_bcd_design(const RobustContext& ctx,
                                                          const SystemConfig& cfg, Rng& init_rng);

/// Closed-form second moment: H_hat K K^H H_hat^H + sigma2_csi Tr(K K^H) I.
CMat lemma1_rhs(const CMat& H_hat, double sigma2_csi, const CMat& K);

/// Sample mean of H K K^H H^H with H = H_hat + Delta over `trials` draws.
CMat lemma1_lhs_mc(const CMat& H_hat, double sigma2_csi, const CMat& K, int trials, Rng& rng);

/// Cross-node counterpart: the error terms average out entirely.
CMat lemma1_cross_rhs(const CMat& H_hat_n, const CMat& H_hat_j, const CMat& K);

CMat lemma1_cross_lhs_mc(const CMat& H_hat_n, const CMat& H_hat_j, double sigma2_csi,
                         const CMat& K, int trials, Rng& rng);

/// Monte-Carlo mean together with the per-entry standard error (combined
/// real+imag), for concentration checks.
struct McMatrixStats {
    CMat mean;
    RMat std_error;
};
McMatrixStats lemma1_lhs_mc_stats(const CMat& H_hat, double sigma2_csi, const CMat& K, int trials,
                                  Rng& rng);
McMatrixStats lemma1_cross_lhs_mc_stats(const CMat& H_hat_n, const CMat& H_hat_j,
                                        double sigma2_csi, const CMat& K, int trials, Rng& rng);

} // namespace lde
