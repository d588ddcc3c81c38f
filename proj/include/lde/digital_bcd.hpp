#pragma once

#include "lde/config.hpp"
#include "lde/model.hpp"
#include "lde/rng.hpp"
#include "lde/types.hpp"

#include <utility>

namespace lde {

/// Fully-digital transceiver: per-node precoders, FC combiner applied as
/// theta_hat = A y, and the dual variables of the power constraints.
struct DigitalTransceiver {
    CMatList P;                  // per node n_tx x obs_dim
    CMat A;                      // param_dim x n_rx
    std::vector<double> lambdas; // per-node duals, >= 0
};

struct BcdTrace {
    std::vector<double> mse_per_iter; // objective after each full iteration
    int iterations = 0;
    bool converged = false;
};

/// Exact MSE of theta_hat = A y under the coherent-MAC model, including the
/// cross-node coupling terms.
double mse_analytic(const CMat& A, const CMatList& P_list, const CMatList& H_list,
                    const ObservationModel& model);

/// LMMSE combiner for fixed precoders.
CMat update_combiner(const CMatList& P_list, const CMatList& H_list,
                     const ObservationModel& model);

/// KKT-stationary precoder for node n at a given dual value; lambda = 0 uses
/// the minimum-norm (pseudo-inverse) solution.
CMat update_precoder(int n, const CMat& A, const CMatList& P_list, double lambda,
                     const CMatList& H_list, const ObservationModel& model);

/// Dual variable for node n: zero when the unconstrained precoder is
/// feasible, otherwise the bisection root of the Appendix-style scalar power
/// equation sum_k z_kk/(eig_k + lambda)^2 = rho.
double solve_dual(int n, const CMat& A, const CMatList& P_list, const CMatList& H_list,
                  const ObservationModel& model, double rho_n);

/// Block-coordinate descent over the combiner and the per-node precoders,
/// starting from random precoders scaled to power equality.
std::pair<DigitalTransceiver, BcdTrace> bcd_design(const CMatList& H_list,
                                                   const ObservationModel& model,
                                                   const SystemConfig& cfg, Rng& init_rng);

namespace detail {

/// Shared signal coupling: B = sum_n H_n P_n R_n P_n^H H_n^H + G R_theta G^H
/// + R_w + inflation*I with G = sum_n H_n P_n C_n. B equals the covariance
/// of the received vector y when inflation = 0.
struct Coupling {
    CMat B;
    CMat G;
};
Coupling coupling(const CMatList& P_list, const CMatList& H_list, const ObservationModel& model,
                  double inflation);

/// sigma2_csi-parameterized MSE; equals mse_analytic at sigma2_csi = 0.
double mse_impl(const CMat& A, const CMatList& P_list, const CMatList& H_list,
                const ObservationModel& model, double sigma2_csi);

CMat combiner_impl(const CMatList& P_list, const CMatList& H_list, const ObservationModel& model,
                   double sigma2_csi);

/// Eigendecomposed left-hand system of the precoder update for node n.
/// ridge = sigma2_csi * ||A||_F^2 enters the left inverse like the dual.
struct PrecoderSystem {
    RVec evals; // eigenvalues of X_n (+ridge), clamped at zero
    CMat evecs;
    CMat Y;   // right-hand factor, n_tx x obs_dim
    CMat Q_n; // C_n R_theta C_n^H + R_n
};
PrecoderSystem precoder_system(int n, const CMat& A, const CMatList& P_list,
                               const CMatList& H_list, const ObservationModel& model,
                               double ridge);
CMat precoder_from_dual(const PrecoderSystem& sys, double lambda);
double solve_dual_impl(const PrecoderSystem& sys, double rho_n);

std::pair<DigitalTransceiver, BcdTrace> bcd_loop(const CMatList& H_list,
                                                 const ObservationModel& model, double sigma2_csi,
                                                 const SystemConfig& cfg, Rng& init_rng);

} // namespace detail

} // namespace lde
