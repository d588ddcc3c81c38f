#pragma once

#include "lde/channel.hpp"
#include "lde/digital_bcd.hpp"
#include "lde/model.hpp"
#include "lde/types.hpp"

#include <utility>

namespace lde {

/// RF/baseband factor pairs with unit-modulus RF entries.
struct HybridTransceiver {
    CMatList P_rf; // per node n_tx x n_rf_node, modulus 1/sqrt(n_tx)
    CMatList P_bb; // per node n_rf_node x obs_dim
    CMat A_rf;     // n_rx x n_rf_fc, modulus 1/sqrt(n_rx)
    CMat A_bb;     // n_rf_fc x param_dim

    /// P_n = P_rf_n P_bb_n.
    CMatList effective_precoders() const;
    /// Combiner applied as theta_hat = A y, i.e. (A_rf A_bb)^H.
    CMat effective_combiner() const;
};

struct SompResult {
    std::vector<int> columns;
    CMat coeffs;
    double residual_norm;                  // final (weighted) residual
    std::vector<double> residual_history;  // after each greedy step
};

/// Greedy simultaneous-OMP factorization of `target` over the dictionary
/// columns: pick the column with maximal residual row-energy, least-squares
/// refit, repeat k times. With a weight W (PSD), selection and refit act on
/// W^{1/2}(target - dict * coeffs). Ties break to the lowest column index;
/// selected columns are distinct.
SompResult somp_factorize(const CMat& target, const CMat& dictionary, int k,
                          const CMat* weight = nullptr);

/// Factorizes a fully-digital precoder over the node's transmit array
/// dictionary and rescales the baseband factor to preserve the Frobenius
/// norm of the target.
std::pair<CMat, CMat> hybrid_precoder(const CMat& P_n, const CMat& A_s_n, int n_rf_node);

/// Covariance of the received vector y under the model:
/// sum_{n,j} H_n P_n C_n R_theta C_j^H P_j^H H_j^H + sum_n H_n P_n R_n P_n^H H_n^H + R_w.
CMat received_covariance(const CMatList& P_list, const CMatList& H_list,
                         const ObservationModel& model);

/// Weighted factorization of A^H over the receive array dictionary,
/// minimizing ||R_yy^{1/2}(A^H - A_rf A_bb)||_F.
std::pair<CMat, CMat> hybrid_combiner(const CMat& A, const CMat& A_fc, int n_rf_fc,
                                      const CMat& R_yy);

/// Full decomposition of a digital transceiver: per-node precoder SOMP over
/// ch.A_s, then the combiner SOMP over ch.A_fc weighted by the received
/// covariance under the hybrid precoders and the design-side channels.
HybridTransceiver hybridize(const DigitalTransceiver& dt, const ChannelRealization& ch,
                            const CMatList& H_design, const ObservationModel& model,
                            const SystemConfig& cfg);

} // namespace lde
