#pragma once

#include "lde/channel.hpp"
#include "lde/types.hpp"

namespace lde {

/// One RF-stage column selection: indices into an array-response dictionary
/// plus the extracted matrix (all entries of constant modulus).
struct RfPick {
    std::vector<int> columns;
    CMat matrix;
};

/// RF precoders for all nodes plus the FC-side RF combiner.
struct RfSelection {
    std::vector<std::vector<int>> node_columns; // per-node selected dictionary columns
    std::vector<int> fc_columns;
    CMatList P_rf; // per node n_tx x n_rf_node, entries of modulus 1/sqrt(n_tx)
    CMat A_rf;     // n_rx x n_rf_fc, entries of modulus 1/sqrt(n_rx)
};

/// Picks the n_rf_node transmit array columns with the largest |alpha_{k,n}|,
/// in decreasing gain order. Throws if n_rf_node exceeds the cluster count.
RfPick select_rf_precoder(const ClusterSet& clusters, const ChannelRealization& ch, int node,
                          int n_rf_node);

/// Ranks clusters by the gain-magnitude sum over nodes and extracts the top
/// n_rf_fc receive array columns.
RfPick select_rf_combiner(const ClusterSet& clusters, const ChannelRealization& ch, int n_rf_fc);

/// Convenience: both selections for every node.
RfSelection select_rf(const ClusterSet& clusters, const ChannelRealization& ch,
                      const SystemConfig& cfg);

/// Effective per-node channels A_rf^H H_n P_rf_n after the RF stages.
CMatList effective_channels(const ChannelRealization& ch, const RfSelection& rf);

/// Baseband precoders from square effective channels: the target composite
/// channel takes the right singular basis of C, and each node solves its
/// own block. Requires n_rf_fc == n_rf_node.
CMatList design_bb_precoders(const ChannelRealization& ch, const RfSelection& rf, const CMat& C,
                             const SystemConfig& cfg);

/// Core of design_bb_precoders, on explicit effective channels.
CMatList design_bb_from_effective(const CMatList& H_bar, const CMat& C, int obs_dim);

/// LMMSE error covariance (I_q + C^H Ht^H (Ht Ht^H)^{-1} Ht C)^{-1} for the
/// composite baseband channel Ht = [H_bar_1 P_bb_1, ..., H_bar_N P_bb_N].
CMat noiseless_error_covariance(const CMatList& H_bar, const CMatList& P_bb, const CMat& C);

/// LMMSE combiner for z = Ht C theta + Ht v with unit priors:
/// W = (Ht C)^H [Ht C (Ht C)^H + Ht Ht^H]^{-1}.
CMat lmmse_combiner(const CMat& H_tilde, const CMat& C);

/// MSE attainable with r RF chains per node:
///   (q - r) + sum_{k=1..r} 1/(1+lambda_k)   for r < q
///   sum_{k=1..q} 1/(1+lambda_k)             for r >= q
/// with lambda_k the largest eigenvalues of C C^H in decreasing order.
double noiseless_mse(const CMat& C, int n_rf_node, int q);

} // namespace lde
