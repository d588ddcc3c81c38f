#pragma once

#include "lde/config.hpp"
#include "lde/rng.hpp"
#include "lde/types.hpp"

#include <iosfwd>

namespace lde {

/// Cluster parameters of the clustered mmWave channel model.
/// Arrival angles are shared across nodes; departure angles and complex
/// gains are per node and cluster.
struct ClusterSet {
    CMat alphas;  // n_nodes x n_clusters complex path gains
    RVec aoa;     // n_clusters arrival angles, radians, shared across nodes
    RMat aod;     // n_nodes x n_clusters departure angles, radians
    double d_over_lambda_rx = 0.5;
    double d_over_lambda_tx = 0.5;

    int n_nodes() const { return static_cast<int>(alphas.rows()); }
    int n_clusters() const { return static_cast<int>(alphas.cols()); }
};

/// Assembled channel: H[n] = A_fc * D[n] * A_s[n]^H.
struct ChannelRealization {
    CMat A_fc;    // n_rx x n_clusters receive array-response matrix
    CMatList A_s; // per-node n_tx x n_clusters transmit array-response matrices
    CMatList D;   // per-node diagonal gain matrices, sqrt(n_rx*n_tx/K) * diag(alpha)
    CMatList H;   // per-node n_rx x n_tx channels
};

/// Channel estimate with synthetic Gaussian error: H[n] = H_hat[n] + delta[n].
struct CsiRealization {
    CMatList H_hat;
    CMatList delta;
    double sigma2_csi = 0.0;
};

/// Uniform-linear-array response: entry m is
/// exp(-j m 2*pi*spacing_ratio*cos(angle)) / sqrt(count).
CVec array_response(double angle, int count, double spacing_ratio);

/// Gains CN(0,1); arrival and departure angles uniform on [0, pi].
ClusterSet draw_clusters(const SystemConfig& cfg, Rng& rng);

ChannelRealization assemble_channel(const ClusterSet& clusters, const SystemConfig& cfg);

/// delta entries i.i.d. CN(0, sigma2_csi); H_hat = H - delta so the true
/// channel is recovered exactly as H_hat + delta.
CsiRealization perturb_csi(const CMatList& H, double sigma2_csi, Rng& rng);

/// Text fixture format: matrices as row-major "re im" pairs (see README).
void save_channel(std::ostream& os, const ChannelRealization& ch);
ChannelRealization load_channel(std::istream& is);

} // namespace lde
