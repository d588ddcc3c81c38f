#pragma once

#include <cstdint>
#include <vector>

namespace lde {

struct BcdOptions {
    int max_iterations = 40;
    double epsilon = 1e-4; // relative MSE change for convergence
};

/// Scenario dimensions, power budgets, noise levels and seeds.
struct SystemConfig {
    int n_nodes = 1;    // sensing nodes
    int n_tx = 1;       // transmit antennas per node
    int n_rx = 1;       // receive antennas at the fusion center
    int param_dim = 1;  // length of the estimated parameter vector
    int obs_dim = 1;    // observations per node
    int n_clusters = 1; // propagation clusters per channel
    int n_rf_node = 1;  // RF chains per node
    int n_rf_fc = 1;    // RF chains at the fusion center

    std::vector<double> rho;        // per-node transmit power budgets, linear watts
    std::vector<double> sigma2_obs; // per-node observation noise variances, linear
    double sigma2_fc = 0.0;         // fusion-center noise variance, linear
    double sigma2_csi = 0.0;        // channel estimation error variance, linear

    std::uint64_t seed = 1;
    int trials = 1000;
    BcdOptions bcd;

    /// Power budget for node n; a single stored value is broadcast to all nodes.
    double rho_at(int n) const;
    /// Observation noise variance for node n, with single-value broadcast.
    double sigma2_obs_at(int n) const;

    /// Throws std::invalid_argument on any violated invariant.
    void validate() const;
};

} // namespace lde
