#pragma once

#include "lde/config.hpp"
#include "lde/rng.hpp"
#include "lde/types.hpp"

namespace lde {

/// Linear observation model: node n sees x_n = C_n theta + v_n with
/// v_n ~ CN(0, R[n]), theta ~ CN(0, R_theta), FC noise w ~ CN(0, R_w).
struct ObservationModel {
    CMatList C; // per-node observation matrices, obs_dim x param_dim
    CMatList R; // per-node observation noise covariances, obs_dim x obs_dim
    CMat R_theta;
    CMat R_w;

    int n_nodes() const { return static_cast<int>(C.size()); }

    /// Checks Hermitian symmetry (1e-12), PSD-ness (eigenvalue floor -1e-10)
    /// and dimension consistency against the config.
    void validate(const SystemConfig& cfg) const;
};

/// Stacked forms of the per-node quantities.
struct StackedModel {
    CMat C; // vertical stack of C_n
    CMat H; // horizontal concatenation of H_n
    CMat P; // block-diagonal precoder, off-blocks exactly zero
};

StackedModel stack_model(const CMatList& C_list, const CMatList& H_list, const CMatList& P_list);

/// One observation draw x_n = C_n theta + v_n for node index n (0-based).
CVec observe(const ObservationModel& model, int n, const CVec& theta, Rng& rng);

/// Average transmit power Tr[P_n (C_n R_theta C_n^H + R_n) P_n^H].
double transmit_power(const CMat& P_n, const CMat& C_n, const CMat& R_theta, const CMat& R_n);

/// Per-node signal+noise covariance C_n R_theta C_n^H + R_n.
CMat node_input_covariance(const CMat& C_n, const CMat& R_theta, const CMat& R_n);

} // namespace lde
