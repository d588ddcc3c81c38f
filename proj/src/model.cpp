#include "lde/model.hpp"

#include "lde/linalg.hpp"

#include <string>

namespace lde {

double SystemConfig::rho_at(int n) const {
    require(!rho.empty(), "SystemConfig: rho is empty");
    return rho.size() == 1 ? rho[0] : rho.at(static_cast<std::size_t>(n));
}

double SystemConfig::sigma2_obs_at(int n) const {
    require(!sigma2_obs.empty(), "SystemConfig: sigma2_obs is empty");
    return sigma2_obs.size() == 1 ? sigma2_obs[0] : sigma2_obs.at(static_cast<std::size_t>(n));
}

void SystemConfig::validate() const {
    require(n_nodes >= 1 && n_tx >= 1 && n_rx >= 1 && param_dim >= 1 && obs_dim >= 1 &&
                n_clusters >= 1 && n_rf_node >= 1 && n_rf_fc >= 1,
            "SystemConfig: all counts must be >= 1");
    require(n_rf_node <= n_tx, "SystemConfig: n_rf_node must not exceed n_tx");
    require(n_rf_fc <= n_rx, "SystemConfig: n_rf_fc must not exceed n_rx");
    require(sigma2_fc >= 0.0 && sigma2_csi >= 0.0, "SystemConfig: variances must be >= 0");
    for (double v : sigma2_obs)
        require(v >= 0.0, "SystemConfig: sigma2_obs entries must be >= 0");
    require(!rho.empty(), "SystemConfig: rho must be set");
    require(rho.size() == 1 || rho.size() == static_cast<std::size_t>(n_nodes),
            "SystemConfig: rho must have one entry or one per node");
    require(sigma2_obs.empty() || sigma2_obs.size() == 1 ||
                sigma2_obs.size() == static_cast<std::size_t>(n_nodes),
            "SystemConfig: sigma2_obs must have one entry or one per node");
    for (double r : rho)
        require(r > 0.0, "SystemConfig: power budgets must be > 0");
    require(trials >= 1, "SystemConfig: trials must be >= 1");
    require(bcd.max_iterations >= 1 && bcd.epsilon > 0.0, "SystemConfig: invalid BCD options");
}

namespace {

void check_covariance(const CMat& m, const std::string& name) {
    require(m.rows() == m.cols(), name + " must be square");
    require(is_hermitian(m, 1e-12), name + " must be Hermitian within 1e-12");
    require(min_hermitian_eigenvalue(m) >= -1e-10, name + " must be PSD (eigenvalue floor -1e-10)");
}

} // namespace

void ObservationModel::validate(const SystemConfig& cfg) const {
    require(static_cast<int>(C.size()) == cfg.n_nodes, "ObservationModel: C list length != n_nodes");
    require(static_cast<int>(R.size()) == cfg.n_nodes, "ObservationModel: R list length != n_nodes");
    for (int n = 0; n < cfg.n_nodes; ++n) {
        require(C[n].rows() == cfg.obs_dim && C[n].cols() == cfg.param_dim,
                "ObservationModel: C[" + std::to_string(n) + "] has wrong dimensions");
        require(R[n].rows() == cfg.obs_dim, "ObservationModel: R[" + std::to_string(n) +
                                                "] has wrong dimensions");
        check_covariance(R[n], "ObservationModel: R[" + std::to_string(n) + "]");
    }
    require(R_theta.rows() == cfg.param_dim, "ObservationModel: R_theta has wrong dimensions");
    check_covariance(R_theta, "ObservationModel: R_theta");
    require(R_w.rows() == cfg.n_rx, "ObservationModel: R_w has wrong dimensions");
    check_covariance(R_w, "ObservationModel: R_w");
}

StackedModel stack_model(const CMatList& C_list, const CMatList& H_list, const CMatList& P_list) {
    const int n_nodes = static_cast<int>(C_list.size());
    require(n_nodes >= 1, "stack_model: empty C list");
    require(H_list.size() == C_list.size() && P_list.size() == C_list.size(),
            "stack_model: list lengths differ");

    const Eigen::Index obs_dim = C_list[0].rows();
    const Eigen::Index param_dim = C_list[0].cols();
    const Eigen::Index n_rx = H_list[0].rows();
    const Eigen::Index n_tx = H_list[0].cols();
    for (int n = 0; n < n_nodes; ++n) {
        if (C_list[n].rows() != obs_dim || C_list[n].cols() != param_dim)
            throw std::invalid_argument("stack_model: C dimensions mismatch at node " +
                                        std::to_string(n));
        if (H_list[n].rows() != n_rx || H_list[n].cols() != n_tx)
            throw std::invalid_argument("stack_model: H dimensions mismatch at node " +
                                        std::to_string(n));
        if (P_list[n].rows() != n_tx || P_list[n].cols() != obs_dim)
            throw std::invalid_argument("stack_model: P dimensions mismatch at node " +
                                        std::to_string(n));
    }

    StackedModel out;
    out.C.resize(n_nodes * obs_dim, param_dim);
    out.H.resize(n_rx, n_nodes * n_tx);
    out.P = CMat::Zero(n_nodes * n_tx, n_nodes * obs_dim);
    for (int n = 0; n < n_nodes; ++n) {
        out.C.middleRows(n * obs_dim, obs_dim) = C_list[n];
        out.H.middleCols(n * n_tx, n_tx) = H_list[n];
        out.P.block(n * n_tx, n * obs_dim, n_tx, obs_dim) = P_list[n];
    }
    return out;
}

CVec observe(const ObservationModel& model, int n, const CVec& theta, Rng& rng) {
    require(n >= 0 && n < model.n_nodes(), "observe: node index out of range");
    const CMat& C_n = model.C[static_cast<std::size_t>(n)];
    require(theta.size() == C_n.cols(), "observe: theta has wrong length");
    CMat noise_sqrt = hermitian_sqrt(model.R[static_cast<std::size_t>(n)]);
    return C_n * theta + noise_sqrt * rng.cgauss_vector(C_n.rows());
}

CMat node_input_covariance(const CMat& C_n, const CMat& R_theta, const CMat& R_n) {
    return C_n * R_theta * C_n.adjoint() + R_n;
}

double transmit_power(const CMat& P_n, const CMat& C_n, const CMat& R_theta, const CMat& R_n) {
    require(P_n.cols() == C_n.rows(), "transmit_power: P and C dimensions mismatch");
    require(R_theta.rows() == C_n.cols() && R_n.rows() == C_n.rows(),
            "transmit_power: covariance dimensions mismatch");
    CMat q = node_input_covariance(C_n, R_theta, R_n);
    double p = (P_n * q * P_n.adjoint()).trace().real();
    return p > 0.0 ? p : 0.0;
}

} // namespace lde
