#include "lde/noiseless.hpp"

#include "lde/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <numeric>

namespace lde {

namespace {

/// Indices of the n_rf largest values, in decreasing order; ties break to
/// the lower index.
std::vector<int> top_indices(const RVec& values, int n_rf) {
    std::vector<int> order(static_cast<std::size_t>(values.size()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return values(a) > values(b); });
    order.resize(static_cast<std::size_t>(n_rf));
    return order;
}

CMat extract_columns(const CMat& dict, const std::vector<int>& cols) {
    CMat out(dict.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < cols.size(); ++i)
        out.col(static_cast<Eigen::Index>(i)) = dict.col(cols[i]);
    return out;
}

} // namespace

RfPick select_rf_precoder(const ClusterSet& clusters, const ChannelRealization& ch, int node,
                          int n_rf_node) {
    require(node >= 0 && node < clusters.n_nodes(), "select_rf_precoder: node out of range");
    if (n_rf_node > clusters.n_clusters())
        throw std::invalid_argument("select_rf_precoder: dictionary exhausted (n_rf_node " +
                                    std::to_string(n_rf_node) + " > clusters " +
                                    std::to_string(clusters.n_clusters()) + ")");
    RVec gains = clusters.alphas.row(node).cwiseAbs().transpose();
    RfPick pick;
    pick.columns = top_indices(gains, n_rf_node);
    pick.matrix = extract_columns(ch.A_s[static_cast<std::size_t>(node)], pick.columns);
    return pick;
}

RfPick select_rf_combiner(const ClusterSet& clusters, const ChannelRealization& ch, int n_rf_fc) {
    if (n_rf_fc > clusters.n_clusters())
        throw std::invalid_argument("select_rf_combiner: dictionary exhausted (n_rf_fc " +
                                    std::to_string(n_rf_fc) + " > clusters " +
                                    std::to_string(clusters.n_clusters()) + ")");
    RVec sums = clusters.alphas.cwiseAbs().colwise().sum().transpose();
    RfPick pick;
    pick.columns = top_indices(sums, n_rf_fc);
    pick.matrix = extract_columns(ch.A_fc, pick.columns);
    return pick;
}

RfSelection select_rf(const ClusterSet& clusters, const ChannelRealization& ch,
                      const SystemConfig& cfg) {
    RfSelection sel;
    sel.P_rf.reserve(static_cast<std::size_t>(cfg.n_nodes));
    sel.node_columns.reserve(static_cast<std::size_t>(cfg.n_nodes));
    for (int n = 0; n < cfg.n_nodes; ++n) {
        RfPick pick = select_rf_precoder(clusters, ch, n, cfg.n_rf_node);
        sel.node_columns.push_back(std::move(pick.columns));
        sel.P_rf.push_back(std::move(pick.matrix));
    }
    RfPick fc = select_rf_combiner(clusters, ch, cfg.n_rf_fc);
    sel.fc_columns = std::move(fc.columns);
    sel.A_rf = std::move(fc.matrix);
    return sel;
}

CMatList effective_channels(const ChannelRealization& ch, const RfSelection& rf) {
    CMatList h_bar;
    h_bar.reserve(ch.H.size());
    for (std::size_t n = 0; n < ch.H.size(); ++n)
        h_bar.push_back(rf.A_rf.adjoint() * ch.H[n] * rf.P_rf[n]);
    return h_bar;
}

CMatList design_bb_from_effective(const CMatList& H_bar, const CMat& C, int obs_dim) {
    const int n_nodes = static_cast<int>(H_bar.size());
    require(n_nodes >= 1, "design_bb_from_effective: no effective channels");
    const Eigen::Index n_rf = H_bar[0].rows();
    require(H_bar[0].cols() == n_rf,
            "design_bb_from_effective: effective channels must be square (n_rf_fc == n_rf_node)");
    require(C.rows() == static_cast<Eigen::Index>(n_nodes) * obs_dim,
            "design_bb_from_effective: C row count != n_nodes * obs_dim");
    require(n_rf <= C.rows(), "design_bb_from_effective: more RF chains than stacked observations");

    // Composite target channel: identity singular block against the right
    // singular basis of C, i.e. the first n_rf rows of U_C^H.
    Eigen::JacobiSVD<CMat> svd_c(C, Eigen::ComputeFullU);
    CMat h_tilde_opt = svd_c.matrixU().leftCols(n_rf).adjoint();

    CMatList p_bb;
    p_bb.reserve(static_cast<std::size_t>(n_nodes));
    for (int n = 0; n < n_nodes; ++n) {
        require(H_bar[static_cast<std::size_t>(n)].rows() == n_rf &&
                    H_bar[static_cast<std::size_t>(n)].cols() == n_rf,
                "design_bb_from_effective: inconsistent effective channel at node " +
                    std::to_string(n));
        Eigen::JacobiSVD<CMat> svd_h(H_bar[static_cast<std::size_t>(n)],
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
        const RVec& sv = svd_h.singularValues();
        if (sv(0) <= 0.0 || sv(sv.size() - 1) < 1e-10 * sv(0))
            throw std::runtime_error("design_bb_precoders: effective channel at node " +
                                     std::to_string(n) + " is numerically rank-deficient");
        p_bb.push_back(svd_h.solve(h_tilde_opt.middleCols(n * obs_dim, obs_dim)));
    }
    return p_bb;
}

CMatList design_bb_precoders(const ChannelRealization& ch, const RfSelection& rf, const CMat& C,
                             const SystemConfig& cfg) {
    require(cfg.n_rf_fc == cfg.n_rf_node,
            "design_bb_precoders: requires n_rf_fc == n_rf_node (square effective channels)");
    return design_bb_from_effective(effective_channels(ch, rf), C, cfg.obs_dim);
}

CMat noiseless_error_covariance(const CMatList& H_bar, const CMatList& P_bb, const CMat& C) {
    require(H_bar.size() == P_bb.size(), "noiseless_error_covariance: list lengths differ");
    const Eigen::Index n_rf = H_bar[0].rows();
    const Eigen::Index obs_dim = P_bb[0].cols();
    CMat h_tilde(n_rf, static_cast<Eigen::Index>(H_bar.size()) * obs_dim);
    for (std::size_t n = 0; n < H_bar.size(); ++n)
        h_tilde.middleCols(static_cast<Eigen::Index>(n) * obs_dim, obs_dim) = H_bar[n] * P_bb[n];

    CMat gram = h_tilde * h_tilde.adjoint();
    CMat projected = solve_hermitian(gram, h_tilde * C, "noiseless_error_covariance");
    CMat e_inv = CMat::Identity(C.cols(), C.cols()) + C.adjoint() * h_tilde.adjoint() * projected;
    return solve_hermitian(e_inv, CMat::Identity(C.cols(), C.cols()),
                           "noiseless_error_covariance: inverse");
}

CMat lmmse_combiner(const CMat& H_tilde, const CMat& C) {
    CMat hc = H_tilde * C;
    CMat gram = hc * hc.adjoint() + H_tilde * H_tilde.adjoint();
    // W = (Ht C)^H gram^{-1}  ==  (gram^{-1} Ht C)^H since gram is Hermitian.
    return solve_hermitian(gram, hc, "lmmse_combiner").adjoint();
}

double noiseless_mse(const CMat& C, int n_rf_node, int q) {
    require(n_rf_node >= 1, "noiseless_mse: n_rf_node must be >= 1");
    require(C.cols() == q, "noiseless_mse: C column count != q");
    Eigen::SelfAdjointEigenSolver<CMat> es(C.adjoint() * C, Eigen::EigenvaluesOnly);
    RVec evals = es.eigenvalues().cwiseMax(0.0).reverse(); // decreasing
    const int terms = std::min(n_rf_node, q);
    double mse = n_rf_node < q ? static_cast<double>(q - n_rf_node) : 0.0;
    for (int k = 0; k < terms; ++k)
        mse += 1.0 / (1.0 + evals(k));
    return mse;
}

} // namespace lde
