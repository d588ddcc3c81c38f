#include "lde/somp.hpp"

#include "lde/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace lde {

CMatList HybridTransceiver::effective_precoders() const {
    CMatList out;
    out.reserve(P_rf.size());
    for (std::size_t n = 0; n < P_rf.size(); ++n)
        out.push_back(P_rf[n] * P_bb[n]);
    return out;
}

CMat HybridTransceiver::effective_combiner() const { return (A_rf * A_bb).adjoint(); }

SompResult somp_factorize(const CMat& target, const CMat& dictionary, int k, const CMat* weight) {
    require(dictionary.rows() == target.rows(), "somp_factorize: target/dictionary row mismatch");
    require(k >= 1, "somp_factorize: k must be >= 1");
    if (k > dictionary.cols())
        throw std::invalid_argument("somp_factorize: k (" + std::to_string(k) +
                                    ") exceeds dictionary size (" +
                                    std::to_string(dictionary.cols()) + ")");

    CMat t = target;
    CMat d = dictionary;
    if (weight != nullptr) {
        require(weight->rows() == target.rows() && weight->cols() == target.rows(),
                "somp_factorize: weight has wrong dimensions");
        CMat w_half = hermitian_sqrt(*weight);
        t = w_half * target;
        d = w_half * dictionary;
    }

    const int n_atoms = static_cast<int>(d.cols());
    std::vector<bool> used(static_cast<std::size_t>(n_atoms), false);

    SompResult res;
    res.coeffs = CMat::Zero(k, target.cols());
    res.residual_norm = t.norm();
    CMat residual = t;
    CMat d_sel(d.rows(), 0);

    for (int step = 0; step < k; ++step) {
        CMat psi = d.adjoint() * residual;
        int best = -1;
        double best_energy = -1.0;
        for (int m = 0; m < n_atoms; ++m) {
            if (used[static_cast<std::size_t>(m)])
                continue;
            double energy = psi.row(m).squaredNorm();
            if (energy > best_energy) { // ties resolve to the lowest index
                best_energy = energy;
                best = m;
            }
        }
        used[static_cast<std::size_t>(best)] = true;
        res.columns.push_back(best);

        d_sel.conservativeResize(Eigen::NoChange, step + 1);
        d_sel.col(step) = d.col(best);

        CMat gram = d_sel.adjoint() * d_sel;
        Eigen::SelfAdjointEigenSolver<CMat> es(gram, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < 1e-12 * es.eigenvalues().maxCoeff())
            throw std::runtime_error(
                "somp_factorize: selected dictionary columns are numerically dependent");
        res.coeffs = solve_hermitian(gram, d_sel.adjoint() * t, "somp_factorize: refit");

        CMat raw = t - d_sel * res.coeffs;
        res.residual_norm = raw.norm();
        res.residual_history.push_back(res.residual_norm);
        residual = res.residual_norm > 0.0 ? CMat(raw / res.residual_norm) : raw;
    }
    return res;
}

std::pair<CMat, CMat> hybrid_precoder(const CMat& P_n, const CMat& A_s_n, int n_rf_node) {
    SompResult res = somp_factorize(P_n, A_s_n, n_rf_node);
    CMat p_rf(A_s_n.rows(), n_rf_node);
    for (int i = 0; i < n_rf_node; ++i)
        p_rf.col(i) = A_s_n.col(res.columns[static_cast<std::size_t>(i)]);
    CMat p_bb = res.coeffs;
    double product_norm = (p_rf * p_bb).norm();
    if (product_norm > 0.0)
        p_bb *= P_n.norm() / product_norm;
    return {std::move(p_rf), std::move(p_bb)};
}

CMat received_covariance(const CMatList& P_list, const CMatList& H_list,
                         const ObservationModel& model) {
    return detail::coupling(P_list, H_list, model, 0.0).B;
}

std::pair<CMat, CMat> hybrid_combiner(const CMat& A, const CMat& A_fc, int n_rf_fc,
                                      const CMat& R_yy) {
    SompResult res = somp_factorize(A.adjoint(), A_fc, n_rf_fc, &R_yy);
    CMat a_rf(A_fc.rows(), n_rf_fc);
    for (int i = 0; i < n_rf_fc; ++i)
        a_rf.col(i) = A_fc.col(res.columns[static_cast<std::size_t>(i)]);
    return {std::move(a_rf), CMat(res.coeffs)};
}

HybridTransceiver hybridize(const DigitalTransceiver& dt, const ChannelRealization& ch,
                            const CMatList& H_design, const ObservationModel& model,
                            const SystemConfig& cfg) {
    HybridTransceiver ht;
    ht.P_rf.reserve(dt.P.size());
    ht.P_bb.reserve(dt.P.size());
    for (std::size_t n = 0; n < dt.P.size(); ++n) {
        auto [p_rf, p_bb] = hybrid_precoder(dt.P[n], ch.A_s[n], cfg.n_rf_node);
        ht.P_rf.push_back(std::move(p_rf));
        ht.P_bb.push_back(std::move(p_bb));
    }
    CMat r_yy = received_covariance(ht.effective_precoders(), H_design, model);
    auto [a_rf, a_bb] = hybrid_combiner(dt.A, ch.A_fc, cfg.n_rf_fc, r_yy);
    ht.A_rf = std::move(a_rf);
    ht.A_bb = std::move(a_bb);
    return ht;
}

} // namespace lde
