#include "lde/digital_bcd.hpp"

#include "lde/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

namespace lde {

namespace detail {

Coupling coupling(const CMatList& P_list, const CMatList& H_list, const ObservationModel& model,
                  double inflation) {
    const std::size_t n_nodes = H_list.size();
    require(n_nodes >= 1, "coupling: empty node list");
    require(P_list.size() == n_nodes && model.C.size() == n_nodes && model.R.size() == n_nodes,
            "coupling: list lengths differ");
    const Eigen::Index n_rx = H_list[0].rows();
    const Eigen::Index param_dim = model.R_theta.rows();

    // B = sum_n H_n P_n R_n P_n^H H_n^H + G R_theta G^H + R_w (+ inflation I),
    // a sum of PSD terms; algebraically equal to the per-pair expansion with
    // the cross-node couplings written out.
    CMat g = CMat::Zero(n_rx, param_dim);
    CMat b = CMat::Zero(n_rx, n_rx);
    for (std::size_t n = 0; n < n_nodes; ++n) {
        CMat hp = H_list[n] * P_list[n];
        g += hp * model.C[n];
        b += hp * model.R[n] * hp.adjoint();
    }
    b += g * model.R_theta * g.adjoint() + model.R_w;
    if (inflation != 0.0)
        b += inflation * CMat::Identity(n_rx, n_rx);
    b = 0.5 * (b + b.adjoint()).eval();
    return {std::move(b), std::move(g)};
}

namespace {

double total_signal_power(const CMatList& P_list, const ObservationModel& model) {
    double total = 0.0;
    for (std::size_t n = 0; n < P_list.size(); ++n)
        total += transmit_power(P_list[n], model.C[n], model.R_theta, model.R[n]);
    return total;
}

double inflation_term(const CMatList& P_list, const ObservationModel& model, double sigma2_csi) {
    return sigma2_csi == 0.0 ? 0.0 : sigma2_csi * total_signal_power(P_list, model);
}

} // namespace

double mse_impl(const CMat& A, const CMatList& P_list, const CMatList& H_list,
                const ObservationModel& model, double sigma2_csi) {
    require(A.rows() == model.R_theta.rows() && A.cols() == H_list[0].rows(),
            "mse: combiner has wrong dimensions");
    Coupling cp = coupling(P_list, H_list, model, inflation_term(P_list, model, sigma2_csi));
    cxd t = (A * cp.B * A.adjoint()).trace() - (A * cp.G * model.R_theta).trace() -
            (model.R_theta * cp.G.adjoint() * A.adjoint()).trace() + model.R_theta.trace();
    if (std::abs(t.imag()) > 1e-6)
        throw std::runtime_error("mse: imaginary residue " + std::to_string(t.imag()));
    return t.real() > 0.0 ? t.real() : 0.0;
}

CMat combiner_impl(const CMatList& P_list, const CMatList& H_list, const ObservationModel& model,
                   double sigma2_csi) {
    Coupling cp = coupling(P_list, H_list, model, inflation_term(P_list, model, sigma2_csi));
    // A = R_theta G^H B^{-1}; with B and R_theta Hermitian this is the
    // adjoint of B^{-1} G R_theta.
    return solve_hermitian(cp.B, cp.G * model.R_theta, "update_combiner").adjoint();
}

PrecoderSystem precoder_system(int n, const CMat& A, const CMatList& P_list,
                               const CMatList& H_list, const ObservationModel& model,
                               double ridge) {
    const std::size_t nn = static_cast<std::size_t>(n);
    require(n >= 0 && nn < H_list.size(), "precoder update: node index out of range");

    CMat t = (A * H_list[nn]).adjoint(); // n_tx x param_dim
    CMat x = t * t.adjoint();
    if (ridge != 0.0)
        x += ridge * CMat::Identity(x.rows(), x.cols());

    CMat mid = t * model.R_theta * model.C[nn].adjoint();
    for (std::size_t j = 0; j < H_list.size(); ++j) {
        if (j == nn)
            continue;
        CMat cross = model.C[nn] * model.R_theta * model.C[j].adjoint(); // C_n R_theta C_j^H
        mid -= t * (A * H_list[j] * P_list[j]) * cross.adjoint();
    }

    PrecoderSystem sys;
    sys.Q_n = node_input_covariance(model.C[nn], model.R_theta, model.R[nn]);
    sys.Q_n = 0.5 * (sys.Q_n + sys.Q_n.adjoint()).eval();
    sys.Y = solve_hermitian(sys.Q_n, mid.adjoint(), "update_precoder: right factor").adjoint();
    Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (x + x.adjoint()));
    sys.evals = es.eigenvalues().cwiseMax(0.0);
    sys.evecs = es.eigenvectors();
    return sys;
}

CMat precoder_from_dual(const PrecoderSystem& sys, double lambda) {
    RVec f(sys.evals.size());
    if (lambda > 0.0) {
        f = (sys.evals.array() + lambda).inverse();
    } else {
        // lambda = 0: minimum-norm stationary point (pseudo-inverse rule).
        double cutoff = 1e-12 * sys.evals.maxCoeff();
        for (Eigen::Index k = 0; k < sys.evals.size(); ++k)
            f(k) = sys.evals(k) > cutoff ? 1.0 / sys.evals(k) : 0.0;
    }
    return sys.evecs * f.asDiagonal() * sys.evecs.adjoint() * sys.Y;
}

double solve_dual_impl(const PrecoderSystem& sys, double rho_n) {
    require(rho_n > 0.0, "solve_dual: power budget must be > 0");

    CMat p0 = precoder_from_dual(sys, 0.0);
    double p0_power = (p0 * sys.Q_n * p0.adjoint()).trace().real();
    if (p0_power <= rho_n)
        return 0.0;

    // Scalar power function sum_k z_k / (eval_k + lambda)^2 from the
    // eigenbasis of the left-hand system. Null directions carry no power
    // (the right factor lies in the range of X), so their round-off z_k is
    // zeroed.
    CMat m = sys.evecs.adjoint() * sys.Y;
    RVec z = (m * sys.Q_n * m.adjoint()).diagonal().real().cwiseMax(0.0);
    double cutoff = 1e-12 * sys.evals.maxCoeff();
    for (Eigen::Index k = 0; k < z.size(); ++k)
        if (sys.evals(k) <= cutoff)
            z(k) = 0.0;

    auto power_at = [&](double lambda) {
        double s = 0.0;
        for (Eigen::Index k = 0; k < z.size(); ++k) {
            double d = sys.evals(k) + lambda;
            s += z(k) / (d * d);
        }
        return s;
    };

    double hi = std::sqrt(z.sum() / rho_n);
    if (!(hi > 0.0))
        hi = 1.0;
    while (power_at(hi) >= rho_n)
        hi *= 2.0;

    // Stop below the 1e-8 relative-residual requirement so the power
    // equality also holds when re-evaluated through the matrix path.
    double lo = 0.0;
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 100; ++it) {
        mid = 0.5 * (lo + hi);
        double p = power_at(mid);
        if (std::abs(p - rho_n) <= 1e-9 * rho_n)
            return mid;
        (p > rho_n ? lo : hi) = mid;
    }
    return mid;
}

std::pair<DigitalTransceiver, BcdTrace> bcd_loop(const CMatList& H_list,
                                                 const ObservationModel& model, double sigma2_csi,
                                                 const SystemConfig& cfg, Rng& init_rng) {
    const int n_nodes = static_cast<int>(H_list.size());
    require(n_nodes >= 1 && model.n_nodes() == n_nodes, "bcd_design: model/channel size mismatch");

    DigitalTransceiver dt;
    dt.P.resize(static_cast<std::size_t>(n_nodes));
    dt.lambdas.assign(static_cast<std::size_t>(n_nodes), 0.0);
    for (int n = 0; n < n_nodes; ++n) {
        CMat p = init_rng.cgauss_matrix(H_list[static_cast<std::size_t>(n)].cols(),
                                        model.C[static_cast<std::size_t>(n)].rows());
        double pw = transmit_power(p, model.C[static_cast<std::size_t>(n)], model.R_theta,
                                   model.R[static_cast<std::size_t>(n)]);
        if (pw > 0.0)
            p *= std::sqrt(cfg.rho_at(n) / pw);
        dt.P[static_cast<std::size_t>(n)] = std::move(p);
    }

    BcdTrace trace;
    double prev = std::numeric_limits<double>::infinity();
    for (int iter = 1; iter <= cfg.bcd.max_iterations; ++iter) {
        dt.A = combiner_impl(dt.P, H_list, model, sigma2_csi);
        double ridge = sigma2_csi == 0.0 ? 0.0 : sigma2_csi * dt.A.squaredNorm();
        for (int n = 0; n < n_nodes; ++n) {
            PrecoderSystem sys = precoder_system(n, dt.A, dt.P, H_list, model, ridge);
            double lambda = solve_dual_impl(sys, cfg.rho_at(n));
            dt.lambdas[static_cast<std::size_t>(n)] = lambda;
            dt.P[static_cast<std::size_t>(n)] = precoder_from_dual(sys, lambda);
        }
        double mse = mse_impl(dt.A, dt.P, H_list, model, sigma2_csi);
        trace.mse_per_iter.push_back(mse);
        trace.iterations = iter;
        if (std::isfinite(prev) && std::abs(prev - mse) <= cfg.bcd.epsilon * prev) {
            trace.converged = true;
            break;
        }
        prev = mse;
    }
    // Refresh the combiner so the returned pair is block-consistent: A is the
    // exact minimizer for the final precoders.
    dt.A = combiner_impl(dt.P, H_list, model, sigma2_csi);
    return {std::move(dt), std::move(trace)};
}

} // namespace detail

double mse_analytic(const CMat& A, const CMatList& P_list, const CMatList& H_list,
                    const ObservationModel& model) {
    return detail::mse_impl(A, P_list, H_list, model, 0.0);
}

CMat update_combiner(const CMatList& P_list, const CMatList& H_list,
                     const ObservationModel& model) {
    return detail::combiner_impl(P_list, H_list, model, 0.0);
}

CMat update_precoder(int n, const CMat& A, const CMatList& P_list, double lambda,
                     const CMatList& H_list, const ObservationModel& model) {
    require(lambda >= 0.0, "update_precoder: lambda must be >= 0");
    return detail::precoder_from_dual(detail::precoder_system(n, A, P_list, H_list, model, 0.0),
                                      lambda);
}

double solve_dual(int n, const CMat& A, const CMatList& P_list, const CMatList& H_list,
                  const ObservationModel& model, double rho_n) {
    return detail::solve_dual_impl(detail::precoder_system(n, A, P_list, H_list, model, 0.0),
                                   rho_n);
}

std::pair<DigitalTransceiver, BcdTrace> bcd_design(const CMatList& H_list,
                                                   const ObservationModel& model,
                                                   const SystemConfig& cfg, Rng& init_rng) {
    return detail::bcd_loop(H_list, model, 0.0, cfg, init_rng);
}

} // namespace lde
