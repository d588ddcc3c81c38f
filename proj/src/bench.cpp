#include "lde/bench.hpp"

#include "lde/linalg.hpp"
#include "lde/noiseless.hpp"
#include "lde/robust.hpp"
#include "lde/somp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace lde {

std::string to_string(DesignKind k) {
    switch (k) {
    case DesignKind::noiseless: return "noiseless";
    case DesignKind::digital: return "digital";
    case DesignKind::hybrid: return "hybrid";
    case DesignKind::robust: return "robust";
    case DesignKind::robust_hybrid: return "robust-hybrid";
    case DesignKind::agnostic_hybrid: return "agnostic-hybrid";
    }
    return "?";
}

std::string to_string(SweepAxis a) {
    switch (a) {
    case SweepAxis::snr_ob_db: return "snr_ob_db";
    case SweepAxis::snr_fc_db: return "snr_fc_db";
    case SweepAxis::n_rf_node: return "n_rf_node";
    case SweepAxis::n_rf_fc: return "n_rf_fc";
    case SweepAxis::n_nodes: return "n_nodes";
    case SweepAxis::q: return "q";
    case SweepAxis::sigma2_csi: return "sigma2_csi";
    }
    return "?";
}

DesignKind design_from_string(const std::string& s) {
    for (DesignKind k : {DesignKind::noiseless, DesignKind::digital, DesignKind::hybrid,
                         DesignKind::robust, DesignKind::robust_hybrid,
                         DesignKind::agnostic_hybrid})
        if (to_string(k) == s)
            return k;
    throw std::invalid_argument("unknown design '" + s + "'");
}

SweepAxis axis_from_string(const std::string& s) {
    for (SweepAxis a : {SweepAxis::snr_ob_db, SweepAxis::snr_fc_db, SweepAxis::n_rf_node,
                        SweepAxis::n_rf_fc, SweepAxis::n_nodes, SweepAxis::q,
                        SweepAxis::sigma2_csi})
        if (to_string(a) == s)
            return a;
    throw std::invalid_argument("unknown sweep axis '" + s + "'");
}

void Scenario::validate() const {
    config.validate();
    require(!sweeps.empty(), "Scenario: at least one sweep axis is required");
    for (const SweepSpec& s : sweeps) {
        require(!s.grid.empty(), "Scenario: empty sweep grid for axis " + to_string(s.axis));
        if (s.axis == SweepAxis::n_rf_node || s.axis == SweepAxis::n_rf_fc ||
            s.axis == SweepAxis::n_nodes || s.axis == SweepAxis::q)
            for (double v : s.grid)
                require(v >= 1.0 && v == std::floor(v),
                        "Scenario: axis " + to_string(s.axis) + " requires positive integers");
        if (s.axis == SweepAxis::snr_ob_db && noise_profile == NoiseProfile::heterogeneous)
            throw std::invalid_argument(
                "Scenario: snr_ob_db sweep conflicts with the heterogeneous noise profile");
        if (design == DesignKind::noiseless &&
            (s.axis == SweepAxis::snr_fc_db || s.axis == SweepAxis::sigma2_csi))
            throw std::invalid_argument("Scenario: axis " + to_string(s.axis) +
                                        " has no effect on the noiseless design");
    }
}

double centralized_benchmark(const CMat& C) {
    const Eigen::Index q = C.cols();
    CMat e_inv = CMat::Identity(q, q) + C.adjoint() * C;
    CMat e = solve_hermitian(e_inv, CMat::Identity(q, q), "centralized_benchmark");
    return e.trace().real();
}

McEstimate monte_carlo_mse(const CMat& A, const CMatList& P_list, const CMatList& H_list,
                           const ObservationModel& model, int trials, Rng& rng) {
    require(trials >= 2, "monte_carlo_mse: trials must be >= 2");
    const std::size_t n_nodes = H_list.size();
    require(P_list.size() == n_nodes && model.C.size() == n_nodes,
            "monte_carlo_mse: list lengths differ");

    // Per-node effective matrices and noise square roots, fixed per trial.
    CMat g = CMat::Zero(H_list[0].rows(), model.R_theta.rows());
    CMatList hp(n_nodes), r_sqrt(n_nodes);
    for (std::size_t n = 0; n < n_nodes; ++n) {
        hp[n] = H_list[n] * P_list[n];
        g += hp[n] * model.C[n];
        r_sqrt[n] = hermitian_sqrt(model.R[n]);
    }
    CMat theta_sqrt = hermitian_sqrt(model.R_theta);
    CMat w_sqrt = hermitian_sqrt(model.R_w);

    double sum = 0.0, sumsq = 0.0;
    for (int t = 0; t < trials; ++t) {
        CVec theta = theta_sqrt * rng.cgauss_vector(theta_sqrt.cols());
        CVec y = g * theta;
        for (std::size_t n = 0; n < n_nodes; ++n)
            y += hp[n] * (r_sqrt[n] * rng.cgauss_vector(r_sqrt[n].cols()));
        y += w_sqrt * rng.cgauss_vector(w_sqrt.cols());
        double err = (A * y - theta).squaredNorm();
        sum += err;
        sumsq += err * err;
    }
    const double nt = static_cast<double>(trials);
    McEstimate est;
    est.mean = sum / nt;
    double var = std::max(0.0, sumsq / nt - est.mean * est.mean);
    est.std_error = std::sqrt(var / nt);
    return est;
}

namespace {

// Scenario grid points run over a shared master model draw (channel,
// observation matrices, heterogeneous noise profile) taken at the largest
// swept dimensions, so that trends along axes that do not alter the
// realization are not masked by redraw noise. Everything else (CSI error,
// design initialization, Monte Carlo noise) comes from per-point seeds.
struct MasterDraw {
    ClusterSet clusters;
    ChannelRealization channel;
    CMatList C; // n_max matrices obs_dim x q_max
    std::vector<double> het_sigma2;
};

constexpr std::uint64_t kModelTag = 0x6d6f64656cULL; // sub-stream tags
constexpr std::uint64_t kCsiTag = 0x637369ULL;
constexpr std::uint64_t kInitTag = 0x696e6974ULL;
constexpr std::uint64_t kMcTag = 0x6d63ULL;

MasterDraw draw_master(const Scenario& sc) {
    SystemConfig cfg = sc.config;
    for (const SweepSpec& s : sc.sweeps) {
        double top = *std::max_element(s.grid.begin(), s.grid.end());
        if (s.axis == SweepAxis::n_nodes)
            cfg.n_nodes = std::max(cfg.n_nodes, static_cast<int>(top));
        if (s.axis == SweepAxis::q)
            cfg.param_dim = std::max(cfg.param_dim, static_cast<int>(top));
    }
    Rng rng(splitmix64(sc.config.seed ^ kModelTag));
    MasterDraw md;
    md.clusters = draw_clusters(cfg, rng);
    md.channel = assemble_channel(md.clusters, cfg);
    md.C.reserve(static_cast<std::size_t>(cfg.n_nodes));
    for (int n = 0; n < cfg.n_nodes; ++n)
        md.C.push_back(rng.cgauss_matrix(cfg.obs_dim, cfg.param_dim));
    md.het_sigma2.reserve(static_cast<std::size_t>(cfg.n_nodes));
    for (int n = 0; n < cfg.n_nodes; ++n) {
        int db = -10 + rng.uniform_int(20); // noise power dB set {-10,...,9}
        md.het_sigma2.push_back(std::pow(10.0, db / 10.0));
    }
    return md;
}

ClusterSet slice_clusters(const ClusterSet& cs, int n_nodes) {
    ClusterSet out = cs;
    out.alphas = cs.alphas.topRows(n_nodes);
    out.aod = cs.aod.topRows(n_nodes);
    return out;
}

ChannelRealization slice_channel(const ChannelRealization& ch, int n_nodes) {
    ChannelRealization out;
    out.A_fc = ch.A_fc;
    out.A_s.assign(ch.A_s.begin(), ch.A_s.begin() + n_nodes);
    out.D.assign(ch.D.begin(), ch.D.begin() + n_nodes);
    out.H.assign(ch.H.begin(), ch.H.begin() + n_nodes);
    return out;
}

SystemConfig apply_axes(const Scenario& sc, const std::vector<double>& values) {
    SystemConfig cfg = sc.config;
    for (std::size_t i = 0; i < sc.sweeps.size(); ++i) {
        double v = values[i];
        switch (sc.sweeps[i].axis) {
        case SweepAxis::snr_ob_db: cfg.sigma2_obs = {std::pow(10.0, -v / 10.0)}; break;
        case SweepAxis::snr_fc_db: cfg.sigma2_fc = std::pow(10.0, -v / 10.0); break;
        case SweepAxis::n_rf_node: cfg.n_rf_node = static_cast<int>(v); break;
        case SweepAxis::n_rf_fc: cfg.n_rf_fc = static_cast<int>(v); break;
        case SweepAxis::n_nodes: cfg.n_nodes = static_cast<int>(v); break;
        case SweepAxis::q: cfg.param_dim = static_cast<int>(v); break;
        case SweepAxis::sigma2_csi: cfg.sigma2_csi = v; break;
        }
    }
    return cfg;
}

struct PointEval {
    double mse_analytic = std::numeric_limits<double>::quiet_NaN();
    double mse_mc = std::numeric_limits<double>::quiet_NaN();
    double mc_stderr = std::numeric_limits<double>::quiet_NaN();
    double benchmark = std::numeric_limits<double>::quiet_NaN();
};

PointEval eval_point(const Scenario& sc, const MasterDraw& md, const SystemConfig& cfg,
                     std::uint64_t point_seed) {
    cfg.validate();
    const int n_nodes = cfg.n_nodes;
    const int q = cfg.param_dim;
    const int l = cfg.obs_dim;

    ClusterSet clusters = slice_clusters(md.clusters, n_nodes);
    ChannelRealization channel = slice_channel(md.channel, n_nodes);

    ObservationModel model;
    model.R_theta = CMat::Identity(q, q);
    model.R_w = cfg.sigma2_fc * CMat::Identity(cfg.n_rx, cfg.n_rx);
    std::vector<double> sigma2(static_cast<std::size_t>(n_nodes));
    for (int n = 0; n < n_nodes; ++n) {
        sigma2[static_cast<std::size_t>(n)] = sc.noise_profile == NoiseProfile::heterogeneous
                                                   ? md.het_sigma2[static_cast<std::size_t>(n)]
                                                   : cfg.sigma2_obs_at(n);
        require(sigma2[static_cast<std::size_t>(n)] > 0.0,
                "scenario: observation noise must be positive for noise whitening");
        model.C.push_back(md.C[static_cast<std::size_t>(n)].leftCols(q));
        model.R.push_back(sigma2[static_cast<std::size_t>(n)] * CMat::Identity(l, l));
    }

    // Common random numbers across the grid: the CSI error factors and the
    // design initialization are shared streams (nested in the node index),
    // so sweeps compare designs on one realization instead of redraw noise.
    // Only the Monte Carlo noise is per-point.
    Rng csi_rng(splitmix64(cfg.seed ^ kCsiTag));
    Rng init_rng(splitmix64(cfg.seed ^ kInitTag));
    Rng mc_rng(splitmix64(point_seed ^ kMcTag));

    // Whitened stacked observation matrix; its centralized bound is the
    // information floor for the scenario.
    CMat c_white(n_nodes * l, q);
    for (int n = 0; n < n_nodes; ++n)
        c_white.middleRows(n * l, l) =
            model.C[static_cast<std::size_t>(n)] / std::sqrt(sigma2[static_cast<std::size_t>(n)]);

    PointEval out;
    out.benchmark = centralized_benchmark(c_white);

    if (sc.design == DesignKind::noiseless) {
        // Whitened-domain pipeline. RF chains beyond the parameter dimension
        // (or the cluster count) cannot improve the MSE, so they stay idle;
        // this also keeps the square effective channels well conditioned.
        SystemConfig nl = cfg;
        nl.n_rf_node = std::min(cfg.n_rf_node, std::min(cfg.param_dim, cfg.n_clusters));
        nl.n_rf_fc = nl.n_rf_node;
        RfSelection rf = select_rf(clusters, channel, nl);
        CMatList h_bar = effective_channels(channel, rf);
        CMatList p_bb = design_bb_from_effective(h_bar, c_white, l);
        CMat e = noiseless_error_covariance(h_bar, p_bb, c_white);
        out.mse_analytic = e.trace().real();

        CMat h_tilde(nl.n_rf_fc, n_nodes * l);
        CMatList p_eff(static_cast<std::size_t>(n_nodes));
        for (int n = 0; n < n_nodes; ++n) {
            h_tilde.middleCols(n * l, l) =
                h_bar[static_cast<std::size_t>(n)] * p_bb[static_cast<std::size_t>(n)];
            p_eff[static_cast<std::size_t>(n)] =
                rf.P_rf[static_cast<std::size_t>(n)] * p_bb[static_cast<std::size_t>(n)];
        }
        CMat a_eff = lmmse_combiner(h_tilde, c_white) * rf.A_rf.adjoint();

        ObservationModel white = model;
        white.R_w = CMat::Zero(cfg.n_rx, cfg.n_rx);
        for (int n = 0; n < n_nodes; ++n) {
            white.C[static_cast<std::size_t>(n)] = c_white.middleRows(n * l, l);
            white.R[static_cast<std::size_t>(n)] = CMat::Identity(l, l);
        }
        McEstimate mc = monte_carlo_mse(a_eff, p_eff, channel.H, white, cfg.trials, mc_rng);
        out.mse_mc = mc.mean;
        out.mc_stderr = mc.std_error;
        return out;
    }

    CsiRealization csi = perturb_csi(channel.H, cfg.sigma2_csi, csi_rng);

    DigitalTransceiver dt;
    if (sc.design == DesignKind::robust || sc.design == DesignKind::robust_hybrid) {
        RobustContext ctx{csi.H_hat, cfg.sigma2_csi, model};
        dt = robust_bcd_design(ctx, cfg, init_rng).first;
    } else {
        dt = bcd_design(csi.H_hat, model, cfg, init_rng).first;
    }

    CMat a_eff;
    CMatList p_eff;
    const bool hybrid = sc.design == DesignKind::hybrid ||
                        sc.design == DesignKind::agnostic_hybrid ||
                        sc.design == DesignKind::robust_hybrid;
    if (hybrid) {
        HybridTransceiver ht = hybridize(dt, channel, csi.H_hat, model, cfg);
        a_eff = ht.effective_combiner();
        p_eff = ht.effective_precoders();
    } else {
        a_eff = dt.A;
        p_eff = dt.P;
    }

    out.mse_analytic = mse_analytic(a_eff, p_eff, channel.H, model);
    McEstimate mc = monte_carlo_mse(a_eff, p_eff, channel.H, model, cfg.trials, mc_rng);
    out.mse_mc = mc.mean;
    out.mc_stderr = mc.std_error;
    return out;
}

std::string sanitize_status(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r')
            c = ';';
    return s;
}

} // namespace

std::vector<ResultRow> run_scenario(const Scenario& scenario) {
    scenario.validate();
    MasterDraw md = draw_master(scenario);

    std::vector<std::size_t> sizes;
    std::size_t total = 1;
    for (const SweepSpec& s : scenario.sweeps) {
        sizes.push_back(s.grid.size());
        total *= s.grid.size();
    }

    std::vector<ResultRow> rows;
    rows.reserve(total);
    for (std::size_t index = 0; index < total; ++index) {
        std::vector<double> values(scenario.sweeps.size());
        std::size_t rest = index;
        for (std::size_t i = scenario.sweeps.size(); i-- > 0;) {
            values[i] = scenario.sweeps[i].grid[rest % sizes[i]];
            rest /= sizes[i];
        }

        ResultRow row;
        row.scenario_id = scenario.id;
        if (scenario.sweeps.size() > 1)
            for (std::size_t i = 0; i + 1 < scenario.sweeps.size(); ++i) {
                char buf[64];
                std::snprintf(buf, sizeof(buf), "%g", values[i]);
                row.scenario_id += "|" + to_string(scenario.sweeps[i].axis) + "=" + buf;
            }
        row.sweep_value = values.back();
        row.trials = scenario.config.trials;
        row.seed = scenario.config.seed ^ splitmix64(static_cast<std::uint64_t>(index));

        auto t0 = std::chrono::steady_clock::now();
        try {
            SystemConfig cfg = apply_axes(scenario, values);
            PointEval ev = eval_point(scenario, md, cfg, row.seed);
            row.mse_analytic = ev.mse_analytic;
            row.mse_mc = ev.mse_mc;
            row.mc_stderr = ev.mc_stderr;
            row.benchmark = ev.benchmark;
        } catch (const std::exception& e) {
            row.status = sanitize_status(std::string("error: ") + e.what());
            row.mse_analytic = row.mse_mc = row.mc_stderr = row.benchmark =
                std::numeric_limits<double>::quiet_NaN();
        }
        row.wall_time_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace lde
