#include "lde/bench.hpp"
#include "lde/linalg.hpp"
#include "lde/noiseless.hpp"
#include "lde/robust.hpp"
#include "lde/somp.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>

namespace lde {

namespace {

struct CheckRunner {
    std::ostream& log;
    ValidationReport report;

    void check(const std::string& name, const std::function<bool()>& fn) {
        ++report.checks;
        bool ok = false;
        std::string detail;
        try {
            ok = fn();
        } catch (const std::exception& e) {
            detail = std::string(" (") + e.what() + ")";
        }
        if (!ok)
            ++report.failures;
        log << (ok ? "[pass] " : "[FAIL] ") << name << detail << '\n';
    }
};

SystemConfig small_config(std::uint64_t seed) {
    SystemConfig cfg;
    cfg.n_nodes = 6;
    cfg.n_tx = 5;
    cfg.n_rx = 10;
    cfg.param_dim = 3;
    cfg.obs_dim = 2;
    cfg.n_clusters = 5;
    cfg.n_rf_node = 3;
    cfg.n_rf_fc = 5;
    cfg.rho = {1.0};
    cfg.sigma2_obs = {1.0}; // matched prior: R_n = I
    cfg.sigma2_fc = 0.1;
    cfg.seed = seed;
    cfg.trials = 2000;
    cfg.bcd.max_iterations = 200; // past the slow BCD tail
    return cfg;
}

ObservationModel matched_model(const SystemConfig& cfg, Rng& rng) {
    ObservationModel m;
    m.R_theta = CMat::Identity(cfg.param_dim, cfg.param_dim);
    m.R_w = cfg.sigma2_fc * CMat::Identity(cfg.n_rx, cfg.n_rx);
    for (int n = 0; n < cfg.n_nodes; ++n) {
        m.C.push_back(rng.cgauss_matrix(cfg.obs_dim, cfg.param_dim));
        m.R.push_back(cfg.sigma2_obs_at(n) * CMat::Identity(cfg.obs_dim, cfg.obs_dim));
    }
    return m;
}

CMat stacked_C(const ObservationModel& m) {
    const Eigen::Index l = m.C[0].rows();
    CMat c(static_cast<Eigen::Index>(m.C.size()) * l, m.C[0].cols());
    for (std::size_t n = 0; n < m.C.size(); ++n)
        c.middleRows(static_cast<Eigen::Index>(n) * l, l) = m.C[n];
    return c;
}

} // namespace

ValidationReport validate(std::ostream& log, std::uint64_t seed) {
    CheckRunner r{log, {}};

    // --- model core ---
    r.check("transmit_power: unitary invariance", [&] {
        Rng rng(splitmix64(seed ^ 0x01));
        for (int t = 0; t < 20; ++t) {
            CMat p = rng.cgauss_matrix(4, 3), c = rng.cgauss_matrix(3, 2);
            CMat rn_root = rng.cgauss_matrix(3, 3), rt_root = rng.cgauss_matrix(2, 2);
            CMat rn = rn_root * rn_root.adjoint(), rt = rt_root * rt_root.adjoint();
            Eigen::HouseholderQR<CMat> qr(rng.cgauss_matrix(4, 4));
            CMat u = qr.householderQ();
            double a = transmit_power(p, c, rt, rn);
            double b = transmit_power(u * p, c, rt, rn);
            if (std::abs(a - b) > 1e-10 * std::max(1.0, a))
                return false;
        }
        return true;
    });

    r.check("stack_model: block round-trip is exact", [&] {
        Rng rng(splitmix64(seed ^ 0x02));
        CMatList cl, hl, pl;
        for (int n = 0; n < 4; ++n) {
            cl.push_back(rng.cgauss_matrix(2, 3));
            hl.push_back(rng.cgauss_matrix(5, 4));
            pl.push_back(rng.cgauss_matrix(4, 2));
        }
        StackedModel sm = stack_model(cl, hl, pl);
        for (int n = 0; n < 4; ++n) {
            if (sm.C.middleRows(n * 2, 2) != cl[static_cast<std::size_t>(n)])
                return false;
            if (sm.H.middleCols(n * 4, 4) != hl[static_cast<std::size_t>(n)])
                return false;
            if (sm.P.block(n * 4, n * 2, 4, 2) != pl[static_cast<std::size_t>(n)])
                return false;
        }
        return true;
    });

    r.check("observe: fixed seed reproduces draws bit-exactly", [&] {
        SystemConfig cfg = small_config(seed);
        Rng mr(splitmix64(seed ^ 0x03));
        ObservationModel m = matched_model(cfg, mr);
        CVec theta = CVec::Ones(cfg.param_dim);
        Rng r1(42), r2(42);
        return observe(m, 1, theta, r1) == observe(m, 1, theta, r2);
    });

    // --- channel ---
    {
        SystemConfig cfg = small_config(seed);
        Rng rng(splitmix64(seed ^ 0x04));
        ClusterSet cs = draw_clusters(cfg, rng);
        ChannelRealization ch = assemble_channel(cs, cfg);

        r.check("channel: array response columns are unit norm", [&] {
            for (int k = 0; k < cfg.n_clusters; ++k)
                if (std::abs(ch.A_fc.col(k).norm() - 1.0) > 1e-12)
                    return false;
            for (const CMat& a : ch.A_s)
                for (int k = 0; k < cfg.n_clusters; ++k)
                    if (std::abs(a.col(k).norm() - 1.0) > 1e-12)
                        return false;
            return true;
        });

        r.check("channel: compact form matches cluster sum form", [&] {
            double scale = std::sqrt(double(cfg.n_rx) * cfg.n_tx / cfg.n_clusters);
            for (int n = 0; n < cfg.n_nodes; ++n) {
                CMat h_sum = CMat::Zero(cfg.n_rx, cfg.n_tx);
                for (int k = 0; k < cfg.n_clusters; ++k)
                    h_sum += scale * cs.alphas(n, k) *
                             array_response(cs.aoa(k), cfg.n_rx, cs.d_over_lambda_rx) *
                             array_response(cs.aod(n, k), cfg.n_tx, cs.d_over_lambda_tx).adjoint();
                if ((h_sum - ch.H[static_cast<std::size_t>(n)]).cwiseAbs().maxCoeff() > 1e-10)
                    return false;
            }
            return true;
        });

        r.check("channel: rank(H_n) <= clusters", [&] {
            for (const CMat& h : ch.H) {
                Eigen::JacobiSVD<CMat> svd(h);
                const RVec& sv = svd.singularValues();
                for (Eigen::Index i = cfg.n_clusters; i < sv.size(); ++i)
                    if (sv(i) >= 1e-9 * sv(0))
                        return false;
            }
            return true;
        });

        r.check("channel: concatenated H lies in the column space of A_fc", [&] {
            CMat h_cat(cfg.n_rx, cfg.n_nodes * cfg.n_tx);
            for (int n = 0; n < cfg.n_nodes; ++n)
                h_cat.middleCols(n * cfg.n_tx, cfg.n_tx) = ch.H[static_cast<std::size_t>(n)];
            Eigen::HouseholderQR<CMat> qr(ch.A_fc);
            CMat q_thin = CMat(qr.householderQ()).leftCols(cfg.n_clusters);
            double resid = (h_cat - q_thin * (q_thin.adjoint() * h_cat)).norm();
            return resid < 1e-9 * h_cat.norm();
        });
    }

    // --- noiseless design ---
    r.check("noiseless: MSE saturates at r >= q and meets the benchmark", [&] {
        Rng rng(splitmix64(seed ^ 0x05));
        for (int t = 0; t < 10; ++t) {
            CMat c = rng.cgauss_matrix(12, 4);
            double bench = centralized_benchmark(c);
            double prev = std::numeric_limits<double>::infinity();
            for (int rf = 1; rf <= 8; ++rf) {
                double mse = noiseless_mse(c, rf, 4);
                if (mse > prev + 1e-12)
                    return false;
                if (rf >= 4 && std::abs(mse - bench) > 1e-10)
                    return false;
                prev = mse;
            }
        }
        return true;
    });

    r.check("noiseless: RF selections keep constant-modulus entries", [&] {
        SystemConfig cfg = small_config(seed);
        cfg.n_rf_fc = cfg.n_rf_node;
        Rng rng(splitmix64(seed ^ 0x06));
        ClusterSet cs = draw_clusters(cfg, rng);
        ChannelRealization ch = assemble_channel(cs, cfg);
        RfSelection rf = select_rf(cs, ch, cfg);
        double tx_mod = 1.0 / std::sqrt(double(cfg.n_tx));
        double rx_mod = 1.0 / std::sqrt(double(cfg.n_rx));
        for (const CMat& p : rf.P_rf)
            if ((p.cwiseAbs().array() - tx_mod).abs().maxCoeff() > 1e-12)
                return false;
        return (rf.A_rf.cwiseAbs().array() - rx_mod).abs().maxCoeff() <= 1e-12;
    });

    // --- digital BCD + hybrid + robust, shared instances ---
    {
        SystemConfig cfg = small_config(seed);
        Rng mr(splitmix64(seed ^ 0x07));
        ClusterSet cs = draw_clusters(cfg, mr);
        ChannelRealization ch = assemble_channel(cs, cfg);
        ObservationModel model = matched_model(cfg, mr);
        double bench = centralized_benchmark(stacked_C(model));

        Rng init(splitmix64(seed ^ 0x08));
        auto [dt, trace] = bcd_design(ch.H, model, cfg, init);

        r.check("bcd: per-iteration MSE is non-increasing", [&] {
            for (std::size_t i = 1; i < trace.mse_per_iter.size(); ++i)
                if (trace.mse_per_iter[i] > trace.mse_per_iter[i - 1] + 1e-9)
                    return false;
            return trace.converged;
        });

        r.check("bcd: power feasibility holds at every iterate", [&] {
            // Drive the loop through the public ops and check after each
            // precoder update.
            Rng init(splitmix64(seed ^ 0x0e));
            CMatList p;
            for (int n = 0; n < cfg.n_nodes; ++n) {
                CMat pn = init.cgauss_matrix(cfg.n_tx, cfg.obs_dim);
                double pw = transmit_power(pn, model.C[static_cast<std::size_t>(n)],
                                           model.R_theta, model.R[static_cast<std::size_t>(n)]);
                p.push_back(pn * std::sqrt(cfg.rho_at(n) / pw));
            }
            for (int iter = 0; iter < 10; ++iter) {
                CMat a = update_combiner(p, ch.H, model);
                for (int n = 0; n < cfg.n_nodes; ++n) {
                    double lambda = solve_dual(n, a, p, ch.H, model, cfg.rho_at(n));
                    p[static_cast<std::size_t>(n)] =
                        update_precoder(n, a, p, lambda, ch.H, model);
                    double pw = transmit_power(p[static_cast<std::size_t>(n)],
                                               model.C[static_cast<std::size_t>(n)],
                                               model.R_theta,
                                               model.R[static_cast<std::size_t>(n)]);
                    if (pw > cfg.rho_at(n) + 1e-6)
                        return false;
                }
            }
            return true;
        });

        r.check("bcd: feasibility, nonnegative duals, complementary slackness", [&] {
            for (int n = 0; n < cfg.n_nodes; ++n) {
                double pw = transmit_power(dt.P[static_cast<std::size_t>(n)], model.C[static_cast<std::size_t>(n)],
                                           model.R_theta, model.R[static_cast<std::size_t>(n)]);
                double lam = dt.lambdas[static_cast<std::size_t>(n)];
                if (pw > cfg.rho_at(n) + 1e-6 || lam < 0.0)
                    return false;
                if (std::abs(lam * (pw - cfg.rho_at(n))) > 1e-6)
                    return false;
            }
            return true;
        });

        double mse_digital = mse_analytic(dt.A, dt.P, ch.H, model);

        r.check("bcd: combiner is block-optimal against 100 probes", [&] {
            Rng probe(splitmix64(seed ^ 0x09));
            for (int t = 0; t < 100; ++t) {
                CMat delta = probe.cgauss_matrix(dt.A.rows(), dt.A.cols());
                delta *= 1e-3 / delta.norm();
                if (mse_analytic(dt.A + delta, dt.P, ch.H, model) < mse_digital - 1e-12)
                    return false;
            }
            return true;
        });

        r.check("bcd: MSE respects the centralized floor", [&] {
            return mse_digital >= bench - 1e-9;
        });

        HybridTransceiver ht = hybridize(dt, ch, ch.H, model, cfg);
        double mse_hybrid = mse_analytic(ht.effective_combiner(), ht.effective_precoders(), ch.H, model);

        r.check("somp: hybrid factors keep constant-modulus RF entries", [&] {
            double tx_mod = 1.0 / std::sqrt(double(cfg.n_tx));
            double rx_mod = 1.0 / std::sqrt(double(cfg.n_rx));
            for (const CMat& p : ht.P_rf)
                if ((p.cwiseAbs().array() - tx_mod).abs().maxCoeff() > 1e-12)
                    return false;
            return (ht.A_rf.cwiseAbs().array() - rx_mod).abs().maxCoeff() <= 1e-12;
        });

        r.check("somp: precoder rescale preserves Frobenius norms", [&] {
            for (std::size_t n = 0; n < dt.P.size(); ++n) {
                double target = dt.P[n].norm();
                double got = (ht.P_rf[n] * ht.P_bb[n]).norm();
                if (std::abs(got - target) > 1e-9 * std::max(1.0, target))
                    return false;
            }
            return true;
        });

        r.check("somp: residuals are non-increasing and columns distinct", [&] {
            Rng rng(splitmix64(seed ^ 0x0a));
            CMat dict = rng.cgauss_matrix(8, 6);
            CMat target = rng.cgauss_matrix(8, 3);
            SompResult res = somp_factorize(target, dict, 4);
            for (std::size_t i = 1; i < res.residual_history.size(); ++i)
                if (res.residual_history[i] > res.residual_history[i - 1] + 1e-12)
                    return false;
            std::vector<int> cols = res.columns;
            std::sort(cols.begin(), cols.end());
            return std::adjacent_find(cols.begin(), cols.end()) == cols.end();
        });

        r.check("somp: hybrid MSE sandwiched above the fully-digital MSE", [&] {
            return mse_hybrid >= mse_digital - 1e-9 && mse_hybrid >= bench - 1e-9;
        });

        r.check("mc: analytic and simulated MSE agree within 5 stderr", [&] {
            Rng mc(splitmix64(seed ^ 0x0b));
            McEstimate est = monte_carlo_mse(dt.A, dt.P, ch.H, model, 4000, mc);
            return std::abs(est.mean - mse_digital) <= 5.0 * est.std_error;
        });

        // --- robust ---
        const double sigma2_csi = 0.05;
        Rng csi_rng(splitmix64(seed ^ 0x0c));
        CsiRealization csi = perturb_csi(ch.H, sigma2_csi, csi_rng);
        RobustContext ctx{csi.H_hat, sigma2_csi, model};

        r.check("robust: sigma2_csi = 0 degenerates exactly", [&] {
            RobustContext ctx0{ch.H, 0.0, model};
            Rng a(7), b(7);
            auto [dr, tr] = robust_bcd_design(ctx0, cfg, a);
            auto [dd, td] = bcd_design(ch.H, model, cfg, b);
            if (tr.mse_per_iter != td.mse_per_iter)
                return false;
            if (robust_mse(dd.A, dd.P, ctx0) != mse_analytic(dd.A, dd.P, ch.H, model))
                return false;
            return dr.A == dd.A;
        });

        r.check("robust: average MSE dominates the estimate-only MSE", [&] {
            return robust_mse(dt.A, dt.P, ctx) >=
                   mse_analytic(dt.A, dt.P, csi.H_hat, model) + 1e-12;
        });

        r.check("robust: robust design beats the agnostic design under robust_mse", [&] {
            Rng a(11), b(11);
            auto [rob, tr1] = robust_bcd_design(ctx, cfg, a);
            auto [agn, tr2] = bcd_design(csi.H_hat, model, cfg, b);
            return robust_mse(rob.A, rob.P, ctx) <= robust_mse(agn.A, agn.P, ctx) + 1e-9;
        });

        r.check("robust: lemma closed form matches a short Monte Carlo run", [&] {
            Rng rng(splitmix64(seed ^ 0x0d));
            CMat k = rng.cgauss_matrix(cfg.n_tx, 2);
            McMatrixStats st = lemma1_lhs_mc_stats(ch.H[0], 0.1, k, 20000, rng);
            CMat rhs = lemma1_rhs(ch.H[0], 0.1, k);
            return (st.mean - rhs).norm() <= 4.0 * st.std_error.norm();
        });
    }

    // --- scenario runner ---
    {
        Scenario sc;
        sc.id = "validate-noiseless";
        sc.config = small_config(seed);
        sc.config.trials = 500;
        sc.config.param_dim = 3;
        sc.design = DesignKind::noiseless;
        sc.sweeps = {{SweepAxis::n_rf_node, {1, 2, 3, 4, 5}}};

        r.check("scenario: noiseless sweep is flat at the benchmark for r >= q", [&] {
            std::vector<ResultRow> rows = run_scenario(sc);
            double prev = std::numeric_limits<double>::infinity();
            for (const ResultRow& row : rows) {
                if (row.status != "ok")
                    return false;
                if (row.mse_analytic > prev + 1e-9)
                    return false;
                if (row.sweep_value >= sc.config.param_dim &&
                    std::abs(row.mse_analytic - row.benchmark) > 1e-8)
                    return false;
                if (row.mse_analytic < row.benchmark - 1e-9)
                    return false;
                prev = row.mse_analytic;
            }
            return true;
        });

        Scenario sd = sc;
        sd.id = "validate-digital";
        sd.design = DesignKind::digital;
        sd.sweeps = {{SweepAxis::snr_fc_db, {0, 10}}};

        r.check("scenario: runs are deterministic and satisfy the floor", [&] {
            std::vector<ResultRow> rows1 = run_scenario(sd);
            std::vector<ResultRow> rows2 = run_scenario(sd);
            std::ostringstream a, b;
            write_csv(a, rows1);
            write_csv(b, rows2);
            if (a.str() != b.str())
                return false;
            for (const ResultRow& row : rows1) {
                if (row.status != "ok")
                    return false;
                if (row.mse_analytic < row.benchmark - 1e-9)
                    return false;
                if (std::abs(row.mse_mc - row.mse_analytic) > 5.0 * row.mc_stderr)
                    return false;
            }
            return true;
        });
    }

    log << (r.report.ok() ? "validation passed" : "validation FAILED") << " (" << r.report.checks
        << " checks, " << r.report.failures << " failures)\n";
    return r.report;
}

} // namespace lde
