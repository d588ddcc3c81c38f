#include "lde/noiseless.hpp"

#include "lde/bench.hpp"
#include "lde/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <doctest.h>
#include <numeric>

using namespace lde;

namespace {

SystemConfig nl_config(int n_nodes = 5, int q = 3, int l = 2, int n_rf = 3) {
    SystemConfig cfg;
    cfg.n_nodes = n_nodes;
    cfg.n_tx = 5;
    cfg.n_rx = 5;
    cfg.param_dim = q;
    cfg.obs_dim = l;
    cfg.n_clusters = 5;
    cfg.n_rf_node = n_rf;
    cfg.n_rf_fc = n_rf;
    cfg.rho = {1.0};
    cfg.sigma2_obs = {1.0};
    return cfg;
}

// Independent ranking oracle: exhaustive scan for the best remaining index.
std::vector<int> argmax_k(const RVec& v, int k) {
    std::vector<int> picked;
    std::vector<bool> used(static_cast<std::size_t>(v.size()), false);
    for (int step = 0; step < k; ++step) {
        int best = -1;
        for (int i = 0; i < v.size(); ++i)
            if (!used[static_cast<std::size_t>(i)] && (best < 0 || v(i) > v(best)))
                best = i;
        used[static_cast<std::size_t>(best)] = true;
        picked.push_back(best);
    }
    return picked;
}

} // namespace

TEST_CASE("select_rf_precoder: picks the largest gains in order") {
    SystemConfig cfg = nl_config(1, 2, 2, 2);
    cfg.n_clusters = 3;
    Rng rng(21);
    ClusterSet cs = draw_clusters(cfg, rng);
    cs.alphas(0, 0) = cxd(3.0, 0.0);
    cs.alphas(0, 1) = cxd(0.0, 1.0);
    cs.alphas(0, 2) = cxd(-2.0, 0.0);
    ChannelRealization ch = assemble_channel(cs, cfg);

    RfPick pick = select_rf_precoder(cs, ch, 0, 2);
    CHECK(pick.columns == std::vector<int>{0, 2});
    CHECK(pick.matrix.col(0) == ch.A_s[0].col(0));
    CHECK(pick.matrix.col(1) == ch.A_s[0].col(2));

    RfPick all = select_rf_precoder(cs, ch, 0, 3);
    CHECK(all.columns == std::vector<int>{0, 2, 1});

    CHECK_THROWS_WITH_AS(select_rf_precoder(cs, ch, 0, 4), doctest::Contains("exhausted"),
                         std::invalid_argument);
}

TEST_CASE("select_rf_precoder: agrees with an exhaustive sorting oracle") {
    SystemConfig cfg = nl_config(3, 2, 2, 2);
    cfg.n_clusters = 7;
    cfg.n_rf_node = 4;
    cfg.n_rf_fc = 4;
    Rng rng(22);
    ClusterSet cs = draw_clusters(cfg, rng);
    ChannelRealization ch = assemble_channel(cs, cfg);
    for (int n = 0; n < cfg.n_nodes; ++n) {
        RfPick pick = select_rf_precoder(cs, ch, n, 4);
        RVec gains = cs.alphas.row(n).cwiseAbs().transpose();
        CHECK(pick.columns == argmax_k(gains, 4));
    }
}

TEST_CASE("select_rf_combiner: single node reduces to the per-node ranking") {
    SystemConfig cfg = nl_config(1, 2, 2, 2);
    Rng rng(23);
    ClusterSet cs = draw_clusters(cfg, rng);
    ChannelRealization ch = assemble_channel(cs, cfg);
    RfPick fc = select_rf_combiner(cs, ch, 3);
    RfPick node = select_rf_precoder(cs, ch, 0, 3);
    CHECK(fc.columns == node.columns);
}

TEST_CASE("select_rf_combiner: ranks clusters by summed gain magnitude") {
    SystemConfig cfg = nl_config(2, 2, 2, 1);
    cfg.n_clusters = 2;
    Rng rng(24);
    ClusterSet cs = draw_clusters(cfg, rng);
    cs.alphas << cxd(3.0, 0.0), cxd(1.0, 0.0), cxd(2.0, 0.0), cxd(3.0, 0.0);
    ChannelRealization ch = assemble_channel(cs, cfg);
    // Sums: cluster 0 -> 5, cluster 1 -> 4.
    RfPick fc = select_rf_combiner(cs, ch, 1);
    CHECK(fc.columns == std::vector<int>{0});

    // Random instances against the brute-force summation oracle.
    SystemConfig big = nl_config(6, 2, 2, 2);
    big.n_clusters = 8;
    ClusterSet cs2 = draw_clusters(big, rng);
    ChannelRealization ch2 = assemble_channel(cs2, big);
    RVec sums = RVec::Zero(8);
    for (int k = 0; k < 8; ++k)
        for (int n = 0; n < 6; ++n)
            sums(k) += std::abs(cs2.alphas(n, k));
    CHECK(select_rf_combiner(cs2, ch2, 5).columns == argmax_k(sums, 5));
}

TEST_CASE("design_bb_from_effective: identity effective channels copy the target blocks") {
    Rng rng(25);
    const int n_nodes = 3, q = 2, l = 2, n_rf = 2;
    CMat c = rng.cgauss_matrix(n_nodes * l, q);
    CMatList h_bar(n_nodes, CMat::Identity(n_rf, n_rf));
    CMatList p_bb = design_bb_from_effective(h_bar, c, l);

    Eigen::JacobiSVD<CMat> svd(c, Eigen::ComputeFullU);
    CMat h_opt = svd.matrixU().leftCols(n_rf).adjoint();
    for (int n = 0; n < n_nodes; ++n)
        CHECK((p_bb[static_cast<std::size_t>(n)] - h_opt.middleCols(n * l, l)).norm() < 1e-12);
}

TEST_CASE("design_bb_precoders: blocks reconstruct the composite target") {
    SystemConfig cfg = nl_config();
    Rng rng(26);
    ClusterSet cs = draw_clusters(cfg, rng);
    ChannelRealization ch = assemble_channel(cs, cfg);
    RfSelection rf = select_rf(cs, ch, cfg);
    CMat c = rng.cgauss_matrix(cfg.n_nodes * cfg.obs_dim, cfg.param_dim);
    CMatList p_bb = design_bb_precoders(ch, rf, c, cfg);

    CMatList h_bar = effective_channels(ch, rf);
    Eigen::JacobiSVD<CMat> svd(c, Eigen::ComputeFullU);
    CMat h_opt = svd.matrixU().leftCols(cfg.n_rf_node).adjoint();
    for (int n = 0; n < cfg.n_nodes; ++n) {
        CMat reconstructed =
            h_bar[static_cast<std::size_t>(n)] * p_bb[static_cast<std::size_t>(n)];
        CHECK((reconstructed - h_opt.middleCols(n * cfg.obs_dim, cfg.obs_dim)).norm() < 1e-9);
    }
}

TEST_CASE("design pipeline achieves the piecewise law when n_rf >= q") {
    SystemConfig cfg = nl_config();
    Rng rng(27);
    for (int rep = 0; rep < 5; ++rep) {
        ClusterSet cs = draw_clusters(cfg, rng);
        ChannelRealization ch = assemble_channel(cs, cfg);
        RfSelection rf = select_rf(cs, ch, cfg);
        CMat c = rng.cgauss_matrix(cfg.n_nodes * cfg.obs_dim, cfg.param_dim);
        CMatList h_bar = effective_channels(ch, rf);
        CMatList p_bb = design_bb_from_effective(h_bar, c, cfg.obs_dim);
        CMat e = noiseless_error_covariance(h_bar, p_bb, c);
        CHECK(e.trace().real() ==
              doctest::Approx(noiseless_mse(c, cfg.n_rf_node, cfg.param_dim)).epsilon(1e-8));
    }
}

TEST_CASE("design pipeline is optimal: no alternative baseband precoder beats the law") {
    SystemConfig cfg = nl_config();
    Rng rng(30);
    ClusterSet cs = draw_clusters(cfg, rng);
    ChannelRealization ch = assemble_channel(cs, cfg);
    RfSelection rf = select_rf(cs, ch, cfg);
    CMat c = rng.cgauss_matrix(cfg.n_nodes * cfg.obs_dim, cfg.param_dim);
    CMatList h_bar = effective_channels(ch, rf);
    double law = noiseless_mse(c, cfg.n_rf_node, cfg.param_dim);
    for (int t = 0; t < 50; ++t) {
        CMatList p_alt;
        for (int n = 0; n < cfg.n_nodes; ++n)
            p_alt.push_back(rng.cgauss_matrix(cfg.n_rf_node, cfg.obs_dim));
        double alt = noiseless_error_covariance(h_bar, p_alt, c).trace().real();
        CHECK(alt >= law - 1e-10);
    }
}

TEST_CASE("noiseless_mse: zero observation matrix yields the prior variance") {
    CHECK(noiseless_mse(CMat::Zero(8, 4), 2, 4) == doctest::Approx(4.0));
    CHECK(noiseless_mse(CMat::Zero(8, 4), 6, 4) == doctest::Approx(4.0));
}

TEST_CASE("noiseless_mse: equal eigenvalues give q/3") {
    // Two stacked scaled identities: C^H C = 2 I_q.
    const int q = 3;
    CMat c(2 * q, q);
    c << CMat::Identity(q, q), CMat::Identity(q, q);
    CHECK(noiseless_mse(c, q, q) == doctest::Approx(q / 3.0).epsilon(1e-12));
}

TEST_CASE("noiseless_mse: matches a dense eigensolver oracle term by term") {
    Rng rng(28);
    const int q = 4;
    CMat c = rng.cgauss_matrix(10, q);
    // Oracle works on C C^H directly.
    Eigen::SelfAdjointEigenSolver<CMat> es(c * c.adjoint(), Eigen::EigenvaluesOnly);
    RVec evals = es.eigenvalues().reverse();
    const int r = q - 1;
    double expected = 1.0; // q - r
    for (int k = 0; k < r; ++k)
        expected += 1.0 / (1.0 + evals(k));
    CHECK(noiseless_mse(c, r, q) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("noiseless_mse: non-increasing in r, saturates at the benchmark") {
    Rng rng(29);
    for (int rep = 0; rep < 10; ++rep) {
        CMat c = rng.cgauss_matrix(12, 4);
        double bench = centralized_benchmark(c);
        double prev = std::numeric_limits<double>::infinity();
        for (int r = 1; r <= 6; ++r) {
            double mse = noiseless_mse(c, r, 4);
            CHECK(mse <= prev + 1e-12);
            if (r >= 4)
                CHECK(mse == doctest::Approx(bench).epsilon(1e-10));
            prev = mse;
        }
    }
}
