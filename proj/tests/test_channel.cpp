#include "lde/channel.hpp"

#include <Eigen/SVD>
#include <doctest.h>
#include <sstream>

using namespace lde;

namespace {

SystemConfig channel_config() {
    SystemConfig cfg;
    cfg.n_nodes = 4;
    cfg.n_tx = 5;
    cfg.n_rx = 8;
    cfg.param_dim = 3;
    cfg.obs_dim = 2;
    cfg.n_clusters = 5;
    cfg.n_rf_node = 3;
    cfg.n_rf_fc = 3;
    cfg.rho = {1.0};
    cfg.sigma2_obs = {1.0};
    return cfg;
}

} // namespace

TEST_CASE("array_response: broadside angle gives a constant vector") {
    CVec v = array_response(M_PI / 2.0, 4, 0.5);
    for (int m = 0; m < 4; ++m)
        CHECK(std::abs(v(m) - cxd(0.5, 0.0)) < 1e-14);
}

TEST_CASE("array_response: endfire two-element case alternates sign") {
    CVec v = array_response(0.0, 2, 0.5);
    double s = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(v(0) - cxd(s, 0.0)) < 1e-14);
    CHECK(std::abs(v(1) - cxd(-s, 0.0)) < 1e-12);
}

TEST_CASE("array_response: always unit norm") {
    Rng rng(11);
    for (int t = 0; t < 50; ++t) {
        CVec v = array_response(rng.uniform(0.0, M_PI), 1 + rng.uniform_int(16),
                                rng.uniform(0.1, 1.0));
        CHECK(std::abs(v.norm() - 1.0) <= 1e-12);
    }
}

TEST_CASE("draw_clusters: deterministic under a fixed seed, correct shapes") {
    SystemConfig cfg = channel_config();
    cfg.n_nodes = 25;
    cfg.n_clusters = 5;
    Rng a(13), b(13);
    ClusterSet c1 = draw_clusters(cfg, a);
    ClusterSet c2 = draw_clusters(cfg, b);
    CHECK(c1.alphas == c2.alphas);
    CHECK(c1.aoa == c2.aoa);
    CHECK(c1.aod == c2.aod);
    CHECK(c1.alphas.rows() == 25);
    CHECK(c1.alphas.cols() == 5);
    CHECK(c1.aoa.size() == 5);
    for (int k = 0; k < 5; ++k) {
        CHECK(c1.aoa(k) >= 0.0);
        CHECK(c1.aoa(k) <= M_PI);
    }
}

TEST_CASE("draw_clusters: path gains have unit sample variance") {
    SystemConfig cfg = channel_config();
    cfg.n_nodes = 1000;
    cfg.n_clusters = 100; // 1e5 gains
    Rng rng(14);
    ClusterSet cs = draw_clusters(cfg, rng);
    double var = cs.alphas.cwiseAbs2().sum() / double(cs.alphas.size());
    CHECK(var == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("assemble_channel: single unit-gain cluster is a rank-one outer product") {
    SystemConfig cfg = channel_config();
    cfg.n_nodes = 1;
    cfg.n_clusters = 1;
    Rng rng(15);
    ClusterSet cs = draw_clusters(cfg, rng);
    cs.alphas(0, 0) = cxd(1.0, 0.0);
    ChannelRealization ch = assemble_channel(cs, cfg);
    CHECK(ch.H[0].norm() == doctest::Approx(std::sqrt(double(cfg.n_rx) * cfg.n_tx)).epsilon(1e-12));
    Eigen::JacobiSVD<CMat> svd(ch.H[0]);
    CHECK(svd.singularValues()(1) < 1e-10 * svd.singularValues()(0));
}

TEST_CASE("assemble_channel: factored form equals the cluster sum form") {
    SystemConfig cfg = channel_config();
    Rng rng(16);
    ClusterSet cs = draw_clusters(cfg, rng);
    ChannelRealization ch = assemble_channel(cs, cfg);
    double scale = std::sqrt(double(cfg.n_rx) * cfg.n_tx / cfg.n_clusters);
    for (int n = 0; n < cfg.n_nodes; ++n) {
        CMat h_sum = CMat::Zero(cfg.n_rx, cfg.n_tx);
        for (int k = 0; k < cfg.n_clusters; ++k)
            h_sum += scale * cs.alphas(n, k) *
                     array_response(cs.aoa(k), cfg.n_rx, cs.d_over_lambda_rx) *
                     array_response(cs.aod(n, k), cfg.n_tx, cs.d_over_lambda_tx).adjoint();
        CHECK((h_sum - ch.H[static_cast<std::size_t>(n)]).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("assemble_channel: zero gains produce a zero channel") {
    SystemConfig cfg = channel_config();
    Rng rng(17);
    ClusterSet cs = draw_clusters(cfg, rng);
    cs.alphas.setZero();
    ChannelRealization ch = assemble_channel(cs, cfg);
    for (const CMat& h : ch.H)
        CHECK(h.norm() == 0.0);
}

TEST_CASE("perturb_csi: zero variance keeps the channel") {
    SystemConfig cfg = channel_config();
    Rng rng(18);
    ChannelRealization ch = assemble_channel(draw_clusters(cfg, rng), cfg);
    CsiRealization csi = perturb_csi(ch.H, 0.0, rng);
    for (int n = 0; n < cfg.n_nodes; ++n) {
        CHECK(csi.H_hat[static_cast<std::size_t>(n)] == ch.H[static_cast<std::size_t>(n)]);
        CHECK(csi.delta[static_cast<std::size_t>(n)].norm() == 0.0);
    }
}

TEST_CASE("perturb_csi: error variance matches and reconstruction holds to one rounding") {
    Rng rng(19);
    CMatList h{rng.cgauss_matrix(100, 100)}; // 1e4 entries per draw
    double sum2 = 0.0;
    int count = 0;
    for (int rep = 0; rep < 10; ++rep) {
        CsiRealization csi = perturb_csi(h, 0.1, rng);
        sum2 += csi.delta[0].cwiseAbs2().sum();
        count += static_cast<int>(csi.delta[0].size());
        // H_hat is defined as the rounded difference, so subtraction recovers
        // it bit-exactly; the re-sum is exact up to one ulp per entry.
        CHECK(CMat(h[0] - csi.delta[0]) == csi.H_hat[0]);
        double ulp_bound = 4.0 * std::numeric_limits<double>::epsilon() *
                           h[0].cwiseAbs().maxCoeff();
        CHECK((csi.H_hat[0] + csi.delta[0] - h[0]).cwiseAbs().maxCoeff() <= ulp_bound);
    }
    CHECK(sum2 / count == doctest::Approx(0.1).epsilon(0.02));
}

TEST_CASE("channel text fixtures round-trip at full precision") {
    SystemConfig cfg = channel_config();
    Rng rng(20);
    ChannelRealization ch = assemble_channel(draw_clusters(cfg, rng), cfg);
    std::stringstream ss;
    save_channel(ss, ch);
    ChannelRealization back = load_channel(ss);
    CHECK(back.A_fc == ch.A_fc);
    for (int n = 0; n < cfg.n_nodes; ++n) {
        CHECK(back.A_s[static_cast<std::size_t>(n)] == ch.A_s[static_cast<std::size_t>(n)]);
        CHECK(back.D[static_cast<std::size_t>(n)] == ch.D[static_cast<std::size_t>(n)]);
        CHECK(back.H[static_cast<std::size_t>(n)] == ch.H[static_cast<std::size_t>(n)]);
    }
}
