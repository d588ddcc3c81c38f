#include "lde/model.hpp"

#include "lde/linalg.hpp"

#include <doctest.h>

using namespace lde;

namespace {

ObservationModel tiny_model(int n_nodes, int obs_dim, int param_dim, int n_rx, Rng& rng,
                            double sigma2_obs = 1.0, double sigma2_fc = 0.1) {
    ObservationModel m;
    m.R_theta = CMat::Identity(param_dim, param_dim);
    m.R_w = sigma2_fc * CMat::Identity(n_rx, n_rx);
    for (int n = 0; n < n_nodes; ++n) {
        m.C.push_back(rng.cgauss_matrix(obs_dim, param_dim));
        m.R.push_back(sigma2_obs * CMat::Identity(obs_dim, obs_dim));
    }
    return m;
}

} // namespace

TEST_CASE("stack_model: single node stacking is the identity") {
    Rng rng(1);
    CMatList c{rng.cgauss_matrix(2, 3)}, h{rng.cgauss_matrix(4, 5)}, p{rng.cgauss_matrix(5, 2)};
    StackedModel sm = stack_model(c, h, p);
    CHECK(sm.C == c[0]);
    CHECK(sm.H == h[0]);
    CHECK(sm.P == p[0]);
}

TEST_CASE("stack_model: blocks land at their node offsets") {
    const int l = 3, q = 3;
    CMatList c{CMat::Zero(l, q), CMat::Identity(l, q)};
    CMatList h{CMat::Ones(2, 2), CMat::Ones(2, 2)};
    CMatList p{CMat::Ones(2, l), CMat::Ones(2, l)};
    StackedModel sm = stack_model(c, h, p);
    CHECK(sm.C.topRows(l) == CMat::Zero(l, q));
    CHECK(sm.C.bottomRows(l) == CMat::Identity(l, q));
}

TEST_CASE("stack_model: matches an index-loop oracle on random inputs") {
    Rng rng(2);
    const int n_nodes = 3, l = 2, q = 4, n_rx = 5, n_tx = 3;
    CMatList c, h, p;
    for (int n = 0; n < n_nodes; ++n) {
        c.push_back(rng.cgauss_matrix(l, q));
        h.push_back(rng.cgauss_matrix(n_rx, n_tx));
        p.push_back(rng.cgauss_matrix(n_tx, l));
    }
    StackedModel sm = stack_model(c, h, p);

    // Entry-by-entry oracle built from scalar loops.
    for (int n = 0; n < n_nodes; ++n)
        for (int i = 0; i < l; ++i)
            for (int j = 0; j < q; ++j)
                CHECK(sm.C(n * l + i, j) == c[static_cast<std::size_t>(n)](i, j));
    for (int n = 0; n < n_nodes; ++n)
        for (int i = 0; i < n_rx; ++i)
            for (int j = 0; j < n_tx; ++j)
                CHECK(sm.H(i, n * n_tx + j) == h[static_cast<std::size_t>(n)](i, j));
    for (int bi = 0; bi < n_nodes; ++bi)
        for (int bj = 0; bj < n_nodes; ++bj)
            for (int i = 0; i < n_tx; ++i)
                for (int j = 0; j < l; ++j) {
                    cxd expected = bi == bj ? p[static_cast<std::size_t>(bi)](i, j) : cxd(0, 0);
                    CHECK(sm.P(bi * n_tx + i, bj * l + j) == expected);
                }
}

TEST_CASE("stack_model: dimension mismatch names the node") {
    Rng rng(3);
    CMatList c{rng.cgauss_matrix(2, 3), rng.cgauss_matrix(2, 4)};
    CMatList h{rng.cgauss_matrix(4, 5), rng.cgauss_matrix(4, 5)};
    CMatList p{rng.cgauss_matrix(5, 2), rng.cgauss_matrix(5, 2)};
    CHECK_THROWS_WITH_AS(stack_model(c, h, p), doctest::Contains("node 1"),
                         std::invalid_argument);
}

TEST_CASE("observe: noiseless draw returns the selected column of C") {
    Rng rng(4);
    ObservationModel m = tiny_model(1, 3, 4, 2, rng, 0.0);
    m.R[0].setZero();
    CVec theta = CVec::Zero(4);
    theta(0) = 1.0;
    CVec x = observe(m, 0, theta, rng);
    CHECK((x - m.C[0].col(0)).norm() == doctest::Approx(0.0));
}

TEST_CASE("observe: pure-noise sample covariance approaches R_n") {
    Rng rng(5);
    const int l = 2;
    ObservationModel m;
    m.C = {CMat::Zero(l, 2)};
    CMat root = rng.cgauss_matrix(l, l);
    m.R = {CMat(root * root.adjoint())};
    m.R_theta = CMat::Identity(2, 2);
    m.R_w = CMat::Identity(1, 1);

    const int trials = 100000;
    CMat cov = CMat::Zero(l, l);
    CVec theta = CVec::Zero(2);
    for (int t = 0; t < trials; ++t) {
        CVec x = observe(m, 0, theta, rng);
        cov += x * x.adjoint();
    }
    cov /= double(trials);
    CHECK((cov - m.R[0]).norm() <= 0.05 * m.R[0].norm());
}

TEST_CASE("observe: zero parameter with unit noise is zero-mean") {
    Rng rng(6);
    ObservationModel m = tiny_model(1, 3, 2, 2, rng, 1.0);
    const int trials = 10000;
    CVec mean = CVec::Zero(3);
    CVec theta = CVec::Zero(2);
    for (int t = 0; t < trials; ++t)
        mean += observe(m, 0, theta, rng);
    mean /= double(trials);
    // Each complex entry has variance 1/trials; stderr of the stacked norm.
    double limit = 3.0 * std::sqrt(3.0 / double(trials));
    CHECK(mean.norm() <= limit);
}

TEST_CASE("observe: fixed seed gives identical draws") {
    Rng rng(7);
    ObservationModel m = tiny_model(2, 2, 2, 2, rng);
    CVec theta = CVec::Ones(2);
    Rng a(99), b(99);
    CHECK(observe(m, 1, theta, a) == observe(m, 1, theta, b));
}

TEST_CASE("transmit_power: zero precoder radiates nothing") {
    CMat p = CMat::Zero(3, 2), c = CMat::Ones(2, 2);
    CHECK(transmit_power(p, c, CMat::Identity(2, 2), CMat::Identity(2, 2)) == 0.0);
}

TEST_CASE("transmit_power: identity precoder on pure noise") {
    const int l = 4;
    double sigma2 = 0.7;
    CMat p = CMat::Identity(l, l), c = CMat::Zero(l, 3);
    CMat r = sigma2 * CMat::Identity(l, l);
    CHECK(transmit_power(p, c, CMat::Identity(3, 3), r) == doctest::Approx(sigma2 * l));
}

TEST_CASE("transmit_power: matches the sample average of ||P x||^2") {
    Rng rng(8);
    ObservationModel m = tiny_model(1, 3, 2, 2, rng, 0.4);
    CMat p = rng.cgauss_matrix(4, 3);
    double analytic = transmit_power(p, m.C[0], m.R_theta, m.R[0]);

    const int trials = 10000;
    double sum = 0.0, sumsq = 0.0;
    CMat theta_root = hermitian_sqrt(m.R_theta);
    for (int t = 0; t < trials; ++t) {
        CVec theta = theta_root * rng.cgauss_vector(2);
        double v = (p * observe(m, 0, theta, rng)).squaredNorm();
        sum += v;
        sumsq += v * v;
    }
    double mean = sum / trials;
    double se = std::sqrt(std::max(0.0, sumsq / trials - mean * mean) / trials);
    CHECK(std::abs(mean - analytic) <= 3.0 * se);
}

TEST_CASE("transmit_power: invariant under unitary left factors") {
    Rng rng(9);
    for (int t = 0; t < 25; ++t) {
        CMat p = rng.cgauss_matrix(4, 3);
        CMat c = rng.cgauss_matrix(3, 2);
        CMat rn_root = rng.cgauss_matrix(3, 3);
        CMat rn = rn_root * rn_root.adjoint();
        Eigen::HouseholderQR<CMat> qr(rng.cgauss_matrix(4, 4));
        CMat u = qr.householderQ();
        double a = transmit_power(p, c, CMat::Identity(2, 2), rn);
        double b = transmit_power(u * p, c, CMat::Identity(2, 2), rn);
        CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, a));
    }
}

TEST_CASE("SystemConfig/ObservationModel validation rejects bad inputs") {
    SystemConfig cfg;
    cfg.n_nodes = 2;
    cfg.n_tx = 4;
    cfg.n_rx = 4;
    cfg.param_dim = 2;
    cfg.obs_dim = 2;
    cfg.n_clusters = 3;
    cfg.n_rf_node = 2;
    cfg.n_rf_fc = 2;
    cfg.rho = {1.0};
    cfg.sigma2_obs = {1.0};
    cfg.validate();

    SystemConfig bad = cfg;
    bad.n_rf_node = 5; // exceeds n_tx
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.rho = {0.0};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    Rng rng(10);
    ObservationModel m = tiny_model(2, 2, 2, 4, rng);
    m.validate(cfg);
    ObservationModel skew = m;
    skew.R_theta(0, 1) += cxd(0.1, 0.0); // breaks Hermitian symmetry
    CHECK_THROWS_AS(skew.validate(cfg), std::invalid_argument);
}
