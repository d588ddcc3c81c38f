#include "lde/channel.hpp"

#include "lde/linalg.hpp"

#include <cmath>
#include <istream>
#include <ostream>

namespace lde {

CVec array_response(double angle, int count, double spacing_ratio) {
    require(count >= 1, "array_response: antenna count must be >= 1");
    require(spacing_ratio > 0.0, "array_response: spacing ratio must be > 0");
    const double phase_step = 2.0 * M_PI * spacing_ratio * std::cos(angle);
    const double scale = 1.0 / std::sqrt(static_cast<double>(count));
    CVec v(count);
    for (int m = 0; m < count; ++m)
        v(m) = scale * cxd(std::cos(m * phase_step), -std::sin(m * phase_step));
    return v;
}

ClusterSet draw_clusters(const SystemConfig& cfg, Rng& rng) {
    ClusterSet cs;
    cs.alphas = rng.cgauss_matrix(cfg.n_nodes, cfg.n_clusters);
    cs.aoa.resize(cfg.n_clusters);
    for (int k = 0; k < cfg.n_clusters; ++k)
        cs.aoa(k) = rng.uniform(0.0, M_PI); // shared across nodes
    cs.aod.resize(cfg.n_nodes, cfg.n_clusters);
    for (int n = 0; n < cfg.n_nodes; ++n)
        for (int k = 0; k < cfg.n_clusters; ++k)
            cs.aod(n, k) = rng.uniform(0.0, M_PI);
    return cs;
}

ChannelRealization assemble_channel(const ClusterSet& clusters, const SystemConfig& cfg) {
    const int n_nodes = clusters.n_nodes();
    const int n_clusters = clusters.n_clusters();
    require(n_nodes == cfg.n_nodes && n_clusters == cfg.n_clusters,
            "assemble_channel: cluster set does not match config");

    ChannelRealization ch;
    ch.A_fc.resize(cfg.n_rx, n_clusters);
    for (int k = 0; k < n_clusters; ++k)
        ch.A_fc.col(k) = array_response(clusters.aoa(k), cfg.n_rx, clusters.d_over_lambda_rx);

    const double gain_scale =
        std::sqrt(static_cast<double>(cfg.n_rx) * cfg.n_tx / static_cast<double>(n_clusters));
    ch.A_s.resize(n_nodes);
    ch.D.resize(n_nodes);
    ch.H.resize(n_nodes);
    for (int n = 0; n < n_nodes; ++n) {
        CMat a_s(cfg.n_tx, n_clusters);
        for (int k = 0; k < n_clusters; ++k)
            a_s.col(k) = array_response(clusters.aod(n, k), cfg.n_tx, clusters.d_over_lambda_tx);
        ch.A_s[n] = a_s;
        ch.D[n] = (gain_scale * clusters.alphas.row(n).transpose()).asDiagonal();
        ch.H[n] = ch.A_fc * ch.D[n] * a_s.adjoint();
    }
    return ch;
}

CsiRealization perturb_csi(const CMatList& H, double sigma2_csi, Rng& rng) {
    require(sigma2_csi >= 0.0, "perturb_csi: sigma2_csi must be >= 0");
    CsiRealization csi;
    csi.sigma2_csi = sigma2_csi;
    csi.H_hat.reserve(H.size());
    csi.delta.reserve(H.size());
    for (const CMat& h : H) {
        // The error entries are the exact Gaussian draws; the estimate is the
        // rounded difference, so reconstruction holds to one rounding.
        CMat delta = sigma2_csi > 0.0 ? CMat(rng.cgauss_matrix(h.rows(), h.cols(), sigma2_csi))
                                      : CMat(CMat::Zero(h.rows(), h.cols()));
        csi.delta.push_back(delta);
        csi.H_hat.push_back(h - delta);
    }
    return csi;
}

namespace {

void write_matrix(std::ostream& os, const std::string& tag, const CMat& m) {
    os << tag << ' ' << m.rows() << ' ' << m.cols() << '\n';
    os.precision(17);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j)
                os << ' ';
            os << m(i, j).real() << ' ' << m(i, j).imag();
        }
        os << '\n';
    }
}

CMat read_matrix(std::istream& is, const std::string& expected_tag) {
    std::string tag;
    Eigen::Index rows = 0, cols = 0;
    is >> tag >> rows >> cols;
    require(static_cast<bool>(is) && tag == expected_tag,
            "load_channel: expected matrix tag '" + expected_tag + "'");
    CMat m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) {
            double re = 0.0, im = 0.0;
            is >> re >> im;
            m(i, j) = cxd(re, im);
        }
    require(static_cast<bool>(is), "load_channel: truncated matrix data");
    return m;
}

} // namespace

void save_channel(std::ostream& os, const ChannelRealization& ch) {
    os << "lde-channel 1\n";
    os << "nodes " << ch.H.size() << '\n';
    write_matrix(os, "A_fc", ch.A_fc);
    for (std::size_t n = 0; n < ch.H.size(); ++n) {
        write_matrix(os, "A_s", ch.A_s[n]);
        write_matrix(os, "D", ch.D[n]);
        write_matrix(os, "H", ch.H[n]);
    }
}

ChannelRealization load_channel(std::istream& is) {
    std::string magic;
    int version = 0;
    is >> magic >> version;
    require(static_cast<bool>(is) && magic == "lde-channel" && version == 1,
            "load_channel: not an lde-channel v1 stream");
    std::string tag;
    std::size_t n_nodes = 0;
    is >> tag >> n_nodes;
    require(static_cast<bool>(is) && tag == "nodes", "load_channel: missing node count");
    ChannelRealization ch;
    ch.A_fc = read_matrix(is, "A_fc");
    ch.A_s.reserve(n_nodes);
    ch.D.reserve(n_nodes);
    ch.H.reserve(n_nodes);
    for (std::size_t n = 0; n < n_nodes; ++n) {
        ch.A_s.push_back(read_matrix(is, "A_s"));
        ch.D.push_back(read_matrix(is, "D"));
        ch.H.push_back(read_matrix(is, "H"));
    }
    return ch;
}

} // namespace lde
