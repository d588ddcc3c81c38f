#include "lde/bench.hpp"
#include "lde/noiseless.hpp"
#include "lde/robust.hpp"
#include "lde/somp.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

namespace py = pybind11;
using namespace lde;

PYBIND11_MODULE(pylde, m) {
    m.doc() = "Hybrid transceiver designs for linear decentralized estimation in mmWave "
              "MIMO sensor networks";

    py::class_<Rng>(m, "Rng")
        .def(py::init<std::uint64_t>(), py::arg("seed"))
        .def("uniform", py::overload_cast<>(&Rng::uniform))
        .def("cgauss_matrix", &Rng::cgauss_matrix, py::arg("rows"), py::arg("cols"),
             py::arg("variance") = 1.0);

    py::class_<BcdOptions>(m, "BcdOptions")
        .def(py::init<>())
        .def_readwrite("max_iterations", &BcdOptions::max_iterations)
        .def_readwrite("epsilon", &BcdOptions::epsilon);

    py::class_<SystemConfig>(m, "SystemConfig")
        .def(py::init<>())
        .def_readwrite("n_nodes", &SystemConfig::n_nodes)
        .def_readwrite("n_tx", &SystemConfig::n_tx)
        .def_readwrite("n_rx", &SystemConfig::n_rx)
        .def_readwrite("param_dim", &SystemConfig::param_dim)
        .def_readwrite("obs_dim", &SystemConfig::obs_dim)
        .def_readwrite("n_clusters", &SystemConfig::n_clusters)
        .def_readwrite("n_rf_node", &SystemConfig::n_rf_node)
        .def_readwrite("n_rf_fc", &SystemConfig::n_rf_fc)
        .def_readwrite("rho", &SystemConfig::rho)
        .def_readwrite("sigma2_obs", &SystemConfig::sigma2_obs)
        .def_readwrite("sigma2_fc", &SystemConfig::sigma2_fc)
        .def_readwrite("sigma2_csi", &SystemConfig::sigma2_csi)
        .def_readwrite("seed", &SystemConfig::seed)
        .def_readwrite("trials", &SystemConfig::trials)
        .def_readwrite("bcd", &SystemConfig::bcd)
        .def("validate", &SystemConfig::validate);

    py::class_<ObservationModel>(m, "ObservationModel")
        .def(py::init<>())
        .def_readwrite("C", &ObservationModel::C)
        .def_readwrite("R", &ObservationModel::R)
        .def_readwrite("R_theta", &ObservationModel::R_theta)
        .def_readwrite("R_w", &ObservationModel::R_w)
        .def("validate", &ObservationModel::validate);

    py::class_<StackedModel>(m, "StackedModel")
        .def_readonly("C", &StackedModel::C)
        .def_readonly("H", &StackedModel::H)
        .def_readonly("P", &StackedModel::P);

    py::class_<ClusterSet>(m, "ClusterSet")
        .def(py::init<>())
        .def_readwrite("alphas", &ClusterSet::alphas)
        .def_readwrite("aoa", &ClusterSet::aoa)
        .def_readwrite("aod", &ClusterSet::aod)
        .def_readwrite("d_over_lambda_rx", &ClusterSet::d_over_lambda_rx)
        .def_readwrite("d_over_lambda_tx", &ClusterSet::d_over_lambda_tx);

    py::class_<ChannelRealization>(m, "ChannelRealization")
        .def_readonly("A_fc", &ChannelRealization::A_fc)
        .def_readonly("A_s", &ChannelRealization::A_s)
        .def_readonly("D", &ChannelRealization::D)
        .def_readonly("H", &ChannelRealization::H);

    py::class_<CsiRealization>(m, "CsiRealization")
        .def_readonly("H_hat", &CsiRealization::H_hat)
        .def_readonly("delta", &CsiRealization::delta)
        .def_readonly("sigma2_csi", &CsiRealization::sigma2_csi);

    py::class_<RfSelection>(m, "RfSelection")
        .def_readonly("node_columns", &RfSelection::node_columns)
        .def_readonly("fc_columns", &RfSelection::fc_columns)
        .def_readonly("P_rf", &RfSelection::P_rf)
        .def_readonly("A_rf", &RfSelection::A_rf);

    py::class_<DigitalTransceiver>(m, "DigitalTransceiver")
        .def_readonly("P", &DigitalTransceiver::P)
        .def_readonly("A", &DigitalTransceiver::A)
        .def_readonly("lambdas", &DigitalTransceiver::lambdas);

    py::class_<BcdTrace>(m, "BcdTrace")
        .def_readonly("mse_per_iter", &BcdTrace::mse_per_iter)
        .def_readonly("iterations", &BcdTrace::iterations)
        .def_readonly("converged", &BcdTrace::converged);

    py::class_<RobustContext>(m, "RobustContext")
        .def(py::init<CMatList, double, ObservationModel>(), py::arg("H_hat"),
             py::arg("sigma2_csi"), py::arg("model"))
        .def_readwrite("H_hat", &RobustContext::H_hat)
        .def_readwrite("sigma2_csi", &RobustContext::sigma2_csi)
        .def_readwrite("model", &RobustContext::model);

    py::class_<HybridTransceiver>(m, "HybridTransceiver")
        .def_readonly("P_rf", &HybridTransceiver::P_rf)
        .def_readonly("P_bb", &HybridTransceiver::P_bb)
        .def_readonly("A_rf", &HybridTransceiver::A_rf)
        .def_readonly("A_bb", &HybridTransceiver::A_bb)
        .def("effective_precoders", &HybridTransceiver::effective_precoders)
        .def("effective_combiner", &HybridTransceiver::effective_combiner);

    py::class_<SompResult>(m, "SompResult")
        .def_readonly("columns", &SompResult::columns)
        .def_readonly("coeffs", &SompResult::coeffs)
        .def_readonly("residual_norm", &SompResult::residual_norm)
        .def_readonly("residual_history", &SompResult::residual_history);

    py::class_<McEstimate>(m, "McEstimate")
        .def_readonly("mean", &McEstimate::mean)
        .def_readonly("std_error", &McEstimate::std_error);

    // model core
    m.def("stack_model", &stack_model, py::arg("C_list"), py::arg("H_list"), py::arg("P_list"));
    m.def("observe", &observe, py::arg("model"), py::arg("n"), py::arg("theta"), py::arg("rng"));
    m.def("transmit_power", &transmit_power, py::arg("P_n"), py::arg("C_n"), py::arg("R_theta"),
          py::arg("R_n"));

    // channel
    m.def("array_response", &array_response, py::arg("angle"), py::arg("count"),
          py::arg("spacing_ratio"));
    m.def("draw_clusters", &draw_clusters, py::arg("config"), py::arg("rng"));
    m.def("assemble_channel", &assemble_channel, py::arg("clusters"), py::arg("config"));
    m.def("perturb_csi", &perturb_csi, py::arg("H"), py::arg("sigma2_csi"), py::arg("rng"));

    // noiseless design
    m.def(
        "select_rf_precoder",
        [](const ClusterSet& cs, const ChannelRealization& ch, int node, int n_rf) {
            RfPick p = select_rf_precoder(cs, ch, node, n_rf);
            return py::make_tuple(p.columns, p.matrix);
        },
        py::arg("clusters"), py::arg("channel"), py::arg("node"), py::arg("n_rf_node"));
    m.def(
        "select_rf_combiner",
        [](const ClusterSet& cs, const ChannelRealization& ch, int n_rf) {
            RfPick p = select_rf_combiner(cs, ch, n_rf);
            return py::make_tuple(p.columns, p.matrix);
        },
        py::arg("clusters"), py::arg("channel"), py::arg("n_rf_fc"));
    m.def("select_rf", &select_rf, py::arg("clusters"), py::arg("channel"), py::arg("config"));
    m.def("effective_channels", &effective_channels, py::arg("channel"), py::arg("rf"));
    m.def("design_bb_precoders", &design_bb_precoders, py::arg("channel"), py::arg("rf"),
          py::arg("C"), py::arg("config"));
    m.def("noiseless_error_covariance", &noiseless_error_covariance, py::arg("H_bar"),
          py::arg("P_bb"), py::arg("C"));
    m.def("noiseless_mse", &noiseless_mse, py::arg("C"), py::arg("n_rf_node"), py::arg("q"));

    // digital BCD
    m.def("mse_analytic", &mse_analytic, py::arg("A"), py::arg("P_list"), py::arg("H_list"),
          py::arg("model"));
    m.def("update_combiner", &update_combiner, py::arg("P_list"), py::arg("H_list"),
          py::arg("model"));
    m.def("update_precoder", &update_precoder, py::arg("n"), py::arg("A"), py::arg("P_list"),
          py::arg("lambda_n"), py::arg("H_list"), py::arg("model"));
    m.def("solve_dual", &solve_dual, py::arg("n"), py::arg("A"), py::arg("P_list"),
          py::arg("H_list"), py::arg("model"), py::arg("rho_n"));
    m.def("bcd_design", &bcd_design, py::arg("H_list"), py::arg("model"), py::arg("config"),
          py::arg("init_rng"));

    // robust design
    m.def("robust_mse", &robust_mse, py::arg("A"), py::arg("P_list"), py::arg("ctx"));
    m.def("robust_update_combiner", &robust_update_combiner, py::arg("P_list"), py::arg("ctx"));
    m.def("robust_update_precoder", &robust_update_precoder, py::arg("n"), py::arg("A"),
          py::arg("P_list"), py::arg("lambda_n"), py::arg("ctx"));
    m.def("robust_solve_dual", &robust_solve_dual, py::arg("n"), py::arg("A"), py::arg("P_list"),
          py::arg("ctx"), py::arg("rho_n"));
    m.def("robust_bcd_design", &robust_bcd_design, py::arg("ctx"), py::arg("config"),
          py::arg("init_rng"));
    m.def("lemma1_rhs", &lemma1_rhs, py::arg("H_hat"), py::arg("sigma2_csi"), py::arg("K"));
    m.def("lemma1_lhs_mc", &lemma1_lhs_mc, py::arg("H_hat"), py::arg("sigma2_csi"), py::arg("K"),
          py::arg("trials"), py::arg("rng"));
    m.def("lemma1_cross_rhs", &lemma1_cross_rhs, py::arg("H_hat_n"), py::arg("H_hat_j"),
          py::arg("K"));
    m.def("lemma1_cross_lhs_mc", &lemma1_cross_lhs_mc, py::arg("H_hat_n"), py::arg("H_hat_j"),
          py::arg("sigma2_csi"), py::arg("K"), py::arg("trials"), py::arg("rng"));

    // SOMP factorization
    m.def(
        "somp_factorize",
        [](const CMat& target, const CMat& dict, int k, std::optional<CMat> weight) {
            return somp_factorize(target, dict, k, weight ? &*weight : nullptr);
        },
        py::arg("target"), py::arg("dictionary"), py::arg("k"),
        py::arg("weight") = std::nullopt);
    m.def("hybrid_precoder", &hybrid_precoder, py::arg("P_n"), py::arg("A_s_n"),
          py::arg("n_rf_node"));
    m.def("received_covariance", &received_covariance, py::arg("P_list"), py::arg("H_list"),
          py::arg("model"));
    m.def("hybrid_combiner", &hybrid_combiner, py::arg("A"), py::arg("A_fc"), py::arg("n_rf_fc"),
          py::arg("R_yy"));
    m.def("hybridize", &hybridize, py::arg("transceiver"), py::arg("channel"),
          py::arg("H_design"), py::arg("model"), py::arg("config"));

    // channel fixtures
    m.def(
        "save_channel",
        [](const std::string& path, const ChannelRealization& ch) {
            std::ofstream f(path);
            if (!f.good())
                throw std::runtime_error("cannot open '" + path + "' for writing");
            save_channel(f, ch);
        },
        py::arg("path"), py::arg("channel"));
    m.def(
        "load_channel",
        [](const std::string& path) {
            std::ifstream f(path);
            if (!f.good())
                throw std::runtime_error("cannot open '" + path + "'");
            return load_channel(f);
        },
        py::arg("path"));

    // benchmark & scenarios
    m.def("centralized_benchmark", &centralized_benchmark, py::arg("C"));
    m.def("monte_carlo_mse", &monte_carlo_mse, py::arg("A"), py::arg("P_list"), py::arg("H_list"),
          py::arg("model"), py::arg("trials"), py::arg("rng"));
    m.def(
        "run_scenario_file",
        [](const std::string& path) {
            std::vector<ResultRow> rows = run_scenario(parse_scenario_file(path));
            py::list out;
            for (const ResultRow& r : rows) {
                py::dict d;
                d["scenario_id"] = r.scenario_id;
                d["sweep_value"] = r.sweep_value;
                d["trials"] = r.trials;
                d["mse_analytic"] = r.mse_analytic;
                d["mse_mc"] = r.mse_mc;
                d["mc_stderr"] = r.mc_stderr;
                d["benchmark"] = r.benchmark;
                d["wall_time_ms"] = r.wall_time_ms;
                d["seed"] = r.seed;
                d["status"] = r.status;
                out.append(std::move(d));
            }
            return out;
        },
        py::arg("path"), "Run a scenario file and return its result rows as dicts");
    m.def(
        "validate",
        [](std::uint64_t seed) {
            std::ostringstream log;
            ValidationReport rep = validate(log, seed);
            return py::make_tuple(rep.checks, rep.failures, log.str());
        },
        py::arg("seed") = 20240901ULL);
}
