#include "lde/bench.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

int run_command(const std::string& config_path, const std::string& out_path,
                const std::string& json_path, std::optional<std::uint64_t> seed,
                std::optional<int> trials, bool multi_axis) {
    lde::Scenario sc = lde::parse_scenario_file(config_path);
    if (seed)
        sc.config.seed = *seed;
    if (trials)
        sc.config.trials = *trials;
    if (!multi_axis && sc.sweeps.size() != 1) {
        std::cerr << "run expects exactly one sweep axis (" << sc.sweeps.size()
                  << " configured); use the sweep subcommand for multi-axis grids\n";
        return 2;
    }

    std::vector<lde::ResultRow> rows = lde::run_scenario(sc);

    std::ofstream csv(out_path, std::ios::binary);
    if (!csv.good()) {
        std::cerr << "cannot open output file '" << out_path << "'\n";
        return 2;
    }
    lde::write_csv(csv, rows);

    if (!json_path.empty()) {
        std::ofstream js(json_path, std::ios::binary);
        if (!js.good()) {
            std::cerr << "cannot open JSON output file '" << json_path << "'\n";
            return 2;
        }
        lde::write_json(js, sc, rows);
    }

    int errors = 0;
    for (const lde::ResultRow& row : rows)
        if (row.status != "ok")
            ++errors;
    std::cout << rows.size() << " rows written to " << out_path;
    if (errors)
        std::cout << " (" << errors << " rows carry an error marker)";
    std::cout << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Batch runner for decentralized-estimation transceiver designs"};
    app.require_subcommand(1);

    std::string config_path, out_path, json_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;

    auto add_io = [&](CLI::App* cmd, bool needs_out) {
        cmd->add_option("--config", config_path, "scenario file")->required();
        if (needs_out) {
            cmd->add_option("--out", out_path, "CSV output path")->required();
            cmd->add_option("--json", json_path, "optional JSON mirror");
        }
        cmd->add_option("--seed", seed, "override the scenario seed");
        cmd->add_option("--trials", trials, "override the Monte Carlo trial count");
    };

    CLI::App* run = app.add_subcommand("run", "run a single-axis scenario sweep");
    add_io(run, true);
    CLI::App* sweep = app.add_subcommand("sweep", "run a multi-axis scenario grid");
    add_io(sweep, true);

    CLI::App* bench = app.add_subcommand("benchmark", "print the centralized MMSE bound");
    bench->add_option("--config", config_path, "scenario file")->required();
    bench->add_option("--seed", seed, "override the scenario seed");

    std::uint64_t validate_seed = 20240901ULL;
    CLI::App* validate = app.add_subcommand("validate", "run the invariant suite");
    validate->add_option("--seed", validate_seed, "suite seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return run_command(config_path, out_path, json_path, seed, trials, false);
        if (sweep->parsed())
            return run_command(config_path, out_path, json_path, seed, trials, true);
        if (bench->parsed()) {
            lde::Scenario sc = lde::parse_scenario_file(config_path);
            if (seed)
                sc.config.seed = *seed;
            // Reported for the first grid point's realization.
            lde::Scenario single = sc;
            for (lde::SweepSpec& s : single.sweeps)
                s.grid.resize(1);
            single.config.trials = 2;
            std::vector<lde::ResultRow> rows = lde::run_scenario(single);
            if (rows.empty() || rows.front().status != "ok") {
                std::cerr << "benchmark failed: "
                          << (rows.empty() ? "no rows" : rows.front().status) << '\n';
                return 2;
            }
            std::cout.precision(12);
            std::cout << rows.front().benchmark << '\n';
            return 0;
        }
        if (validate->parsed()) {
            lde::ValidationReport report = lde::validate(std::cout, validate_seed);
            return report.ok() ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
