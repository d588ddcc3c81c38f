#include "lde/bench.hpp"
#include "lde/linalg.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace lde {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

std::vector<double> parse_grid(const std::string& text, const std::string& key) {
    std::string cleaned = text;
    for (char& c : cleaned)
        if (c == ',')
            c = ' ';
    std::istringstream ss(cleaned);
    std::vector<double> out;
    double v = 0.0;
    while (ss >> v)
        out.push_back(v);
    std::string tail;
    if (ss.fail() && !ss.eof())
        throw std::invalid_argument("scenario: cannot parse numeric list for '" + key + "'");
    require(!out.empty(), "scenario: empty value list for '" + key + "'");
    return out;
}

double parse_double(const std::string& text, const std::string& key) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("scenario: cannot parse number for '" + key + "'");
    }
    require(trim(text.substr(pos)).empty(), "scenario: trailing characters in '" + key + "'");
    return v;
}

int parse_int(const std::string& text, const std::string& key) {
    double v = parse_double(text, key);
    require(v == static_cast<long long>(v), "scenario: '" + key + "' must be an integer");
    return static_cast<int>(v);
}

} // namespace

Scenario parse_scenario(std::istream& is) {
    Scenario sc;
    sc.config.rho = {1.0};
    sc.config.sigma2_obs = {1.0};
    bool saw_id = false;

    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line.resize(hash);
        line = trim(line);
        if (line.empty())
            continue;
        std::size_t eq = line.find('=');
        require(eq != std::string::npos,
                "scenario: line " + std::to_string(line_no) + " is not 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        require(!value.empty(), "scenario: empty value for '" + key + "'");

        if (key == "id") {
            sc.id = value;
            saw_id = true;
        } else if (key == "design") {
            sc.design = design_from_string(value);
        } else if (key == "noise_profile") {
            if (value == "homogeneous")
                sc.noise_profile = NoiseProfile::homogeneous;
            else if (value == "heterogeneous")
                sc.noise_profile = NoiseProfile::heterogeneous;
            else
                throw std::invalid_argument("scenario: unknown noise_profile '" + value + "'");
        } else if (key == "sweep") {
            std::size_t colon = value.find(':');
            require(colon != std::string::npos, "scenario: sweep needs 'axis : values'");
            SweepSpec spec;
            spec.axis = axis_from_string(trim(value.substr(0, colon)));
            spec.grid = parse_grid(value.substr(colon + 1), "sweep");
            sc.sweeps.push_back(std::move(spec));
        } else if (key == "nodes") {
            sc.config.n_nodes = parse_int(value, key);
        } else if (key == "tx_antennas") {
            sc.config.n_tx = parse_int(value, key);
        } else if (key == "rx_antennas") {
            sc.config.n_rx = parse_int(value, key);
        } else if (key == "param_dim") {
            sc.config.param_dim = parse_int(value, key);
        } else if (key == "obs_dim") {
            sc.config.obs_dim = parse_int(value, key);
        } else if (key == "clusters") {
            sc.config.n_clusters = parse_int(value, key);
        } else if (key == "n_rf_node") {
            sc.config.n_rf_node = parse_int(value, key);
        } else if (key == "n_rf_fc") {
            sc.config.n_rf_fc = parse_int(value, key);
        } else if (key == "rho") {
            sc.config.rho = parse_grid(value, key);
        } else if (key == "sigma2_obs") {
            sc.config.sigma2_obs = parse_grid(value, key);
        } else if (key == "snr_ob_db") {
            sc.config.sigma2_obs = {std::pow(10.0, -parse_double(value, key) / 10.0)};
        } else if (key == "sigma2_fc") {
            sc.config.sigma2_fc = parse_double(value, key);
        } else if (key == "snr_fc_db") {
            sc.config.sigma2_fc = std::pow(10.0, -parse_double(value, key) / 10.0);
        } else if (key == "sigma2_csi") {
            sc.config.sigma2_csi = parse_double(value, key);
        } else if (key == "seed") {
            sc.config.seed = static_cast<std::uint64_t>(std::stoull(value));
        } else if (key == "trials") {
            sc.config.trials = parse_int(value, key);
        } else if (key == "bcd_i_max") {
            sc.config.bcd.max_iterations = parse_int(value, key);
        } else if (key == "bcd_epsilon") {
            sc.config.bcd.epsilon = parse_double(value, key);
        } else {
            throw std::invalid_argument("scenario: unknown key '" + key + "'");
        }
    }
    if (!saw_id)
        sc.id = to_string(sc.design);
    sc.validate();
    return sc;
}

Scenario parse_scenario_file(const std::string& path) {
    std::ifstream f(path);
    require(f.good(), "cannot open scenario file '" + path + "'");
    return parse_scenario(f);
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
    os << "scenario_id,sweep_value,trials,mse_analytic,mse_mc,mc_stderr,benchmark,seed,status\n";
    for (const ResultRow& r : rows)
        os << r.scenario_id << ',' << fmt(r.sweep_value) << ',' << r.trials << ','
           << fmt(r.mse_analytic) << ',' << fmt(r.mse_mc) << ',' << fmt(r.mc_stderr) << ','
           << fmt(r.benchmark) << ',' << r.seed << ',' << r.status << '\n';
}

void write_json(std::ostream& os, const Scenario& scenario, const std::vector<ResultRow>& rows) {
    nlohmann::ordered_json j;
    j["scenario"]["id"] = scenario.id;
    j["scenario"]["design"] = to_string(scenario.design);
    j["scenario"]["noise_profile"] =
        scenario.noise_profile == NoiseProfile::heterogeneous ? "heterogeneous" : "homogeneous";
    for (const SweepSpec& s : scenario.sweeps)
        j["scenario"]["sweeps"].push_back({{"axis", to_string(s.axis)}, {"grid", s.grid}});

    const SystemConfig& c = scenario.config;
    j["scenario"]["config"] = {{"nodes", c.n_nodes},
                               {"tx_antennas", c.n_tx},
                               {"rx_antennas", c.n_rx},
                               {"param_dim", c.param_dim},
                               {"obs_dim", c.obs_dim},
                               {"clusters", c.n_clusters},
                               {"n_rf_node", c.n_rf_node},
                               {"n_rf_fc", c.n_rf_fc},
                               {"rho", c.rho},
                               {"sigma2_obs", c.sigma2_obs},
                               {"sigma2_fc", c.sigma2_fc},
                               {"sigma2_csi", c.sigma2_csi},
                               {"seed", c.seed},
                               {"trials", c.trials},
                               {"bcd_i_max", c.bcd.max_iterations},
                               {"bcd_epsilon", c.bcd.epsilon}};

    j["rows"] = nlohmann::ordered_json::array();
    for (const ResultRow& r : rows)
        j["rows"].push_back({{"scenario_id", r.scenario_id},
                             {"sweep_value", r.sweep_value},
                             {"trials", r.trials},
                             {"mse_analytic", r.mse_analytic},
                             {"mse_mc", r.mse_mc},
                             {"mc_stderr", r.mc_stderr},
                             {"benchmark", r.benchmark},
                             {"wall_time_ms", r.wall_time_ms},
                             {"seed", r.seed},
                             {"status", r.status}});
    os << j.dump(2) << '\n';
}

} // namespace lde
