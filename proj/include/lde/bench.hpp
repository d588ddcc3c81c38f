#pragma once

#include "lde/channel.hpp"
#include "lde/config.hpp"
#include "lde/digital_bcd.hpp"
#include "lde/model.hpp"
#include "lde/types.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace lde {

enum class DesignKind { noiseless, digital, hybrid, robust, robust_hybrid, agnostic_hybrid };
enum class SweepAxis { snr_ob_db, snr_fc_db, n_rf_node, n_rf_fc, n_nodes, q, sigma2_csi };
enum class NoiseProfile { homogeneous, heterogeneous };

std::string to_string(DesignKind k);
std::string to_string(SweepAxis a);
DesignKind design_from_string(const std::string& s);
SweepAxis axis_from_string(const std::string& s);

struct SweepSpec {
    SweepAxis axis;
    std::vector<double> grid;
};

struct Scenario {
    std::string id;
    SystemConfig config;
    DesignKind design = DesignKind::digital;
    std::vector<SweepSpec> sweeps; // `run` uses exactly one; `sweep` any number
    NoiseProfile noise_profile = NoiseProfile::homogeneous;

    void validate() const;
};

struct ResultRow {
    std::string scenario_id;
    double sweep_value = 0.0;
    int trials = 0;
    double mse_analytic = 0.0;
    double mse_mc = 0.0;
    double mc_stderr = 0.0;
    double benchmark = 0.0;
    double wall_time_ms = 0.0; // reported in the JSON mirror only
    std::uint64_t seed = 0;
    std::string status = "ok";
};

/// Centralized MMSE bound Tr[(I_q + C^H C)^{-1}] for unit-prior, unit-noise
/// stacked observations.
double centralized_benchmark(const CMat& C);

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

/// Simulates theta, per-node observation noise and FC noise per trial, forms
/// the coherent-MAC received vector and applies the combiner.
McEstimate monte_carlo_mse(const CMat& A, const CMatList& P_list, const CMatList& H_list,
                           const ObservationModel& model, int trials, Rng& rng);

/// Runs the scenario over the cartesian product of its sweep grids (outer
/// axes first). Design failures are recorded per-row and the run continues.
std::vector<ResultRow> run_scenario(const Scenario& scenario);

/// Declarative key/value scenario format; unknown keys are errors.
Scenario parse_scenario(std::istream& is);
Scenario parse_scenario_file(const std::string& path);

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows);
void write_json(std::ostream& os, const Scenario& scenario, const std::vector<ResultRow>& rows);

struct ValidationReport {
    int checks = 0;
    int failures = 0;
    bool ok() const { return failures == 0; }
};

/// Seeded invariant suite across all modules; prints one line per check.
ValidationReport validate(std::ostream& log, std::uint64_t seed = 20240901ULL);

} // namespace lde
