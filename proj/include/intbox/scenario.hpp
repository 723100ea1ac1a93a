#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "intbox/error.hpp"
#include "intbox/interval.hpp"
#include "intbox/oracle.hpp"
#include "intbox/signals.hpp"
#include "intbox/synthesis.hpp"
#include "intbox/system.hpp"

namespace intbox {

/// Malformed or inconsistent scenario file. The message carries the line or field path.
class ConfigError : public Error {
   public:
    using Error::Error;
};

/// Closed-loop observer estimation ran out of gain candidates.
class InfeasibleError : public Error {
   public:
    using Error::Error;
};

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitContainment = 2, kExitNumerical = 3, kExitInfeasible = 4 };

struct EstimatorSpec {
    std::string id;      // output stem, unique within a scenario
    std::string method;  // tightest | truncated | constant_pw | metzler | closed_loop
    double window = 0.0; // truncated: T in seconds
    bool hull = false;   // constant_pw: replace p_w by its supremum
    std::optional<Mat> gain;           // closed_loop: fixed L
    bool synthesize = false;           // closed_loop: L from synthesize_gain with Scenario::synthesis
};

struct VerificationSpec {
    std::size_t n_samples = 200;
    std::uint64_t seed = 1;
    double slack = 1e-6;
};

struct Scenario {
    std::string name;
    LtiSystem sys;
    IntervalBox x0;
    BoxSignal w;
    std::optional<BoxSignal> v;
    double horizon;
    double grid_step;
    QuadratureSpec quad;
    OdeSpec ode;
    std::vector<EstimatorSpec> estimators;
    VerificationSpec verification;
    std::string output_dir;
    double synthesis_alpha = 0.0;
    SolverOptions synthesis;

    [[nodiscard]] TimeGrid grid() const { return TimeGrid::from_horizon(horizon, grid_step); }
};

Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

/// Header `t,c_1..c_n,p_1..p_n,lo_1..lo_n,hi_1..hi_n`, values with 17 significant digits.
std::string csv_string(const EstimatorRun& run);
void write_csv(const EstimatorRun& run, const std::filesystem::path& path);

struct ScenarioRun {
    std::string id;
    EstimatorRun run;
    std::optional<ContainmentReport> containment;
};

struct ScenarioOutcome {
    std::vector<ScenarioRun> runs;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> realization_seeds;
    bool containment_passed = true;
    std::string report_json;
};

struct RunOptions {
    bool verify = true;
    std::optional<std::size_t> samples;
    std::optional<std::uint64_t> seed;
};

/**
 * Runs every estimator of the scenario and, unless disabled, checks containment of seeded
 * truths. A closed-loop run is checked against the measurements of each truth; the stored
 * run uses the measurements of realization 0.
 */
ScenarioOutcome run_scenario(const Scenario& sc, const RunOptions& opts = {});

/// Writes one CSV per estimator and report.json into dir.
void write_outputs(const ScenarioOutcome& outcome, const std::filesystem::path& dir);

}  // namespace intbox
