#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "attractorlab/attractor.hpp"

namespace attractorlab {

/// One experiment of a scenario config. Parameters are validated per type
/// when the experiment runs; unknown keys are rejected at load time.
struct ExperimentSpec {
    std::string name;
    std::string type;
    std::string anchor;  // the claim this experiment checks, quoted in report.json
    nlohmann::ordered_json params;
};

struct Scenario {
    std::string name;
    std::string description;
    DriverSpec driver;
    Grid grid;
    NonlinearitySpec nonlinearity;
    bool gamma_auto = true;
    double gamma_explicit = 0.0;
    double coefficient_scale = 1.0;
    std::vector<ExperimentSpec> experiments;

    ProblemSetup setup() const;
    HullPoint base_point() const { return HullPoint::of(driver); }
};

/// Strict config loader: versioned schema, unknown keys rejected, parse
/// errors reported with the offending key or byte position.
Scenario load_scenario(const std::filesystem::path& config_path);

struct ExperimentResult {
    std::string name;
    std::string type;
    std::string anchor;
    std::string status;  // pass | fail | inconclusive
    nlohmann::ordered_json details;
    std::vector<std::string> artifacts;
};

struct RunReport {
    std::string scenario;
    std::vector<ExperimentResult> results;
    int exit_code = 0;  // 0 pass, 2 inconclusive present, 1 violation or error
};

/// Run every experiment (parallel up to ATTRACTOR_LAB_THREADS), write one
/// artifact file per experiment plus report.json under output_dir.
RunReport run_scenario(const Scenario& sc, const std::filesystem::path& output_dir);

int run_scenario_file(const std::filesystem::path& config_path,
                      const std::filesystem::path& output_dir);

/// Max residual of the explicit bounded solution in the scalar problem
/// w' = (a w - w^theta)/(theta - 1), with w' formed by central differences.
double lemma_max_residual(const HullPoint& hp, double theta, int n_samples,
                          double t_min, double t_max);

}  // namespace attractorlab
