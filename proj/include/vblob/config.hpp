#pragma once

#include <optional>
#include <string>

#include "vblob/experiments.hpp"

namespace vblob {

/// One run of the tool: a command plus the numeric knobs it reads. Defaults
/// are small enough for interactive use.
struct RunConfig {
    std::string command;  // simulate | verify | stability | existence | kernel-check | probe

    // initial data
    std::string data = "rankine";  // rankine | lamb_oseen | sign_changing_pair
    double omega0 = 1.0;
    double radius = 1.0;

    // numerics
    double eps = 0.05;
    double dt = 0.01;
    double T = 0.5;
    int n = 48;  // blobs per axis
    double theta = 0.5;
    int order = 8;

    // experiment knobs
    int levels = 3;
    std::string mode = "strong_l1";  // stability: strong_l1 | weak_oscillatory
    double delta = 0.01;             // probe: weight perturbation
    double gamma = 0.05;
    double r = 2.0;

    std::string out = "vblob-out";
    bool deterministic = true;
    int threads = 1;
    bool plots = false;
};

/// Strict parse of a JSON config: unknown keys, bad enums, and non-positive
/// numerics all throw ConfigError naming the offending key.
RunConfig parse_config(const std::string& json_text);
RunConfig parse_config_file(const std::string& path);

/// Re-validates a config assembled from flags; throws ConfigError.
void validate(const RunConfig& cfg);

/// JSON echo of the effective configuration, written next to the reports.
std::string effective_config_json(const RunConfig& cfg);

/// Runs the selected pipeline. Exit codes: 0 success, 1 failed acceptance
/// assertion, 2 usage error, 3 numerical abort.
int dispatch(const RunConfig& cfg);

InitialVorticitySpec make_initial_data(const RunConfig& cfg);

}  // namespace vblob
