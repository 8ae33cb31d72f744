#pragma once

// Batch experiment drivers.  Each experiment reproduces one family of checks
// as a CSV table of rows plus a JSON summary with pass/fail flags against the
// configured tolerances.  Outputs are deterministic given (config, seed,
// build); Monte Carlo estimates come from the counter-based generator.

#include <nlohmann/json_fwd.hpp>

#include <string>
#include <vector>

#include "spinorlab/domain.hpp"

namespace spinorlab {

struct ConfigInvalid : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UpstreamFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kBuildId = "spinorlab 1.0";

struct RunContext {
    uint64_t seed = 1;
    std::string out_dir = "out";
    int threads = 0;  // 0: hardware default
};

struct Outcome {
    std::string experiment;
    std::string claim;  // the statement the experiment exercises
    bool pass = false;
    long rows = 0;
    long failures = 0;
    std::string csv_path;
    std::string json_path;
    std::string detail;  // one-line result description
};

// Experiment ids, in the order the reproduction script runs them.
std::vector<std::string> experiment_ids();

// Runs one experiment from its JSON configuration (already validated common
// fields aside, unknown keys are rejected here).  Throws ConfigInvalid on a
// malformed config and UpstreamFailure when a solver or sampler fails.
Outcome run_experiment(const nlohmann::json& config, const RunContext& ctx);

// Loads a config file, applies overrides, dispatches.  When expected_id is
// nonempty the config must name that experiment.  Returns the process exit
// code contract: 0 pass, 1 tolerance failure, 2 configuration error.
int run_experiment_cli(const std::string& config_path, const RunContext& ctx,
                       const std::string& expected_id = "");

}  // namespace spinorlab
