// Batch experiment driver.  Usage:
//   spinorlab <experiment> --config <file> [--seed N] [--out DIR] [--threads N]
// Exit codes: 0 all checks passed, 1 tolerance failure, 2 configuration error.

#include <CLI11.hpp>

#include <cstdlib>

#include "spinorlab/harness.hpp"
#include "spinorlab/kernels.hpp"

int main(int argc, char** argv) {
    CLI::App app{"spinorlab: critical planar spin correlation laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    spinorlab::RunContext overrides;
    overrides.seed = 0;
    overrides.threads = -1;

    // SPINORLAB_THREADS is the fallback when --threads is not given
    if (const char* env = std::getenv("SPINORLAB_THREADS")) overrides.threads = std::atoi(env);

    std::vector<CLI::App*> subs;
    for (const std::string& id : spinorlab::experiment_ids()) {
        CLI::App* sub = app.add_subcommand(id, "run the " + id + " experiment");
        sub->add_option("--config", config_path, "experiment configuration (JSON)")
            ->required();
        sub->add_option("--seed", overrides.seed, "seed override");
        sub->add_option("--out", overrides.out_dir, "output directory override");
        sub->add_option("--threads", overrides.threads, "worker thread override");
        subs.push_back(sub);
    }

    CLI11_PARSE(app, argc, argv);

    std::string chosen = app.get_subcommands().front()->get_name();
    return spinorlab::run_experiment_cli(config_path, overrides, chosen);
}
