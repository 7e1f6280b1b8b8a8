// Batch experiment runner. Reads a JSON experiment config, executes it, and
// writes <prefix>.json plus, for tabular kinds, <prefix>.csv.
//
// CSV columns:
//   scaling     -> N,ideal_survival,exact_ground_probability,failure,min_gap
//   gap-profile -> j,s,gap,degenerate
//
// ADIASIM_THREADS overrides the worker thread count (default 1).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "adiasim/experiment.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw adiasim::Error("cannot read config file \"" + path + "\"");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

int thread_count_from_env() {
    const char* env = std::getenv("ADIASIM_THREADS");
    if (env == nullptr || *env == '\0') return 1;
    const long parsed = std::strtol(env, nullptr, 10);
    return parsed >= 1 ? static_cast<int>(parsed) : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Measurement-driven ground-state transport experiments.\n"
        "Config schema: see README. CSV columns: scaling -> "
        "N,ideal_survival,exact_ground_probability,failure,min_gap; "
        "gap-profile -> j,s,gap,degenerate.\n"
        "Environment: ADIASIM_THREADS overrides the worker thread count."};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;

    CLI::App* run = app.add_subcommand(
        "run", "Execute the experiment in a JSON config and write <prefix>.json[/.csv]");
    run->add_option("--config", config_path, "JSON experiment config file")->required();
    run->add_option("--out", out_override, "Output path prefix (overrides the config's \"out\")");

    CLI::App* validate =
        app.add_subcommand("validate", "Parse and validate a config without running it");
    validate->add_option("--config", config_path, "JSON experiment config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        const adiasim::ExperimentConfig parsed = adiasim::parse_config(read_file(config_path));
        if (validate->parsed()) {
            std::cout << "config valid: kind=" << adiasim::to_string(parsed.kind) << ", dim="
                      << parsed.X.dim() << "\n";
            return 0;
        }
        adiasim::ExperimentConfig cfg = parsed;
        if (!out_override.empty()) cfg.out_prefix = out_override;
        const adiasim::RunOutcome outcome = adiasim::run_experiment(cfg, thread_count_from_env());
        std::cout << outcome.summary << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
