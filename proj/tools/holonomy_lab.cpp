// holonomy-lab: reproduces the population scans, fidelity dynamics,
// decoherence sweeps and two-qubit validation runs as CSV artifacts.

#include <clocale>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "holonomy/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;

std::string read_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot read config file: " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

struct CommonOptions {
    std::string config_path;
    int jobs = -1;
    std::string out_dir;
    std::string schedule;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("config", opts.config_path, "JSON config file")->required();
    cmd->add_option("--jobs", opts.jobs, "worker threads (default: available cores)");
    cmd->add_option("--out", opts.out_dir, "output directory override");
    cmd->add_option("--schedule", opts.schedule,
                    "duration convention: fixed-rate, fixed-amplitude or both")
        ->check(CLI::IsMember({"fixed-rate", "fixed-amplitude", "both"}));
}

int load_config(const CommonOptions& opts, holonomy::ExperimentConfig& config) {
    const holonomy::ValidationResult validated = holonomy::validate_config(read_file(opts.config_path));
    if (!validated.ok()) {
        std::cerr << "config validation failed:\n";
        for (const auto& e : validated.errors) std::cerr << "  - " << e << "\n";
        return kExitValidation;
    }
    config = validated.config;
    if (opts.jobs >= 0) config.jobs = opts.jobs;
    if (!opts.out_dir.empty()) config.output_dir = opts.out_dir;
    if (opts.schedule == "fixed-rate")
        config.schedule = holonomy::ScheduleConvention::fixed_rate;
    else if (opts.schedule == "fixed-amplitude")
        config.schedule = holonomy::ScheduleConvention::fixed_amplitude;
    else if (opts.schedule == "both")
        config.schedule = holonomy::ScheduleConvention::both;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_ALL, "C");
    CLI::App app{"holonomic-gate simulation toolkit"};
    app.require_subcommand(1);

    CommonOptions run_opts, sweep_opts, synth_opts, validate_opts;
    CLI::App* cmd_run = app.add_subcommand("run", "execute a scenario and write CSV artifacts");
    add_common(cmd_run, run_opts);
    CLI::App* cmd_sweep = app.add_subcommand("sweep", "rate sweep with per-point gate fidelities");
    add_common(cmd_sweep, sweep_opts);
    CLI::App* cmd_synth = app.add_subcommand("synth", "emit synthesized pulse-schedule CSVs");
    add_common(cmd_synth, synth_opts);
    CLI::App* cmd_validate = app.add_subcommand("validate", "validate a config and report issues");
    cmd_validate->add_option("config", validate_opts.config_path, "JSON config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        holonomy::ExperimentConfig config;
        if (cmd_validate->parsed()) {
            const holonomy::ValidationResult validated =
                holonomy::validate_config(read_file(validate_opts.config_path));
            if (!validated.ok()) {
                std::cerr << "config validation failed:\n";
                for (const auto& e : validated.errors) std::cerr << "  - " << e << "\n";
                return kExitValidation;
            }
            std::cout << "config ok: scenario ready, hash " << validated.config.config_hash()
                      << "\n";
            return kExitOk;
        }
        if (cmd_run->parsed()) {
            if (const int rc = load_config(run_opts, config); rc != kExitOk) return rc;
            const holonomy::ResultTable table = holonomy::run(config);
            std::cout << "wrote " << table.row_count() << " rows to " << config.output_dir
                      << "\n";
            return kExitOk;
        }
        if (cmd_sweep->parsed()) {
            if (const int rc = load_config(sweep_opts, config); rc != kExitOk) return rc;
            const holonomy::ResultTable table = holonomy::sweep(config);
            std::cout << "wrote " << table.row_count() << " rows to " << config.output_dir
                      << "\n";
            return kExitOk;
        }
        if (cmd_synth->parsed()) {
            if (const int rc = load_config(synth_opts, config); rc != kExitOk) return rc;
            const holonomy::ResultTable table = holonomy::synthesize(config);
            std::cout << "wrote " << table.row_count() << " schedules to " << config.output_dir
                      << "\n";
            return kExitOk;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}
