#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "holonomy/control.hpp"
#include "holonomy/metrics.hpp"
#include "holonomy/table.hpp"

namespace holonomy {

inline constexpr const char* kToolkitVersion = "0.1.0";

enum class Scenario {
    fig1a,
    fig1b,
    fig2_dynamics,
    fig2_decay_sweep,
    fig2_dephasing_sweep,
    two_qubit_check,
    custom
};

enum class ScheduleConvention { fixed_rate, fixed_amplitude, both };

struct GateSpec {
    std::string label = "NOT";
    double theta = 0.0;
    double gamma = 0.0;
    double phi = 0.0;

    static GateSpec not_gate();
    static GateSpec hadamard();
    static GateSpec custom(double theta, double gamma, double phi);
};

struct SweepSpec {
    std::string param;  // "gamma1" (gamma2 locked to half) or "gamma_phi"
    double min_rad_s = 0.0;
    double max_rad_s = 0.0;
    int points = 10;
};

struct TwoQubitCheckSpec {
    double G = 0.0;               // rad/s
    double omega_over_g = 1.4142135623730951;  // drive amplitude / G
    double delta_factor = 20.0;   // delta = factor * max(G, Omega)
    int n_max = 2;
};

struct ExperimentConfig {
    Scenario scenario = Scenario::custom;
    GateSpec gate = GateSpec::not_gate();
    std::vector<int> k_list;
    ScheduleConvention schedule = ScheduleConvention::both;
    EtaProfile profile = EtaProfile::linear;
    double omega0 = 0.0;     // rad/s
    double gamma1 = 0.0;     // rad/s
    double gamma2 = 0.0;     // rad/s
    double gamma_phi = 0.0;  // rad/s
    std::optional<SweepSpec> sweep;
    TwoQubitCheckSpec two_qubit;
    std::size_t n_zeta = 1001;
    std::uint64_t seed = 0;
    std::string output_dir = "out";
    int jobs = 0;  // 0 = hardware concurrency
    double steps_per_cycle = 200.0;
    std::size_t min_steps = 2000;
    std::size_t retained = 201;
    std::size_t schedule_samples = 4001;

    std::string canonical_json() const;
    std::string config_hash() const;
};

struct ValidationResult {
    ExperimentConfig config;
    std::vector<std::string> errors;
    bool ok() const { return errors.empty(); }
};

/// Parses a JSON config document, applies the experimental defaults and
/// reports every violation, not just the first.
ValidationResult validate_config(const std::string& json_text);

/// Executes the configured scenario and writes its CSV artifacts into
/// config.output_dir. Throws std::runtime_error on numerical failure.
ResultTable run(const ExperimentConfig& config);

/// Rate sweep: one row per sweep point per k per schedule, each holding a
/// full zeta-averaged gate fidelity.
ResultTable sweep(const ExperimentConfig& config);

/// Emits the synthesized pulse schedules for the configured gate.
ResultTable synthesize(const ExperimentConfig& config);

std::vector<ScheduleConvention> selected_schedules(const ExperimentConfig& config);
HolonomicPath make_path(const ExperimentConfig& config, int k, ScheduleConvention convention);
std::string schedule_name(ScheduleConvention convention);

}  // namespace holonomy
