#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "holonomy/control.hpp"
#include "holonomy/dynamics.hpp"
#include "holonomy/linalg.hpp"
#include "holonomy/table.hpp"

namespace holonomy {

/// Excited-state exposure of one trajectory.
struct PopulationReport {
    double integrated = 0.0;      // s
    double time_averaged = 0.0;   // dimensionless
    double f_tau = 0.0;           // quadrature of sin^2(eta/2) sin^2(chi), s
    std::optional<double> closed_form_value;  // bracket * f_tau when metadata given
};

/// Initial qubit state sin(omega/2)|0> + cos(omega/2) e^{i kappa} |1>.
struct InitialStateMeta {
    double omega = 0.0;
    double kappa = 0.0;
};

/// Overlap |<b|psi>|^2 of the initial state with the bright state, written in
/// the (theta, omega, kappa, varphi) angles:
///   cos^2((theta+omega)/2) + sin(theta) sin(omega) sin^2((varphi+kappa)/2).
double excited_population_bracket(double theta, double omega, double kappa, double varphi);

double f_tau_quadrature(const HolonomicPath& path, std::size_t panels = 4096);
double f_tau_quadrature(const PathFunctions& fns, std::size_t panels = 4096);

/// Trapezoidal integral of the |e> population along a trajectory. When the
/// path and initial-state metadata are supplied, the closed-form value
/// bracket * f(tau) is evaluated as well.
PopulationReport integrated_excited_population(const PropagationResult& traj,
                                               std::size_t e_index,
                                               const HolonomicPath* path = nullptr,
                                               const InitialStateMeta* state = nullptr);

enum class StateSampling { haar, grid };

/// Average of the integrated excited population over initial qubit states,
/// with the two analytic candidates f(tau)/2 and f(tau)/8 reported alongside.
struct AverageIntegratedPopulation {
    double empirical = 0.0;
    double candidate_half_f = 0.0;
    double candidate_eighth_f = 0.0;
    std::string matched;  // "f/2", "f/8" or "neither"
};

AverageIntegratedPopulation average_integrated_population(const HolonomicPath& path,
                                                          StateSampling sampling,
                                                          std::size_t n_samples,
                                                          std::uint64_t seed = 0);

/// Haar-random qubit state (measure-uniform), embedded later as needed.
StateVector sample_haar_qubit(std::uint64_t& rng_state);

/// Population scan over loop counts for one geometric phase, both duration
/// conventions. Columns: k, gamma, schedule, time_avg_pop, integrated_pop_s.
/// The populations come from propagated trajectories averaged over a
/// deterministic (omega, kappa) grid of initial states.
ResultTable constant_chi_population_scan(double gamma, const std::vector<int>& k_list,
                                         EtaProfile profile, double omega0,
                                         std::size_t states_per_axis = 8);

double state_fidelity(const DensityMatrix& rho, const StateVector& target);

/// Gate-fidelity benchmark over initial states cos(zeta)|0> + sin(zeta)|1>.
struct FidelityReport {
    std::vector<double> zeta;
    std::vector<double> fidelity;
    double average = 0.0;
    std::string definition = "state-overlap-average";
    bool partial = false;
    std::vector<std::size_t> failed_indices;

    void to_csv(std::ostream& os) const;           // zeta_rad, fidelity
    std::string summary_json(const std::string& parameters_echo) const;
};

enum class SweepMethod {
    process_map,  // propagate the Lindblad process map once, apply per state
    direct        // propagate every initial state separately
};

struct ZetaSweepSpec {
    PulseSchedule schedule;
    double theta = 0.0;
    double phi = 0.0;
    ComplexMatrix target;  // 2x2 on {|0>,|1>}
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double gamma_phi = 0.0;
    std::size_t n_zeta = 1001;
    SweepMethod method = SweepMethod::process_map;
    IntegratorSettings settings;
    int jobs = 1;
};

FidelityReport gate_fidelity_zeta_sweep(const ZetaSweepSpec& spec);

/// zeta-averaged fidelity against the ideal instantaneous evolution at each
/// retained time; the final entry equals the gate fidelity of the sweep.
struct FidelityDynamics {
    std::vector<double> times;
    std::vector<double> average_fidelity;
    double final_average = 0.0;
};

FidelityDynamics gate_fidelity_dynamics(const ZetaSweepSpec& spec, const HolonomicPath& path);

/// Diagnostic only: |Tr(U_target^dag E)| / 2 for the closed-system qubit
/// block E of the propagated schedule.
double process_fidelity_qubit_block(const ComplexMatrix& target, const PulseSchedule& schedule,
                                    double theta, double phi,
                                    const IntegratorSettings& settings);

}  // namespace holonomy
