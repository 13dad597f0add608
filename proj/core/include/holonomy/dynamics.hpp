#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "holonomy/control.hpp"
#include "holonomy/gates.hpp"
#include "holonomy/linalg.hpp"

namespace holonomy {

/// Time-dependent Hamiltonian in angular-frequency units. evaluate_into
/// writes H(t) into a caller-owned buffer so hot loops avoid allocation.
/// max_frequency is the fastest angular scale in the model and drives the
/// default integrator step.
struct HamiltonianModel {
    std::size_t dim = 0;
    std::function<void(double, ComplexMatrix&)> evaluate_into;
    std::string label;
    double max_frequency = 0.0;

    ComplexMatrix evaluate(double t) const;
};

HamiltonianModel make_static_model(const ComplexMatrix& h, std::string label);

/// One dissipation channel: Lindblad operator sqrt(rate) * op.
struct LindbladChannel {
    ComplexMatrix op;
    double rate = 0.0;  // rad/s, >= 0
};

LindbladChannel make_channel(const ComplexMatrix& op, double rate);

/// Decay and dephasing channels of the Lambda system in basis {|0>,|e>,|1>}:
/// |0><e| at rate gamma1, |1><e| at rate gamma2, |e><e| at rate 2*gamma_phi.
std::vector<LindbladChannel> lambda_decoherence_channels(double gamma1, double gamma2,
                                                         double gamma_phi);

struct TimeSpan {
    double t0 = 0.0;
    double t1 = 0.0;
};

enum class SchrodingerStepper { expm_midpoint, rk4 };

struct IntegratorSettings {
    double steps_per_cycle = 200.0;    // steps per 2*pi of the fastest phase
    std::size_t min_steps = 2000;      // lower bound on steps across the span
    std::size_t max_steps = 40000000;  // hard cap
    std::size_t retained = 201;        // samples kept in the result
    SchrodingerStepper stepper = SchrodingerStepper::expm_midpoint;
    double norm_tol = 1e-8;            // Schrodinger failure threshold
    double trace_tol = 1e-7;           // Lindblad failure threshold
    double positivity_tol = -1e-6;     // Lindblad failure threshold
    bool renormalize = false;          // rk4 only: rescale the state each step;
                                       // drift is still monitored beforehand

    std::size_t step_count(const HamiltonianModel& model, double extra_rate, double span) const;
};

/// Retained trajectory samples plus per-sample diagnostics. Exactly one of
/// `states` / `densities` is populated depending on the propagator.
struct PropagationResult {
    std::vector<double> times;
    std::vector<StateVector> states;
    std::vector<DensityMatrix> densities;
    std::vector<double> deviations;  // norm (Schrodinger) or trace (Lindblad) deviation
    bool failed = false;
    std::size_t failed_step = 0;
    std::string failure;

    double excited_population(std::size_t index, std::size_t level) const;
    /// CSV `t_s, <population per basis state>, trace_dev`, 12 significant digits.
    void to_csv(std::ostream& os) const;
};

PropagationResult propagate_schrodinger(const HamiltonianModel& model, const StateVector& psi0,
                                        const TimeSpan& span, const IntegratorSettings& settings);

PropagationResult propagate_lindblad(const HamiltonianModel& model,
                                     const std::vector<LindbladChannel>& channels,
                                     const DensityMatrix& rho0, const TimeSpan& span,
                                     const IntegratorSettings& settings);

/// Process-map propagation: evolves all dim^2 matrix units at once with the
/// same fixed-step RK4 as propagate_lindblad. maps[s] is the dim^2 x dim^2
/// superoperator (row-major vec convention) at the retained time times[s].
struct ProcessMapTrajectory {
    std::vector<double> times;
    std::vector<ComplexMatrix> maps;
    std::size_t dim = 0;

    DensityMatrix apply(std::size_t sample, const DensityMatrix& rho0) const;
};

ProcessMapTrajectory propagate_lindblad_map(const HamiltonianModel& model,
                                            const std::vector<LindbladChannel>& channels,
                                            const TimeSpan& span,
                                            const IntegratorSettings& settings);

/// Lambda-system Hamiltonian driven by a pulse schedule, basis {|0>,|e>,|1>}:
///   H = Omega0/2 e^{i phi0} |0><e| + Omega1/2 e^{i phi1} |1><e| + h.c.
///     + Delta |e><e|
/// with Omega0 = -Omega sin(theta/2), Omega1 = Omega cos(theta/2) and
/// phi0 = phi + phi1, which is the bright-state form
/// H = Omega/2 e^{i phi1} |b><e| + h.c. + Delta |e><e|.
/// Controls are interpolated linearly between schedule samples; evaluation
/// outside [0, tau] is rejected.
HamiltonianModel lambda_hamiltonian(const PulseSchedule& schedule, double theta, double phi);

/// Two emitters coupled to one cavity mode, basis NV1 (x) cavity (x) NV2 with
/// emitter levels ordered {|0>,|e>,|1>} and cavity levels 0..n_max:
///   H(t) = sum_k [ (G_k a |e><0|_k + W_k(t) |e><1|_k) e^{i delta t} + h.c.
///                  + Delta_k |1><1|_k ]
/// W_k is the signed drive amplitude; an optional envelope scales it in time,
/// and an optional detuning modulation replaces the static Delta_k.
struct TwoQubitDrive {
    std::function<double(double)> envelope;          // multiplies Omega1/Omega2
    std::function<double(double)> delta_modulation;  // replaces Delta if set
};

HamiltonianModel two_nv_cavity_hamiltonian(const TwoQubitModel& model,
                                           const TwoQubitDrive& drive = {});

std::size_t two_nv_index(int nv1, int photons, int nv2, int n_max);  // levels {0,e,1} -> {0,1,2}

/// Effective six-level model as a (possibly time-dependent) Hamiltonian.
/// With a loop drive, g~(t) = eta_dot(t) sin(chi)/2 and
/// Delta(t) = -eta_dot(t) cos(chi), which reproduces the two-qubit gate.
HamiltonianModel effective_model(const EffectiveTwoQubitParams& params);
HamiltonianModel effective_loop_model(double Theta, const HolonomicPath& path);

}  // namespace holonomy
