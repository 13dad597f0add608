#include "holonomy/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "holonomy/util.hpp"

namespace holonomy {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double simpson(const std::function<double(double)>& f, double a, double b, std::size_t panels) {
    const double h = (b - a) / static_cast<double>(panels);
    double acc = 0.0;
    for (std::size_t i = 0; i < panels; ++i) {
        const double lo = a + h * static_cast<double>(i);
        acc += f(lo) + 4.0 * f(lo + 0.5 * h) + f(lo + h);
    }
    return acc * h / 6.0;
}

StateVector zeta_state(double zeta) {
    StateVector q(2);
    q[0] = std::cos(zeta);
    q[1] = std::sin(zeta);
    return q;
}

}  // namespace

double excited_population_bracket(double theta, double omega, double kappa, double varphi) {
    const double c = std::cos(0.5 * (theta + omega));
    const double s = std::sin(0.5 * (varphi + kappa));
    return c * c + std::sin(theta) * std::sin(omega) * s * s;
}

double f_tau_quadrature(const HolonomicPath& path, std::size_t panels) {
    const double sin2_chi = std::sin(path.chi) * std::sin(path.chi);
    return simpson(
        [&](double t) {
            const double sh = std::sin(0.5 * path.eta(t));
            return sh * sh * sin2_chi;
        },
        0.0, path.tau, std::max<std::size_t>(panels, 64 * static_cast<std::size_t>(path.k)));
}

double f_tau_quadrature(const PathFunctions& fns, std::size_t panels) {
    return simpson(
        [&](double t) {
            const double sh = std::sin(0.5 * fns.eta(t));
            const double sc = std::sin(fns.chi(t));
            return sh * sh * sc * sc;
        },
        0.0, fns.tau, panels);
}

PopulationReport integrated_excited_population(const PropagationResult& traj,
                                               std::size_t e_index, const HolonomicPath* path,
                                               const InitialStateMeta* state) {
    if (traj.times.size() < 2)
        throw std::invalid_argument("integrated_excited_population: trajectory too short");
    PopulationReport report;
    double integral = 0.0;
    for (std::size_t i = 1; i < traj.times.size(); ++i) {
        const double p0 = traj.excited_population(i - 1, e_index);
        const double p1 = traj.excited_population(i, e_index);
        integral += 0.5 * (p0 + p1) * (traj.times[i] - traj.times[i - 1]);
    }
    report.integrated = integral;
    const double span = traj.times.back() - traj.times.front();
    report.time_averaged = span > 0.0 ? integral / span : 0.0;
    if (path != nullptr) {
        report.f_tau = f_tau_quadrature(*path);
        if (state != nullptr) {
            const double bracket = excited_population_bracket(path->theta, state->omega,
                                                              state->kappa, path->phi);
            report.closed_form_value = bracket * report.f_tau;
        }
    }
    return report;
}

StateVector sample_haar_qubit(std::uint64_t& rng_state) {
    // For a Haar-random qubit state the population of |0> is uniform on [0,1]
    // and the relative phase is uniform on [0, 2*pi).
    const double z = uniform01(rng_state);
    const double kappa = kTwoPi * uniform01(rng_state);
    StateVector q(2);
    q[0] = std::sqrt(z);
    q[1] = std::sqrt(1.0 - z) * std::polar(1.0, kappa);
    return q;
}

AverageIntegratedPopulation average_integrated_population(const HolonomicPath& path,
                                                          StateSampling sampling,
                                                          std::size_t n_samples,
                                                          std::uint64_t seed) {
    if (n_samples == 0)
        throw std::invalid_argument("average_integrated_population: need at least one sample");

    // Quadrature grid over the loop; the |e> row of the propagator gives the
    // instantaneous excited population of each initial state.
    const std::size_t panels = std::min<std::size_t>(
        1 << 20, std::max<std::size_t>(512, 128 * static_cast<std::size_t>(path.k)));

    std::vector<StateVector> samples;
    samples.reserve(n_samples);
    if (sampling == StateSampling::haar) {
        std::uint64_t rng = seed ^ 0x5bd1e995u;
        for (std::size_t i = 0; i < n_samples; ++i) samples.push_back(sample_haar_qubit(rng));
    } else {
        const std::size_t per_axis =
            std::max<std::size_t>(2, static_cast<std::size_t>(std::lround(std::sqrt(
                                         static_cast<double>(n_samples)))));
        for (std::size_t i = 0; i < per_axis; ++i) {
            const double omega = kPi * (static_cast<double>(i) + 0.5) / static_cast<double>(per_axis);
            for (std::size_t j = 0; j < per_axis; ++j) {
                const double kappa =
                    kTwoPi * (static_cast<double>(j) + 0.5) / static_cast<double>(per_axis);
                StateVector q(2);
                q[0] = std::sin(0.5 * omega);
                q[1] = std::cos(0.5 * omega) * std::polar(1.0, kappa);
                samples.push_back(q);
            }
        }
    }

    // Integrated population per state: Simpson over |<e|U(t)|psi>|^2.
    const auto [bright, dark] = bright_dark_basis(path.theta, path.phi);
    double acc = 0.0;
    for (const auto& q : samples) {
        const double overlap = std::norm(inner(bright, q));
        acc += overlap;
    }
    const double mean_overlap = acc / static_cast<double>(samples.size());

    const double sin2_chi = std::sin(path.chi) * std::sin(path.chi);
    const double f_tau = simpson(
        [&](double t) {
            const double sh = std::sin(0.5 * path.eta(t));
            return sh * sh * sin2_chi;
        },
        0.0, path.tau, panels);

    AverageIntegratedPopulation out;
    out.empirical = mean_overlap * f_tau;
    out.candidate_half_f = 0.5 * f_tau;
    out.candidate_eighth_f = f_tau / 8.0;
    const double err_half = std::abs(out.empirical - out.candidate_half_f);
    const double err_eighth = std::abs(out.empirical - out.candidate_eighth_f);
    if (err_half <= 0.05 * out.candidate_half_f)
        out.matched = "f/2";
    else if (err_eighth <= 0.05 * out.candidate_eighth_f)
        out.matched = "f/8";
    else
        out.matched = "neither";
    return out;
}

ResultTable constant_chi_population_scan(double gamma, const std::vector<int>& k_list,
                                         EtaProfile profile, double omega0,
                                         std::size_t states_per_axis) {
    ResultTable table({"k", "gamma", "schedule", "time_avg_pop", "integrated_pop_s"});
    const double theta = 0.5 * kPi;
    const double phi = 0.0;

    for (int k : k_list) {
        for (const bool fixed_amplitude : {false, true}) {
            const HolonomicPath path =
                fixed_amplitude
                    ? HolonomicPath::fixed_amplitude(theta, phi, gamma, k, profile, omega0)
                    : HolonomicPath::fixed_rate(theta, phi, gamma, k, profile, omega0);
            const PulseSchedule schedule = synthesize_constant_chi(path, 1025);
            const HamiltonianModel model = lambda_hamiltonian(schedule, theta, phi);

            IntegratorSettings settings;
            settings.retained = std::min<std::size_t>(
                4097, 64 * static_cast<std::size_t>(k) + 1);

            // Midpoint grid over (omega, kappa); the kappa average removes the
            // bright-phase cross term exactly, the omega average the
            // cos(theta)cos(omega) term.
            double sum = 0.0;
            std::size_t count = 0;
            for (std::size_t i = 0; i < states_per_axis; ++i) {
                const double omega_angle =
                    kPi * (static_cast<double>(i) + 0.5) / static_cast<double>(states_per_axis);
                for (std::size_t j = 0; j < states_per_axis; ++j) {
                    const double kappa = kTwoPi * (static_cast<double>(j) + 0.5) /
                                         static_cast<double>(states_per_axis);
                    StateVector q(2);
                    q[0] = std::sin(0.5 * omega_angle);
                    q[1] = std::cos(0.5 * omega_angle) * std::polar(1.0, kappa);
                    const PropagationResult traj = propagate_schrodinger(
                        model, embed_qubit(q), TimeSpan{0.0, path.tau}, settings);
                    const PopulationReport rep = integrated_excited_population(traj, 1);
                    sum += rep.integrated;
                    ++count;
                }
            }
            const double integrated = sum / static_cast<double>(count);
            table.add_row({static_cast<std::int64_t>(k), gamma,
                           std::string(fixed_amplitude ? "fixed-amplitude" : "fixed-rate"),
                           integrated / path.tau, integrated});
        }
    }
    return table;
}

double state_fidelity(const DensityMatrix& rho, const StateVector& target) {
    if (rho.dim() != target.dim())
        throw std::invalid_argument("state_fidelity: dimension mismatch");
    cplx acc = 0.0;
    for (std::size_t i = 0; i < rho.dim(); ++i)
        for (std::size_t j = 0; j < rho.dim(); ++j)
            acc += std::conj(target[i]) * rho(i, j) * target[j];
    return std::clamp(acc.real(), 0.0, 1.0);
}

void FidelityReport::to_csv(std::ostream& os) const {
    os << "zeta_rad, fidelity\n";
    char buf[80];
    for (std::size_t i = 0; i < zeta.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", zeta[i], fidelity[i]);
        os << buf;
    }
}

std::string FidelityReport::summary_json(const std::string& parameters_echo) const {
    nlohmann::json j;
    j["average"] = average;
    j["min"] = fidelity.empty() ? 0.0 : *std::min_element(fidelity.begin(), fidelity.end());
    j["max"] = fidelity.empty() ? 0.0 : *std::max_element(fidelity.begin(), fidelity.end());
    j["definition"] = definition;
    j["n_states"] = zeta.size();
    j["partial"] = partial;
    j["parameters"] = parameters_echo;
    return j.dump(2);
}

namespace {

struct SweepContext {
    const ZetaSweepSpec& spec;
    HamiltonianModel model;
    std::vector<LindbladChannel> channels;

    explicit SweepContext(const ZetaSweepSpec& s)
        : spec(s),
          model(lambda_hamiltonian(s.schedule, s.theta, s.phi)),
          channels(lambda_decoherence_channels(s.gamma1, s.gamma2, s.gamma_phi)) {
        if (s.target.rows() != 2 || s.target.cols() != 2)
            throw std::invalid_argument("gate_fidelity_zeta_sweep: target must be 2x2");
        if (s.n_zeta < 2)
            throw std::invalid_argument("gate_fidelity_zeta_sweep: need at least two states");
    }

    double zeta_at(std::size_t i) const {
        return kTwoPi * static_cast<double>(i) / static_cast<double>(spec.n_zeta - 1);
    }
    StateVector initial_qubit(std::size_t i) const { return zeta_state(zeta_at(i)); }
    StateVector target_state(std::size_t i) const {
        return embed_qubit(apply(spec.target, initial_qubit(i)));
    }
};

}  // namespace

FidelityReport gate_fidelity_zeta_sweep(const ZetaSweepSpec& spec) {
    SweepContext ctx(spec);
    FidelityReport report;
    report.zeta.resize(spec.n_zeta);
    report.fidelity.assign(spec.n_zeta, 0.0);

    const TimeSpan span{0.0, spec.schedule.tau};

    if (spec.method == SweepMethod::process_map) {
        IntegratorSettings map_settings = spec.settings;
        map_settings.retained = 2;
        const ProcessMapTrajectory traj =
            propagate_lindblad_map(ctx.model, ctx.channels, span, map_settings);
        const std::size_t last = traj.maps.size() - 1;
        std::vector<std::uint8_t> failed(spec.n_zeta, 0);
        parallel_for(spec.n_zeta, spec.jobs, [&](std::size_t i) {
            const StateVector psi0 = embed_qubit(ctx.initial_qubit(i));
            const DensityMatrix rho_tau = traj.apply(last, DensityMatrix::pure(psi0));
            report.zeta[i] = ctx.zeta_at(i);
            report.fidelity[i] = state_fidelity(rho_tau, ctx.target_state(i));
            if (rho_tau.trace_deviation() > spec.settings.trace_tol ||
                rho_tau.min_eigenvalue() < spec.settings.positivity_tol)
                failed[i] = 1;
        });
        for (std::size_t i = 0; i < spec.n_zeta; ++i)
            if (failed[i]) report.failed_indices.push_back(i);
    } else {
        std::vector<std::uint8_t> failed(spec.n_zeta, 0);
        parallel_for(spec.n_zeta, spec.jobs, [&](std::size_t i) {
            const StateVector psi0 = embed_qubit(ctx.initial_qubit(i));
            const PropagationResult traj = propagate_lindblad(
                ctx.model, ctx.channels, DensityMatrix::pure(psi0), span, spec.settings);
            report.zeta[i] = ctx.zeta_at(i);
            report.fidelity[i] = state_fidelity(traj.densities.back(), ctx.target_state(i));
            if (traj.failed) failed[i] = 1;
        });
        for (std::size_t i = 0; i < spec.n_zeta; ++i)
            if (failed[i]) report.failed_indices.push_back(i);
    }

    report.partial = !report.failed_indices.empty();
    double acc = 0.0;
    for (double f : report.fidelity) acc += f;
    report.average = acc / static_cast<double>(spec.n_zeta);
    return report;
}

FidelityDynamics gate_fidelity_dynamics(const ZetaSweepSpec& spec, const HolonomicPath& path) {
    SweepContext ctx(spec);
    const TimeSpan span{0.0, spec.schedule.tau};
    const ProcessMapTrajectory traj =
        propagate_lindblad_map(ctx.model, ctx.channels, span, spec.settings);

    FidelityDynamics dyn;
    dyn.times = traj.times;
    dyn.average_fidelity.assign(traj.times.size(), 0.0);

    std::vector<ComplexMatrix> ideal(traj.times.size());
    for (std::size_t s = 0; s < traj.times.size(); ++s)
        ideal[s] = closed_form_propagator(path, traj.times[s]);

    std::vector<double> acc(traj.times.size(), 0.0);
    const std::size_t n = spec.n_zeta;
    const int jobs = spec.jobs;

    // Deterministic reduction: accumulate per zeta index in order.
    std::vector<std::vector<double>> per_state(n);
    parallel_for(n, jobs, [&](std::size_t i) {
        const StateVector psi0 = embed_qubit(ctx.initial_qubit(i));
        const DensityMatrix rho0 = DensityMatrix::pure(psi0);
        std::vector<double> f(traj.times.size());
        for (std::size_t s = 0; s < traj.times.size(); ++s) {
            const DensityMatrix rho = traj.apply(s, rho0);
            const StateVector target = apply(ideal[s], psi0);
            f[s] = state_fidelity(rho, target);
        }
        per_state[i] = std::move(f);
    });
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t s = 0; s < traj.times.size(); ++s)
            acc[s] += per_state[i][s];
    for (std::size_t s = 0; s < traj.times.size(); ++s)
        dyn.average_fidelity[s] = acc[s] / static_cast<double>(n);
    dyn.final_average = dyn.average_fidelity.back();
    return dyn;
}

double process_fidelity_qubit_block(const ComplexMatrix& target, const PulseSchedule& schedule,
                                    double theta, double phi,
                                    const IntegratorSettings& settings) {
    const HamiltonianModel model = lambda_hamiltonian(schedule, theta, phi);
    IntegratorSettings s = settings;
    s.retained = 2;
    ComplexMatrix block(2, 2);
    const std::size_t basis_index[2] = {0, 2};
    for (std::size_t col = 0; col < 2; ++col) {
        const StateVector psi0 = StateVector::basis(3, basis_index[col]);
        const PropagationResult traj =
            propagate_schrodinger(model, psi0, TimeSpan{0.0, schedule.tau}, s);
        const StateVector& fin = traj.states.back();
        block(0, col) = fin[0];
        block(1, col) = fin[2];
    }
    return std::abs(matmul(target.adjoint(), block).trace()) / 2.0;
}

}  // namespace holonomy
