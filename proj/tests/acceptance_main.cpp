// Acceptance suite: runs every top-level correctness criterion at its pinned
// tolerance and prints one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "holonomy/control.hpp"
#include "holonomy/dynamics.hpp"
#include "holonomy/experiment.hpp"
#include "holonomy/gates.hpp"
#include "holonomy/linalg.hpp"
#include "holonomy/metrics.hpp"
#include "holonomy/util.hpp"

using namespace holonomy;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kOmega0 = 2.0 * kPi * 300e6;  // rad/s
constexpr double kGammaRef = 2.0 * kPi * 8e6;  // rad/s

std::string g_out_dir = "acceptance_out";

ComplexMatrix propagate_full_unitary(const PulseSchedule& schedule, double theta, double phi,
                                     std::size_t min_steps) {
    const HamiltonianModel model = lambda_hamiltonian(schedule, theta, phi);
    const double tau = schedule.tau;
    const std::size_t n_steps = std::max<std::size_t>(min_steps, 2);
    const double h = tau / static_cast<double>(n_steps);
    ComplexMatrix u = ComplexMatrix::identity(3);
    ComplexMatrix ham(3, 3);
    for (std::size_t s = 0; s < n_steps; ++s) {
        const double t = h * static_cast<double>(s);
        model.evaluate_into(t + 0.5 * h, ham);
        u = matmul(expm_hermitian(ham, -h), u);
    }
    return u;
}

ZetaSweepSpec make_sweep_spec(const GateSpec& gate, int k, bool fixed_amplitude, double gamma1,
                              double gamma2, double gamma_phi, double steps_per_cycle = 200.0) {
    const HolonomicPath path =
        fixed_amplitude
            ? HolonomicPath::fixed_amplitude(gate.theta, gate.phi, gate.gamma, k,
                                             EtaProfile::linear, kOmega0)
            : HolonomicPath::fixed_rate(gate.theta, gate.phi, gate.gamma, k, EtaProfile::linear,
                                        kOmega0);
    ZetaSweepSpec spec;
    spec.schedule = synthesize_constant_chi(path, 2001);
    spec.theta = path.theta;
    spec.phi = path.phi;
    spec.target = single_qubit_target(gate.theta, gate.gamma, gate.phi).matrix;
    spec.gamma1 = gamma1;
    spec.gamma2 = gamma2;
    spec.gamma_phi = gamma_phi;
    spec.n_zeta = 1001;
    spec.settings.steps_per_cycle = steps_per_cycle;
    spec.settings.retained = 2;
    spec.jobs = 0;
    return spec;
}

struct CriterionResult {
    bool pass = false;
    std::string detail;
};

// ---------------------------------------------------------------------------
// 1. Propagator equivalence over the (theta, gamma, phi, k, profile) grid.
// ---------------------------------------------------------------------------
CriterionResult criterion_propagator_equivalence() {
    const double thetas[] = {0.0, 0.25 * kPi, 0.5 * kPi};
    const double gammas[] = {0.5 * kPi, kPi, 1.5 * kPi};
    const double phis[] = {0.0, kPi / 3.0};
    const int ks[] = {1, 2, 5};
    const EtaProfile profiles[] = {EtaProfile::linear, EtaProfile::sine_ramp};

    struct Case {
        double theta, gamma, phi;
        int k;
        EtaProfile profile;
    };
    std::vector<Case> cases;
    for (double th : thetas)
        for (double ga : gammas)
            for (double ph : phis)
                for (int k : ks)
                    for (EtaProfile pr : profiles) cases.push_back({th, ga, ph, k, pr});

    std::vector<double> err_closed(cases.size(), 0.0);
    std::vector<double> err_gate(cases.size(), 0.0);
    parallel_for(cases.size(), 0, [&](std::size_t i) {
        const Case& c = cases[i];
        const HolonomicPath path =
            HolonomicPath::fixed_rate(c.theta, c.phi, c.gamma, c.k, c.profile, kOmega0);
        const PulseSchedule schedule = synthesize_constant_chi(path, 4001);
        const ComplexMatrix u_num = propagate_full_unitary(
            schedule, c.theta, c.phi, 6000 * static_cast<std::size_t>(c.k));
        err_closed[i] = max_abs_diff(u_num, closed_form_propagator(path, path.tau));

        const ComplexMatrix target = single_qubit_target(c.theta, c.gamma, c.phi).matrix;
        double gate_err = 0.0;
        const std::size_t rows[2] = {0, 2};
        for (std::size_t a = 0; a < 2; ++a)
            for (std::size_t b = 0; b < 2; ++b)
                gate_err = std::max(gate_err, std::abs(u_num(rows[a], rows[b]) - target(a, b)));
        err_gate[i] = gate_err;
    });

    double worst_closed = 0.0, worst_gate = 0.0;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        worst_closed = std::max(worst_closed, err_closed[i]);
        worst_gate = std::max(worst_gate, err_gate[i]);
    }
    CriterionResult r;
    r.pass = worst_closed <= 1e-6 && worst_gate <= 1e-6;
    std::ostringstream os;
    os << cases.size() << " cases, max |U_num - U_closed| = " << worst_closed
       << ", max qubit-block error vs target gate = " << worst_gate << " (tol 1e-6)";
    r.detail = os.str();
    return r;
}

// ---------------------------------------------------------------------------
// 2. Exact gate constructions.
// ---------------------------------------------------------------------------
CriterionResult criterion_gate_constructions() {
    const ComplexMatrix x = single_qubit_target(0.5 * kPi, kPi, 0.0).matrix;
    const double ex = max_abs_diff(x, ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}));

    const double rt = 1.0 / std::sqrt(2.0);
    const ComplexMatrix h = single_qubit_target(0.25 * kPi, kPi, 0.0).matrix;
    const double eh = max_abs_diff(h, ComplexMatrix::from_rows({{rt, rt}, {rt, -rt}}));

    const ComplexMatrix u = two_qubit_gate(0.5 * kPi, kPi);
    const double eu = max_abs_diff(u, ComplexMatrix::from_rows({{1.0, 0.0, 0.0, 0.0},
                                                                {0.0, 0.0, 1.0, 0.0},
                                                                {0.0, 1.0, 0.0, 0.0},
                                                                {0.0, 0.0, 0.0, -1.0}}));
    CriterionResult r;
    r.pass = ex <= 1e-12 && eh <= 1e-12 && eu <= 1e-12;
    std::ostringstream os;
    os << "X err " << ex << ", Hadamard err " << eh << ", entangling-gate err " << eu
       << " (tol 1e-12)";
    r.detail = os.str();
    return r;
}

// ---------------------------------------------------------------------------
// 3. Gate-fidelity table at the reference decoherence rates.
// ---------------------------------------------------------------------------
struct FidelityTable {
    double values[2][3];  // [gate][k-index]
};

FidelityTable compute_fidelity_table(bool fixed_amplitude, double steps_per_cycle) {
    const GateSpec gates[2] = {GateSpec::not_gate(), GateSpec::hadamard()};
    const int ks[3] = {1, 100, 1000};
    FidelityTable table{};
    for (int g = 0; g < 2; ++g) {
        for (int i = 0; i < 3; ++i) {
            const ZetaSweepSpec spec =
                make_sweep_spec(gates[g], ks[i], fixed_amplitude, kGammaRef, 0.5 * kGammaRef,
                                2.0 * kGammaRef, steps_per_cycle);
            table.values[g][i] = gate_fidelity_zeta_sweep(spec).average;
        }
    }
    return table;
}

FidelityTable g_schedule_b_table{};  // reused by the grid-doubling criterion
bool g_schedule_b_done = false;

CriterionResult criterion_fidelity_table() {
    const double reference[2][3] = {{0.8917, 0.9771, 0.9942}, {0.8901, 0.9775, 0.9934}};
    const char* gate_names[2] = {"NOT", "Hadamard"};
    const int ks[3] = {1, 100, 1000};

    g_schedule_b_table = compute_fidelity_table(true, 200.0);
    g_schedule_b_done = true;

    auto within = [&](const FidelityTable& t, double tol_pp) {
        double worst = 0.0;
        for (int g = 0; g < 2; ++g)
            for (int i = 0; i < 3; ++i)
                worst = std::max(worst, std::abs(t.values[g][i] - reference[g][i]));
        return std::pair<bool, double>{worst <= tol_pp / 100.0, worst};
    };

    std::ostringstream os;
    os << "fixed-amplitude:";
    for (int g = 0; g < 2; ++g)
        for (int i = 0; i < 3; ++i) {
            char buf[96];
            std::snprintf(buf, sizeof(buf), " %s k=%d %.4f (ref %.4f)", gate_names[g], ks[i],
                          g_schedule_b_table.values[g][i], reference[g][i]);
            os << buf;
        }

    // Persist the measured table.
    {
        std::filesystem::create_directories(g_out_dir);
        std::ofstream csv(std::filesystem::path(g_out_dir) / "fidelity_table.csv");
        csv << "gate,k,schedule,avg_fidelity,reference\n";
        for (int g = 0; g < 2; ++g)
            for (int i = 0; i < 3; ++i)
                csv << gate_names[g] << "," << ks[i] << ",fixed-amplitude,"
                    << format_double(g_schedule_b_table.values[g][i]) << ","
                    << format_double(reference[g][i]) << "\n";
    }

    const auto [ok_b, worst_b] = within(g_schedule_b_table, 1.5);
    CriterionResult r;
    if (ok_b) {
        r.pass = true;
        std::ostringstream d;
        d << "schedule fixed-amplitude within " << worst_b * 100.0 << " pp of the reference "
          << "(tol 1.5 pp)." << os.str();
        r.detail = d.str();
        return r;
    }

    const FidelityTable table_a = compute_fidelity_table(false, 200.0);
    const auto [ok_a, worst_a] = within(table_a, 1.5);
    if (ok_a) {
        r.pass = true;
        std::ostringstream d;
        d << "fixed-amplitude missed (worst " << worst_b * 100.0
          << " pp) but fixed-rate is within " << worst_a * 100.0 << " pp." << os.str();
        r.detail = d.str();
        return r;
    }

    // Degraded mode, reported loudly: ordering with minimum gaps.
    bool ordering = true;
    for (int g = 0; g < 2; ++g) {
        const double f1 = g_schedule_b_table.values[g][0];
        const double f100 = g_schedule_b_table.values[g][1];
        const double f1000 = g_schedule_b_table.values[g][2];
        if (!(f100 - f1 >= 0.05 && f1000 - f100 >= 0.01)) ordering = false;
    }
    r.pass = ordering;
    std::ostringstream d;
    d << "DEGRADED: both schedules missed the +-1.5 pp window (fixed-amplitude worst "
      << worst_b * 100.0 << " pp, fixed-rate worst " << worst_a * 100.0
      << " pp); ordering F(1) < F(100) < F(1000) with gaps >= 5 pp and >= 1 pp "
      << (ordering ? "holds" : "fails") << "." << os.str();
    r.detail = d.str();
    return r;
}

// ---------------------------------------------------------------------------
// 4. Population trends versus loop count and geometric phase.
// ---------------------------------------------------------------------------
CriterionResult criterion_population_trends() {
    double worst_rel = 0.0;
    bool monotone_k = true;

    std::vector<int> k_list;
    for (int k = 1; k <= 20; ++k) k_list.push_back(k);
    const ResultTable scan =
        constant_chi_population_scan(kPi, k_list, EtaProfile::linear, kOmega0, 4);
    double prev[2] = {1e30, 1e30};
    for (std::size_t rix = 0; rix < scan.row_count(); ++rix) {
        const auto& row = scan.row(rix);
        const std::int64_t k = std::get<std::int64_t>(row[0]);
        const bool amp = std::get<std::string>(row[2]) == "fixed-amplitude";
        const double avg = std::get<double>(row[3]);
        if (avg >= prev[amp]) monotone_k = false;
        prev[amp] = avg;

        const HolonomicPath path =
            amp ? HolonomicPath::fixed_amplitude(0.5 * kPi, 0.0, kPi, static_cast<int>(k),
                                                 EtaProfile::linear, kOmega0)
                : HolonomicPath::fixed_rate(0.5 * kPi, 0.0, kPi, static_cast<int>(k),
                                            EtaProfile::linear, kOmega0);
        const double quad = 0.5 * f_tau_quadrature(path) / path.tau;
        worst_rel = std::max(worst_rel, std::abs(avg - quad) / quad);
    }

    bool monotone_gamma = true;
    double prev_gamma[2] = {-1.0, -1.0};
    for (int i = 1; i <= 10; ++i) {
        const double gamma = 2.0 * kPi * static_cast<double>(i) / 11.0;
        const ResultTable gscan =
            constant_chi_population_scan(gamma, {10}, EtaProfile::linear, kOmega0, 4);
        for (std::size_t rix = 0; rix < gscan.row_count(); ++rix) {
            const auto& row = gscan.row(rix);
            const bool amp = std::get<std::string>(row[2]) == "fixed-amplitude";
            const double avg = std::get<double>(row[3]);
            if (avg <= prev_gamma[amp]) monotone_gamma = false;
            prev_gamma[amp] = avg;

            const HolonomicPath path =
                amp ? HolonomicPath::fixed_amplitude(0.5 * kPi, 0.0, gamma, 10,
                                                     EtaProfile::linear, kOmega0)
                    : HolonomicPath::fixed_rate(0.5 * kPi, 0.0, gamma, 10, EtaProfile::linear,
                                                kOmega0);
            const double quad = 0.5 * f_tau_quadrature(path) / path.tau;
            worst_rel = std::max(worst_rel, std::abs(avg - quad) / quad);
        }
    }

    CriterionResult r;
    r.pass = monotone_k && monotone_gamma && worst_rel <= 0.01;
    std::ostringstream os;
    os << "decreasing in k: " << (monotone_k ? "yes" : "NO") << ", increasing in gamma: "
       << (monotone_gamma ? "yes" : "NO") << ", worst quadrature mismatch "
       << worst_rel * 100.0 << "% (tol 1%)";
    r.detail = os.str();
    return r;
}

// ---------------------------------------------------------------------------
// 5. Robustness dominance of the suppressed scheme over the baseline.
// ---------------------------------------------------------------------------
CriterionResult criterion_robustness_dominance() {
    const GateSpec gates[2] = {GateSpec::not_gate(), GateSpec::hadamard()};
    bool dominated = true;
    double min_margin = 1e30;
    for (const GateSpec& gate : gates) {
        for (const bool dephasing : {false, true}) {
            for (int p = 0; p < 10; ++p) {
                const double frac = static_cast<double>(p) / 9.0;
                double gamma1 = kGammaRef, gamma_phi = 2.0 * kGammaRef;
                if (dephasing)
                    gamma_phi = frac * 8.0 * kGammaRef;
                else
                    gamma1 = frac * 4.0 * kGammaRef;
                const double gamma2 = 0.5 * gamma1;

                double f[2];
                int idx = 0;
                for (int k : {1, 100}) {
                    const ZetaSweepSpec spec =
                        make_sweep_spec(gate, k, true, gamma1, gamma2, gamma_phi);
                    f[idx++] = gate_fidelity_zeta_sweep(spec).average;
                }
                min_margin = std::min(min_margin, f[1] - f[0]);
                if (f[1] < f[0]) dominated = false;
            }
        }
    }
    CriterionResult r;
    r.pass = dominated;
    std::ostringstream os;
    os << "F(k=100) - F(k=1) >= " << min_margin << " across 40 sweep points (must be >= 0)";
    r.detail = os.str();
    return r;
}

// ---------------------------------------------------------------------------
// 6. Lindblad integrator correctness.
// ---------------------------------------------------------------------------
CriterionResult criterion_lindblad_correctness() {
    std::ostringstream os;
    bool pass = true;

    PulseSchedule idle;
    idle.tau = 60e-9;
    idle.t = {0.0, 60e-9};
    idle.omega = {0.0, 0.0};
    idle.delta = {0.0, 0.0};
    idle.phi1 = {0.0, 0.0};
    idle.xi = {0.5 * kPi, 0.5 * kPi};
    const HamiltonianModel model = lambda_hamiltonian(idle, 0.5 * kPi, 0.0);

    IntegratorSettings settings;
    settings.min_steps = 6000;
    settings.retained = 61;

    // Pure decay oracle.
    {
        DensityMatrix rho0(3);
        rho0(1, 1) = 1.0;
        const PropagationResult traj = propagate_lindblad(
            model, lambda_decoherence_channels(kGammaRef, 0.5 * kGammaRef, 0.0), rho0,
            TimeSpan{0.0, idle.tau}, settings);
        double worst = 0.0;
        for (std::size_t i = 0; i < traj.times.size(); ++i)
            worst = std::max(worst, std::abs(traj.densities[i](1, 1).real() -
                                             std::exp(-1.5 * kGammaRef * traj.times[i])));
        os << "decay err " << worst;
        if (worst > 1e-8 || traj.failed) pass = false;
    }

    // Pure dephasing oracle.
    {
        StateVector psi(3);
        psi[0] = std::sqrt(0.5);
        psi[1] = std::sqrt(0.5);
        const PropagationResult traj = propagate_lindblad(
            model, lambda_decoherence_channels(0.0, 0.0, 2.0 * kGammaRef),
            DensityMatrix::pure(psi), TimeSpan{0.0, idle.tau}, settings);
        double worst = 0.0;
        for (std::size_t i = 0; i < traj.times.size(); ++i)
            worst = std::max(worst, std::abs(traj.densities[i](0, 1).real() -
                                             0.5 * std::exp(-2.0 * kGammaRef * traj.times[i])));
        os << ", dephasing err " << worst;
        if (worst > 1e-8 || traj.failed) pass = false;
    }

    // Trace and positivity diagnostics along representative driven
    // trajectories of the fidelity benchmark.
    {
        const HolonomicPath path = HolonomicPath::fixed_amplitude(0.5 * kPi, 0.0, kPi, 100,
                                                                  EtaProfile::linear, kOmega0);
        const PulseSchedule schedule = synthesize_constant_chi(path, 2001);
        const HamiltonianModel driven = lambda_hamiltonian(schedule, path.theta, path.phi);
        const auto channels =
            lambda_decoherence_channels(kGammaRef, 0.5 * kGammaRef, 2.0 * kGammaRef);
        IntegratorSettings drive_settings;
        drive_settings.retained = 51;
        double worst_trace = 0.0, worst_eig = 0.0;
        for (int j = 0; j < 11; ++j) {
            const double zeta = 2.0 * kPi * j / 10.0;
            StateVector q(2);
            q[0] = std::cos(zeta);
            q[1] = std::sin(zeta);
            const PropagationResult traj =
                propagate_lindblad(driven, channels, DensityMatrix::pure(embed_qubit(q)),
                                   TimeSpan{0.0, path.tau}, drive_settings);
            if (traj.failed) pass = false;
            for (std::size_t s = 0; s < traj.densities.size(); ++s) {
                worst_trace = std::max(worst_trace, traj.deviations[s]);
                worst_eig = std::min(worst_eig, traj.densities[s].min_eigenvalue());
            }
        }
        os << ", max trace dev " << worst_trace << " (tol 1e-9), min eigenvalue " << worst_eig
           << " (tol -1e-8)";
        if (worst_trace > 1e-9 || worst_eig < -1e-8) pass = false;
    }

    // Grid doubling on the reported fidelity table.
    {
        if (!g_schedule_b_done) {
            g_schedule_b_table = compute_fidelity_table(true, 200.0);
            g_schedule_b_done = true;
        }
        const FidelityTable doubled = compute_fidelity_table(true, 400.0);
        double worst = 0.0;
        for (int g = 0; g < 2; ++g)
            for (int i = 0; i < 3; ++i)
                worst = std::max(worst,
                                 std::abs(doubled.values[g][i] - g_schedule_b_table.values[g][i]));
        os << ", fidelity grid-doubling change " << worst << " (tol 1e-6)";
        if (worst > 1e-6) pass = false;
    }

    // Schrodinger grid doubling.
    {
        const HolonomicPath path =
            HolonomicPath::fixed_rate(0.25 * kPi, 0.0, kPi, 2, EtaProfile::sine_ramp, kOmega0);
        const PulseSchedule schedule = synthesize_constant_chi(path, 4001);
        const HamiltonianModel driven = lambda_hamiltonian(schedule, path.theta, path.phi);
        double fid[2];
        int idx = 0;
        for (std::size_t steps : {std::size_t{12000}, std::size_t{24000}}) {
            IntegratorSettings s;
            s.min_steps = steps;
            s.retained = 2;
            const PropagationResult traj = propagate_schrodinger(
                driven, StateVector::basis(3, 0), TimeSpan{0.0, path.tau}, s);
            const StateVector target =
                apply(closed_form_propagator(path, path.tau), StateVector::basis(3, 0));
            fid[idx++] = std::norm(inner(target, traj.states.back()));
        }
        const double change = std::abs(fid[0] - fid[1]);
        os << ", closed-system grid-doubling change " << change << " (tol 1e-7)";
        if (change > 1e-7) pass = false;
    }

    CriterionResult r;
    r.pass = pass;
    r.detail = os.str();
    return r;
}

// ---------------------------------------------------------------------------
// 7. State-averaged excited population: Monte-Carlo identity and the
//    normalization candidates.
// ---------------------------------------------------------------------------
CriterionResult criterion_population_averaging() {
    const HolonomicPath path =
        HolonomicPath::fixed_amplitude(0.5 * kPi, 0.0, kPi, 3, EtaProfile::linear, kOmega0);
    const PulseSchedule schedule = synthesize_constant_chi(path, 2001);
    const HamiltonianModel model = lambda_hamiltonian(schedule, path.theta, path.phi);

    IntegratorSettings settings;
    settings.min_steps = 20000;
    settings.retained = 21;

    // Propagator at 21 sample times via the integrator.
    std::vector<ComplexMatrix> u_num;
    {
        std::vector<PropagationResult> cols;
        for (std::size_t c = 0; c < 3; ++c)
            cols.push_back(propagate_schrodinger(model, StateVector::basis(3, c),
                                                 TimeSpan{0.0, path.tau}, settings));
        for (std::size_t s = 0; s < cols[0].times.size(); ++s) {
            ComplexMatrix u(3, 3);
            for (std::size_t c = 0; c < 3; ++c)
                for (std::size_t rix = 0; rix < 3; ++rix) u(rix, c) = cols[c].states[s][rix];
            u_num.push_back(u);
        }
        settings.retained = cols[0].times.size();
    }

    const std::size_t n_samples = 10000;
    std::uint64_t rng = 2024;
    std::vector<StateVector> samples;
    samples.reserve(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i)
        samples.push_back(embed_qubit(sample_haar_qubit(rng)));

    bool pass = true;
    double worst_sigma = 0.0;
    const std::vector<double>* times = nullptr;
    const PropagationResult probe = propagate_schrodinger(
        model, StateVector::basis(3, 0), TimeSpan{0.0, path.tau}, settings);
    times = &probe.times;

    for (std::size_t s = 1; s < u_num.size(); ++s) {  // skip t = 0 (zero variance)
        const double t = (*times)[s];
        double mean = 0.0, m2 = 0.0;
        std::size_t count = 0;
        for (const auto& psi : samples) {
            const StateVector evolved = apply(u_num[s], psi);
            const double p = std::norm(evolved[1]);
            ++count;
            const double d = p - mean;
            mean += d / static_cast<double>(count);
            m2 += d * (p - mean);
        }
        const double sigma_mean =
            std::sqrt(m2 / static_cast<double>(n_samples - 1) / static_cast<double>(n_samples));
        const double sh = std::sin(0.5 * path.eta(t));
        const double expected = 0.5 * sh * sh * std::sin(path.chi) * std::sin(path.chi);
        // Absolute floor guards the loop-closure samples, where the exact
        // population is zero and the estimator variance collapses.
        const double pull = std::abs(mean - expected) / (sigma_mean + 1e-9);
        worst_sigma = std::max(worst_sigma, pull);
        if (pull > 3.0) pass = false;
    }

    // Normalization candidates for the state-averaged integrated population.
    const AverageIntegratedPopulation haar =
        average_integrated_population(path, StateSampling::haar, 10000, 77);
    const AverageIntegratedPopulation grid =
        average_integrated_population(path, StateSampling::grid, 1024, 0);

    {
        std::filesystem::create_directories(g_out_dir);
        std::ofstream txt(std::filesystem::path(g_out_dir) / "population_average_report.txt");
        txt << "empirical Haar average:     " << haar.empirical << "\n"
            << "empirical grid average:     " << grid.empirical << "\n"
            << "candidate f(tau)/2:         " << haar.candidate_half_f << "\n"
            << "candidate f(tau)/8:         " << haar.candidate_eighth_f << "\n"
            << "matched (Haar):             " << haar.matched << "\n"
            << "matched (grid):             " << grid.matched << "\n";
    }

    CriterionResult r;
    r.pass = pass && haar.matched == "f/2" && grid.matched == "f/2";
    std::ostringstream os;
    os << "worst Monte-Carlo pull " << worst_sigma << " sigma (tol 3), integrated average "
       << "matches f(tau)/2 under Haar and grid sampling (f/8 candidate off by factor "
       << haar.empirical / haar.candidate_eighth_f << ", reported in "
       << "population_average_report.txt)";
    r.detail = os.str();
    return r;
}

// ---------------------------------------------------------------------------
// 8. Two-qubit effective model against the full cavity model.
// ---------------------------------------------------------------------------
CriterionResult criterion_two_qubit() {
    ValidationResult v = validate_config(R"({"scenario": "two-qubit-check"})");
    if (!v.ok()) {
        CriterionResult r;
        r.detail = "internal config invalid";
        return r;
    }
    v.config.output_dir = g_out_dir;
    const ResultTable table = run(v.config);

    bool pass = true;
    double min_f = 1.0, max_leak = 0.0;
    for (std::size_t i = 0; i < table.row_count(); ++i) {
        const auto& row = table.row(i);
        const std::string check = std::get<std::string>(row[0]);
        const double value = std::get<double>(row[2]);
        const std::string status = std::get<std::string>(row[4]);
        if (check == "full_vs_effective_fidelity") min_f = std::min(min_f, value);
        if (check == "photon_truncation_leakage") max_leak = std::max(max_leak, value);
        if (status != "ok") pass = false;
    }
    CriterionResult r;
    r.pass = pass;
    std::ostringstream os;
    os << "min full-vs-effective fidelity " << min_f << " (tol 0.99), max photon-manifold "
       << "leakage " << max_leak << " (tol 1e-3), gate match rows in two_qubit_check.csv";
    r.detail = os.str();
    return r;
}

// ---------------------------------------------------------------------------
// 9. Determinism of the CSV artifacts.
// ---------------------------------------------------------------------------
std::string strip_timestamp_lines(const std::string& text) {
    std::istringstream is(text);
    std::ostringstream os;
    std::string line;
    while (std::getline(is, line))
        if (line.rfind("# generated:", 0) != 0) os << line << "\n";
    return os.str();
}

CriterionResult criterion_determinism() {
    const std::string cfg = R"({
        "scenario": "fig2-dynamics",
        "gate": "NOT",
        "k_list": [1, 5],
        "n_zeta": 101,
        "retained": 21,
        "schedule_samples": 201,
        "seed": 42,
        "output_dir": "PLACEHOLDER"
    })";

    bool pass = true;
    std::ostringstream os;
    std::string bodies[2];
    for (int rep = 0; rep < 2; ++rep) {
        ValidationResult v = validate_config(cfg);
        if (!v.ok()) {
            CriterionResult r;
            r.detail = "internal config invalid";
            return r;
        }
        v.config.output_dir =
            (std::filesystem::path(g_out_dir) / ("determinism_" + std::to_string(rep))).string();
        run(v.config);
        std::ifstream is(std::filesystem::path(v.config.output_dir) / "fig2_dynamics.csv");
        std::ostringstream ss;
        ss << is.rdbuf();
        bodies[rep] = strip_timestamp_lines(ss.str());
    }
    if (bodies[0].empty() || bodies[0] != bodies[1]) pass = false;
    os << "fig2-dynamics rerun bodies " << (pass ? "byte-identical" : "DIFFER") << " ("
       << bodies[0].size() << " bytes)";
    CriterionResult r;
    r.pass = pass;
    r.detail = os.str();
    return r;
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; i += 2)
        if (std::string(argv[i]) == "--out") g_out_dir = argv[i + 1];
    std::filesystem::create_directories(g_out_dir);

    struct Entry {
        int id;
        const char* name;
        std::function<CriterionResult()> fn;
    };
    const std::vector<Entry> criteria = {
        {1, "propagator equivalence", criterion_propagator_equivalence},
        {2, "gate constructions", criterion_gate_constructions},
        {3, "gate-fidelity table", criterion_fidelity_table},
        {4, "population trends", criterion_population_trends},
        {5, "robustness dominance", criterion_robustness_dominance},
        {6, "Lindblad integrator correctness", criterion_lindblad_correctness},
        {7, "excited-population averaging", criterion_population_averaging},
        {8, "two-qubit effective model", criterion_two_qubit},
        {9, "CSV determinism", criterion_determinism},
    };

    int failures = 0;
    for (const auto& entry : criteria) {
        const auto start = std::chrono::steady_clock::now();
        CriterionResult result;
        try {
            result = entry.fn();
        } catch (const std::exception& e) {
            result.pass = false;
            result.detail = std::string("exception: ") + e.what();
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] criterion %d: %s — %s (%.1f s)\n", result.pass ? "PASS" : "FAIL",
                    entry.id, entry.name, result.detail.c_str(), seconds);
        std::fflush(stdout);
        if (!result.pass) ++failures;
    }
    if (failures == 0)
        std::printf("all %zu acceptance criteria passed\n", criteria.size());
    else
        std::printf("%d acceptance criteria FAILED\n", failures);
    return failures;
}
