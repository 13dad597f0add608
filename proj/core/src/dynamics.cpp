#include "holonomy/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace holonomy {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Deterministic retained-sample bookkeeping: sample s is taken after step
/// round(s * n_steps / (retained-1)).
class SampleClock {
public:
    SampleClock(std::size_t n_steps, std::size_t retained)
        : n_steps_(n_steps), retained_(std::max<std::size_t>(retained, 2)) {}

    bool due(std::size_t step_index) const {
        const std::size_t s = next_;
        if (s >= retained_) return false;
        return step_index == step_for(s);
    }
    void advance() { ++next_; }
    std::size_t step_for(std::size_t sample) const {
        return (sample * n_steps_ + (retained_ - 1) / 2) / (retained_ - 1);
    }

private:
    std::size_t n_steps_;
    std::size_t retained_;
    std::size_t next_ = 0;
};

struct LindbladWork {
    // Precomputed sqrt(rate)-scaled operators, their adjoints and the sum
    // of A^dag A over channels.
    std::vector<ComplexMatrix> a;
    std::vector<ComplexMatrix> a_dag;
    ComplexMatrix adag_a_sum;

    explicit LindbladWork(const std::vector<LindbladChannel>& channels, std::size_t dim) {
        adag_a_sum = ComplexMatrix(dim, dim);
        for (const auto& ch : channels) {
            if (ch.rate < 0.0)
                throw std::invalid_argument("LindbladChannel: rate must be non-negative");
            if (ch.op.rows() != dim || ch.op.cols() != dim)
                throw std::invalid_argument("LindbladChannel: operator dimension mismatch");
            if (ch.rate == 0.0) continue;
            ComplexMatrix scaled = ch.op;
            scaled.scale(std::sqrt(ch.rate));
            a.push_back(scaled);
            a_dag.push_back(scaled.adjoint());
            adag_a_sum.add_scaled(matmul(a_dag.back(), a.back()), 1.0);
        }
    }

    // drho = -i [H, rho] + sum_l (A rho A^dag) - 1/2 {sum A^dag A, rho}
    void rhs(const ComplexMatrix& h, const ComplexMatrix& rho, ComplexMatrix& drho) const {
        drho = matmul(h, rho);
        drho.add_scaled(matmul(rho, h), -1.0);
        drho.scale(cplx(0.0, -1.0));
        for (std::size_t l = 0; l < a.size(); ++l)
            drho.add_scaled(matmul(a[l], matmul(rho, a_dag[l])), 1.0);
        drho.add_scaled(matmul(adag_a_sum, rho), -0.5);
        drho.add_scaled(matmul(rho, adag_a_sum), -0.5);
    }
};

double total_rate(const std::vector<LindbladChannel>& channels) {
    double s = 0.0;
    for (const auto& ch : channels) s += ch.rate;
    return s;
}

}  // namespace

ComplexMatrix HamiltonianModel::evaluate(double t) const {
    ComplexMatrix h(dim, dim);
    evaluate_into(t, h);
    return h;
}

HamiltonianModel make_static_model(const ComplexMatrix& h, std::string label) {
    if (!h.is_square()) throw std::invalid_argument("make_static_model: matrix must be square");
    HamiltonianModel m;
    m.dim = h.rows();
    m.label = std::move(label);
    m.max_frequency = h.max_abs();
    m.evaluate_into = [h](double, ComplexMatrix& out) { out = h; };
    return m;
}

LindbladChannel make_channel(const ComplexMatrix& op, double rate) {
    if (rate < 0.0) throw std::invalid_argument("make_channel: rate must be non-negative");
    return LindbladChannel{op, rate};
}

std::vector<LindbladChannel> lambda_decoherence_channels(double gamma1, double gamma2,
                                                         double gamma_phi) {
    ComplexMatrix l1(3, 3), l2(3, 3), l3(3, 3);
    l1(0, 1) = 1.0;  // |0><e|
    l2(2, 1) = 1.0;  // |1><e|
    l3(1, 1) = 1.0;  // |e><e|
    return {make_channel(l1, gamma1), make_channel(l2, gamma2),
            make_channel(l3, 2.0 * gamma_phi)};
}

std::size_t IntegratorSettings::step_count(const HamiltonianModel& model, double extra_rate,
                                           double span) const {
    const double rate = std::max(model.max_frequency, extra_rate);
    double steps = static_cast<double>(min_steps);
    if (rate > 0.0) steps = std::max(steps, steps_per_cycle * rate * span / kTwoPi);
    steps = std::min(steps, static_cast<double>(max_steps));
    return std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(steps)));
}

double PropagationResult::excited_population(std::size_t index, std::size_t level) const {
    if (!states.empty()) return std::norm(states[index][level]);
    return densities[index](level, level).real();
}

void PropagationResult::to_csv(std::ostream& os) const {
    const std::size_t dim = states.empty() ? (densities.empty() ? 0 : densities.front().dim())
                                           : states.front().dim();
    os << "t_s";
    for (std::size_t j = 0; j < dim; ++j) os << ",p" << j;
    os << ",trace_dev\n";
    char buf[64];
    for (std::size_t i = 0; i < times.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.12g", times[i]);
        os << buf;
        for (std::size_t j = 0; j < dim; ++j) {
            std::snprintf(buf, sizeof(buf), ",%.12g", excited_population(i, j));
            os << buf;
        }
        std::snprintf(buf, sizeof(buf), ",%.12g\n", deviations[i]);
        os << buf;
    }
}

PropagationResult propagate_schrodinger(const HamiltonianModel& model, const StateVector& psi0,
                                        const TimeSpan& span, const IntegratorSettings& settings) {
    if (psi0.dim() != model.dim)
        throw std::invalid_argument("propagate_schrodinger: state dimension mismatch");
    if (std::abs(psi0.norm() - 1.0) > 1e-10)
        throw std::invalid_argument("propagate_schrodinger: initial state is not normalized");

    const double duration = span.t1 - span.t0;
    const std::size_t n_steps = settings.step_count(model, 0.0, duration);
    const double h = duration / static_cast<double>(n_steps);

    PropagationResult result;
    SampleClock clock(n_steps, settings.retained);

    StateVector psi = psi0;
    ComplexMatrix ham(model.dim, model.dim);
    StateVector k1(model.dim), k2(model.dim), k3(model.dim), k4(model.dim), tmp(model.dim);
    double norm_drift = 0.0;  // cumulative when renormalizing

    auto record = [&](std::size_t step) {
        const double t = span.t0 + h * static_cast<double>(step);
        result.times.push_back(t);
        result.states.push_back(psi);
        result.deviations.push_back(settings.renormalize ? norm_drift
                                                         : std::abs(psi.norm() - 1.0));
    };

    auto apply_rhs = [&](const StateVector& in, StateVector& out) {
        for (std::size_t i = 0; i < model.dim; ++i) {
            cplx s = 0.0;
            for (std::size_t j = 0; j < model.dim; ++j) s += ham(i, j) * in[j];
            out[i] = cplx(0.0, -1.0) * s;
        }
    };

    while (clock.due(0)) {
        record(0);
        clock.advance();
    }
    for (std::size_t step = 0; step < n_steps; ++step) {
        const double t = span.t0 + h * static_cast<double>(step);
        if (settings.stepper == SchrodingerStepper::expm_midpoint) {
            model.evaluate_into(t + 0.5 * h, ham);
            const ComplexMatrix u = expm_hermitian(ham, -h);
            psi = apply(u, psi);
        } else {
            model.evaluate_into(t, ham);
            apply_rhs(psi, k1);
            for (std::size_t i = 0; i < model.dim; ++i) tmp[i] = psi[i] + 0.5 * h * k1[i];
            model.evaluate_into(t + 0.5 * h, ham);  // shared by both midpoint stages
            apply_rhs(tmp, k2);
            for (std::size_t i = 0; i < model.dim; ++i) tmp[i] = psi[i] + 0.5 * h * k2[i];
            apply_rhs(tmp, k3);
            for (std::size_t i = 0; i < model.dim; ++i) tmp[i] = psi[i] + h * k3[i];
            model.evaluate_into(t + h, ham);
            apply_rhs(tmp, k4);
            for (std::size_t i = 0; i < model.dim; ++i)
                psi[i] += h / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
        }
        const double norm = psi.norm();
        norm_drift += std::abs(norm - 1.0);
        const double drift =
            settings.renormalize ? norm_drift : std::abs(norm - 1.0);
        if (drift > settings.norm_tol && !result.failed) {
            result.failed = true;
            result.failed_step = step;
            std::ostringstream msg;
            msg << "norm drift " << drift << " at step " << step;
            result.failure = msg.str();
        }
        if (settings.renormalize && norm > 0.0 &&
            settings.stepper == SchrodingerStepper::rk4) {
            for (std::size_t i = 0; i < model.dim; ++i) psi[i] /= norm;
        }
        while (clock.due(step + 1)) {
            record(step + 1);
            clock.advance();
        }
    }
    return result;
}

PropagationResult propagate_lindblad(const HamiltonianModel& model,
                                     const std::vector<LindbladChannel>& channels,
                                     const DensityMatrix& rho0, const TimeSpan& span,
                                     const IntegratorSettings& settings) {
    if (rho0.dim() != model.dim)
        throw std::invalid_argument("propagate_lindblad: density matrix dimension mismatch");
    if (rho0.trace_deviation() > 1e-9 || rho0.hermiticity_deviation() > 1e-9)
        throw std::invalid_argument("propagate_lindblad: initial state is not a density matrix");

    const LindbladWork work(channels, model.dim);
    const double duration = span.t1 - span.t0;
    const std::size_t n_steps = settings.step_count(model, total_rate(channels), duration);
    const double h = duration / static_cast<double>(n_steps);

    PropagationResult result;
    SampleClock clock(n_steps, settings.retained);

    DensityMatrix rho = rho0;
    ComplexMatrix ham(model.dim, model.dim);
    ComplexMatrix k1(model.dim, model.dim), k2(model.dim, model.dim), k3(model.dim, model.dim),
        k4(model.dim, model.dim), stage(model.dim, model.dim);

    auto record = [&](std::size_t step) {
        const double t = span.t0 + h * static_cast<double>(step);
        result.times.push_back(t);
        result.densities.push_back(rho);
        result.deviations.push_back(rho.trace_deviation());
    };

    auto check = [&](std::size_t step) {
        const double tdev = rho.trace_deviation();
        if (tdev > settings.trace_tol && !result.failed) {
            result.failed = true;
            result.failed_step = step;
            std::ostringstream msg;
            msg << "trace drift " << tdev << " at step " << step;
            result.failure = msg.str();
        }
    };

    while (clock.due(0)) {
        record(0);
        clock.advance();
    }
    for (std::size_t step = 0; step < n_steps; ++step) {
        const double t = span.t0 + h * static_cast<double>(step);

        model.evaluate_into(t, ham);
        work.rhs(ham, rho.matrix(), k1);
        stage = rho.matrix();
        stage.add_scaled(k1, 0.5 * h);
        model.evaluate_into(t + 0.5 * h, ham);
        work.rhs(ham, stage, k2);
        stage = rho.matrix();
        stage.add_scaled(k2, 0.5 * h);
        work.rhs(ham, stage, k3);
        stage = rho.matrix();
        stage.add_scaled(k3, h);
        model.evaluate_into(t + h, ham);
        work.rhs(ham, stage, k4);

        rho.matrix().add_scaled(k1, h / 6.0);
        rho.matrix().add_scaled(k2, h / 3.0);
        rho.matrix().add_scaled(k3, h / 3.0);
        rho.matrix().add_scaled(k4, h / 6.0);
        rho.symmetrize();

        check(step);
        while (clock.due(step + 1)) {
            record(step + 1);
            clock.advance();
        }
    }

    // Positivity is verified on the retained samples.
    if (!result.failed) {
        for (std::size_t s = 0; s < result.densities.size(); ++s) {
            if (result.densities[s].min_eigenvalue() < settings.positivity_tol) {
                result.failed = true;
                result.failed_step = s;
                result.failure = "positivity violation at retained sample";
                break;
            }
        }
    }
    return result;
}

DensityMatrix ProcessMapTrajectory::apply(std::size_t sample, const DensityMatrix& rho0) const {
    const ComplexMatrix& map = maps[sample];
    ComplexMatrix out(dim, dim);
    for (std::size_t r = 0; r < dim * dim; ++r) {
        cplx acc = 0.0;
        for (std::size_t c = 0; c < dim * dim; ++c) {
            const cplx rho_c = rho0(c / dim, c % dim);
            if (rho_c == cplx(0.0, 0.0)) continue;
            acc += map(r, c) * rho_c;
        }
        out(r / dim, r % dim) = acc;
    }
    DensityMatrix result(out);
    result.symmetrize();
    return result;
}

ProcessMapTrajectory propagate_lindblad_map(const HamiltonianModel& model,
                                            const std::vector<LindbladChannel>& channels,
                                            const TimeSpan& span,
                                            const IntegratorSettings& settings) {
    const std::size_t dim = model.dim;
    const std::size_t dim2 = dim * dim;
    const LindbladWork work(channels, dim);
    const double duration = span.t1 - span.t0;
    const std::size_t n_steps = settings.step_count(model, total_rate(channels), duration);
    const double h = duration / static_cast<double>(n_steps);

    // Column c of the map is the evolved matrix unit E_{c/dim, c%dim}.
    std::vector<ComplexMatrix> cols(dim2, ComplexMatrix(dim, dim));
    for (std::size_t c = 0; c < dim2; ++c) cols[c](c / dim, c % dim) = 1.0;

    ProcessMapTrajectory traj;
    traj.dim = dim;
    SampleClock clock(n_steps, settings.retained);

    auto record = [&](std::size_t step) {
        const double t = span.t0 + h * static_cast<double>(step);
        ComplexMatrix map(dim2, dim2);
        for (std::size_t c = 0; c < dim2; ++c)
            for (std::size_t r = 0; r < dim2; ++r) map(r, c) = cols[c](r / dim, r % dim);
        traj.times.push_back(t);
        traj.maps.push_back(std::move(map));
    };

    ComplexMatrix ham_a(dim, dim), ham_b(dim, dim), ham_c(dim, dim);
    ComplexMatrix k1(dim, dim), k2(dim, dim), k3(dim, dim), k4(dim, dim), stage(dim, dim);

    while (clock.due(0)) {
        record(0);
        clock.advance();
    }
    for (std::size_t step = 0; step < n_steps; ++step) {
        const double t = span.t0 + h * static_cast<double>(step);
        model.evaluate_into(t, ham_a);
        model.evaluate_into(t + 0.5 * h, ham_b);
        model.evaluate_into(t + h, ham_c);
        for (auto& col : cols) {
            work.rhs(ham_a, col, k1);
            stage = col;
            stage.add_scaled(k1, 0.5 * h);
            work.rhs(ham_b, stage, k2);
            stage = col;
            stage.add_scaled(k2, 0.5 * h);
            work.rhs(ham_b, stage, k3);
            stage = col;
            stage.add_scaled(k3, h);
            work.rhs(ham_c, stage, k4);
            col.add_scaled(k1, h / 6.0);
            col.add_scaled(k2, h / 3.0);
            col.add_scaled(k3, h / 3.0);
            col.add_scaled(k4, h / 6.0);
        }
        while (clock.due(step + 1)) {
            record(step + 1);
            clock.advance();
        }
    }
    return traj;
}

HamiltonianModel lambda_hamiltonian(const PulseSchedule& schedule, double theta, double phi) {
    if (schedule.size() < 2 || schedule.omega.size() != schedule.size() ||
        schedule.delta.size() != schedule.size() || schedule.phi1.size() != schedule.size())
        throw std::invalid_argument("lambda_hamiltonian: inconsistent schedule arrays");

    const double st = std::sin(0.5 * theta);
    const double ct = std::cos(0.5 * theta);
    const double tau = schedule.tau;
    const PulseSchedule sched = schedule;  // owned copy; models outlive callers' schedules

    HamiltonianModel model;
    model.dim = 3;
    model.label = "lambda-system";
    model.max_frequency = std::max(sched.max_abs_omega(), sched.max_abs_delta());
    model.evaluate_into = [sched, st, ct, phi, tau](double t, ComplexMatrix& h) {
        if (t < -1e-12 * tau || t > tau * (1.0 + 1e-12))
            throw std::invalid_argument("lambda_hamiltonian: time outside [0, tau]");
        const double omega = sched.omega_at(t);
        const double delta = sched.delta_at(t);
        const double phi1 = sched.phi1_at(t);
        h.set_zero();
        // Couplings chosen so that <b|H|e> = Omega/2 e^{i phi1}.
        const cplx c0 = -0.5 * omega * st * std::polar(1.0, phi + phi1);
        const cplx c1 = 0.5 * omega * ct * std::polar(1.0, phi1);
        h(0, 1) = c0;
        h(1, 0) = std::conj(c0);
        h(2, 1) = c1;
        h(1, 2) = std::conj(c1);
        h(1, 1) = delta;
    };
    return model;
}

std::size_t two_nv_index(int nv1, int photons, int nv2, int n_max) {
    const int n_cav = n_max + 1;
    return static_cast<std::size_t>((nv1 * n_cav + photons) * 3 + nv2);
}

HamiltonianModel two_nv_cavity_hamiltonian(const TwoQubitModel& model, const TwoQubitDrive& drive) {
    if (model.n_max < 1) throw std::invalid_argument("two_nv_cavity_hamiltonian: n_max must be >= 1");
    if (model.n_max > 5)
        throw std::invalid_argument("two_nv_cavity_hamiltonian: n_max > 5 not supported");
    if (!(std::isfinite(model.G1) && std::isfinite(model.G2) && std::isfinite(model.Omega1) &&
          std::isfinite(model.Omega2) && std::isfinite(model.delta) && std::isfinite(model.Delta)))
        throw std::invalid_argument("two_nv_cavity_hamiltonian: parameters must be finite");

    const int n_cav = model.n_max + 1;
    const std::size_t dim = static_cast<std::size_t>(9 * n_cav);

    // Emitter levels {|0>, |e>, |1>} -> indices {0, 1, 2}.
    ComplexMatrix sigma_e0(3, 3), sigma_e1(3, 3), sigma_11(3, 3);
    sigma_e0(1, 0) = 1.0;
    sigma_e1(1, 2) = 1.0;
    sigma_11(2, 2) = 1.0;
    ComplexMatrix annihilate(n_cav, n_cav);
    for (int n = 1; n < n_cav; ++n)
        annihilate(static_cast<std::size_t>(n - 1), static_cast<std::size_t>(n)) =
            std::sqrt(static_cast<double>(n));
    const ComplexMatrix id3 = ComplexMatrix::identity(3);
    const ComplexMatrix id_cav = ComplexMatrix::identity(static_cast<std::size_t>(n_cav));

    // Static pieces: H(t) = e^{i delta t} (G-part + env(t) * W-part) + h.c.
    //                + Delta * diagonal.
    ComplexMatrix g_part = tensor(tensor(sigma_e0, annihilate), id3);
    g_part.scale(model.G1);
    g_part.add_scaled(tensor(tensor(id3, annihilate), sigma_e0), model.G2);
    const ComplexMatrix g_dag = g_part.adjoint();

    ComplexMatrix w_part = tensor(tensor(sigma_e1, id_cav), id3);
    w_part.scale(model.Omega1);
    w_part.add_scaled(tensor(tensor(id3, id_cav), sigma_e1), model.Omega2);
    const ComplexMatrix w_dag = w_part.adjoint();

    ComplexMatrix diag_part = tensor(tensor(sigma_11, id_cav), id3);
    diag_part.add_scaled(tensor(tensor(id3, id_cav), sigma_11), 1.0);

    const double delta = model.delta;
    const double Delta = model.Delta;
    const auto envelope = drive.envelope;
    const auto delta_mod = drive.delta_modulation;

    HamiltonianModel result;
    result.dim = dim;
    result.label = "two-nv-cavity";
    {
        const double drive_scale =
            std::max({std::abs(model.G1), std::abs(model.G2), std::abs(model.Omega1),
                      std::abs(model.Omega2)});
        result.max_frequency =
            std::max({std::abs(delta), std::abs(Delta), 2.0 * drive_scale});
    }
    result.evaluate_into = [g_part, g_dag, w_part, w_dag, diag_part, delta, Delta, envelope,
                            delta_mod](double t, ComplexMatrix& h) {
        const cplx rot = std::polar(1.0, delta * t);
        const double env = envelope ? envelope(t) : 1.0;
        const double det = delta_mod ? delta_mod(t) : Delta;
        h.set_zero();
        h.add_scaled(g_part, rot);
        h.add_scaled(g_dag, std::conj(rot));
        h.add_scaled(w_part, rot * env);
        h.add_scaled(w_dag, std::conj(rot) * env);
        const std::size_t n = h.rows();
        for (std::size_t i = 0; i < n; ++i)
            h(i, i) += det * diag_part(i, i).real();
    };
    return result;
}

HamiltonianModel effective_model(const EffectiveTwoQubitParams& params) {
    return make_static_model(effective_hamiltonian(params), "effective-two-qubit");
}

HamiltonianModel effective_loop_model(double Theta, const HolonomicPath& path) {
    const double sin_chi = std::sin(path.chi);
    const double cos_chi = std::cos(path.chi);
    const HolonomicPath p = path;

    HamiltonianModel model;
    model.dim = 6;
    model.label = "effective-two-qubit-loop";
    const double peak_rate =
        2.0 * p.k * kPi * eta_profile_max_slope(p.profile) / p.tau;
    model.max_frequency = peak_rate * std::max(sin_chi, std::abs(cos_chi));
    model.evaluate_into = [p, Theta, sin_chi, cos_chi](double t, ComplexMatrix& h) {
        const double rate = p.eta_dot(t);
        EffectiveTwoQubitParams params;
        params.g_tilde = 0.5 * rate * sin_chi;
        params.Theta = Theta;
        params.Delta = -rate * cos_chi;
        params.g1 = -params.g_tilde * std::sin(0.5 * Theta);
        params.g2 = params.g_tilde * std::cos(0.5 * Theta);
        h = effective_hamiltonian(params);
    };
    return model;
}

}  // namespace holonomy
