#include "holonomy/control.hpp"

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

double interp_linear(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (xs.empty()) throw std::invalid_argument("interpolation on empty schedule");
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
    const std::size_t lo = hi - 1;
    const double w = (x - xs[lo]) / (xs[hi] - xs[lo]);
    return ys[lo] + w * (ys[hi] - ys[lo]);
}

void validate_path(double theta, double gamma, int k, double tau) {
    std::vector<std::string> errors;
    if (!(theta >= 0.0 && theta <= kPi)) errors.push_back("theta must lie in [0, pi]");
    if (k < 1) errors.push_back("k must be >= 1");
    if (k >= 1 && !(gamma > 0.0 && gamma < 2.0 * k * kPi))
        errors.push_back("gamma must lie in (0, 2*k*pi)");
    if (!(tau > 0.0)) errors.push_back("tau must be positive");
    if (!errors.empty()) {
        std::ostringstream msg;
        msg << "invalid holonomic path:";
        for (const auto& e : errors) msg << " " << e << ";";
        throw std::invalid_argument(msg.str());
    }
}

}  // namespace

double eta_profile_value(EtaProfile profile, double s) {
    switch (profile) {
        case EtaProfile::linear:
            return s;
        case EtaProfile::sine_ramp:
            return s - std::sin(kTwoPi * s) / kTwoPi;
    }
    return s;
}

double eta_profile_slope(EtaProfile profile, double s) {
    switch (profile) {
        case EtaProfile::linear:
            return 1.0;
        case EtaProfile::sine_ramp:
            return 1.0 - std::cos(kTwoPi * s);
    }
    return 1.0;
}

double eta_profile_max_slope(EtaProfile profile) {
    return profile == EtaProfile::sine_ramp ? 2.0 : 1.0;
}

std::string eta_profile_name(EtaProfile profile) {
    return profile == EtaProfile::sine_ramp ? "sine-ramp" : "linear";
}

double chi_from_gamma(double gamma, int k) {
    if (k < 1) throw std::invalid_argument("chi_from_gamma: k must be >= 1");
    if (!(gamma > 0.0 && gamma < 2.0 * k * kPi))
        throw std::invalid_argument(
            "chi_from_gamma: gamma out of (0, 2*k*pi), cos(chi) would leave (-1, 1)");
    return std::acos(1.0 - gamma / (k * kPi));
}

HolonomicPath HolonomicPath::with_duration(double theta, double phi, double gamma, int k,
                                           EtaProfile profile, double tau) {
    validate_path(theta, gamma, k, tau);
    HolonomicPath p;
    p.theta = theta;
    p.phi = phi;
    p.gamma = gamma;
    p.k = k;
    p.chi = chi_from_gamma(gamma, k);
    p.profile = profile;
    p.tau = tau;
    return p;
}

HolonomicPath HolonomicPath::fixed_rate(double theta, double phi, double gamma, int k,
                                        EtaProfile profile, double omega0) {
    if (!(omega0 > 0.0)) throw std::invalid_argument("fixed_rate: omega0 must be positive");
    return with_duration(theta, phi, gamma, k, profile, 2.0 * k * kPi / omega0);
}

HolonomicPath HolonomicPath::fixed_amplitude(double theta, double phi, double gamma, int k,
                                             EtaProfile profile, double omega0) {
    if (!(omega0 > 0.0)) throw std::invalid_argument("fixed_amplitude: omega0 must be positive");
    const double chi = chi_from_gamma(gamma, k);
    const double tau =
        2.0 * k * kPi * eta_profile_max_slope(profile) * std::sin(chi) / omega0;
    return with_duration(theta, phi, gamma, k, profile, tau);
}

double HolonomicPath::eta(double t) const {
    return 2.0 * k * kPi * eta_profile_value(profile, t / tau);
}

double HolonomicPath::eta_dot(double t) const {
    return 2.0 * k * kPi * eta_profile_slope(profile, t / tau) / tau;
}

double HolonomicPath::alpha(double t) const {
    return -0.5 * eta(t) * std::cos(chi);
}

double PulseSchedule::omega_at(double time) const { return interp_linear(t, omega, time); }
double PulseSchedule::delta_at(double time) const { return interp_linear(t, delta, time); }
double PulseSchedule::phi1_at(double time) const { return interp_linear(t, phi1, time); }

double PulseSchedule::max_abs_omega() const {
    double m = 0.0;
    for (double v : omega) m = std::max(m, std::abs(v));
    return m;
}

double PulseSchedule::max_abs_delta() const {
    double m = 0.0;
    for (double v : delta) m = std::max(m, std::abs(v));
    return m;
}

void PulseSchedule::to_csv(std::ostream& os) const {
    os << "t_s, omega_rad_s, delta_rad_s, phi1_rad\n";
    char buf[160];
    for (std::size_t i = 0; i < t.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", t[i], omega[i], delta[i],
                      phi1[i]);
        os << buf;
    }
}

PulseSchedule synthesize_constant_chi(const HolonomicPath& path, std::size_t samples) {
    if (samples < 2) throw std::invalid_argument("synthesize_constant_chi: need >= 2 samples");
    const double eta_tau = path.eta(path.tau);
    if (std::abs(eta_tau - 2.0 * path.k * kPi) > 1e-12 * std::max(1.0, std::abs(eta_tau)))
        throw std::domain_error("synthesize_constant_chi: profile is not cyclic, eta(tau) != 2*k*pi");

    const double sin_chi = std::sin(path.chi);
    const double cos_chi = std::cos(path.chi);
    PulseSchedule s;
    s.tau = path.tau;
    s.t.resize(samples);
    s.omega.resize(samples);
    s.delta.resize(samples);
    s.phi1.assign(samples, path.phi);
    s.xi.assign(samples, 0.5 * kPi);
    for (std::size_t i = 0; i < samples; ++i) {
        const double ti = path.tau * static_cast<double>(i) / static_cast<double>(samples - 1);
        const double rate = path.eta_dot(ti);
        s.t[i] = ti;
        s.omega[i] = rate * sin_chi;
        s.delta[i] = rate * cos_chi;
    }
    return s;
}

PathFunctions PathFunctions::constant_chi(const HolonomicPath& path) {
    PathFunctions fns;
    const HolonomicPath p = path;
    fns.eta = [p](double t) { return p.eta(t); };
    fns.eta_dot = [p](double t) { return p.eta_dot(t); };
    fns.chi = [p](double) { return p.chi; };
    fns.chi_dot = [](double) { return 0.0; };
    fns.tau = path.tau;
    return fns;
}

SynthesisResult synthesize_general(const PathFunctions& fns, double phi, std::size_t samples) {
    if (samples < 3) throw std::invalid_argument("synthesize_general: need >= 3 samples");
    const double tau = fns.tau;
    const double eta_tau = fns.eta(tau);
    const double closure = std::sin(0.5 * eta_tau) * std::sin(fns.chi(tau));
    if (std::abs(closure) > 1e-10)
        throw std::domain_error("synthesize_general: path does not satisfy the cyclic condition");

    SynthesisResult result;
    PulseSchedule& s = result.schedule;
    s.tau = tau;
    s.t.resize(samples);
    s.omega.resize(samples);
    s.delta.resize(samples);
    s.phi1.resize(samples);
    s.xi.resize(samples);
    result.alpha.resize(samples);

    std::vector<bool> defined(samples, true);
    double omega_scale = 0.0;

    for (std::size_t i = 0; i < samples; ++i) {
        const double ti = tau * static_cast<double>(i) / static_cast<double>(samples - 1);
        const double eta = fns.eta(ti);
        const double eta_dot = fns.eta_dot(ti);
        const double chi = fns.chi(ti);
        const double chi_dot = fns.chi_dot(ti);
        const double sh = std::sin(0.5 * eta);

        const double in_phase = eta_dot * std::sin(chi) + chi_dot * std::cos(chi) * std::sin(eta);
        const double quad = 2.0 * chi_dot * sh * sh;

        s.t[i] = ti;
        s.omega[i] = std::hypot(in_phase, quad);
        s.delta[i] = eta_dot * std::cos(chi) - chi_dot * std::sin(chi) * std::sin(eta);
        omega_scale = std::max(omega_scale, s.omega[i]);
        if (s.omega[i] == 0.0) {
            defined[i] = false;  // xi undefined where both arguments vanish
            s.xi[i] = 0.0;
        } else {
            s.xi[i] = std::atan2(in_phase, quad);
        }
    }

    // Treat near-zero amplitudes as undefined too; the phase there is noise.
    for (std::size_t i = 0; i < samples; ++i)
        if (s.omega[i] < 1e-14 * omega_scale) defined[i] = false;

    // Fill undefined xi by continuity (linear interpolation between defined
    // neighbours, or constant extension at the ends).
    std::ptrdiff_t prev = -1;
    for (std::size_t i = 0; i < samples; ++i) {
        if (defined[i]) {
            if (prev < 0 && i > 0) {
                for (std::size_t j = 0; j < i; ++j) s.xi[j] = s.xi[i];
            } else if (prev >= 0 && static_cast<std::size_t>(prev) + 1 < i) {
                const std::size_t lo = static_cast<std::size_t>(prev);
                for (std::size_t j = lo + 1; j < i; ++j) {
                    const double w = static_cast<double>(j - lo) / static_cast<double>(i - lo);
                    s.xi[j] = s.xi[lo] + w * (s.xi[i] - s.xi[lo]);
                }
            }
            prev = static_cast<std::ptrdiff_t>(i);
        }
    }
    if (prev < 0) {
        std::fill(s.xi.begin(), s.xi.end(), 0.5 * kPi);  // no drive at all
    } else if (static_cast<std::size_t>(prev) + 1 < samples) {
        for (std::size_t j = static_cast<std::size_t>(prev) + 1; j < samples; ++j)
            s.xi[j] = s.xi[prev];
    }
    for (std::size_t i = 0; i < samples; ++i)
        if (!defined[i]) s.xi_filled.push_back(i);

    for (std::size_t i = 0; i < samples; ++i) s.phi1[i] = phi + 0.5 * kPi - s.xi[i];

    // Unwrap phi1 so that linear interpolation between samples is safe.
    for (std::size_t i = 1; i < samples; ++i) {
        double d = s.phi1[i] - s.phi1[i - 1];
        while (d > kPi) {
            s.phi1[i] -= kTwoPi;
            d = s.phi1[i] - s.phi1[i - 1];
        }
        while (d < -kPi) {
            s.phi1[i] += kTwoPi;
            d = s.phi1[i] - s.phi1[i - 1];
        }
    }

    // alpha by per-interval Simpson quadrature of alpha_dot.
    auto alpha_dot = [&](double time) {
        return 0.5 * (fns.chi_dot(time) * std::sin(fns.chi(time)) * std::sin(fns.eta(time)) -
                      fns.eta_dot(time) * std::cos(fns.chi(time)));
    };
    result.alpha[0] = 0.0;
    for (std::size_t i = 1; i < samples; ++i) {
        const double a = s.t[i - 1];
        const double b = s.t[i];
        const double m = 0.5 * (a + b);
        result.alpha[i] = result.alpha[i - 1] +
                          (b - a) / 6.0 * (alpha_dot(a) + 4.0 * alpha_dot(m) + alpha_dot(b));
    }
    result.alpha_tau = result.alpha.back();
    return result;
}

ComplexMatrix closed_form_propagator(double theta, double phi, double eta, double chi,
                                     double alpha) {
    const double sh = std::sin(0.5 * eta);
    const double ch = std::cos(0.5 * eta);
    const cplx a(ch, -sh * std::cos(chi));
    const cplx b = cplx(0.0, -1.0) * sh * std::sin(chi) * std::polar(1.0, -phi);
    const cplx ea = std::polar(1.0, alpha);

    const double st = std::sin(0.5 * theta);
    const double ct = std::cos(0.5 * theta);
    // Basis {|0>, |e>, |1>}; |e> sits between the qubit states.
    StateVector bright(3), dark(3);
    bright[0] = -st * std::polar(1.0, phi);
    bright[2] = ct;
    dark[0] = ct;
    dark[2] = st * std::polar(1.0, -phi);
    StateVector excited = StateVector::basis(3, 1);

    ComplexMatrix u = outer(dark, dark);
    u.add_scaled(outer(bright, bright), ea * std::conj(a));
    u.add_scaled(outer(bright, excited), -ea * std::conj(b));
    u.add_scaled(outer(excited, bright), ea * b);
    u.add_scaled(outer(excited, excited), ea * a);
    return u;
}

ComplexMatrix closed_form_propagator(const HolonomicPath& path, double t) {
    return closed_form_propagator(path.theta, path.phi, path.eta(t), path.chi, path.alpha(t));
}

PulseSchedule derive_controls_numerically(const PathFunctions& fns, double theta, double phi,
                                          std::size_t samples) {
    if (samples < 2) throw std::invalid_argument("derive_controls_numerically: need >= 2 samples");
    const double tau = fns.tau;

    // alpha on a doubled auxiliary grid so that alpha(t +/- h) is available
    // to the same accuracy as the closed form itself.
    auto alpha_dot = [&](double time) {
        return 0.5 * (fns.chi_dot(time) * std::sin(fns.chi(time)) * std::sin(fns.eta(time)) -
                      fns.eta_dot(time) * std::cos(fns.chi(time)));
    };
    auto alpha_between = [&](double a, double b, double alpha_a) {
        const double m = 0.5 * (a + b);
        return alpha_a + (b - a) / 6.0 * (alpha_dot(a) + 4.0 * alpha_dot(m) + alpha_dot(b));
    };

    // Finite-difference step: small fraction of the fastest angular scale.
    double rate_scale = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double ti = tau * static_cast<double>(i) / static_cast<double>(samples - 1);
        rate_scale = std::max(rate_scale, std::abs(fns.eta_dot(ti)) + std::abs(fns.chi_dot(ti)));
    }
    if (rate_scale <= 0.0) rate_scale = 1.0 / tau;
    const double h = std::min(1e-4 / rate_scale, 0.49 * tau / static_cast<double>(samples - 1));

    StateVector bright(3), dark(3);
    const double st = std::sin(0.5 * theta);
    const double ct = std::cos(0.5 * theta);
    bright[0] = -st * std::polar(1.0, phi);
    bright[2] = ct;
    dark[0] = ct;
    dark[2] = st * std::polar(1.0, -phi);
    const StateVector excited = StateVector::basis(3, 1);

    PulseSchedule s;
    s.tau = tau;
    s.t.resize(samples);
    s.omega.resize(samples);
    s.delta.resize(samples);
    s.phi1.resize(samples);
    s.xi.assign(samples, 0.0);

    auto u_at = [&](double time, double alpha_t) {
        return closed_form_propagator(theta, phi, fns.eta(time), fns.chi(time), alpha_t);
    };

    double alpha_acc = 0.0;
    double t_prev = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double ti = tau * static_cast<double>(i) / static_cast<double>(samples - 1);
        alpha_acc = alpha_between(t_prev, ti, alpha_acc);
        t_prev = ti;

        const ComplexMatrix u0 = u_at(ti, alpha_acc);
        ComplexMatrix du(3, 3);
        if (ti - h < 0.0 || ti + h > tau) {
            // One-sided second-order stencil at the interval ends.
            const double dir = (ti - h < 0.0) ? 1.0 : -1.0;
            const double a1 = alpha_between(ti, ti + dir * h, alpha_acc);
            const double a2 = alpha_between(ti + dir * h, ti + 2.0 * dir * h, a1);
            const ComplexMatrix u1 = u_at(ti + dir * h, a1);
            const ComplexMatrix u2 = u_at(ti + 2.0 * dir * h, a2);
            du = u0;
            du.scale(-3.0);
            du.add_scaled(u1, 4.0);
            du.add_scaled(u2, -1.0);
            du.scale(cplx(0.0, 1.0) * dir / (2.0 * h));
        } else {
            const double am = alpha_between(ti, ti - h, alpha_acc);
            const double ap = alpha_between(ti, ti + h, alpha_acc);
            du = u_at(ti + h, ap) - u_at(ti - h, am);
            du.scale(cplx(0.0, 1.0) / (2.0 * h));
        }
        const ComplexMatrix ham = matmul(du, u0.adjoint());  // i dU/dt U^dag

        const cplx h_be = inner(bright, apply(ham, excited));
        const cplx h_ee = inner(excited, apply(ham, excited));
        const cplx h_bd = inner(bright, apply(ham, dark));
        const cplx h_ed = inner(excited, apply(ham, dark));
        const cplx h_bb = inner(bright, apply(ham, bright));
        const cplx h_dd = inner(dark, apply(ham, dark));

        // Compare off-structure leakage against the trajectory-level drive
        // scale; the local |H| vanishes at smooth switch-on/off endpoints.
        const double scale = std::max({ham.max_abs(), rate_scale, 1e-300});
        const double off = std::max({std::abs(h_bd), std::abs(h_ed), std::abs(h_bb),
                                     std::abs(h_dd), std::abs(h_ee.imag())});
        if (off > 1e-6 * scale) {
            std::ostringstream msg;
            msg << "derive_controls_numerically: off-structure element " << off << " (scale "
                << scale << ") at sample " << i;
            throw std::domain_error(msg.str());
        }

        s.t[i] = ti;
        s.omega[i] = 2.0 * std::abs(h_be);
        s.delta[i] = h_ee.real();
        s.phi1[i] = std::arg(h_be);
        s.xi[i] = phi + 0.5 * kPi - s.phi1[i];
    }

    // Unwrap phi1 as in the synthesizer.
    for (std::size_t i = 1; i < samples; ++i) {
        double d = s.phi1[i] - s.phi1[i - 1];
        while (d > kPi) {
            s.phi1[i] -= kTwoPi;
            d = s.phi1[i] - s.phi1[i - 1];
        }
        while (d < -kPi) {
            s.phi1[i] += kTwoPi;
            d = s.phi1[i] - s.phi1[i - 1];
        }
    }
    return s;
}

HolonomicConditionReport check_holonomic_condition(double eta_tau, double chi_tau) {
    HolonomicConditionReport r;
    r.sin_half_eta = std::sin(0.5 * eta_tau);
    r.sin_chi = std::sin(chi_tau);
    r.product = r.sin_half_eta * r.sin_chi;
    r.satisfied = std::abs(r.product) <= 1e-10;
    return r;
}

HolonomicConditionReport check_holonomic_condition(const HolonomicPath& path) {
    return check_holonomic_condition(path.eta(path.tau), path.chi);
}

}  // namespace holonomy
