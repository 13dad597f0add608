#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "holonomy/linalg.hpp"

namespace holonomy {

/// Loop profiles for the winding angle eta(t) = 2*k*pi * u(t/tau).
/// `linear` has constant slope; `sine_ramp` has zero slope at both ends so
/// the synthesized pulses switch on and off smoothly.
enum class EtaProfile { linear, sine_ramp };

double eta_profile_value(EtaProfile profile, double s);   // u(s), s in [0,1]
double eta_profile_slope(EtaProfile profile, double s);   // u'(s)
double eta_profile_max_slope(EtaProfile profile);         // max_s u'(s)
std::string eta_profile_name(EtaProfile profile);

/// Cone angle for a target geometric phase gamma accumulated over k windings.
/// Requires 0 < gamma < 2*k*pi.
double chi_from_gamma(double gamma, int k);

/// Parameters of one holonomic loop: bright-state mixing angle theta, bright
/// phase phi, target geometric phase gamma, winding count k, constant cone
/// angle chi, the eta profile, and the loop duration tau.
struct HolonomicPath {
    double theta = 0.0;
    double phi = 0.0;
    double gamma = 0.0;
    int k = 1;
    double chi = 0.0;
    EtaProfile profile = EtaProfile::linear;
    double tau = 0.0;

    /// tau given directly.
    static HolonomicPath with_duration(double theta, double phi, double gamma, int k,
                                       EtaProfile profile, double tau);
    /// Fixed mean winding rate omega0: tau = 2*k*pi / omega0.
    static HolonomicPath fixed_rate(double theta, double phi, double gamma, int k,
                                    EtaProfile profile, double omega0);
    /// Peak Rabi amplitude clamped to omega0: tau = 2*k*pi * u'_max * sin(chi) / omega0.
    static HolonomicPath fixed_amplitude(double theta, double phi, double gamma, int k,
                                         EtaProfile profile, double omega0);

    double eta(double t) const;
    double eta_dot(double t) const;
    /// alpha(t) = -eta(t) * cos(chi) / 2 for the constant-chi loop.
    double alpha(double t) const;
};

/// Sampled control waveforms on a uniform time grid. omega is kept
/// non-negative; sign flips are absorbed into phi1.
struct PulseSchedule {
    std::vector<double> t;      // s
    std::vector<double> omega;  // rad/s
    std::vector<double> delta;  // rad/s
    std::vector<double> phi1;   // rad, unwrapped for safe interpolation
    std::vector<double> xi;     // rad, auxiliary phase
    double tau = 0.0;
    std::vector<std::size_t> xi_filled;  // samples where xi was filled by continuity

    std::size_t size() const { return t.size(); }
    double omega_at(double time) const;
    double delta_at(double time) const;
    double phi1_at(double time) const;
    double max_abs_omega() const;
    double max_abs_delta() const;

    /// CSV with header `t_s, omega_rad_s, delta_rad_s, phi1_rad`,
    /// 17 significant digits per value.
    void to_csv(std::ostream& os) const;
};

/// Constant-chi synthesis: omega = eta_dot * sin(chi), delta = eta_dot * cos(chi),
/// phi1 = phi throughout (xi = pi/2 when chi is constant).
PulseSchedule synthesize_constant_chi(const HolonomicPath& path, std::size_t samples);

/// Time-dependent loop coordinates with their derivatives on [0, tau].
struct PathFunctions {
    std::function<double(double)> eta;
    std::function<double(double)> eta_dot;
    std::function<double(double)> chi;
    std::function<double(double)> chi_dot;
    double tau = 0.0;

    static PathFunctions constant_chi(const HolonomicPath& path);
};

struct SynthesisResult {
    PulseSchedule schedule;
    std::vector<double> alpha;  // accumulated on the schedule grid, alpha(0) = 0
    double alpha_tau = 0.0;
};

/// General synthesis for time-dependent chi. Evaluates
///   Omega = sqrt[(eta_dot sin chi + chi_dot cos chi sin eta)^2 + (2 chi_dot sin^2(eta/2))^2]
///   Delta = eta_dot cos chi - chi_dot sin chi sin eta
///   xi    = atan2(eta_dot sin chi + chi_dot cos chi sin eta, 2 chi_dot sin^2(eta/2))
///   phi1  = phi + pi/2 - xi
/// and integrates alpha_dot = (chi_dot sin chi sin eta - eta_dot cos chi)/2.
/// Samples where both atan2 arguments vanish are filled by continuity and
/// reported in schedule.xi_filled.
SynthesisResult synthesize_general(const PathFunctions& fns, double phi, std::size_t samples);

/// Closed-form propagator of the driven Lambda system in basis {|0>, |e>, |1>}:
///   U = e^{i alpha} (a* |b><b| - b* |b><e| + b |e><b| + a |e><e|) + |d><d|
/// with a = cos(eta/2) - i sin(eta/2) cos(chi), b = -i sin(eta/2) sin(chi) e^{-i phi}.
ComplexMatrix closed_form_propagator(double theta, double phi, double eta, double chi,
                                     double alpha);
ComplexMatrix closed_form_propagator(const HolonomicPath& path, double t);

/// Recovers the controls from the closed-form propagator via
/// H(t) = i dU/dt U^dag (central finite differences) and the Lambda-system
/// matrix elements. Serves as the independent oracle for the synthesizers.
/// Throws if H acquires elements outside the Lambda structure.
PulseSchedule derive_controls_numerically(const PathFunctions& fns, double theta, double phi,
                                          std::size_t samples);

struct HolonomicConditionReport {
    bool satisfied = false;
    double sin_half_eta = 0.0;
    double sin_chi = 0.0;
    double product = 0.0;
};

/// Checks |sin(eta(tau)/2) * sin(chi(tau))| <= 1e-10.
HolonomicConditionReport check_holonomic_condition(const HolonomicPath& path);
HolonomicConditionReport check_holonomic_condition(double eta_tau, double chi_tau);

}  // namespace holonomy
