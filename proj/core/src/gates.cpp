#include "holonomy/gates.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace holonomy {

namespace {
constexpr double kPi = std::numbers::pi;
}

SingleQubitTarget single_qubit_target(double theta, double gamma, double varphi) {
    SingleQubitTarget t;
    t.theta = theta;
    t.gamma = gamma;
    t.varphi = varphi;
    const double c2 = std::cos(0.5 * theta) * std::cos(0.5 * theta);
    const double s2 = std::sin(0.5 * theta) * std::sin(0.5 * theta);
    const double st = std::sin(theta);
    const cplx eg = std::polar(1.0, gamma);
    const cplx off = 0.5 * (1.0 - eg) * st;
    t.matrix = ComplexMatrix(2, 2);
    t.matrix(0, 0) = c2 + s2 * eg;
    t.matrix(0, 1) = off * std::polar(1.0, varphi);
    t.matrix(1, 0) = off * std::polar(1.0, -varphi);
    t.matrix(1, 1) = c2 * eg + s2;
    return t;
}

std::pair<StateVector, StateVector> bright_dark_basis(double theta, double phi) {
    const double st = std::sin(0.5 * theta);
    const double ct = std::cos(0.5 * theta);
    StateVector bright(2), dark(2);
    bright[0] = -st * std::polar(1.0, phi);
    bright[1] = ct;
    dark[0] = ct;
    dark[1] = st * std::polar(1.0, -phi);
    return {bright, dark};
}

StateVector embed_qubit(const StateVector& qubit) {
    if (qubit.dim() != 2) throw std::invalid_argument("embed_qubit: expected a 2-dim state");
    StateVector out(3);
    out[0] = qubit[0];
    out[2] = qubit[1];
    return out;
}

double effective_coupling(double G, double Omega, double delta, int k) {
    if (delta == 0.0) throw std::invalid_argument("effective_coupling: delta must be nonzero");
    if (k != 1 && k != 2) throw std::invalid_argument("effective_coupling: k must be 1 or 2");
    const double sign = (k == 1) ? 1.0 : -1.0;
    return sign * G * Omega / delta;
}

double mixing_angle(double g1, double g2) {
    // (g1, g2) = g_tilde * (-sin(Theta/2), cos(Theta/2)) exactly, so the
    // half angle comes straight from atan2; no branch folding, otherwise the
    // bright-state components would pick up a global sign.
    return 2.0 * std::atan2(-g1, g2);
}

TwoQubitModel TwoQubitModel::symmetric(double G, double Omega, double delta, double Delta,
                                       int n_max) {
    TwoQubitModel m;
    m.G1 = G;
    m.G2 = G;
    m.Omega1 = -Omega;
    m.Omega2 = Omega;
    m.delta = delta;
    m.Delta = Delta;
    m.n_max = n_max;
    return m;
}

bool TwoQubitModel::large_detuning_ok() const {
    const double scale = std::max({std::abs(G1), std::abs(G2), std::abs(Omega1), std::abs(Omega2)});
    return std::abs(delta) >= 10.0 * scale;
}

EffectiveTwoQubitParams EffectiveTwoQubitParams::from_couplings(double g1, double g2,
                                                                double Delta) {
    EffectiveTwoQubitParams p;
    p.g1 = g1;
    p.g2 = g2;
    p.g_tilde = std::hypot(g1, g2);
    p.Theta = mixing_angle(g1, g2);
    p.Delta = Delta;
    return p;
}

EffectiveTwoQubitParams EffectiveTwoQubitParams::from_model(const TwoQubitModel& model) {
    if (model.delta == 0.0)
        throw std::invalid_argument("EffectiveTwoQubitParams: delta must be nonzero");
    // The signed drive amplitudes already carry the alternating phase, so the
    // Raman coupling is -G W / delta for each emitter.
    const double g1 = -model.G1 * model.Omega1 / model.delta;
    const double g2 = -model.G2 * model.Omega2 / model.delta;
    return from_couplings(g1, g2, model.Delta);
}

ComplexMatrix effective_hamiltonian(const EffectiveTwoQubitParams& p) {
    // Basis {|100>, |010>, |001>, |110>, |101>, |011>}.
    const double sh = std::sin(0.5 * p.Theta);
    const double ch = std::cos(0.5 * p.Theta);
    ComplexMatrix h(6, 6);
    h(0, 1) = -p.g_tilde * sh;
    h(2, 1) = p.g_tilde * ch;
    h(1, 0) = -p.g_tilde * sh;
    h(1, 2) = p.g_tilde * ch;
    h(1, 1) = -p.Delta;
    h(3, 4) = -p.g_tilde * sh;
    h(5, 4) = p.g_tilde * ch;
    h(4, 3) = -p.g_tilde * sh;
    h(4, 5) = p.g_tilde * ch;
    h(4, 4) = p.Delta;
    return h;
}

ComplexMatrix two_qubit_gate(double Theta, double gamma) {
    const double c2 = std::cos(0.5 * Theta) * std::cos(0.5 * Theta);
    const double s2 = std::sin(0.5 * Theta) * std::sin(0.5 * Theta);
    const double st = std::sin(Theta);
    const cplx eg = std::polar(1.0, gamma);
    const cplx off = 0.5 * st * (1.0 - eg);
    ComplexMatrix u(4, 4);
    u(0, 0) = 1.0;
    u(1, 1) = c2 + s2 * eg;
    u(1, 2) = off;
    u(2, 1) = off;
    u(2, 2) = c2 * eg + s2;
    u(3, 3) = std::polar(1.0, -gamma);
    return u;
}

std::string gate_matrix_json(const ComplexMatrix& m, const std::vector<std::string>& basis) {
    nlohmann::json j;
    j["basis"] = basis;
    std::vector<std::vector<double>> re(m.rows(), std::vector<double>(m.cols()));
    std::vector<std::vector<double>> im(m.rows(), std::vector<double>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t k = 0; k < m.cols(); ++k) {
            re[i][k] = m(i, k).real();
            im[i][k] = m(i, k).imag();
        }
    j["re"] = re;
    j["im"] = im;
    return j.dump(2);
}

double gate_infidelity(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("gate_infidelity: shape mismatch");
    const cplx t = matmul(a.adjoint(), b).trace();
    return 1.0 - std::abs(t) / static_cast<double>(a.rows());
}

}  // namespace holonomy
