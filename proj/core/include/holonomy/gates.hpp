#pragma once

#include <string>
#include <utility>
#include <vector>

#include "holonomy/linalg.hpp"

namespace holonomy {

/// Target single-qubit rotation: e^{i gamma/2} exp(-i (gamma/2) n.sigma) with
/// axis n = (sin theta cos varphi, sin theta sin varphi, cos theta).
struct SingleQubitTarget {
    double theta = 0.0;
    double gamma = 0.0;
    double varphi = 0.0;
    ComplexMatrix matrix;  // 2x2 in basis {|0>, |1>}
};

SingleQubitTarget single_qubit_target(double theta, double gamma, double varphi);

/// Bright/dark pair for mixing angle theta and relative phase phi, in the
/// qubit basis {|0>, |1>}:
///   |b> = -sin(theta/2) e^{i phi} |0> + cos(theta/2) |1>
///   |d> =  cos(theta/2) |0> + sin(theta/2) e^{-i phi} |1>
std::pair<StateVector, StateVector> bright_dark_basis(double theta, double phi);

/// Embeds a qubit-space vector into the 3-level basis {|0>, |e>, |1>}.
StateVector embed_qubit(const StateVector& qubit);

/// Cavity-assisted Raman coupling g_k = (-1)^{k+1} G_k Omega_k / delta_k
/// for emitter k in {1, 2}.
double effective_coupling(double G, double Omega, double delta, int k);

/// Raw model parameters for two emitters coupled through one cavity mode.
/// Omega1/Omega2 are the signed drive amplitudes as they enter the
/// Hamiltonian (the alternating drive-phase convention is folded into the
/// sign). The large-detuning regime |delta| >= 10 max(G, Omega) is required
/// for effective-model comparisons.
struct TwoQubitModel {
    double G1 = 0.0;
    double G2 = 0.0;
    double Omega1 = 0.0;
    double Omega2 = 0.0;
    double delta = 0.0;
    double Delta = 0.0;
    int n_max = 2;

    /// Symmetric configuration: equal cavity couplings and drive magnitude,
    /// drive signs alternating between the two emitters.
    static TwoQubitModel symmetric(double G, double Omega, double delta, double Delta = 0.0,
                                   int n_max = 2);

    bool large_detuning_ok() const;
};

/// Parameters of the adiabatically eliminated model: effective couplings,
/// their quadrature sum, the bright-state mixing angle and the detuning.
struct EffectiveTwoQubitParams {
    double g1 = 0.0;
    double g2 = 0.0;
    double g_tilde = 0.0;
    double Theta = 0.0;
    double Delta = 0.0;

    static EffectiveTwoQubitParams from_couplings(double g1, double g2, double Delta);
    static EffectiveTwoQubitParams from_model(const TwoQubitModel& model);
};

/// Mixing angle consistent with the bright-state decomposition
/// (g1, g2) = g_tilde * (-sin(Theta/2), cos(Theta/2)); atan2-based so that
/// either coupling may vanish. Result lies in (-2*pi, 2*pi]; gate matrices
/// are 2*pi-periodic in Theta.
double mixing_angle(double g1, double g2);

/// Effective Hamiltonian on {|100>,|010>,|001>,|110>,|101>,|011>}:
///   g~ (|B1><010| + h.c.) - Delta |010><010|
/// + g~ (|B2><101| + h.c.) + Delta |101><101|
/// with |B1> = -sin(Theta/2)|100> + cos(Theta/2)|001> and
///      |B2> = -sin(Theta/2)|110> + cos(Theta/2)|011>.
ComplexMatrix effective_hamiltonian(const EffectiveTwoQubitParams& p);

/// Two-qubit holonomic gate on {|000>,|100>,|001>,|101>} (cavity in vacuum).
ComplexMatrix two_qubit_gate(double Theta, double gamma);

/// Gate matrix as JSON text: { "basis": [...], "re": [[...]], "im": [[...]] }.
std::string gate_matrix_json(const ComplexMatrix& m, const std::vector<std::string>& basis);

/// Gate distance modulo global phase: 1 - |Tr(A^dag B)| / dim.
double gate_infidelity(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace holonomy
