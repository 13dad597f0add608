#include <benchmark/benchmark.h>

#include <numbers>

#include "holonomy/control.hpp"
#include "holonomy/dynamics.hpp"
#include "holonomy/gates.hpp"
#include "holonomy/linalg.hpp"
#include "holonomy/metrics.hpp"
#include "holonomy/util.hpp"

namespace {

using namespace holonomy;

constexpr double kPi = std::numbers::pi;
constexpr double kOmega0 = 2.0 * kPi * 300e6;
constexpr double kGamma = 2.0 * kPi * 8e6;

ComplexMatrix random_hermitian(std::size_t n, std::uint64_t seed) {
    std::uint64_t rng = seed;
    ComplexMatrix h(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        h(i, i) = 2.0 * uniform01(rng) - 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            h(i, j) = cplx(2.0 * uniform01(rng) - 1.0, 2.0 * uniform01(rng) - 1.0);
            h(j, i) = std::conj(h(i, j));
        }
    }
    return h;
}

void BM_ExpmHermitian(benchmark::State& state) {
    const ComplexMatrix h = random_hermitian(static_cast<std::size_t>(state.range(0)), 99);
    for (auto _ : state) {
        benchmark::DoNotOptimize(expm_hermitian(h, 0.37));
    }
}
BENCHMARK(BM_ExpmHermitian)->Arg(3)->Arg(6)->Arg(16)->Arg(27);

void BM_EigHermitian(benchmark::State& state) {
    const ComplexMatrix h = random_hermitian(static_cast<std::size_t>(state.range(0)), 17);
    for (auto _ : state) {
        benchmark::DoNotOptimize(eig_hermitian(h));
    }
}
BENCHMARK(BM_EigHermitian)->Arg(3)->Arg(9)->Arg(27);

void BM_LindbladTrajectory(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const HolonomicPath path =
        HolonomicPath::fixed_amplitude(0.5 * kPi, 0.0, kPi, k, EtaProfile::linear, kOmega0);
    const PulseSchedule schedule = synthesize_constant_chi(path, 101);
    const HamiltonianModel model = lambda_hamiltonian(schedule, path.theta, path.phi);
    const auto channels = lambda_decoherence_channels(kGamma, 0.5 * kGamma, 2.0 * kGamma);
    StateVector psi0 = StateVector::basis(3, 0);
    IntegratorSettings settings;
    settings.retained = 2;
    for (auto _ : state) {
        benchmark::DoNotOptimize(propagate_lindblad(model, channels, DensityMatrix::pure(psi0),
                                                    TimeSpan{0.0, path.tau}, settings));
    }
}
BENCHMARK(BM_LindbladTrajectory)->Arg(1)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_ProcessMap(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const HolonomicPath path =
        HolonomicPath::fixed_amplitude(0.5 * kPi, 0.0, kPi, k, EtaProfile::linear, kOmega0);
    const PulseSchedule schedule = synthesize_constant_chi(path, 101);
    const HamiltonianModel model = lambda_hamiltonian(schedule, path.theta, path.phi);
    const auto channels = lambda_decoherence_channels(kGamma, 0.5 * kGamma, 2.0 * kGamma);
    IntegratorSettings settings;
    settings.retained = 2;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            propagate_lindblad_map(model, channels, TimeSpan{0.0, path.tau}, settings));
    }
}
BENCHMARK(BM_ProcessMap)->Arg(1)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_ZetaSweep(benchmark::State& state) {
    const HolonomicPath path =
        HolonomicPath::fixed_amplitude(0.5 * kPi, 0.0, kPi, 10, EtaProfile::linear, kOmega0);
    ZetaSweepSpec spec;
    spec.schedule = synthesize_constant_chi(path, 101);
    spec.theta = path.theta;
    spec.phi = path.phi;
    spec.target = single_qubit_target(path.theta, path.gamma, path.phi).matrix;
    spec.gamma1 = kGamma;
    spec.gamma2 = 0.5 * kGamma;
    spec.gamma_phi = 2.0 * kGamma;
    spec.n_zeta = static_cast<std::size_t>(state.range(0));
    spec.settings.retained = 2;
    spec.jobs = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(gate_fidelity_zeta_sweep(spec));
    }
}
BENCHMARK(BM_ZetaSweep)->Arg(101)->Arg(1001)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
