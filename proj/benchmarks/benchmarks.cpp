// Microbenchmarks for the hot paths: state-vector gate application, netlist
// propagation, the demo scenarios, and the unitary decomposers.

#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "cebit/dsl.hpp"
#include "cebit/scenarios.hpp"

namespace {

using namespace cebit;

constexpr double kPi = std::numbers::pi;

Matrix random_unitary(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    Matrix a(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) a.at(r, c) = {gauss(rng), gauss(rng)};
    // Modified Gram-Schmidt on the columns.
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t p = 0; p < c; ++p) {
            Complex dot{};
            for (std::size_t r = 0; r < n; ++r) dot += std::conj(a.at(r, p)) * a.at(r, c);
            for (std::size_t r = 0; r < n; ++r) a.at(r, c) -= dot * a.at(r, p);
        }
        double norm = 0.0;
        for (std::size_t r = 0; r < n; ++r) norm += std::norm(a.at(r, c));
        norm = std::sqrt(norm);
        for (std::size_t r = 0; r < n; ++r) a.at(r, c) /= norm;
    }
    return a;
}

void BM_SingleCebitGate(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    CebitRegister reg = CebitRegister::zero(n);
    reg[0] = 1.0;
    const Mat2 h = jones_matrix(ComponentKind::Hwp, kPi / 8.0);
    for (auto _ : state) {
        reg = apply_on_cebit(std::move(reg), n / 2, h);
        benchmark::DoNotOptimize(reg.amplitudes().data());
    }
    state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << n));
}
BENCHMARK(BM_SingleCebitGate)->DenseRange(4, 20, 4);

void BM_BeamSplitterLayer(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    CebitRegister reg = CebitRegister::zero(n);
    reg[0] = 1.0;
    // One BS(1/2, 0) across every beam pair of the coarsest position cebit.
    std::vector<Component> layer = lower_gate(Gate::h(n - 1), n);
    for (auto _ : state) {
        for (const Component& c : layer) reg = apply_component(std::move(reg), c);
        benchmark::DoNotOptimize(reg.amplitudes().data());
    }
    state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << n));
}
BENCHMARK(BM_BeamSplitterLayer)->DenseRange(4, 16, 4);

void BM_CompileGhz(benchmark::State& state) {
    const char* src =
        "cebits 3; H pos1; CNOT pos1 pol; CNOT pol pos0; expect x y y;";
    for (auto _ : state) {
        Netlist nl = compile_circuit(dsl::to_circuit(dsl::parse_source(src)));
        benchmark::DoNotOptimize(nl.components.size());
    }
}
BENCHMARK(BM_CompileGhz);

void BM_GhzPipeline(benchmark::State& state) {
    for (auto _ : state) {
        double product = 1.0;
        for (const char* letters : {"xyy", "yxy", "yyx", "xxx"}) {
            PauliBasis basis = pauli_basis_from_string(letters);
            CebitRegister out =
                run_netlist(prepare_named_state(NamedState::Ghz), ghz_interferometer(basis));
            benchmark::DoNotOptimize(detector_intensities(out));
            product *= pauli_expectation(prepare_named_state(NamedState::Ghz), basis);
        }
        benchmark::DoNotOptimize(product);
    }
}
BENCHMARK(BM_GhzPipeline);

void BM_Teleport(benchmark::State& state) {
    for (auto _ : state) {
        TeleportOutcome out = teleport(Complex{0.6, 0.0}, Complex{0.0, 0.8});
        benchmark::DoNotOptimize(out.fidelity);
    }
}
BENCHMARK(BM_Teleport);

void BM_ErrorCorrection(benchmark::State& state) {
    for (auto _ : state) {
        SyndromeOutcome out = correct_flips(
            apply_flip(encode_threefold(Complex{0.6, 0.0}, Complex{0.0, 0.8}), FlipTarget::Mid));
        benchmark::DoNotOptimize(out.exit_beam);
    }
}
BENCHMARK(BM_ErrorCorrection);

void BM_MultiportDecompose(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(42);
    Matrix u = random_unitary(n, rng);
    for (auto _ : state) {
        std::vector<Component> mesh = decompose_multiport(u);
        benchmark::DoNotOptimize(mesh.size());
    }
}
BENCHMARK(BM_MultiportDecompose)->RangeMultiplier(2)->Range(2, 64);

void BM_WaveplateDecompose(benchmark::State& state) {
    std::mt19937_64 rng(43);
    Matrix u2 = random_unitary(2, rng);
    Mat2 u{u2.at(0, 0), u2.at(0, 1), u2.at(1, 0), u2.at(1, 1)};
    for (auto _ : state) {
        WaveplateAngles w = decompose_su2_waveplates(u);
        benchmark::DoNotOptimize(w.theta_h);
    }
}
BENCHMARK(BM_WaveplateDecompose);

}  // namespace

BENCHMARK_MAIN();
