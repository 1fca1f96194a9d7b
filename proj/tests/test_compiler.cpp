#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"

#include "cebit/compiler.hpp"
#include "cebit/optics.hpp"
#include "support/oracles.hpp"

using namespace cebit;

namespace {

constexpr double kPi = std::numbers::pi;

// Transfer matrix of a one-gate circuit, compared against the dense oracle
// up to one global phase.
double lowering_error(const Gate& g, int n) {
    GateCircuit circuit{n, {g}};
    Matrix got = transfer_matrix(compile_circuit(circuit));
    Matrix expected = oracle::gate_unitary(g, n);
    return phase_aligned_distance(expected, got);
}

}  // namespace

TEST_CASE("single-cebit lowerings match the dense oracle at widths 1..5") {
    auto rng = oracle::seeded(20);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    for (int n = 1; n <= 5; ++n) {
        for (int c = 0; c < n; ++c) {
            CHECK(lowering_error(Gate::h(c), n) < 1e-10);
            CHECK(lowering_error(Gate::x(c), n) < 1e-10);
            CHECK(lowering_error(Gate::z(c), n) < 1e-10);
            CHECK(lowering_error(Gate::s(c), n) < 1e-10);
            CHECK(lowering_error(Gate::phase_gate(angle(rng), c), n) < 1e-10);
            for (int k = 0; k < 3; ++k)
                CHECK(lowering_error(Gate::u2(oracle::random_u2(rng), c), n) < 1e-10);
        }
    }
}

TEST_CASE("two- and three-cebit lowerings match the dense oracle") {
    for (int n = 2; n <= 5; ++n) {
        for (int pos = 1; pos < n; ++pos) {
            CHECK(lowering_error(Gate::cnot(pos, 0), n) < 1e-10);  // position -> polarization
            CHECK(lowering_error(Gate::cnot(0, pos), n) < 1e-10);  // polarization -> position
        }
        for (int c0 = 1; c0 < n; ++c0)
            for (int c1 = c0 + 1; c1 < n; ++c1) {
                CHECK(lowering_error(Gate::toffoli(c0, c1, 0), n) < 1e-10);
                CHECK(lowering_error(Gate::toffoli(c1, c0, 0), n) < 1e-10);
            }
    }
}

TEST_CASE("unsupported gate shapes are rejected with a reason") {
    CHECK_THROWS_WITH_AS(static_cast<void>(lower_gate(Gate::cnot(1, 2), 3)),
                         doctest::Contains("polarization"), std::invalid_argument);
    CHECK_THROWS_AS(static_cast<void>(lower_gate(Gate::toffoli(0, 1, 2), 3)),
                    std::invalid_argument);
    CHECK_THROWS_AS(static_cast<void>(lower_gate(Gate::toffoli(1, 2, 3), 4)),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        static_cast<void>(lower_gate(Gate::expect({PauliAxis::X, PauliAxis::X}), 2)),
        std::invalid_argument);
    CHECK_THROWS_AS(static_cast<void>(lower_gate(Gate::h(3), 3)), std::out_of_range);
    CHECK_THROWS_AS(
        static_cast<void>(lower_gate(Gate::u2(Mat2{1, 0, 0, 2}, 0), 2)),
        std::invalid_argument);
}

TEST_CASE("interferometer lowerings omit negligible interior phases") {
    // An explicitly written PHASE survives even at 0 radians...
    auto explicit_zero = lower_gate(Gate::phase_gate(0.0, 1), 2);
    REQUIRE(explicit_zero.size() == 1);
    CHECK(explicit_zero[0] == Component::phase(0.0, {1}));

    // ...but an interferometer that needs no delay emits none: the identity
    // on a position cebit is two back-to-back mixers and nothing else.
    auto idle = lower_gate(Gate::u2(Mat2::identity(), 1), 2);
    std::size_t phases = 0;
    for (const Component& c : idle)
        if (c.kind == ComponentKind::Phase) ++phases;
    CHECK(phases == 0);
    Netlist mesh{2, idle};
    CHECK(phase_aligned_distance(Matrix::identity(4), transfer_matrix(mesh)) < 1e-12);
}

TEST_CASE("structural shape of the lowering table") {
    // H on the polarization cebit: one HWP(pi/8) across all beams
    auto h_pol = lower_gate(Gate::h(0), 3);
    REQUIRE(h_pol.size() == 1);
    CHECK(h_pol[0].kind == ComponentKind::Hwp);
    CHECK(h_pol[0].param == doctest::Approx(kPi / 8.0));
    CHECK(h_pol[0].beams == std::vector<std::uint32_t>{0, 1, 2, 3});

    // H on a position cebit: one 50/50 splitter per beam pair
    auto h_pos = lower_gate(Gate::h(2), 3);
    REQUIRE(h_pos.size() == 2);
    CHECK(h_pos[0] == Component::bs(0.5, 0.0, 0, 2));
    CHECK(h_pos[1] == Component::bs(0.5, 0.0, 1, 3));

    // Z on a position cebit: a single half-turn delay on the bit=1 beams
    auto z_pos = lower_gate(Gate::z(1), 3);
    REQUIRE(z_pos.size() == 1);
    CHECK(z_pos[0].kind == ComponentKind::Phase);
    CHECK(z_pos[0].param == doctest::Approx(kPi));
    CHECK(z_pos[0].beams == std::vector<std::uint32_t>{1, 3});

    // X on a position cebit: mirror swaps
    auto x_pos = lower_gate(Gate::x(1), 3);
    REQUIRE(x_pos.size() == 2);
    CHECK(x_pos[0] == Component::swap_beams(0, 1));
    CHECK(x_pos[1] == Component::swap_beams(2, 3));

    // CNOT with a position control and the polarization target: HWP(pi/4)
    // confined to the control=1 beams
    auto cnot = lower_gate(Gate::cnot(2, 0), 3);
    REQUIRE(cnot.size() == 1);
    CHECK(cnot[0].kind == ComponentKind::Hwp);
    CHECK(cnot[0].beams == std::vector<std::uint32_t>{2, 3});

    // CNOT the other way: polarization splitter per beam pair
    auto cnot_rev = lower_gate(Gate::cnot(0, 1), 3);
    REQUIRE(cnot_rev.size() == 2);
    CHECK(cnot_rev[0] == Component::pbs(0, 1));
    CHECK(cnot_rev[1] == Component::pbs(2, 3));

    // Toffoli: HWP(pi/4) only where both position controls are 1
    auto tof = lower_gate(Gate::toffoli(1, 2, 0), 3);
    REQUIRE(tof.size() == 1);
    CHECK(tof[0].kind == ComponentKind::Hwp);
    CHECK(tof[0].beams == std::vector<std::uint32_t>{3});
}

TEST_CASE("compiled GHZ pipeline matches the golden netlist") {
    GateCircuit circuit{
        3,
        {Gate::h(2), Gate::cnot(2, 0), Gate::cnot(0, 1),
         Gate::expect({PauliAxis::Y, PauliAxis::Y, PauliAxis::X})}};  // "xyy", msc first
    Netlist expected;
    expected.n_cebits = 3;
    expected.components = {
        Component::bs(0.5, 0.0, 0, 2),
        Component::bs(0.5, 0.0, 1, 3),
        Component::hwp(kPi / 4.0, {2, 3}),
        Component::pbs(0, 1),
        Component::pbs(2, 3),
        Component::qwp(kPi / 4.0, {0, 1, 2, 3}),
        Component::bs(0.5, 0.0, 0, 1),
        Component::phase(kPi / 2.0, {1}),
        Component::bs(0.5, 0.0, 0, 1),
        Component::bs(0.5, 0.0, 2, 3),
        Component::phase(kPi / 2.0, {3}),
        Component::bs(0.5, 0.0, 2, 3),
        Component::bs(0.5, 0.0, 0, 2),
        Component::bs(0.5, 0.0, 1, 3),
        Component::detector_bank(),
    };
    CHECK(compile_circuit(circuit) == expected);
}

TEST_CASE("expect can only be the final gate") {
    GateCircuit circuit{2, {Gate::expect({PauliAxis::X, PauliAxis::X}), Gate::h(0)}};
    CHECK_THROWS_AS(compile_circuit(circuit), std::invalid_argument);
    GateCircuit tail{2, {Gate::h(0), Gate::expect({PauliAxis::X, PauliAxis::X})}};
    CHECK_NOTHROW(compile_circuit(tail));
    GateCircuit wrong_width{2, {Gate::expect({PauliAxis::X})}};
    CHECK_THROWS_AS(compile_circuit(wrong_width), std::invalid_argument);
}

TEST_CASE("measurement netlist applies the right basis changes") {
    auto rng = oracle::seeded(21);
    const PauliAxis axes[] = {PauliAxis::X, PauliAxis::Y, PauliAxis::Z, PauliAxis::I};
    double s = 1.0 / std::sqrt(2.0);
    const Mat2 vx{s, s, s, -s};
    const Mat2 vy = jones_matrix(ComponentKind::Qwp, kPi / 4.0);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 1 + static_cast<int>(rng() % 4);
        std::vector<PauliAxis> bases(n);
        for (auto& b : bases) b = axes[rng() % 4];

        Netlist nl = measurement_netlist(bases, n);
        REQUIRE(!nl.components.empty());
        CHECK(nl.components.back().kind == ComponentKind::DetectorBank);

        Matrix expected = Matrix::identity(std::size_t{1} << n);
        for (int c = 0; c < n; ++c) {
            if (bases[c] == PauliAxis::Z || bases[c] == PauliAxis::I) continue;
            Mat2 v = bases[c] == PauliAxis::X ? vx : vy;
            expected = oracle::gate_unitary(Gate::u2(v, c), n) * expected;
        }
        CHECK(phase_aligned_distance(expected, transfer_matrix(nl)) < 1e-10);
    }
}

TEST_CASE("wave-plate decomposition reconstructs SU(2)") {
    auto rng = oracle::seeded(22);
    for (int i = 0; i < 100; ++i) {
        Mat2 u = oracle::random_u2(rng);
        WaveplateAngles w = decompose_su2_waveplates(u);
        CHECK(phase_aligned_distance(u, waveplate_reconstruction(w)) < 1e-10);
    }
    // anchors
    for (const Mat2& u : {Mat2::identity(), Mat2{0, 1, 1, 0}, Mat2{1, 0, 0, Complex{0, 1}}}) {
        WaveplateAngles w = decompose_su2_waveplates(u);
        CHECK(phase_aligned_distance(u, waveplate_reconstruction(w)) < 1e-12);
    }
    CHECK_THROWS_AS(decompose_su2_waveplates(Mat2{1, 0, 0, 2}), std::invalid_argument);
}

TEST_CASE("mach-zehnder decomposition reconstructs SU(2)") {
    auto rng = oracle::seeded(23);
    for (int i = 0; i < 100; ++i) {
        Mat2 u = oracle::random_u2(rng);
        MachZehnderPhases p = decompose_su2_mz(u);
        CHECK(phase_aligned_distance(u, mz_reconstruction(p)) < 1e-10);
    }
    double s = 1.0 / std::sqrt(2.0);
    MachZehnderPhases p = decompose_su2_mz(Mat2{s, s, s, -s});
    CHECK(phase_aligned_distance(Mat2{s, s, s, -s}, mz_reconstruction(p)) < 1e-12);
    CHECK_THROWS_AS(decompose_su2_mz(Mat2{1, 1, 1, 1}), std::invalid_argument);
}

TEST_CASE("multiport mesh reconstructs random unitaries up to N=8") {
    auto rng = oracle::seeded(24);
    for (int i = 0; i < 100; ++i) {
        std::size_t n = 2 + rng() % 7;
        Matrix u = oracle::random_unitary(n, rng);
        std::vector<Component> mesh = decompose_multiport(u);
        CHECK(max_abs_diff(multiport_transfer(mesh, n), u) < 1e-9);
        std::size_t mixers = 0;
        for (const Component& c : mesh) mixers += c.kind == ComponentKind::Bs;
        CHECK(mixers <= n * (n - 1) / 2);
    }
}

TEST_CASE("multiport handles degenerate shapes") {
    // identity needs no components at all
    CHECK(decompose_multiport(Matrix::identity(4)).empty());

    // a pure beam permutation exercises the full-reflection branch
    Matrix perm(3, 3);
    perm.at(0, 1) = 1.0;
    perm.at(1, 2) = 1.0;
    perm.at(2, 0) = 1.0;
    auto mesh = decompose_multiport(perm);
    CHECK(max_abs_diff(multiport_transfer(mesh, 3), perm) < 1e-12);

    // 1x1 "unitary" is just a phase
    Matrix one(1, 1);
    one.at(0, 0) = std::polar(1.0, 0.321);
    auto phase_only = decompose_multiport(one);
    CHECK(max_abs_diff(multiport_transfer(phase_only, 1), one) < 1e-12);

    Matrix bad(2, 3);
    CHECK_THROWS_AS(decompose_multiport(bad), std::invalid_argument);
    Matrix not_unitary = Matrix::identity(2);
    not_unitary.at(0, 0) = 2.0;
    CHECK_THROWS_AS(decompose_multiport(not_unitary), std::invalid_argument);

    CHECK_THROWS_AS(multiport_transfer({Component::hwp(0.1, {0})}, 2), std::invalid_argument);
}

TEST_CASE("resource accounting returns the published scaling numbers") {
    CHECK(resource_report(3).beams == 4);
    CHECK(resource_report(5).beams == 16);
    CHECK(resource_report(3).detectors == 8);
    CHECK(resource_report(5).detectors == 32);
    CHECK(resource_report(1).beams == 1);
    CHECK(resource_report(5).power_fraction_min == doctest::Approx(1.0 / 16.0));
    CHECK(resource_report(63).beams == std::uint64_t{1} << 62);
    CHECK_THROWS_AS(resource_report(0), std::invalid_argument);
    CHECK_THROWS_AS(resource_report(64), std::invalid_argument);

    CHECK(max_cebits(1e64) == 214);
    CHECK(max_cebits(1e72) == 240);
    CHECK(max_cebits(4.0) == 3);
    CHECK(max_cebits(1.0) == 1);
    CHECK_THROWS_AS(max_cebits(0.5), std::invalid_argument);

    Netlist nl;
    nl.n_cebits = 2;
    nl.components = {Component::hwp(0.1, {0, 1}), Component::bs(0.5, 0.0, 0, 1),
                     Component::hwp(0.2, {0}), Component::detector_bank()};
    ResourceReport r = resource_report(2, &nl);
    CHECK(r.component_counts.at("HWP") == 2);
    CHECK(r.component_counts.at("BS") == 1);
    CHECK(r.component_counts.at("DETECTOR_BANK") == 1);
}
