#include "cebit/scenarios.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace cebit {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInvSqrt2 = 0.70710678118654752440;

const Mat2 kHadamard{kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2};

Mat2 basis_change(PauliAxis axis) {
    switch (axis) {
        case PauliAxis::X: return kHadamard;
        case PauliAxis::Y: return jones_matrix(ComponentKind::Qwp, kPi / 4.0);
        case PauliAxis::Z:
        case PauliAxis::I: return Mat2::identity();
    }
    throw std::invalid_argument("unknown basis axis");
}

void require_three_cebits(const CebitRegister& reg, const char* what) {
    if (reg.n_cebits() != 3)
        throw std::invalid_argument(std::string(what) + " expects a three-cebit register");
}

CebitRegister single_beam_source(int n_cebits, std::size_t index, Complex amplitude) {
    CebitRegister reg = CebitRegister::zero(n_cebits);
    reg[index] = amplitude;
    return reg;
}

}  // namespace

PauliBasis pauli_basis_from_string(std::string_view letters) {
    PauliBasis basis(letters.size());
    for (std::size_t i = 0; i < letters.size(); ++i)
        basis[letters.size() - 1 - i] = pauli_axis_from_letter(letters[i]);
    return basis;
}

std::string pauli_basis_to_string(const PauliBasis& basis) {
    std::string s(basis.size(), '?');
    for (std::size_t c = 0; c < basis.size(); ++c)
        s[basis.size() - 1 - c] = pauli_axis_letter(basis[c]);
    return s;
}

double pauli_expectation(const CebitRegister& reg, const PauliBasis& basis) {
    if (static_cast<int>(basis.size()) != reg.n_cebits())
        throw std::invalid_argument("basis needs one letter per cebit");
    CebitRegister rotated = reg;
    std::size_t parity_mask = 0;
    for (int c = 0; c < reg.n_cebits(); ++c) {
        if (basis[c] == PauliAxis::I) continue;
        parity_mask |= std::size_t{1} << c;
        if (basis[c] != PauliAxis::Z)
            rotated = apply_on_cebit(std::move(rotated), c, basis_change(basis[c]));
    }
    double expectation = 0.0;
    for (std::size_t b = 0; b < rotated.dim(); ++b) {
        double intensity = std::norm(rotated[b]);
        bool odd = std::popcount(b & parity_mask) & 1;
        expectation += odd ? -intensity : intensity;
    }
    return expectation;
}

CebitRegister prepare_named_state(NamedState which) {
    switch (which) {
        case NamedState::Ghz: {
            std::vector<Complex> amps(8);
            amps[0] = amps[7] = kInvSqrt2;
            return CebitRegister(3, std::move(amps));
        }
        case NamedState::Epr:
        case NamedState::BellPsiMinus: {
            std::vector<Complex> amps(4);
            amps[1] = kInvSqrt2;
            amps[2] = -kInvSqrt2;
            return CebitRegister(2, std::move(amps));
        }
        case NamedState::BellPsiPlus: {
            std::vector<Complex> amps(4);
            amps[1] = amps[2] = kInvSqrt2;
            return CebitRegister(2, std::move(amps));
        }
        case NamedState::BellPhiPlus: {
            std::vector<Complex> amps(4);
            amps[0] = amps[3] = kInvSqrt2;
            return CebitRegister(2, std::move(amps));
        }
        case NamedState::BellPhiMinus: {
            std::vector<Complex> amps(4);
            amps[0] = kInvSqrt2;
            amps[3] = -kInvSqrt2;
            return CebitRegister(2, std::move(amps));
        }
    }
    throw std::invalid_argument("unknown named state");
}

Netlist ghz_interferometer(const PauliBasis& setting) {
    if (setting.size() != 3)
        throw std::invalid_argument("the GHZ analyzer measures exactly three cebits");
    return measurement_netlist(setting, 3);
}

CebitRegister bell_transform(CebitRegister reg) {
    require_three_cebits(reg, "bell_transform");
    reg = apply_component(std::move(reg), Component::bs(0.5, 0.0, 0, 3));
    reg = apply_component(std::move(reg), Component::bs(0.5, 0.0, 1, 2));
    return reg;
}

double jones_fidelity(const Jones& a, const Jones& b) {
    double na = std::norm(a.v) + std::norm(a.h);
    double nb = std::norm(b.v) + std::norm(b.h);
    if (na == 0.0 || nb == 0.0) return 0.0;
    Complex ip = std::conj(a.v) * b.v + std::conj(a.h) * b.h;
    return std::norm(ip) / (na * nb);
}

Netlist teleport_network(double phi1, double phi2) {
    Netlist nl;
    nl.n_cebits = 3;
    auto& c = nl.components;
    // EPR source: beam 1 vertical enters as -(|1V) - |1H))/sqrt2; the PBS
    // moves the horizontal part into beam 0, leaving (|01) - |10))/sqrt2.
    c.push_back(Component::hwp(3.0 * kPi / 8.0, {1}));
    c.push_back(Component::pbs(0, 1));
    // Mach-Zehnder on the coarse position cebit prepares c0|0) + c1|1).
    c.push_back(Component::bs(0.5, 0.0, 0, 2));
    c.push_back(Component::bs(0.5, 0.0, 1, 3));
    c.push_back(Component::phase(phi1, {2, 3}));
    c.push_back(Component::bs(0.5, 0.0, 0, 2));
    c.push_back(Component::bs(0.5, 0.0, 1, 3));
    c.push_back(Component::phase(phi2, {2, 3}));
    // Bell analysis mixes 00 with 11 and 01 with 10.
    c.push_back(Component::bs(0.5, 0.0, 0, 3));
    c.push_back(Component::bs(0.5, 0.0, 1, 2));
    // Per-beam corrections: Phi+ needs the y rotation, Psi+ the z flip,
    // Psi- nothing, Phi- the x flip.
    c.push_back(Component::rotator(-kPi / 2.0, {0}));
    c.push_back(Component::hwp(0.0, {1}));
    c.push_back(Component::hwp(kPi / 4.0, {3}));
    c.push_back(Component::detector_bank());
    return nl;
}

namespace {

TeleportOutcome run_teleport(double phi1, double phi2, Complex c0, Complex c1, double scale) {
    CebitRegister reg = single_beam_source(3, 2, scale);  // beam 1, vertical
    reg = run_netlist(std::move(reg), teleport_network(phi1, phi2));
    TeleportOutcome out{};
    out.c0 = c0;
    out.c1 = c1;
    out.phi1 = phi1;
    out.phi2 = phi2;
    double fid = 1.0;
    for (std::size_t b = 0; b < 4; ++b) {
        out.beams[b] = reg.beam_jones(b);
        fid = std::min(fid, jones_fidelity({c0, c1}, out.beams[b]));
    }
    Jones j = out.beams[0];
    Complex ip = std::conj(c0) * j.v + std::conj(c1) * j.h;
    Complex lambda = std::abs(ip) > 0.0 ? Complex{std::abs(ip)} / ip : Complex{1.0};
    out.recovered = {2.0 * lambda * j.v, 2.0 * lambda * j.h};
    out.fidelity = fid;
    return out;
}

}  // namespace

TeleportOutcome teleport_with_phases(double phi1, double phi2) {
    Complex e1 = std::exp(Complex{0.0, 1.0} * phi1);
    Complex e2 = std::exp(Complex{0.0, 1.0} * phi2);
    Complex c0 = 0.5 * (1.0 + e1);
    Complex c1 = 0.5 * e2 * (1.0 - e1);
    return run_teleport(phi1, phi2, c0, c1, 1.0);
}

TeleportOutcome teleport(Complex c0, Complex c1) {
    double norm = std::sqrt(std::norm(c0) + std::norm(c1));
    if (norm == 0.0) throw std::invalid_argument("teleport input (0, 0) carries no light");
    Complex u0 = c0 / norm, u1 = c1 / norm;
    double phi1 = 2.0 * std::atan2(std::abs(u1), std::abs(u0));
    double phi2 = 0.0;
    if (std::abs(u0) > 0.0 && std::abs(u1) > 0.0)
        phi2 = kPi / 2.0 + std::arg(u1 * std::conj(u0));
    TeleportOutcome out = run_teleport(phi1, phi2, c0, c1, norm);
    return out;
}

std::string_view flip_target_name(FlipTarget t) {
    switch (t) {
        case FlipTarget::None: return "none";
        case FlipTarget::Pol: return "pol";
        case FlipTarget::Mid: return "mid";
        case FlipTarget::Msc: return "msc";
    }
    throw std::invalid_argument("unknown flip target");
}

CebitRegister encode_threefold(Complex c0, Complex c1) {
    if (c0 == Complex{} && c1 == Complex{})
        throw std::invalid_argument("encode input (0, 0) carries no light");
    CebitRegister reg = CebitRegister::zero(3);
    reg[0] = c0;  // |000)
    reg[1] = c1;  // |001)
    return apply_component(std::move(reg), Component::pbs(0, 3));
}

CebitRegister apply_flip(CebitRegister reg, FlipTarget target) {
    require_three_cebits(reg, "apply_flip");
    switch (target) {
        case FlipTarget::None:
            break;
        case FlipTarget::Pol:
            reg = apply_component(std::move(reg), Component::hwp(kPi / 4.0, {0, 1, 2, 3}));
            break;
        case FlipTarget::Mid:
            reg = apply_component(std::move(reg), Component::swap_beams(0, 1));
            reg = apply_component(std::move(reg), Component::swap_beams(2, 3));
            break;
        case FlipTarget::Msc:
            reg = apply_component(std::move(reg), Component::swap_beams(0, 2));
            reg = apply_component(std::move(reg), Component::swap_beams(1, 3));
            break;
    }
    return reg;
}

SyndromeOutcome correct_flips(const CebitRegister& reg) {
    require_three_cebits(reg, "correct_flips");
    CebitRegister out = reg;
    // c-NOT (polarization -> middle cebit), c-NOT (polarization -> coarse
    // cebit), then the Toffoli as an HWP in the last beam.
    out = apply_component(std::move(out), Component::pbs(0, 1));
    out = apply_component(std::move(out), Component::pbs(2, 3));
    out = apply_component(std::move(out), Component::pbs(0, 2));
    out = apply_component(std::move(out), Component::pbs(1, 3));
    out = apply_component(std::move(out), Component::hwp(kPi / 4.0, {3}));

    const double total = out.total_intensity();
    int exit_beam = -1;
    for (int b = 0; b < 4; ++b) {
        Jones j = out.beam_jones(b);
        double intensity = std::norm(j.v) + std::norm(j.h);
        if (intensity > 1e-9 * std::max(total, 1e-300)) {
            if (exit_beam >= 0)
                throw std::invalid_argument(
                    "input is not an encoded register with at most one flip: several beams "
                    "exit bright");
            exit_beam = b;
        }
    }
    if (exit_beam < 0) throw std::invalid_argument("no bright exit beam: the register is dark");

    static constexpr FlipTarget kSyndrome[4] = {FlipTarget::None, FlipTarget::Mid,
                                                FlipTarget::Msc, FlipTarget::Pol};
    return {exit_beam, out.beam_jones(exit_beam), kSyndrome[exit_beam]};
}

SyndromeOutcome phase_error_network(const CebitRegister& encoded, FlipTarget z_target) {
    require_three_cebits(encoded, "phase_error_network");
    CebitRegister reg = encoded;
    auto hadamard_all = [](CebitRegister r) {
        for (int c = 0; c < 3; ++c)
            for (const Component& comp : lower_gate(Gate::h(c), 3))
                r = apply_component(std::move(r), comp);
        return r;
    };
    reg = hadamard_all(std::move(reg));
    if (z_target != FlipTarget::None) {
        int cebit = z_target == FlipTarget::Pol ? 0 : z_target == FlipTarget::Mid ? 1 : 2;
        for (const Component& comp : lower_gate(Gate::z(cebit), 3))
            reg = apply_component(std::move(reg), comp);
    }
    reg = hadamard_all(std::move(reg));
    return correct_flips(reg);
}

}  // namespace cebit
