#include "cebit/compiler.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cebit {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNegligiblePhase = 1e-14;

std::vector<std::uint32_t> all_beams(int n_cebits) {
    std::vector<std::uint32_t> beams(std::size_t{1} << (n_cebits - 1));
    for (std::size_t b = 0; b < beams.size(); ++b) beams[b] = static_cast<std::uint32_t>(b);
    return beams;
}

std::vector<std::uint32_t> beams_with_bit(int n_cebits, int beam_bit, bool value) {
    std::vector<std::uint32_t> beams;
    const std::uint32_t count = std::uint32_t{1} << (n_cebits - 1);
    for (std::uint32_t b = 0; b < count; ++b)
        if (((b >> beam_bit) & 1u) == static_cast<std::uint32_t>(value)) beams.push_back(b);
    return beams;
}

/// Beam pairs (b, b + 2^beam_bit) that differ only in one position bit.
std::vector<std::pair<std::uint32_t, std::uint32_t>> beam_pairs(int n_cebits, int beam_bit) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    const std::uint32_t count = std::uint32_t{1} << (n_cebits - 1);
    const std::uint32_t mask = std::uint32_t{1} << beam_bit;
    for (std::uint32_t b = 0; b < count; ++b)
        if ((b & mask) == 0) pairs.emplace_back(b, b | mask);
    return pairs;
}

std::string gate_kind_name(Gate::Kind kind) {
    switch (kind) {
        case Gate::Kind::H: return "H";
        case Gate::Kind::X: return "X";
        case Gate::Kind::Z: return "Z";
        case Gate::Kind::S: return "S";
        case Gate::Kind::Phase: return "PHASE";
        case Gate::Kind::U2: return "U";
        case Gate::Kind::Cnot: return "CNOT";
        case Gate::Kind::Toffoli: return "TOFFOLI";
        case Gate::Kind::Expect: return "EXPECT";
    }
    return "?";
}

std::size_t gate_operand_count(Gate::Kind kind) {
    switch (kind) {
        case Gate::Kind::Cnot: return 2;
        case Gate::Kind::Toffoli: return 3;
        case Gate::Kind::Expect: return 0;
        default: return 1;
    }
}

void validate_gate(const Gate& g, int n_cebits) {
    if (n_cebits < 1) throw std::invalid_argument("circuit needs at least one cebit");
    if (g.operands.size() != gate_operand_count(g.kind))
        throw std::invalid_argument(gate_kind_name(g.kind) + " takes " +
                                    std::to_string(gate_operand_count(g.kind)) + " operand(s)");
    for (int c : g.operands)
        if (c < 0 || c >= n_cebits)
            throw std::out_of_range(gate_kind_name(g.kind) + " operand " + std::to_string(c) +
                                    " out of range for " + std::to_string(n_cebits) + " cebits");
    for (std::size_t i = 0; i < g.operands.size(); ++i)
        for (std::size_t j = i + 1; j < g.operands.size(); ++j)
            if (g.operands[i] == g.operands[j])
                throw std::invalid_argument(gate_kind_name(g.kind) + " operands must be distinct");
    if (g.kind == Gate::Kind::Expect && static_cast<int>(g.bases.size()) != n_cebits)
        throw std::invalid_argument("EXPECT needs one basis letter per cebit");
}

void append_phase_if_needed(std::vector<Component>& out, double phi, std::uint32_t beam) {
    if (std::abs(phi) > kNegligiblePhase) out.push_back(Component::phase(phi, {beam}));
}

/// diag(1, e^{i phi}) and general 2x2 unitaries on the polarization cebit
/// become a QWP-HWP-QWP sandwich on every beam.
void append_waveplate_triple(std::vector<Component>& out, const Mat2& u, int n_cebits) {
    WaveplateAngles w = decompose_su2_waveplates(u);
    std::vector<std::uint32_t> beams = all_beams(n_cebits);
    out.push_back(Component::qwp(w.theta_q1, beams));
    out.push_back(Component::hwp(w.theta_h, beams));
    out.push_back(Component::qwp(w.theta_q2, beams));
}

/// A 2x2 unitary on a position cebit becomes one Mach-Zehnder interferometer
/// per beam pair; the delayed arm is the bit=1 beam.
void append_mach_zehnder(std::vector<Component>& out, const Mat2& u, int n_cebits, int beam_bit) {
    MachZehnderPhases p = decompose_su2_mz(u);
    for (auto [b0, b1] : beam_pairs(n_cebits, beam_bit)) {
        append_phase_if_needed(out, p.phi_in, b1);
        out.push_back(Component::bs(0.5, 0.0, b0, b1));
        append_phase_if_needed(out, p.phi_arm, b1);
        out.push_back(Component::bs(0.5, 0.0, b0, b1));
        append_phase_if_needed(out, p.phi_out, b1);
    }
}

}  // namespace

char pauli_axis_letter(PauliAxis axis) {
    switch (axis) {
        case PauliAxis::X: return 'x';
        case PauliAxis::Y: return 'y';
        case PauliAxis::Z: return 'z';
        case PauliAxis::I: return 'i';
    }
    return '?';
}

PauliAxis pauli_axis_from_letter(char letter) {
    switch (letter) {
        case 'x': case 'X': return PauliAxis::X;
        case 'y': case 'Y': return PauliAxis::Y;
        case 'z': case 'Z': return PauliAxis::Z;
        case 'i': case 'I': return PauliAxis::I;
    }
    throw std::invalid_argument(std::string("unknown basis letter '") + letter + "'");
}

Gate Gate::h(int cebit) { return {Kind::H, {cebit}, 0.0, {}, {}}; }
Gate Gate::x(int cebit) { return {Kind::X, {cebit}, 0.0, {}, {}}; }
Gate Gate::z(int cebit) { return {Kind::Z, {cebit}, 0.0, {}, {}}; }
Gate Gate::s(int cebit) { return {Kind::S, {cebit}, 0.0, {}, {}}; }
Gate Gate::phase_gate(double phi, int cebit) { return {Kind::Phase, {cebit}, phi, {}, {}}; }
Gate Gate::u2(const Mat2& matrix, int cebit) { return {Kind::U2, {cebit}, 0.0, matrix, {}}; }
Gate Gate::cnot(int control, int target) { return {Kind::Cnot, {control, target}, 0.0, {}, {}}; }
Gate Gate::toffoli(int control0, int control1, int target) {
    return {Kind::Toffoli, {control0, control1, target}, 0.0, {}, {}};
}
Gate Gate::expect(std::vector<PauliAxis> bases) {
    return {Kind::Expect, {}, 0.0, {}, std::move(bases)};
}

std::vector<Component> lower_gate(const Gate& g, int n_cebits) {
    validate_gate(g, n_cebits);
    std::vector<Component> out;
    switch (g.kind) {
        case Gate::Kind::H: {
            int c = g.operands[0];
            if (c == 0) {
                out.push_back(Component::hwp(kPi / 8.0, all_beams(n_cebits)));
            } else {
                for (auto [b0, b1] : beam_pairs(n_cebits, c - 1))
                    out.push_back(Component::bs(0.5, 0.0, b0, b1));
            }
            break;
        }
        case Gate::Kind::X: {
            int c = g.operands[0];
            if (c == 0) {
                out.push_back(Component::hwp(kPi / 4.0, all_beams(n_cebits)));
            } else {
                for (auto [b0, b1] : beam_pairs(n_cebits, c - 1))
                    out.push_back(Component::swap_beams(b0, b1));
            }
            break;
        }
        case Gate::Kind::Z: {
            int c = g.operands[0];
            if (c == 0)
                out.push_back(Component::hwp(0.0, all_beams(n_cebits)));
            else
                out.push_back(Component::phase(kPi, beams_with_bit(n_cebits, c - 1, true)));
            break;
        }
        case Gate::Kind::S: {
            int c = g.operands[0];
            if (c == 0)
                out.push_back(Component::qwp(0.0, all_beams(n_cebits)));
            else
                out.push_back(Component::phase(kPi / 2.0, beams_with_bit(n_cebits, c - 1, true)));
            break;
        }
        case Gate::Kind::Phase: {
            int c = g.operands[0];
            if (c == 0) {
                Mat2 retarder{1.0, 0.0, 0.0, std::exp(Complex{0.0, 1.0} * g.phase)};
                append_waveplate_triple(out, retarder, n_cebits);
            } else {
                out.push_back(Component::phase(g.phase, beams_with_bit(n_cebits, c - 1, true)));
            }
            break;
        }
        case Gate::Kind::U2: {
            if (!is_unitary(g.matrix, 1e-9))
                throw std::invalid_argument("U gate matrix is not unitary within 1e-9");
            int c = g.operands[0];
            if (c == 0)
                append_waveplate_triple(out, g.matrix, n_cebits);
            else
                append_mach_zehnder(out, g.matrix, n_cebits, c - 1);
            break;
        }
        case Gate::Kind::Cnot: {
            int control = g.operands[0], target = g.operands[1];
            if (control >= 1 && target == 0) {
                out.push_back(
                    Component::hwp(kPi / 4.0, beams_with_bit(n_cebits, control - 1, true)));
            } else if (control == 0 && target >= 1) {
                for (auto [b0, b1] : beam_pairs(n_cebits, target - 1))
                    out.push_back(Component::pbs(b0, b1));
            } else {
                throw std::invalid_argument(
                    "CNOT between two position cebits has no fixed-optics lowering; route "
                    "through the polarization cebit");
            }
            break;
        }
        case Gate::Kind::Toffoli: {
            int c0 = g.operands[0], c1 = g.operands[1], target = g.operands[2];
            if (c0 < 1 || c1 < 1 || target != 0)
                throw std::invalid_argument(
                    "TOFFOLI is only lowered with two position controls and the polarization "
                    "target");
            std::vector<std::uint32_t> beams;
            const std::uint32_t m0 = std::uint32_t{1} << (c0 - 1);
            const std::uint32_t m1 = std::uint32_t{1} << (c1 - 1);
            for (std::uint32_t b : all_beams(n_cebits))
                if ((b & m0) && (b & m1)) beams.push_back(b);
            out.push_back(Component::hwp(kPi / 4.0, std::move(beams)));
            break;
        }
        case Gate::Kind::Expect:
            throw std::invalid_argument(
                "EXPECT is a measurement directive, not a physical gate; it is lowered by "
                "compile_circuit when final");
    }
    return out;
}

Netlist compile_circuit(const GateCircuit& circuit) {
    Netlist nl;
    nl.n_cebits = circuit.n_cebits;
    for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
        const Gate& g = circuit.gates[i];
        if (g.kind == Gate::Kind::Expect) {
            if (i + 1 != circuit.gates.size())
                throw std::invalid_argument(
                    "EXPECT can only be compiled as the final statement of a circuit");
            validate_gate(g, circuit.n_cebits);
            Netlist meas = measurement_netlist(g.bases, circuit.n_cebits);
            nl.components.insert(nl.components.end(), meas.components.begin(),
                                 meas.components.end());
            break;
        }
        std::vector<Component> lowered = lower_gate(g, circuit.n_cebits);
        nl.components.insert(nl.components.end(), lowered.begin(), lowered.end());
    }
    validate_netlist(nl);
    return nl;
}

Netlist measurement_netlist(const std::vector<PauliAxis>& bases, int n_cebits) {
    if (static_cast<int>(bases.size()) != n_cebits)
        throw std::invalid_argument("measurement needs one basis letter per cebit");
    Netlist nl;
    nl.n_cebits = n_cebits;
    for (int c = 0; c < n_cebits; ++c) {
        switch (bases[c]) {
            case PauliAxis::X:
                if (c == 0)
                    nl.components.push_back(Component::hwp(kPi / 8.0, all_beams(n_cebits)));
                else
                    for (auto [b0, b1] : beam_pairs(n_cebits, c - 1))
                        nl.components.push_back(Component::bs(0.5, 0.0, b0, b1));
                break;
            case PauliAxis::Y:
                if (c == 0)
                    nl.components.push_back(Component::qwp(kPi / 4.0, all_beams(n_cebits)));
                else
                    append_mach_zehnder(nl.components, jones_matrix(ComponentKind::Qwp, kPi / 4.0),
                                        n_cebits, c - 1);
                break;
            case PauliAxis::Z:
            case PauliAxis::I:
                break;
        }
    }
    nl.components.push_back(Component::detector_bank());
    return nl;
}

WaveplateAngles decompose_su2_waveplates(const Mat2& u) {
    if (!is_unitary(u, 1e-9))
        throw std::invalid_argument("wave-plate decomposition needs a unitary matrix");
    Mat2 su = (1.0 / std::sqrt(u.det())) * u;
    // su = R(a) * [[cos xi, i sin xi], [i sin xi, cos xi]] * R(-c); the plate
    // angles follow from the y-x-y Euler form of the SU(2) element.
    double x = std::hypot(su.a.real(), su.c.real());
    double y = std::hypot(su.a.imag(), su.c.imag());
    double diff = x > 0.0 ? std::atan2(su.c.real(), su.a.real()) : 0.0;   // a - c
    double sum = y > 0.0 ? std::atan2(-su.a.imag(), su.c.imag()) : 0.0;   // a + c
    double xi = std::atan2(y, x);
    WaveplateAngles w{};
    w.theta_q2 = 0.5 * (sum + diff);
    w.theta_q1 = 0.5 * (sum - diff);
    w.theta_h = 0.5 * (xi + sum);
    return w;
}

Mat2 waveplate_reconstruction(const WaveplateAngles& w) {
    return jones_matrix(ComponentKind::Qwp, w.theta_q2) *
           jones_matrix(ComponentKind::Hwp, w.theta_h) *
           jones_matrix(ComponentKind::Qwp, w.theta_q1);
}

MachZehnderPhases decompose_su2_mz(const Mat2& u) {
    if (!is_unitary(u, 1e-9))
        throw std::invalid_argument("Mach-Zehnder decomposition needs a unitary matrix");
    Mat2 su = (1.0 / std::sqrt(u.det())) * u;
    // su = exp(-i(out/2) sz) exp(-i(arm/2) sx) exp(-i(in/2) sz) up to phase.
    double c = std::abs(su.a);
    double s = std::abs(su.b);
    double arm = 2.0 * std::atan2(s, c);
    double sum = c > kNegligiblePhase ? -2.0 * std::arg(su.a) : 0.0;           // out + in
    double diff = s > kNegligiblePhase ? -2.0 * (std::arg(su.b) + kPi / 2.0) : 0.0;  // out - in
    MachZehnderPhases p{};
    p.phi_arm = arm;
    p.phi_out = 0.5 * (sum + diff);
    p.phi_in = 0.5 * (sum - diff);
    return p;
}

Mat2 mz_reconstruction(const MachZehnderPhases& p) {
    Mat2 bs0 = bs_matrix(0.5, 0.0);
    auto phase = [](double phi) {
        return Mat2{1.0, 0.0, 0.0, std::exp(Complex{0.0, 1.0} * phi)};
    };
    return phase(p.phi_out) * bs0 * phase(p.phi_arm) * bs0 * phase(p.phi_in);
}

std::vector<Component> decompose_multiport(const Matrix& u) {
    const std::size_t n = u.rows();
    if (n == 0 || u.cols() != n) throw std::invalid_argument("multiport needs a square matrix");
    if (n > 256) throw std::invalid_argument("multiport decomposition capped at 256 beams");
    if (unitarity_deviation(u) > 1e-9)
        throw std::invalid_argument("multiport decomposition needs a unitary matrix");

    struct Mixer {
        std::size_t p, q;
        double reflectivity, phase;
    };
    std::vector<Mixer> mixers;
    Matrix v = u;
    // Null everything below the diagonal with two-beam mixers acting on
    // adjacent rows; what survives is a diagonal of unit-modulus phases.
    for (std::size_t col = 0; col + 1 < n; ++col) {
        for (std::size_t row = n - 1; row > col; --row) {
            const std::size_t p = row - 1, q = row;
            Complex a = v.at(p, col), b = v.at(q, col);
            if (std::abs(b) < 1e-14) continue;
            double t, r, phi;
            if (std::abs(a) < 1e-14) {
                t = 0.0;
                r = 1.0;
                phi = 0.0;
            } else {
                double h = std::hypot(std::abs(a), std::abs(b));
                t = std::abs(a) / h;
                r = std::abs(b) / h;
                phi = std::arg(a) - std::arg(b);
            }
            Complex e = std::exp(Complex{0.0, 1.0} * phi);
            for (std::size_t j = 0; j < n; ++j) {
                Complex vp = v.at(p, j), vq = v.at(q, j);
                v.at(p, j) = t * vp + r * e * vq;
                v.at(q, j) = r * vp - t * e * vq;
            }
            mixers.push_back({p, q, r * r, phi});
        }
    }

    std::vector<Component> out;
    for (std::size_t k = 0; k < n; ++k) {
        double delta = std::arg(v.at(k, k));
        if (std::abs(delta) > kNegligiblePhase)
            out.push_back(Component::phase(delta, {static_cast<std::uint32_t>(k)}));
    }
    for (auto it = mixers.rbegin(); it != mixers.rend(); ++it) {
        out.push_back(Component::bs(it->reflectivity, 0.0, static_cast<std::uint32_t>(it->p),
                                    static_cast<std::uint32_t>(it->q)));
        if (std::abs(it->phase) > kNegligiblePhase)
            out.push_back(Component::phase(-it->phase, {static_cast<std::uint32_t>(it->q)}));
    }
    return out;
}

Matrix multiport_transfer(const std::vector<Component>& components, std::size_t n_beams) {
    Matrix m = Matrix::identity(n_beams);
    auto check_beam = [n_beams](std::uint32_t b) {
        if (b >= n_beams) throw std::out_of_range("multiport component beam out of range");
    };
    for (const Component& c : components) {
        switch (c.kind) {
            case ComponentKind::Phase: {
                Complex e = std::exp(Complex{0.0, 1.0} * c.param);
                for (std::uint32_t b : c.beams) {
                    check_beam(b);
                    for (std::size_t j = 0; j < n_beams; ++j) m.at(b, j) *= e;
                }
                break;
            }
            case ComponentKind::Bs: {
                if (c.beams.size() != 2)
                    throw std::invalid_argument("BS component needs exactly two beams");
                check_beam(c.beams[0]);
                check_beam(c.beams[1]);
                Mat2 b = bs_matrix(c.param, c.aux);
                for (std::size_t j = 0; j < n_beams; ++j) {
                    Complex vp = m.at(c.beams[0], j), vq = m.at(c.beams[1], j);
                    m.at(c.beams[0], j) = b.a * vp + b.b * vq;
                    m.at(c.beams[1], j) = b.c * vp + b.d * vq;
                }
                break;
            }
            case ComponentKind::Swap: {
                if (c.beams.size() != 2)
                    throw std::invalid_argument("SWAP component needs exactly two beams");
                check_beam(c.beams[0]);
                check_beam(c.beams[1]);
                for (std::size_t j = 0; j < n_beams; ++j)
                    std::swap(m.at(c.beams[0], j), m.at(c.beams[1], j));
                break;
            }
            case ComponentKind::DetectorBank:
                break;
            default:
                throw std::invalid_argument(
                    "multiport meshes are made of BS, PHASE, and SWAP components");
        }
    }
    return m;
}

ResourceReport resource_report(int n_cebits, const Netlist* netlist) {
    if (n_cebits < 1 || n_cebits > 63)
        throw std::invalid_argument("resource report supports 1 to 63 cebits");
    ResourceReport r;
    r.n_cebits = n_cebits;
    r.beams = std::uint64_t{1} << (n_cebits - 1);
    r.detectors = std::uint64_t{1} << n_cebits;
    r.power_fraction_min = std::ldexp(1.0, -(n_cebits - 1));
    if (netlist) {
        for (const Component& c : netlist->components)
            ++r.component_counts[std::string(component_kind_name(c.kind))];
    }
    return r;
}

int max_cebits(double beam_budget) {
    if (!(beam_budget >= 1.0))
        throw std::invalid_argument("beam budget must be at least one beam");
    return static_cast<int>(std::llround(1.0 + std::log2(beam_budget)));
}

}  // namespace cebit
