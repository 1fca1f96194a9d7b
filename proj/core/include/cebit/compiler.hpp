#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cebit/matrix.hpp"
#include "cebit/optics.hpp"

namespace cebit {

/// Measurement axis per cebit; I means "leave out of the correlation".
enum class PauliAxis { X, Y, Z, I };

char pauli_axis_letter(PauliAxis axis);
PauliAxis pauli_axis_from_letter(char letter);

/// One abstract circuit instruction. Operands are cebit indices
/// (0 = polarization, k >= 1 = position cebit splitting beam-index bit k-1).
struct Gate {
    enum class Kind { H, X, Z, S, Phase, U2, Cnot, Toffoli, Expect };

    Kind kind = Kind::H;
    std::vector<int> operands;      // control(s) first, target last
    double phase = 0.0;             // Phase
    Mat2 matrix;                    // U2
    std::vector<PauliAxis> bases;   // Expect, indexed by cebit (0 = polarization)

    static Gate h(int cebit);
    static Gate x(int cebit);
    static Gate z(int cebit);
    static Gate s(int cebit);
    static Gate phase_gate(double phi, int cebit);
    static Gate u2(const Mat2& matrix, int cebit);
    static Gate cnot(int control, int target);
    static Gate toffoli(int control0, int control1, int target);
    static Gate expect(std::vector<PauliAxis> bases);
};

struct GateCircuit {
    int n_cebits = 1;
    std::vector<Gate> gates;
};

/// Lowers one gate to optical components following the fixed recipe table:
/// H(pol) -> HWP(pi/8); H(pos) -> BS(1/2, 0) per beam pair; X(pol) -> HWP(pi/4);
/// X(pos) -> SWAP; Z(pol) -> HWP(0); S(pol) -> QWP(0); Z/S/PHASE(pos) -> PHASE
/// on the bit=1 beams; PHASE(pol) -> wave-plate retarder triple;
/// CNOT(pos -> pol) -> HWP(pi/4) on the control=1 beams; CNOT(pol -> pos) ->
/// PBS rerouting per beam pair; TOFFOLI(pos, pos -> pol) -> HWP(pi/4) on the
/// both-controls=1 beams; U2(pol) -> QWP-HWP-QWP; U2(pos) -> Mach-Zehnder.
/// Unsupported combinations (for example CNOT between two position cebits)
/// raise std::invalid_argument naming the combination.
std::vector<Component> lower_gate(const Gate& g, int n_cebits);

/// Lowers a whole circuit. An EXPECT is allowed only as the final gate and
/// becomes the measurement basis change plus a terminal DETECTOR_BANK.
Netlist compile_circuit(const GateCircuit& circuit);

/// Basis-change components for measuring the given per-cebit axes, followed
/// by a DETECTOR_BANK (x -> Hadamard element, y -> quarter-wave element,
/// z/i -> pass-through).
Netlist measurement_netlist(const std::vector<PauliAxis>& bases, int n_cebits);

/// Wave-plate angles with QWP(theta_q2) * HWP(theta_h) * QWP(theta_q1) equal
/// to the given unitary up to a global phase (theta_q1 is applied first).
struct WaveplateAngles {
    double theta_q1, theta_h, theta_q2;
};
WaveplateAngles decompose_su2_waveplates(const Mat2& u);
Mat2 waveplate_reconstruction(const WaveplateAngles& w);

/// Mach-Zehnder phases with PHASE(phi_out) * BS0 * PHASE(phi_arm) * BS0 *
/// PHASE(phi_in) equal to the given unitary up to a global phase, where BS0
/// is the 50/50 real Hadamard mixer and PHASE(p) = diag(1, e^{i p}).
struct MachZehnderPhases {
    double phi_in, phi_arm, phi_out;
};
MachZehnderPhases decompose_su2_mz(const Mat2& u);
Mat2 mz_reconstruction(const MachZehnderPhases& p);

/// Triangular multiport mesh for an N x N unitary (N <= 256): at most
/// N(N-1)/2 two-beam BS mixers plus per-beam PHASE delays. Components act on
/// beams 0..N-1 in netlist order.
std::vector<Component> decompose_multiport(const Matrix& u);

/// Position-space product of a multiport component list (the N x N matrix the
/// mesh applies to the beams).
Matrix multiport_transfer(const std::vector<Component>& components, std::size_t n_beams);

/// Scaling bookkeeping for an n-cebit register, optionally counting the
/// components of a compiled netlist.
struct ResourceReport {
    int n_cebits = 0;
    std::uint64_t beams = 0;
    std::uint64_t detectors = 0;
    std::map<std::string, std::size_t> component_counts;
    double power_fraction_min = 0.0;  // per-beam share of a uniform split
};
ResourceReport resource_report(int n_cebits, const Netlist* netlist = nullptr);

/// Register width affordable with a given beam budget, using the scaling
/// rule n = round(1 + log2(budget)); the inverse of beams = 2^(n-1).
int max_cebits(double beam_budget);

}  // namespace cebit
