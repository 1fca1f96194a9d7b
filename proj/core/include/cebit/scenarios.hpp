#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "cebit/compiler.hpp"
#include "cebit/optics.hpp"
#include "cebit/register.hpp"

namespace cebit {

/// Per-cebit measurement axes, indexed by cebit (0 = polarization). String
/// form is written most significant cebit first, e.g. "xyy" puts x on the
/// coarsest position cebit.
using PauliBasis = std::vector<PauliAxis>;

PauliBasis pauli_basis_from_string(std::string_view letters);
std::string pauli_basis_to_string(const PauliBasis& basis);

/// Correlation <product of the chosen Pauli operators>: rotate each measured
/// cebit into its eigenbasis, then sum detector intensities weighted by the
/// parity of the measured bits (bit 0 counts as +1). The register is assumed
/// normalized; otherwise the value scales with the total intensity.
double pauli_expectation(const CebitRegister& reg, const PauliBasis& basis);

enum class NamedState {
    Ghz,           // (|000) + |111)) / sqrt2
    Epr,           // (|01) - |10)) / sqrt2, also BellPsiMinus
    BellPsiPlus,   // (|01) + |10)) / sqrt2
    BellPsiMinus,  // (|01) - |10)) / sqrt2
    BellPhiPlus,   // (|00) + |11)) / sqrt2
    BellPhiMinus   // (|00) - |11)) / sqrt2
};
CebitRegister prepare_named_state(NamedState which);

/// Three-cebit analyzer: per-cebit basis-change elements followed by the
/// detector bank, ready to run on a GHZ register.
Netlist ghz_interferometer(const PauliBasis& setting);

/// Mixes the four beams so each Bell pattern of the two position cebits
/// lands on a single beam: BS(1/2, 0) on beam pairs (0, 3) and (1, 2),
/// giving beam0 = Phi+, beam1 = Psi+, beam2 = Psi-, beam3 = Phi-.
CebitRegister bell_transform(CebitRegister reg);

/// |<a|b>|^2 / (|a|^2 |b|^2); 0 if either vector is empty.
double jones_fidelity(const Jones& a, const Jones& b);

struct TeleportOutcome {
    Complex c0, c1;               // cebit actually prepared by the interferometer
    double phi1, phi2;            // preparation phase delays used
    std::array<Jones, 4> beams;   // output Jones vector of each beam
    Jones recovered;              // phase-aligned copy read off beam 0
    double fidelity;              // worst beam overlap with (c0, c1)
};

/// Builds (c0|0) + c1|1)) (x) EPR with a PBS and a two-phase Mach-Zehnder,
/// applies the Bell mixer and the four per-beam corrections, and reads out.
/// Every output beam then carries (c0, c1) up to a per-beam phase.
TeleportOutcome teleport(Complex c0, Complex c1);

/// Same network driven directly by the two preparation phase delays.
TeleportOutcome teleport_with_phases(double phi1, double phi2);

/// The netlist teleport runs after the source beam (beam 1, vertical) is lit.
Netlist teleport_network(double phi1, double phi2);

enum class FlipTarget { None, Pol, Mid, Msc };
std::string_view flip_target_name(FlipTarget t);

/// Threefold redundancy: (c0, c1) on beam 0 becomes c0|000) + c1|111) by
/// splitting the horizontal component into the last beam with a PBS.
CebitRegister encode_threefold(Complex c0, Complex c1);

/// One deliberate bit flip: POL is an HWP(pi/4) across all beams, MID swaps
/// beams within each pair (0,1)(2,3), MSC swaps the pairs (0,2)(1,3).
CebitRegister apply_flip(CebitRegister reg, FlipTarget target);

struct SyndromeOutcome {
    int exit_beam;             // 0 none, 1 mid, 2 msc, 3 pol
    Jones recovered;           // Jones vector on the exit beam
    FlipTarget error_applied;  // inferred from the exit beam
};

/// Correction network: two polarization-controlled reroutings and the
/// HWP(pi/4) Toffoli on the last beam. The input must be an encoded register
/// with at most one flip; exactly one beam exits bright.
SyndromeOutcome correct_flips(const CebitRegister& reg);

/// Phase-error variant: Hadamards on every cebit sandwich the error region,
/// so a single sigma_z flip (FlipTarget names the cebit, None for no error)
/// is corrected by the same machinery with the same exit-beam map.
SyndromeOutcome phase_error_network(const CebitRegister& encoded, FlipTarget z_target);

}  // namespace cebit
