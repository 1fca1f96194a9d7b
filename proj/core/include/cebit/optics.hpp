#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cebit/matrix.hpp"
#include "cebit/register.hpp"

namespace cebit {

enum class ComponentKind {
    Hwp,          // half-wave plate at angle theta
    Qwp,          // quarter-wave plate at angle theta
    Rotator,      // optical rotator by angle theta
    Phase,        // path delay e^{i phi} on every listed beam
    Pbs,          // polarizing splitter pair: horizontal components swap beams
    Bs,           // beam splitter mixing same-polarization amplitudes
    Swap,         // mirror pair exchanging two beams outright
    DetectorBank  // terminal intensity readout, no amplitude change
};

std::string_view component_kind_name(ComponentKind kind);

/// One optical element and the beams it touches.
///
/// Wave plates and rotators (HWP/QWP/ROTATOR) act on the polarization pair of
/// each listed beam. PHASE delays every amplitude of each listed beam; in
/// two-port form that is diag(1, e^{i phi}) with the delayed beam second,
/// which is the shape the interferometer decompositions assume. BS/PBS/SWAP
/// couple exactly two beams, first listed beam = port 0.
struct Component {
    ComponentKind kind;
    double param = 0.0;  // angle, delay, or BS reflectivity
    double aux = 0.0;    // BS phase offset (0 = real Hadamard-mixer convention)
    std::vector<std::uint32_t> beams;

    static Component hwp(double angle, std::vector<std::uint32_t> beams);
    static Component qwp(double angle, std::vector<std::uint32_t> beams);
    static Component rotator(double angle, std::vector<std::uint32_t> beams);
    static Component phase(double delay, std::vector<std::uint32_t> beams);
    static Component pbs(std::uint32_t b0, std::uint32_t b1);
    static Component bs(double reflectivity, double phase, std::uint32_t b0, std::uint32_t b1);
    static Component swap_beams(std::uint32_t b0, std::uint32_t b1);
    static Component detector_bank();

    friend bool operator==(const Component&, const Component&) = default;
};

/// Ordered component list over the beams of an n-cebit register.
struct Netlist {
    int n_cebits = 1;
    std::vector<Component> components;

    friend bool operator==(const Netlist&, const Netlist&) = default;
};

/// Canonical 2x2 of a polarization-acting kind (HWP/QWP/ROTATOR/PHASE):
///   HWP(t) = [[cos 2t, sin 2t], [sin 2t, -cos 2t]]
///   QWP(t) = R(t) diag(1, i) R(-t)
///   ROTATOR(t) = [[cos t, -sin t], [sin t, cos t]]
///   PHASE(p) = diag(1, e^{i p})
Mat2 jones_matrix(ComponentKind kind, double parameter);

/// Two-port beam splitter matrix; bs_matrix(1/2, 0) is the real Hadamard
/// mixer (1/sqrt2)[[1, 1], [1, -1]]; a nonzero phase puts plates on port 1:
/// diag(1, e^{i p}) * BS0 * diag(1, e^{i p}).
Mat2 bs_matrix(double reflectivity, double phase);

void validate_component(const Component& c, int n_cebits);

/// Checks beam ranges, arities, and that a DETECTOR_BANK only appears last.
void validate_netlist(const Netlist& nl);

CebitRegister apply_component(CebitRegister reg, const Component& c);

/// Applies every component in order. The register width must match.
CebitRegister run_netlist(CebitRegister reg, const Netlist& nl);

/// Per-detector intensities |amplitude|^2, indexed like the register.
std::vector<double> detector_intensities(const CebitRegister& reg);

/// Dense 2^n x 2^n action of the whole netlist, built by running it on each
/// basis vector. Capped at n <= 12.
Matrix transfer_matrix(const Netlist& nl);

/// Line-oriented text form, one component per line: KIND params... beams...
/// (BS carries reflectivity then phase; doubles print with 17 significant
/// digits so a round-trip is bit exact). '#' starts a comment.
std::string netlist_to_text(const Netlist& nl);
Netlist netlist_from_text(int n_cebits, std::string_view text);

}  // namespace cebit
