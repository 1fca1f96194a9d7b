#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "cebit/matrix.hpp"

namespace cebit {

/// Default cap on register width: 2^24 amplitudes stays desk-scale (256 MiB).
inline constexpr int kDefaultCebitCap = 24;

/// Computational basis label, most significant cebit first ("011" = |011)).
struct BasisLabel {
    std::vector<std::uint8_t> bits;

    BasisLabel() = default;
    explicit BasisLabel(std::vector<std::uint8_t> b);
    static BasisLabel from_string(std::string_view s);

    int n_cebits() const { return static_cast<int>(bits.size()); }
    std::size_t index() const;
    std::string to_string() const;
};

/// State vector over n cebits: 2^n complex wave amplitudes across 2^(n-1) beams
/// with two polarization components each. Bit 0 of an amplitude index is the
/// polarization cebit (0 = vertical, 1 = horizontal); bits 1..n-1 are position
/// cebits with bit n-1 the coarsest split, so beam = index >> 1.
///
/// Amplitudes are classical field strengths: normalization is tracked, never
/// enforced.
class CebitRegister {
  public:
    CebitRegister(int n_cebits, const BasisLabel& label, int cap = kDefaultCebitCap);
    CebitRegister(int n_cebits, std::vector<Complex> amplitudes, int cap = kDefaultCebitCap);
    static CebitRegister zero(int n_cebits, int cap = kDefaultCebitCap);

    int n_cebits() const { return n_cebits_; }
    std::size_t dim() const { return amps_.size(); }
    std::size_t beam_count() const { return amps_.size() / 2; }

    std::span<const Complex> amplitudes() const { return amps_; }
    Complex& operator[](std::size_t i) { return amps_[i]; }
    const Complex& operator[](std::size_t i) const { return amps_[i]; }

    /// Polarization pair carried by one beam.
    Jones beam_jones(std::size_t beam) const;

    double total_intensity() const;
    double norm() const;

  private:
    int n_cebits_ = 1;
    std::vector<Complex> amps_;
};

/// <a|b> with the left argument conjugated.
Complex inner_product(const CebitRegister& a, const CebitRegister& b);

/// Applies a 2x2 unitary to one cebit of the register (all matching amplitude
/// pairs). Rejects u when max |(U^dagger U - I)| > 1e-9.
CebitRegister apply_on_cebit(CebitRegister reg, int cebit, const Mat2& u);

/// Applies a k x k unitary to the k amplitudes selected by `indices` (gather,
/// multiply, scatter). Indices must be distinct and in range.
CebitRegister apply_on_indices(CebitRegister reg, std::span<const std::size_t> indices,
                               const Matrix& m);

/// Kronecker product; a's cebits become the more significant bits.
CebitRegister tensor_product(const CebitRegister& a, const CebitRegister& b,
                             int cap = kDefaultCebitCap);

/// Largest |difference| between two equally sized registers.
double max_amplitude_diff(const CebitRegister& a, const CebitRegister& b);

/// As max_amplitude_diff but after removing one global phase, aligned on the
/// largest-magnitude amplitude of a.
double phase_aligned_diff(const CebitRegister& a, const CebitRegister& b);

}  // namespace cebit
