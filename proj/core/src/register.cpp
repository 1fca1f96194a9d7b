#include "cebit/register.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cebit {

namespace {

void check_width(int n_cebits, int cap) {
    if (n_cebits < 1) throw std::invalid_argument("register needs at least one cebit");
    if (n_cebits > cap)
        throw std::invalid_argument("register width " + std::to_string(n_cebits) +
                                    " exceeds cap " + std::to_string(cap));
}

}  // namespace

BasisLabel::BasisLabel(std::vector<std::uint8_t> b) : bits(std::move(b)) {
    for (auto bit : bits)
        if (bit > 1) throw std::invalid_argument("basis label bits must be 0 or 1");
}

BasisLabel BasisLabel::from_string(std::string_view s) {
    std::vector<std::uint8_t> bits;
    bits.reserve(s.size());
    for (char c : s) {
        if (c != '0' && c != '1') throw std::invalid_argument("basis label bits must be 0 or 1");
        bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return BasisLabel(std::move(bits));
}

std::size_t BasisLabel::index() const {
    std::size_t idx = 0;
    for (auto bit : bits) idx = (idx << 1) | bit;
    return idx;
}

std::string BasisLabel::to_string() const {
    std::string s;
    s.reserve(bits.size());
    for (auto bit : bits) s.push_back(static_cast<char>('0' + bit));
    return s;
}

CebitRegister::CebitRegister(int n_cebits, const BasisLabel& label, int cap) : n_cebits_(n_cebits) {
    check_width(n_cebits, cap);
    if (label.n_cebits() != n_cebits)
        throw std::invalid_argument("basis label length does not match register width");
    amps_.assign(std::size_t{1} << n_cebits, Complex{});
    amps_[label.index()] = 1.0;
}

CebitRegister::CebitRegister(int n_cebits, std::vector<Complex> amplitudes, int cap)
    : n_cebits_(n_cebits), amps_(std::move(amplitudes)) {
    check_width(n_cebits, cap);
    if (amps_.size() != (std::size_t{1} << n_cebits))
        throw std::invalid_argument("amplitude count must be 2^n");
}

CebitRegister CebitRegister::zero(int n_cebits, int cap) {
    check_width(n_cebits, cap);
    return CebitRegister(n_cebits, std::vector<Complex>(std::size_t{1} << n_cebits), cap);
}

Jones CebitRegister::beam_jones(std::size_t beam) const {
    if (beam >= beam_count()) throw std::out_of_range("beam index out of range");
    return {amps_[2 * beam], amps_[2 * beam + 1]};
}

double CebitRegister::total_intensity() const {
    double sum = 0.0;
    for (const Complex& a : amps_) sum += std::norm(a);
    return sum;
}

double CebitRegister::norm() const { return std::sqrt(total_intensity()); }

Complex inner_product(const CebitRegister& a, const CebitRegister& b) {
    if (a.n_cebits() != b.n_cebits())
        throw std::invalid_argument("inner product needs registers of equal width");
    Complex sum{};
    for (std::size_t i = 0; i < a.dim(); ++i) sum += std::conj(a[i]) * b[i];
    return sum;
}

CebitRegister apply_on_cebit(CebitRegister reg, int cebit, const Mat2& u) {
    if (cebit < 0 || cebit >= reg.n_cebits()) throw std::out_of_range("cebit index out of range");
    if (!is_unitary(u, 1e-9)) throw std::invalid_argument("matrix is not unitary within 1e-9");
    const std::size_t step = std::size_t{1} << cebit;
    const std::size_t dim = reg.dim();
    for (std::size_t group = 0; group < dim; group += 2 * step)
        for (std::size_t i = group; i < group + step; ++i) {
            Complex a0 = reg[i];
            Complex a1 = reg[i + step];
            reg[i] = u.a * a0 + u.b * a1;
            reg[i + step] = u.c * a0 + u.d * a1;
        }
    return reg;
}

CebitRegister apply_on_indices(CebitRegister reg, std::span<const std::size_t> indices,
                               const Matrix& m) {
    const std::size_t k = indices.size();
    if (m.rows() != k || m.cols() != k)
        throw std::invalid_argument("matrix size does not match index count");
    if (unitarity_deviation(m) > 1e-9)
        throw std::invalid_argument("matrix is not unitary within 1e-9");
    for (std::size_t i = 0; i < k; ++i) {
        if (indices[i] >= reg.dim()) throw std::out_of_range("amplitude index out of range");
        for (std::size_t j = i + 1; j < k; ++j)
            if (indices[i] == indices[j])
                throw std::invalid_argument("amplitude indices must be distinct");
    }
    std::vector<Complex> gathered(k);
    for (std::size_t i = 0; i < k; ++i) gathered[i] = reg[indices[i]];
    for (std::size_t r = 0; r < k; ++r) {
        Complex sum{};
        for (std::size_t c = 0; c < k; ++c) sum += m.at(r, c) * gathered[c];
        reg[indices[r]] = sum;
    }
    return reg;
}

CebitRegister tensor_product(const CebitRegister& a, const CebitRegister& b, int cap) {
    int n = a.n_cebits() + b.n_cebits();
    check_width(n, cap);
    std::vector<Complex> amps(std::size_t{1} << n);
    const std::size_t bdim = b.dim();
    for (std::size_t ia = 0; ia < a.dim(); ++ia) {
        if (a[ia] == Complex{}) continue;
        for (std::size_t ib = 0; ib < bdim; ++ib) amps[ia * bdim + ib] = a[ia] * b[ib];
    }
    return CebitRegister(n, std::move(amps), cap);
}

double max_amplitude_diff(const CebitRegister& a, const CebitRegister& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("registers differ in width");
    double dev = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) dev = std::max(dev, std::abs(a[i] - b[i]));
    return dev;
}

double phase_aligned_diff(const CebitRegister& a, const CebitRegister& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("registers differ in width");
    std::size_t best = 0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        if (std::abs(a[i]) > std::abs(a[best])) best = i;
    Complex phase{1.0};
    if (std::abs(a[best]) > 0.0 && std::abs(b[best]) > 0.0)
        phase = (a[best] / b[best]) * (std::abs(b[best]) / std::abs(a[best]));
    double dev = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) dev = std::max(dev, std::abs(a[i] - phase * b[i]));
    return dev;
}

}  // namespace cebit
