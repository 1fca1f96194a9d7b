#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace cebit {

using Complex = std::complex<double>;

/// Jones vector of one beam: vertical and horizontal field amplitudes.
struct Jones {
    Complex v{};
    Complex h{};
};

/// 2x2 complex matrix, row major: [[a, b], [c, d]].
struct Mat2 {
    Complex a{}, b{}, c{}, d{};

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    Mat2 adjoint() const {
        return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)};
    }
    Complex det() const { return a * d - b * c; }

    friend Mat2 operator*(const Mat2& l, const Mat2& r) {
        return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d,
                l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d};
    }
    friend Mat2 operator*(Complex s, const Mat2& m) {
        return {s * m.a, s * m.b, s * m.c, s * m.d};
    }
    Jones apply(const Jones& j) const { return {a * j.v + b * j.h, c * j.v + d * j.h}; }
};

/// max_ij |(U^dagger U - I)_ij|
inline double unitarity_deviation(const Mat2& u) {
    Mat2 g = u.adjoint() * u;
    g.a -= 1.0;
    g.d -= 1.0;
    double dev = 0.0;
    for (Complex e : {g.a, g.b, g.c, g.d}) dev = std::max(dev, std::abs(e));
    return dev;
}

inline bool is_unitary(const Mat2& u, double tol) { return unitarity_deviation(u) <= tol; }

/// Dense complex matrix, row major. Sized for transfer matrices (<= 4096 x 4096)
/// and multiport meshes (<= 256 x 256); nothing here needs a BLAS.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), v_(rows * cols) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Complex& at(std::size_t r, std::size_t c) { return v_[r * cols_ + c]; }
    const Complex& at(std::size_t r, std::size_t c) const { return v_[r * cols_ + c]; }

    Matrix adjoint() const {
        Matrix m(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) m.at(c, r) = std::conj(at(r, c));
        return m;
    }

    friend Matrix operator*(const Matrix& l, const Matrix& r) {
        if (l.cols_ != r.rows_) throw std::invalid_argument("matrix dimension mismatch");
        Matrix m(l.rows_, r.cols_);
        for (std::size_t i = 0; i < l.rows_; ++i)
            for (std::size_t k = 0; k < l.cols_; ++k) {
                Complex lik = l.at(i, k);
                if (lik == Complex{}) continue;
                for (std::size_t j = 0; j < r.cols_; ++j) m.at(i, j) += lik * r.at(k, j);
            }
        return m;
    }

    static Matrix kron(const Matrix& a, const Matrix& b) {
        Matrix m(a.rows_ * b.rows_, a.cols_ * b.cols_);
        for (std::size_t ar = 0; ar < a.rows_; ++ar)
            for (std::size_t ac = 0; ac < a.cols_; ++ac) {
                Complex s = a.at(ar, ac);
                if (s == Complex{}) continue;
                for (std::size_t br = 0; br < b.rows_; ++br)
                    for (std::size_t bc = 0; bc < b.cols_; ++bc)
                        m.at(ar * b.rows_ + br, ac * b.cols_ + bc) = s * b.at(br, bc);
            }
        return m;
    }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> v_;
};

inline Matrix to_matrix(const Mat2& u) {
    Matrix m(2, 2);
    m.at(0, 0) = u.a;
    m.at(0, 1) = u.b;
    m.at(1, 0) = u.c;
    m.at(1, 1) = u.d;
    return m;
}

inline double unitarity_deviation(const Matrix& u) {
    if (u.rows() != u.cols()) throw std::invalid_argument("unitarity check needs a square matrix");
    Matrix g = u.adjoint() * u;
    double dev = 0.0;
    for (std::size_t r = 0; r < g.rows(); ++r)
        for (std::size_t c = 0; c < g.cols(); ++c) {
            Complex e = g.at(r, c) - (r == c ? Complex{1.0} : Complex{});
            dev = std::max(dev, std::abs(e));
        }
    return dev;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("matrix dimension mismatch");
    double dev = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
            dev = std::max(dev, std::abs(a.at(r, c) - b.at(r, c)));
    return dev;
}

/// Distance between a and b after removing one global phase: b is rotated so that
/// its entry at a's largest-magnitude position matches a's phase there.
inline double phase_aligned_distance(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("matrix dimension mismatch");
    std::size_t br = 0, bc = 0;
    double best = -1.0;
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
            if (std::abs(a.at(r, c)) > best) {
                best = std::abs(a.at(r, c));
                br = r;
                bc = c;
            }
    Complex phase{1.0};
    Complex pa = a.at(br, bc), pb = b.at(br, bc);
    if (std::abs(pa) > 0.0 && std::abs(pb) > 0.0) phase = (pa / pb) * (std::abs(pb) / std::abs(pa));
    double dev = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
            dev = std::max(dev, std::abs(a.at(r, c) - phase * b.at(r, c)));
    return dev;
}

inline double phase_aligned_distance(const Mat2& a, const Mat2& b) {
    return phase_aligned_distance(to_matrix(a), to_matrix(b));
}

}  // namespace cebit
