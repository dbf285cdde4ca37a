#pragma once

#include <array>
#include <complex>

namespace qexp {

using cplx = std::complex<double>;

// Column (or, where stated, row) vector of (cosine, sine) quadratures.
struct QuadVector {
    cplx c{0}, s{0};

    cplx& operator[](int i) { return i == 0 ? c : s; }
    const cplx& operator[](int i) const { return i == 0 ? c : s; }
};

struct QuadMatrix {
    // row-major: a b / c d
    cplx a{0}, b{0}, c{0}, d{0};

    static QuadMatrix identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static QuadMatrix diag(cplx x, cplx y) { return {x, 0.0, 0.0, y}; }

    cplx det() const { return a * d - b * c; }
    cplx trace() const { return a + d; }
    QuadMatrix adjoint() const;
    QuadMatrix transpose() const { return {a, c, b, d}; }
    // Adjugate inverse. Throws std::domain_error on an exactly singular matrix.
    QuadMatrix inverse() const;
    double frobenius() const;

    QuadMatrix& operator+=(const QuadMatrix& o);
    QuadMatrix& operator-=(const QuadMatrix& o);
    QuadMatrix& operator*=(cplx s);
};

QuadMatrix operator+(QuadMatrix x, const QuadMatrix& y);
QuadMatrix operator-(QuadMatrix x, const QuadMatrix& y);
QuadMatrix operator*(const QuadMatrix& x, const QuadMatrix& y);
QuadMatrix operator*(QuadMatrix x, cplx s);
QuadMatrix operator*(cplx s, QuadMatrix x);
QuadVector operator*(const QuadMatrix& m, const QuadVector& v);
QuadVector operator*(cplx s, const QuadVector& v);
QuadVector operator+(const QuadVector& x, const QuadVector& y);

// Row vector times matrix: r^T M.
QuadVector row_times(const QuadVector& row, const QuadMatrix& m);
// Bilinear r^T v without conjugation.
cplx dot(const QuadVector& row, const QuadVector& v);
QuadVector conj(const QuadVector& v);
double norm2(const QuadVector& v);

QuadMatrix rot(double phi);
QuadMatrix sqz(double q);
// Single SE pass: O(phi) O(theta) S(q) O(-theta) O(psi) exp(i omega tau).
QuadMatrix prop(double phi, double psi, double theta, double q, double omega, double se_trip);

}  // namespace qexp
