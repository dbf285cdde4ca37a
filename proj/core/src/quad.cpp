#include "qexp/quad.hpp"

#include <cmath>
#include <stdexcept>

namespace qexp {

QuadMatrix QuadMatrix::adjoint() const {
    return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)};
}

QuadMatrix QuadMatrix::inverse() const {
    const cplx dt = det();
    if (dt == 0.0) throw std::domain_error("singular quadrature matrix");
    return {d / dt, -b / dt, -c / dt, a / dt};
}

double QuadMatrix::frobenius() const {
    return std::sqrt(std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d));
}

QuadMatrix& QuadMatrix::operator+=(const QuadMatrix& o) {
    a += o.a; b += o.b; c += o.c; d += o.d;
    return *this;
}

QuadMatrix& QuadMatrix::operator-=(const QuadMatrix& o) {
    a -= o.a; b -= o.b; c -= o.c; d -= o.d;
    return *this;
}

QuadMatrix& QuadMatrix::operator*=(cplx s) {
    a *= s; b *= s; c *= s; d *= s;
    return *this;
}

QuadMatrix operator+(QuadMatrix x, const QuadMatrix& y) { return x += y; }
QuadMatrix operator-(QuadMatrix x, const QuadMatrix& y) { return x -= y; }
QuadMatrix operator*(QuadMatrix x, cplx s) { return x *= s; }
QuadMatrix operator*(cplx s, QuadMatrix x) { return x *= s; }

QuadMatrix operator*(const QuadMatrix& x, const QuadMatrix& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
            x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

QuadVector operator*(const QuadMatrix& m, const QuadVector& v) {
    return {m.a * v.c + m.b * v.s, m.c * v.c + m.d * v.s};
}

QuadVector operator*(cplx s, const QuadVector& v) { return {s * v.c, s * v.s}; }
QuadVector operator+(const QuadVector& x, const QuadVector& y) { return {x.c + y.c, x.s + y.s}; }

QuadVector row_times(const QuadVector& row, const QuadMatrix& m) {
    return {row.c * m.a + row.s * m.c, row.c * m.b + row.s * m.d};
}

cplx dot(const QuadVector& row, const QuadVector& v) { return row.c * v.c + row.s * v.s; }
QuadVector conj(const QuadVector& v) { return {std::conj(v.c), std::conj(v.s)}; }
double norm2(const QuadVector& v) { return std::norm(v.c) + std::norm(v.s); }

QuadMatrix rot(double phi) {
    const double cs = std::cos(phi), sn = std::sin(phi);
    return {cs, -sn, sn, cs};
}

QuadMatrix sqz(double q) { return QuadMatrix::diag(std::exp(q), std::exp(-q)); }

QuadMatrix prop(double phi, double psi, double theta, double q, double omega, double se_trip) {
    const cplx phase = std::exp(cplx(0.0, omega * se_trip));
    return rot(phi) * rot(theta) * sqz(q) * rot(-theta) * rot(psi) * phase;
}

}  // namespace qexp
