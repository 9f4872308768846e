#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

namespace bykov {

struct Vec2 {
    double x = 0, y = 0;
};

// Row-major 2x2: [[a, b], [c, d]].
struct Mat2 {
    double a = 1, b = 0, c = 0, d = 1;

    double det() const { return a * d - b * c; }
    double trace() const { return a + d; }
    Vec2 operator*(Vec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    static Mat2 identity() { return {}; }
};

// Roots of z^2 - tr z + det. Pass det separately when it is known more
// accurately than a*d - b*c (products of strongly contracting factors).
inline std::array<std::complex<double>, 2> eigenvalues(double tr, double det) {
    const double t = tr / 2.0;
    const double disc = t * t - det;
    if (disc >= 0) {
        const double s = std::sqrt(disc);
        // avoid cancellation in the smaller root
        const double big = t >= 0 ? t + s : t - s;
        const double small = big != 0 ? det / big : 0.0;
        return {std::complex<double>(big, 0), std::complex<double>(small, 0)};
    }
    const double s = std::sqrt(-disc);
    return {std::complex<double>(t, s), std::complex<double>(t, -s)};
}

inline std::array<std::complex<double>, 2> eigenvalues(const Mat2& m) { return eigenvalues(m.trace(), m.det()); }

// Entry-wise relative error with an absolute floor set by the matrix scale.
inline double rel_error(const Mat2& x, const Mat2& ref) {
    const double scale = std::max({std::abs(ref.a), std::abs(ref.b), std::abs(ref.c), std::abs(ref.d)});
    const double e = std::max({std::abs(x.a - ref.a), std::abs(x.b - ref.b), std::abs(x.c - ref.c),
                               std::abs(x.d - ref.d)});
    return scale > 0 ? e / scale : e;
}

}  // namespace bykov
