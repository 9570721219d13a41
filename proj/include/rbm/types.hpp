#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace rbm {

using cplx = std::complex<double>;

// Row-major 2x2 matrix and plane vectors. The process lives in R x R_+,
// so nothing here needs more than two dimensions.
using Vec2 = std::array<double, 2>;
using CVec2 = std::array<cplx, 2>;
using Mat2 = std::array<std::array<double, 2>, 2>;

inline constexpr Mat2 kIdentity2{{{1.0, 0.0}, {0.0, 1.0}}};

inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }

inline cplx dot(const Vec2& a, const CVec2& b) { return a[0] * b[0] + a[1] * b[1]; }

inline double norm(const Vec2& a) { return std::hypot(a[0], a[1]); }

inline Vec2 mul(const Mat2& m, const Vec2& v)
{
    return {m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]};
}

inline Mat2 mul(const Mat2& a, const Mat2& b)
{
    Mat2 c{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return c;
}

inline Mat2 transpose(const Mat2& m) { return {{{m[0][0], m[1][0]}, {m[0][1], m[1][1]}}}; }

inline double det(const Mat2& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

inline Vec2 unit_direction(double alpha) { return {std::cos(alpha), std::sin(alpha)}; }

} // namespace rbm
