#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace dsc {

/// Cartesian 3-vector. Components are coordinates w.r.t. the global
/// orthonormal frame.
struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    constexpr double operator[](std::size_t i) const { return i == 0 ? x : (i == 1 ? y : z); }
    constexpr double& operator[](std::size_t i) { return i == 0 ? x : (i == 1 ? y : z); }

    constexpr Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    constexpr Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    constexpr Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

    friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
    friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
    friend constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
    friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
    friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
    friend constexpr Vec3 operator/(Vec3 a, double s) { return a *= (1.0 / s); }
    friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b)
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline bool is_finite(const Vec3& a)
{
    return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

/// Dense 3x3 matrix, row-major: m[row][col].
struct Mat3 {
    std::array<std::array<double, 3>, 3> m{};

    constexpr double operator()(std::size_t r, std::size_t c) const { return m[r][c]; }
    constexpr double& operator()(std::size_t r, std::size_t c) { return m[r][c]; }

    static constexpr Mat3 identity()
    {
        Mat3 i;
        i.m[0][0] = i.m[1][1] = i.m[2][2] = 1.0;
        return i;
    }

    static constexpr Mat3 from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2)
    {
        Mat3 a;
        for (std::size_t r = 0; r < 3; ++r) {
            a.m[r][0] = c0[r];
            a.m[r][1] = c1[r];
            a.m[r][2] = c2[r];
        }
        return a;
    }

    constexpr Vec3 column(std::size_t c) const { return {m[0][c], m[1][c], m[2][c]}; }
    constexpr Vec3 row(std::size_t r) const { return {m[r][0], m[r][1], m[r][2]}; }

    constexpr Mat3 transposed() const
    {
        Mat3 t;
        for (std::size_t r = 0; r < 3; ++r)
            for (std::size_t c = 0; c < 3; ++c) t.m[c][r] = m[r][c];
        return t;
    }

    constexpr double determinant() const
    {
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
             - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
             + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    }

    friend constexpr Vec3 operator*(const Mat3& a, const Vec3& v)
    {
        return {dot(a.row(0), v), dot(a.row(1), v), dot(a.row(2), v)};
    }

    friend constexpr Mat3 operator*(const Mat3& a, const Mat3& b)
    {
        Mat3 c;
        for (std::size_t r = 0; r < 3; ++r)
            for (std::size_t k = 0; k < 3; ++k)
                for (std::size_t j = 0; j < 3; ++j) c.m[r][k] += a.m[r][j] * b.m[j][k];
        return c;
    }
};

/// Inverse by cofactors; caller guarantees a non-singular matrix.
inline Mat3 inverse(const Mat3& a)
{
    const double det = a.determinant();
    Mat3 inv;
    inv.m[0][0] = (a.m[1][1] * a.m[2][2] - a.m[1][2] * a.m[2][1]) / det;
    inv.m[0][1] = (a.m[0][2] * a.m[2][1] - a.m[0][1] * a.m[2][2]) / det;
    inv.m[0][2] = (a.m[0][1] * a.m[1][2] - a.m[0][2] * a.m[1][1]) / det;
    inv.m[1][0] = (a.m[1][2] * a.m[2][0] - a.m[1][0] * a.m[2][2]) / det;
    inv.m[1][1] = (a.m[0][0] * a.m[2][2] - a.m[0][2] * a.m[2][0]) / det;
    inv.m[1][2] = (a.m[0][2] * a.m[1][0] - a.m[0][0] * a.m[1][2]) / det;
    inv.m[2][0] = (a.m[1][0] * a.m[2][1] - a.m[1][1] * a.m[2][0]) / det;
    inv.m[2][1] = (a.m[0][1] * a.m[2][0] - a.m[0][0] * a.m[2][1]) / det;
    inv.m[2][2] = (a.m[0][0] * a.m[1][1] - a.m[0][1] * a.m[1][0]) / det;
    return inv;
}

} // namespace dsc
