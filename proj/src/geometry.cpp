#include "dsc/geometry.hpp"

#include "dsc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dsc {

namespace {

// Base corners (bit `axis` cleared) in ascending order.
std::array<int, 4> edge_bases(int axis)
{
    std::array<int, 4> bases{};
    int n = 0;
    for (int k = 0; k < 8; ++k)
        if (((k >> axis) & 1) == 0) bases[n++] = k;
    return bases;
}

// Sum of the two edges parallel to `dir` lying on the side `side` of `axis`.
Vec3 face_edge_sum(const std::array<Vec3, 12>& edge, int dir, int axis, int side)
{
    const auto bases = edge_bases(dir);
    Vec3 s;
    for (int nu = 0; nu < 4; ++nu)
        if (((bases[nu] >> axis) & 1) == side) s += edge[4 * dir + nu];
    return s;
}

std::array<Vec3, 12> edge_vectors(const HexVertices& v)
{
    std::array<Vec3, 12> e{};
    for (int mu = 0; mu < 3; ++mu) {
        const auto bases = edge_bases(mu);
        for (int nu = 0; nu < 4; ++nu) e[4 * mu + nu] = v[bases[nu] | (1 << mu)] - v[bases[nu]];
    }
    return e;
}

std::array<Vec3, 6> face_vectors(const std::array<Vec3, 12>& e)
{
    std::array<Vec3, 6> f{};
    for (int iota = 0; iota < 6; ++iota) {
        const int mu = face_axis(iota);
        const int side = iota % 2;
        const int a = (mu + 1) % 3;
        const int b = (mu + 2) % 3;
        f[iota] = (face_parity(iota) / 4.0)
                * cross(face_edge_sum(e, b, mu, side), face_edge_sum(e, a, mu, side));
    }
    return f;
}

std::array<Vec3, 6> face_centers(const HexVertices& v)
{
    std::array<Vec3, 6> c{};
    for (int iota = 0; iota < 6; ++iota) {
        Vec3 s;
        for (int k : face_corners(iota)) s += v[k];
        c[iota] = s / 4.0;
    }
    return c;
}

double divergence_volume(const std::array<Vec3, 6>& f, const std::array<Vec3, 6>& c)
{
    double vol = 0.0;
    for (int iota = 0; iota < 6; ++iota) vol += dot(c[iota], f[iota]);
    return vol / 3.0;
}

} // namespace

std::array<int, 4> face_corners(int face)
{
    const int mu = face_axis(face);
    const int side = face % 2;
    const int a = (mu + 1) % 3;
    const int b = (mu + 2) % 3;
    const int base = side << mu;
    return {base, base | (1 << a), base | (1 << a) | (1 << b), base | (1 << b)};
}

DualBasis dual_basis(const std::array<Vec3, 3>& b)
{
    DualBasis d;
    d.beta = Mat3::from_columns(b[0], b[1], b[2]);
    const double scale = std::max({norm(b[0]), norm(b[1]), norm(b[2])});
    const double det = d.beta.determinant();
    if (!std::isfinite(det) || std::abs(det) < 1e-14 * scale * scale * scale || scale == 0.0)
        throw SingularBasis("node vectors are linearly dependent (det = " + std::to_string(det) + ")");
    d.gamma = inverse(d.beta.transposed());
    return d;
}

std::array<std::array<double, 3>, 6> flux_coefficients(const std::array<Vec3, 6>& face,
                                                       const Mat3& gamma)
{
    std::array<std::array<double, 3>, 6> s{};
    for (int iota = 0; iota < 6; ++iota)
        for (int mu = 0; mu < 3; ++mu) s[iota][mu] = dot(face[iota], gamma.column(mu));
    return s;
}

std::array<std::array<double, 3>, 6> flux_coefficients(const CellGeometry& g)
{
    return flux_coefficients(g.face, g.gamma);
}

double cell_volume(const HexVertices& v, long cell_id)
{
    for (const auto& p : v)
        if (!is_finite(p)) throw DegenerateCell(cell_id, "non-finite corner");
    Vec3 center;
    for (const auto& p : v) center += p;
    center = center / 8.0;
    auto c = face_centers(v);
    for (auto& x : c) x -= center;
    const double vol = divergence_volume(face_vectors(edge_vectors(v)), c);
    if (!(vol > 0.0)) throw DegenerateCell(cell_id, "volume " + std::to_string(vol) + " <= 0");
    return vol;
}

CellGeometry build_cell_geometry(const HexVertices& v, long cell_id)
{
    for (const auto& p : v)
        if (!is_finite(p)) throw DegenerateCell(cell_id, "non-finite corner");

    CellGeometry g;
    g.edge = edge_vectors(v);
    for (int mu = 0; mu < 3; ++mu) {
        Vec3 s;
        for (int nu = 0; nu < 4; ++nu) s += g.edge[4 * mu + nu];
        g.node_vec[mu] = s / 4.0;
    }
    g.face = face_vectors(g.edge);
    g.face_center = face_centers(v);
    Vec3 c;
    for (const auto& p : v) c += p;
    g.center = c / 8.0;

    // Face centers relative to the node.
    std::array<Vec3, 6> rel{};
    for (int iota = 0; iota < 6; ++iota) rel[iota] = g.face_center[iota] - g.center;
    g.volume = divergence_volume(g.face, rel);
    if (!(g.volume > 0.0))
        throw DegenerateCell(cell_id, "volume " + std::to_string(g.volume) + " <= 0");

    try {
        const auto d = dual_basis(g.node_vec);
        g.beta = d.beta;
        g.gamma = d.gamma;
    } catch (const SingularBasis& e) {
        throw DegenerateCell(cell_id, e.what());
    }
    g.flux = flux_coefficients(g.face, g.gamma);
    return g;
}

} // namespace dsc
