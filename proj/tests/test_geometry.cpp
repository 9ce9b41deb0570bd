#include "dsc/errors.hpp"
#include "dsc/geometry.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace dsc;
using dsc::test::random_hex;
using dsc::test::unit_cube;

namespace {

HexVertices parallelepiped(const Vec3& b0, const Vec3& b1, const Vec3& b2)
{
    HexVertices v;
    for (int k = 0; k < 8; ++k) v[k] = double(k & 1) * b0 + double((k >> 1) & 1) * b1 + double((k >> 2) & 1) * b2;
    return v;
}

double max_abs_diff(const Mat3& a, const Mat3& b)
{
    double d = 0.0;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) d = std::max(d, std::abs(a(r, c) - b(r, c)));
    return d;
}

} // namespace

TEST(Geometry, UnitCube)
{
    const auto g = build_cell_geometry(unit_cube());
    EXPECT_EQ(g.node_vec[0], (Vec3{1, 0, 0}));
    EXPECT_EQ(g.node_vec[1], (Vec3{0, 1, 0}));
    EXPECT_EQ(g.node_vec[2], (Vec3{0, 0, 1}));
    for (int f = 0; f < 6; ++f) EXPECT_DOUBLE_EQ(norm(g.face[f]), 1.0);
    EXPECT_DOUBLE_EQ(g.volume, 1.0);
    // Outward: face 2mu points along -e_mu, face 2mu+1 along +e_mu.
    EXPECT_EQ(g.face[0], (Vec3{-1, 0, 0}));
    EXPECT_EQ(g.face[5], (Vec3{0, 0, 1}));
}

TEST(Geometry, EdgeLabelling)
{
    std::mt19937_64 rng(7);
    const auto v = random_hex(rng);
    const auto g = build_cell_geometry(v);
    // Edge 4 mu + nu joins the nu-th corner with bit mu clear to its partner.
    EXPECT_EQ(g.edge[0], v[1] - v[0]);
    EXPECT_EQ(g.edge[3], v[7] - v[6]);
    EXPECT_EQ(g.edge[4], v[2] - v[0]);
    EXPECT_EQ(g.edge[5], v[3] - v[1]);
    EXPECT_EQ(g.edge[8], v[4] - v[0]);
    EXPECT_EQ(g.edge[11], v[7] - v[3]);
    for (int mu = 0; mu < 3; ++mu) {
        Vec3 s;
        for (int nu = 0; nu < 4; ++nu) s += g.edge[4 * mu + nu];
        EXPECT_EQ(g.node_vec[mu], s / 4.0);
    }
}

TEST(Geometry, ShearedParallelepiped)
{
    const auto g = build_cell_geometry(parallelepiped({1, 0, 0}, {0.5, 1, 0}, {0, 0, 1}));
    EXPECT_NEAR(g.volume, 1.0, 1e-15);
    Mat3 expected = Mat3::identity();
    expected(1, 0) = -0.5;
    EXPECT_LT(max_abs_diff(g.gamma, expected), 1e-15);
    // gamma^T beta = I by direct multiplication.
    EXPECT_LT(max_abs_diff(g.gamma.transposed() * g.beta, Mat3::identity()), 1e-15);
}

TEST(Geometry, ClosedSurfaceOnPerturbedCubes)
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const auto g = build_cell_geometry(dsc::test::jittered_cube(rng, 0.2));
        Vec3 sum;
        double scale = 0.0;
        for (const auto& f : g.face) {
            sum += f;
            scale = std::max(scale, norm(f));
        }
        EXPECT_LT(norm(sum), 1e-12 * scale);
    }
}

TEST(Geometry, VolumeScaling)
{
    EXPECT_DOUBLE_EQ(cell_volume(unit_cube()), 1.0);
    EXPECT_DOUBLE_EQ(cell_volume(unit_cube(2.0)), 8.0);

    std::mt19937_64 rng(3);
    const auto v = random_hex(rng);
    auto w = v;
    for (auto& p : w) p = 3.0 * p;
    const auto g = build_cell_geometry(v);
    const auto h = build_cell_geometry(w);
    EXPECT_NEAR(h.volume, 27.0 * g.volume, 1e-12 * h.volume);
    for (int mu = 0; mu < 3; ++mu) EXPECT_NEAR(norm(h.node_vec[mu]), 3.0 * norm(g.node_vec[mu]), 1e-12);
    for (int f = 0; f < 6; ++f) EXPECT_NEAR(norm(h.face[f]), 9.0 * norm(g.face[f]), 1e-12 * norm(h.face[f]));
}

TEST(Geometry, VolumeMatchesTetrahedralSplitOnPlanarFaces)
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        // Affine images of the cube have planar faces.
        const auto v = random_hex(rng, 0.0);
        EXPECT_NEAR(cell_volume(v), dsc::test::six_tet_volume(v), 1e-12 * cell_volume(v));
    }
    // Frustum: planar faces, not a parallelepiped.
    HexVertices f = unit_cube();
    for (int k = 4; k < 8; ++k) f[k] = Vec3{0.25 + 0.5 * (k & 1), 0.25 + 0.5 * ((k >> 1) & 1), 1.0};
    EXPECT_NEAR(cell_volume(f), dsc::test::six_tet_volume(f), 1e-12);
    EXPECT_NEAR(cell_volume(f), 7.0 / 12.0, 1e-12);
}

TEST(Geometry, ParallelepipedVolumeEqualsDeterminant)
{
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        const auto g = build_cell_geometry(random_hex(rng, 0.0));
        EXPECT_NEAR(g.volume, std::abs(g.beta.determinant()), 1e-12 * g.volume);
    }
}

TEST(Geometry, DualBasis)
{
    const auto id = dual_basis({Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}});
    EXPECT_LT(max_abs_diff(id.gamma, Mat3::identity()), 1e-16);
    EXPECT_LT(max_abs_diff(id.beta, Mat3::identity()), 1e-16);

    const auto scaled = dual_basis({Vec3{4, 0, 0}, Vec3{0, 4, 0}, Vec3{0, 0, 4}});
    Mat3 quarter;
    quarter(0, 0) = quarter(1, 1) = quarter(2, 2) = 0.25;
    EXPECT_LT(max_abs_diff(scaled.gamma, quarter), 1e-16);

    // Round trip a = gamma (b_mu . a) on the sheared basis.
    const std::array<Vec3, 3> b{Vec3{1, 0, 0}, Vec3{0.5, 1, 0}, Vec3{0, 0, 1}};
    const auto d = dual_basis(b);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int i = 0; i < 100; ++i) {
        const Vec3 a{u(rng), u(rng), u(rng)};
        const Vec3 back = d.gamma * Vec3{dot(b[0], a), dot(b[1], a), dot(b[2], a)};
        EXPECT_LT(norm(back - a), 1e-12 * std::max(1.0, norm(a)));
    }

    EXPECT_THROW(dual_basis({Vec3{1, 0, 0}, Vec3{2, 0, 0}, Vec3{0, 0, 1}}), SingularBasis);
}

TEST(Geometry, FluxCoefficients)
{
    const auto g = build_cell_geometry(unit_cube());
    EXPECT_DOUBLE_EQ(std::abs(g.flux[0][0]), 1.0);
    EXPECT_EQ(g.flux[0][1], 0.0);
    EXPECT_EQ(g.flux[0][2], 0.0);

    // s[i] . (b_mu . a) reproduces f_i . a.
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int trial = 0; trial < 100; ++trial) {
        const auto h = build_cell_geometry(random_hex(rng));
        const Vec3 a{u(rng), u(rng), u(rng)};
        for (int f = 0; f < 6; ++f) {
            double s = 0.0;
            for (int mu = 0; mu < 3; ++mu) s += h.flux[f][mu] * dot(h.node_vec[mu], a);
            EXPECT_NEAR(s, dot(h.face[f], a), 1e-12 * (1.0 + norm(h.face[f]) * norm(a)));
        }
    }

    std::array<Vec3, 6> zero{};
    for (const auto& row : flux_coefficients(zero, g.gamma))
        for (double s : row) EXPECT_EQ(s, 0.0);
}

TEST(Geometry, SignConsistencyOnValidCells)
{
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 200; ++trial) {
        const auto g = build_cell_geometry(random_hex(rng));
        for (int f = 0; f < 6; ++f) EXPECT_LT(face_parity(f) * g.flux[f][face_axis(f)], 0.0);
    }
}

TEST(Geometry, DegenerateCellsAreRejected)
{
    auto v = unit_cube();
    v[7] = v[6]; // collapsed edge, volume still positive
    EXPECT_NO_THROW(build_cell_geometry(v));

    auto flat = unit_cube();
    for (int k = 4; k < 8; ++k) flat[k].z = 0.0;
    EXPECT_THROW(build_cell_geometry(flat, 42), DegenerateCell);
    try {
        build_cell_geometry(flat, 42);
    } catch (const DegenerateCell& e) {
        EXPECT_EQ(e.cell(), 42);
    }

    auto inverted = unit_cube();
    std::swap(inverted[0], inverted[1]);
    std::swap(inverted[2], inverted[3]);
    std::swap(inverted[4], inverted[5]);
    std::swap(inverted[6], inverted[7]);
    EXPECT_THROW(cell_volume(inverted), DegenerateCell);

    auto nan = unit_cube();
    nan[3].x = std::nan("");
    EXPECT_THROW(build_cell_geometry(nan), DegenerateCell);
}
