#include "dsc/errors.hpp"
#include "dsc/reflection.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace dsc;
using dsc::test::sample;

namespace {

Mesh single(const HexVertices& v)
{
    MeshData d;
    d.vertices.assign(v.begin(), v.end());
    d.cells.push_back({0, 1, 2, 3, 4, 5, 6, 7});
    for (int f = 0; f < 6; ++f) d.boundary.push_back({0, f, BoundaryTag{}, ""});
    return Mesh(d);
}

FluidProperties water_like()
{
    FluidProperties p;
    p.alpha = 1e-3;
    p.mu = 2e-3;
    p.rho_inf = 2.0;
    p.beta_exp = 0.01;
    p.T_inf = 300.0;
    p.g = {0.0, 0.0, -9.81};
    return p;
}

} // namespace

TEST(Reflection, NodalGradientLinearExact)
{
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-4, 4);
    for (int trial = 0; trial < 100; ++trial) {
        Mesh m = single(dsc::test::random_hex(rng));
        const Vec3 a{u(rng), u(rng), u(rng)};
        ScalarField z(1);
        sample(m, z, [&](const Vec3& x) { return 2.0 + dot(a, x); });
        EXPECT_LT(norm(nodal_gradient(m, 0, z) - a), 1e-12 * norm(a));
    }
}

TEST(Reflection, NodalGradientSymmetric)
{
    Mesh m = single(dsc::test::unit_cube(1.0, {-0.5, -0.5, -0.5}));
    ScalarField z(1, 3.0);
    EXPECT_EQ(nodal_gradient(m, 0, z), Vec3{});
    sample(m, z, [](const Vec3& x) { return x.x * x.x; });
    EXPECT_LT(norm(nodal_gradient(m, 0, z)), 1e-15);
}

TEST(Reflection, UniformTemperatureIsFixedPoint)
{
    BoxSpec b;
    b.nx = 3;
    Mesh m(generate_box(b));
    InitialCondition ic;
    ic.temperature = [](const Vec3&) { return 310.0; };
    auto s = initialize(m, ic);
    connection_step(m, s);
    reflection_step(m, s, water_like(), {}, 0.0, 0.1);
    for (double v : s[Field::T].node) EXPECT_NEAR(v, 310.0, 1e-12);
}

TEST(Reflection, SteadyLinearBetweenFixedWalls)
{
    BoxSpec b;
    b.nx = 2;
    auto d = generate_box(b);
    d.assign_patch("xmin", BoundaryTag::no_slip_fixed(300.0));
    d.assign_patch("xmax", BoundaryTag::no_slip_fixed(310.0));
    Mesh m(d);
    InitialCondition ic;
    ic.temperature = [](const Vec3& x) { return 300.0 + 10.0 * x.x; };
    auto s = initialize(m, ic);
    connection_step(m, s);
    const auto before = s[Field::T].node;
    ReflectionOptions ro;
    ro.update_velocity = false;
    reflection_step(m, s, water_like(), {}, 0.0, 0.5, ro);
    for (int c = 0; c < 2; ++c) EXPECT_NEAR(s[Field::T].node[c], before[c], 1e-10);
}

TEST(Reflection, SourceOnlyIntegration)
{
    Mesh m(generate_box({}));
    auto s = initialize(m, {});
    FluidProperties p = water_like();
    p.alpha = 0.0;
    HeatSource q = [](const Vec3&, double) { return 4.0; };
    for (int k = 0; k < 3; ++k) reflection_step(m, s, p, q, 0.0, 0.25, {false, false, false});
    EXPECT_NEAR(s[Field::T].node[0], 3.0, 1e-15);
}

TEST(Reflection, QuiescentVelocity)
{
    Mesh m(generate_box({}));
    InitialCondition ic;
    ic.temperature = [](const Vec3&) { return 300.0; };
    auto s = initialize(m, ic);
    const auto v = update_velocity(m, 0, s, water_like(), 0.1);
    EXPECT_EQ(v, Vec3{});
}

TEST(Reflection, BuoyancyKick)
{
    Mesh m(generate_box({}));
    InitialCondition ic;
    ic.temperature = [](const Vec3&) { return 305.0; };
    auto s = initialize(m, ic);
    const auto p = water_like();
    const double tau = 0.02;
    const Vec3 v = update_velocity(m, 0, s, p, tau);
    const Vec3 expected = tau * p.beta_exp * 5.0 * p.g;
    EXPECT_LT(norm(v - expected), 1e-15);
}

TEST(Reflection, RigidTranslationUnchanged)
{
    BoxSpec b;
    b.nx = b.ny = 2;
    Mesh m(generate_box(b));
    InitialCondition ic;
    ic.temperature = [](const Vec3&) { return 300.0; };
    ic.velocity = [](const Vec3&) { return Vec3{0.3, -0.2, 0.1}; };
    auto s = initialize(m, ic);
    for (int c = 0; c < 4; ++c) EXPECT_LT(norm(update_velocity(m, c, s, water_like(), 0.1) - Vec3{0.3, -0.2, 0.1}), 1e-15);
}

TEST(Reflection, PressureGradientTerm)
{
    Mesh m(generate_box({}));
    InitialCondition ic;
    ic.temperature = [](const Vec3&) { return 300.0; };
    ic.pressure = [](const Vec3& x) { return 4.0 * x.y; };
    auto s = initialize(m, ic);
    const auto p = water_like();
    const Vec3 v = update_velocity(m, 0, s, p, 0.5);
    EXPECT_NEAR(v.y, -0.5 * 4.0 / p.rho_inf, 1e-14);
}

TEST(Reflection, NonFiniteRejected)
{
    Mesh m(generate_box({}));
    auto s = initialize(m, {});
    HeatSource q = [](const Vec3&, double) { return std::numeric_limits<double>::quiet_NaN(); };
    try {
        reflection_step(m, s, water_like(), q, 0.0, 0.1);
        FAIL();
    } catch (const NonFiniteUpdate& e) {
        EXPECT_EQ(e.cell(), 0);
    }
    EXPECT_EQ(s[Field::T].node[0], 0.0);
}

TEST(Reflection, PropertyValidation)
{
    EXPECT_NO_THROW(water_like().validate());
    auto p = water_like();
    p.mu = 0.0;
    EXPECT_THROW(p.validate(), Error);
    p = water_like();
    p.beta_exp = std::numeric_limits<double>::infinity();
    EXPECT_THROW(p.validate(), Error);
    EXPECT_DOUBLE_EQ(water_like().kinematic_viscosity(), 1e-3);
}
