#include "dsc/state.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace dsc;

TEST(State, UniformInitialTemperature)
{
    BoxSpec b;
    b.nx = 3;
    Mesh m(generate_box(b));
    InitialCondition ic;
    ic.temperature = [](const Vec3&) { return 300.0; };
    const auto s = initialize(m, ic);
    for (double v : s[Field::T].node) EXPECT_EQ(v, 300.0);
    for (double v : s[Field::T].port) EXPECT_EQ(v, 300.0);
    for (double v : s[Field::T].port_prev) EXPECT_EQ(v, 300.0);
    for (Field f : {Field::Ux, Field::Uy, Field::Uz})
        for (double v : s[f].port) EXPECT_EQ(v, 0.0);
    EXPECT_EQ(s.step_index, 0);
    EXPECT_EQ(s.time, 0.0);
    EXPECT_TRUE(s.all_finite());
}

TEST(State, LinearProfileIsFaceAverageOnParallelepipeds)
{
    std::mt19937_64 rng(4);
    MeshData d;
    const auto v = dsc::test::random_hex(rng, 0.0);
    d.vertices.assign(v.begin(), v.end());
    d.cells.push_back({0, 1, 2, 3, 4, 5, 6, 7});
    for (int f = 0; f < 6; ++f) d.boundary.push_back({0, f, BoundaryTag{}, ""});
    Mesh m(d);
    const Vec3 a{1.5, -2.0, 0.25};
    InitialCondition ic;
    ic.temperature = [&](const Vec3& x) { return 7.0 + dot(a, x); };
    const auto s = initialize(m, ic);
    // For a parallelepiped the centroid value is the mean of opposite face values.
    for (int mu = 0; mu < 3; ++mu)
        EXPECT_NEAR(s[Field::T].node[0], 0.5 * (s[Field::T].port_at(0, 2 * mu) + s[Field::T].port_at(0, 2 * mu + 1)),
                    1e-12);
}

TEST(State, RotateHistory)
{
    Mesh m(generate_box({}));
    auto s = initialize(m, {});
    auto& t = s[Field::T];
    t.port[0] = 1.0;
    t.port[3] = 2.0;
    t.port[5] = 3.0;
    rotate_port_history(s);
    EXPECT_EQ(t.port_prev[0], 1.0);
    EXPECT_EQ(t.port_prev[3], 2.0);
    EXPECT_EQ(t.port_prev[5], 3.0);
    rotate_port_history(s);
    EXPECT_EQ(t.port, t.port_prev);
    EXPECT_EQ(s.step_index, 0);
}

TEST(State, NonFiniteDetected)
{
    Mesh m(generate_box({}));
    auto s = initialize(m, {});
    s[Field::P].port_prev[4] = std::nan("");
    EXPECT_FALSE(s.all_finite());
}

TEST(State, FieldNames)
{
    EXPECT_EQ(field_name(Field::T), "T");
    EXPECT_EQ(field_name(Field::P), "p");
}
