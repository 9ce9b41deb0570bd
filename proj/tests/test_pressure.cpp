#include "dsc/errors.hpp"
#include "dsc/pressure.hpp"

#include "test_support.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace dsc;
using dsc::test::sample;

namespace {

Mesh cube_box(int n)
{
    BoxSpec b;
    b.nx = b.ny = b.nz = n;
    return Mesh(generate_box(b));
}

FluidProperties fluid()
{
    FluidProperties p;
    p.alpha = 1e-3;
    p.mu = 1e-3;
    p.rho_inf = 1.0;
    p.beta_exp = 1e-2;
    p.T_inf = 300.0;
    p.g = {0.0, 0.0, -9.81};
    return p;
}

// Standard 7-point finite-volume Neumann Laplacian on a uniform n^3 box of
// unit size, coefficient A/h = h, with p[0] pinned to zero.
Eigen::VectorXd dense_neumann_solve(int n, const Eigen::VectorXd& rhs)
{
    const int N = n * n * n;
    const double h = 1.0 / n;
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(N, N);
    auto id = [n](int i, int j, int k) { return i + n * (j + n * k); };
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const int c = id(i, j, k);
                const int nb[6][3] = {{i - 1, j, k}, {i + 1, j, k}, {i, j - 1, k},
                                      {i, j + 1, k}, {i, j, k - 1}, {i, j, k + 1}};
                for (const auto& q : nb) {
                    if (q[0] < 0 || q[0] >= n || q[1] < 0 || q[1] >= n || q[2] < 0 || q[2] >= n) continue;
                    L(c, id(q[0], q[1], q[2])) += h;
                    L(c, c) -= h;
                }
            }
    Eigen::VectorXd b = rhs;
    L.row(0).setZero();
    L(0, 0) = 1.0;
    b(0) = 0.0;
    return L.fullPivLu().solve(b);
}

} // namespace

TEST(Pressure, DivergenceIntegralExamples)
{
    Mesh m(generate_box({}));
    InitialCondition ic;
    ic.velocity = [](const Vec3&) { return Vec3{1.0, 2.0, -3.0}; };
    auto s = initialize(m, ic);
    EXPECT_NEAR(divergence_integral(m, 0, s), 0.0, 1e-12);

    ic.velocity = [](const Vec3& x) { return Vec3{x.x, 0.0, 0.0}; };
    s = initialize(m, ic);
    EXPECT_NEAR(divergence_integral(m, 0, s), 1.0, 1e-14);

    ic.velocity = [](const Vec3& x) { return cross(Vec3{0.2, -1.0, 0.5}, x); };
    s = initialize(m, ic);
    EXPECT_NEAR(divergence_integral(m, 0, s), 0.0, 1e-14);
}

TEST(Pressure, DivergenceOfLinearFieldOnDistortedCells)
{
    Mesh m(dsc::test::jittered_box(3, 0.25, 17));
    InitialCondition ic;
    ic.velocity = [](const Vec3& x) { return 0.5 * x + Vec3{1.0, -2.0, 0.3}; };
    const auto s = initialize(m, ic);
    // div u = 1.5; the cell volume is the same face-centroid surface sum.
    for (int c = 0; c < static_cast<int>(m.num_cells()); ++c)
        EXPECT_NEAR(divergence_integral(m, c, s), 1.5 * m.geometry(c).volume, 1e-12);
}

TEST(Pressure, ZeroRightHandSideNeedsNoSweeps)
{
    Mesh m = cube_box(3);
    ScalarField p(m.num_cells());
    std::vector<double> I(m.num_cells(), 0.0);
    const auto st = solve_pressure(m, I, 0.1, 1.0, {}, p);
    EXPECT_EQ(st.sweeps, 0);
    for (double v : p.node) EXPECT_EQ(v, 0.0);
}

TEST(Pressure, UniformDivergenceIsNullSpace)
{
    Mesh m = cube_box(2);
    ScalarField p(m.num_cells());
    std::vector<double> I(m.num_cells(), 0.3);
    const auto st = solve_pressure(m, I, 0.1, 1.0, {}, p);
    EXPECT_EQ(st.sweeps, 0);
    for (double v : p.node) EXPECT_EQ(v, 0.0);
}

TEST(Pressure, MatchesDenseSolveOnSingleSource)
{
    const int n = 3;
    Mesh m = cube_box(n);
    const int N = n * n * n;
    std::vector<double> I(N, 0.0);
    I[13] = 1e-2;
    const double tau = 0.5, rho = 2.0;
    SorParams sp;
    sp.eps_cell = 1e-15;
    sp.max_inner = 5000;
    ScalarField p(N);
    solve_pressure(m, I, tau, rho, sp, p);

    Eigen::VectorXd rhs(N);
    for (int c = 0; c < N; ++c) rhs(c) = (I[c] - I[13] / N) * rho / tau;
    const Eigen::VectorXd oracle = dense_neumann_solve(n, rhs);
    double scale = oracle.cwiseAbs().maxCoeff();
    for (int c = 0; c < N; ++c) EXPECT_NEAR(p.node[c], oracle(c), 1e-8 * scale) << "cell " << c;
    EXPECT_EQ(p.node[0], 0.0);
}

TEST(Pressure, SorDivergesWithBadOmega)
{
    Mesh m = cube_box(3);
    std::vector<double> I(m.num_cells(), 0.0);
    I[4] = 1.0;
    SorParams sp;
    sp.omega = 3.5;
    sp.eps_cell = 1e-14;
    ScalarField p(m.num_cells());
    EXPECT_THROW(solve_pressure(m, I, 1.0, 1.0, sp, p), SorDiverged);
}

TEST(Pressure, ParamsValidation)
{
    SorParams sp;
    EXPECT_NO_THROW(sp.validate());
    sp.omega = 2.0;
    EXPECT_THROW(sp.validate(), Error);
    sp = {};
    sp.eps_global = 0.0;
    EXPECT_THROW(sp.validate(), Error);
}

TEST(Pressure, CorrectionWithConstantGradient)
{
    auto d = generate_box({3, 3, 3});
    Mesh m(d);
    auto s = initialize(m, {});
    ScalarField p(m.num_cells());
    const Vec3 a{1.0, -2.0, 0.5};
    sample(m, p, [&](const Vec3& x) { return dot(a, x); });
    const double tau = 0.1, rho = 2.0;
    correct_velocity(m, s, p, tau, rho);
    for (const auto& f : m.faces()) {
        if (f.is_boundary()) {
            EXPECT_EQ(s.port_velocity(f.side[0].cell, f.side[0].local), Vec3{});
            continue;
        }
        for (const auto& sl : f.side)
            EXPECT_LT(norm(s.port_velocity(sl.cell, sl.local) + (tau / rho) * a), 1e-13);
    }
    for (int c = 0; c < 27; ++c) {
        EXPECT_LT(norm(s.node_velocity(c) + (tau / rho) * a), 1e-13);
        EXPECT_NEAR(s[Field::P].node[c], p.node[c], 1e-15);
    }
}

TEST(Pressure, CorrectionWithUniformPressureIsNoOp)
{
    Mesh m = cube_box(2);
    InitialCondition ic;
    ic.velocity = [](const Vec3& x) { return Vec3{x.y, 0.0, 0.0}; };
    auto s = initialize(m, ic);
    const auto before = s;
    ScalarField p(m.num_cells(), 0.0);
    correct_velocity(m, s, p, 0.1, 1.0);
    for (int c = 0; c < 8; ++c) EXPECT_EQ(s.node_velocity(c), before.node_velocity(c));
}

namespace {

// Outward unit velocity on every face of the centre cell of a 3^3 box.
FieldState point_source(const Mesh& m)
{
    auto s = initialize(m, {});
    const int c = 13;
    for (int f = 0; f < 6; ++f) {
        const Vec3 area = m.geometry(c).face[f];
        const Vec3 u = 0.1 * area / norm(area);
        const Slot nb = m.neighbor(c, f);
        for (const Slot sl : {Slot{c, f}, nb}) {
            s[Field::Ux].port[6 * sl.cell + sl.local] = u.x;
            s[Field::Uy].port[6 * sl.cell + sl.local] = u.y;
            s[Field::Uz].port[6 * sl.cell + sl.local] = u.z;
        }
    }
    return s;
}

} // namespace

TEST(Pressure, CorrectionReducesSourceDivergence)
{
    Mesh m = cube_box(3);
    auto s = point_source(m);
    const auto I = divergence_integrals(m, s);
    ScalarField dp(m.num_cells());
    SorParams sp;
    sp.eps_cell = 1e-14;
    sp.max_inner = 2000;
    solve_pressure(m, I, 0.1, 1.0, sp, dp);
    correct_velocity(m, s, dp, 0.1, 1.0);
    EXPECT_LT(std::abs(divergence_integral(m, 13, s)), 0.1 * std::abs(I[13]));
}

TEST(Pressure, ProjectionLoopSemantics)
{
    Mesh m = cube_box(3);
    auto quiet = initialize(m, {});
    const auto st0 = projection_loop(m, quiet, fluid(), 0.1, {});
    EXPECT_EQ(st0.outer_iterations, 0);
    EXPECT_TRUE(st0.converged);

    auto s = point_source(m);
    SorParams once;
    once.eps_global = std::numeric_limits<double>::infinity();
    once.eps_cell = 1e-12;
    const auto st1 = projection_loop(m, s, fluid(), 0.1, once);
    EXPECT_EQ(st1.outer_iterations, 1);

    auto t = point_source(m);
    SorParams tight;
    tight.eps_global = 1e-10;
    tight.max_outer = 20;
    const auto st = projection_loop(m, t, fluid(), 0.1, tight);
    EXPECT_TRUE(st.converged);
    EXPECT_LT(st.final_sum, 1e-10);
    EXPECT_LE(st.outer_iterations, 20);
    EXPECT_LT(st.final_sum, st.initial_sum);
}

TEST(Pressure, NotConvergedWhenAsked)
{
    Mesh m = cube_box(3);
    auto s = point_source(m);
    SorParams sp;
    sp.eps_global = 1e-30;
    sp.max_outer = 2;
    sp.max_inner = 2;
    sp.abort_on_not_converged = true;
    EXPECT_THROW(projection_loop(m, s, fluid(), 0.1, sp), NotConverged);
    auto t = point_source(m);
    sp.abort_on_not_converged = false;
    const auto st = projection_loop(m, t, fluid(), 0.1, sp);
    EXPECT_FALSE(st.converged);
    EXPECT_EQ(st.outer_iterations, 2);
}
