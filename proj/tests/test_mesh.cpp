#include "dsc/errors.hpp"
#include "dsc/mesh.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

using namespace dsc;

namespace {

// Brute-force quad counting: pairs of local faces with equal vertex sets.
std::pair<int, int> count_faces_by_quads(const MeshData& d)
{
    std::vector<std::set<int>> quads;
    for (const auto& c : d.cells)
        for (int f = 0; f < 6; ++f) {
            std::set<int> q;
            for (int k : face_corners(f)) q.insert(c[k]);
            quads.push_back(q);
        }
    int interior = 0, boundary = 0;
    for (std::size_t i = 0; i < quads.size(); ++i) {
        int matches = 0;
        for (std::size_t j = 0; j < quads.size(); ++j)
            if (i != j && quads[i] == quads[j]) ++matches;
        if (matches == 0)
            ++boundary;
        else
            ++interior;
    }
    return {interior / 2, boundary};
}

} // namespace

TEST(Mesh, SingleCellBox)
{
    Mesh m(generate_box({}));
    EXPECT_EQ(m.num_cells(), 1u);
    EXPECT_EQ(m.faces().size(), 6u);
    for (const auto& f : m.faces()) EXPECT_TRUE(f.is_boundary());
}

TEST(Mesh, TwoCellBox)
{
    BoxSpec s;
    s.nx = 2;
    Mesh m(generate_box(s));
    int interior = 0, boundary = 0;
    for (const auto& f : m.faces()) (f.is_boundary() ? boundary : interior)++;
    EXPECT_EQ(interior, 1);
    EXPECT_EQ(boundary, 10);
    EXPECT_EQ(m.neighbor(0, 1), (Slot{1, 0}));
}

TEST(Mesh, FaceCountsMatchQuadOracle)
{
    BoxSpec s;
    s.nx = s.ny = 10;
    const auto d = generate_box(s);
    Mesh m(d);
    int interior = 0, boundary = 0;
    for (const auto& f : m.faces()) (f.is_boundary() ? boundary : interior)++;
    const auto [qi, qb] = count_faces_by_quads(d);
    EXPECT_EQ(interior, qi);
    EXPECT_EQ(boundary, qb);
    EXPECT_EQ(interior, 180);
    EXPECT_EQ(boundary, 240);
}

TEST(Mesh, NeighborIsInvolutive)
{
    Mesh m(dsc::test::jittered_box(4, 0.2, 1));
    for (int c = 0; c < static_cast<int>(m.num_cells()); ++c)
        for (int f = 0; f < 6; ++f) {
            const Slot n = m.neighbor(c, f);
            if (n.cell < 0) continue;
            EXPECT_EQ(m.neighbor(n.cell, n.local), (Slot{c, f}));
            EXPECT_EQ(m.face_of(c, f), m.face_of(n.cell, n.local));
        }
}

TEST(Mesh, SharedFacesAgree)
{
    Mesh m(dsc::test::jittered_box(4, 0.25, 2));
    for (const auto& f : m.faces()) {
        if (f.is_boundary()) continue;
        const auto& a = m.geometry(f.side[0].cell).face[f.side[0].local];
        const auto& b = m.geometry(f.side[1].cell).face[f.side[1].local];
        EXPECT_LT(norm(a + b), 1e-12 * norm(a));
    }
}

TEST(Mesh, BoxVolumeAndGrading)
{
    BoxSpec s;
    s.nx = 5;
    s.ny = 3;
    s.nz = 2;
    s.lengths = {2.0, 1.5, 0.5};
    s.grading = {4.0, 1.0, 1.0};
    Mesh m(generate_box(s));
    EXPECT_NEAR(m.total_volume(), 1.5, 1e-12);
    // Last x cell four times as wide as the first.
    const double first = m.geometry(0).node_vec[0].x;
    const double last = m.geometry(4).node_vec[0].x;
    EXPECT_NEAR(last / first, 4.0, 1e-12);
}

TEST(Mesh, InvalidBoxDimensions)
{
    BoxSpec s;
    s.nx = 0;
    EXPECT_THROW(generate_box(s), InvalidDimensions);
    s.nx = 1;
    s.lengths.y = -1.0;
    EXPECT_THROW(generate_box(s), InvalidDimensions);
}

TEST(Mesh, BoxPatches)
{
    BoxSpec s;
    s.nx = 3;
    s.ny = 2;
    Mesh m(generate_box(s));
    EXPECT_EQ(m.patch_slots("xmin").size(), 2u);
    EXPECT_EQ(m.patch_slots("zmax").size(), 6u);
    EXPECT_EQ(m.cells_on_patch("xmax"), (std::vector<int>{2, 5}));
    for (const auto& sl : m.patch_slots("xmax")) EXPECT_EQ(sl.local, 1);
}

TEST(Mesh, PeriodicBox)
{
    BoxSpec s;
    s.nx = 3;
    s.ny = 2;
    s.periodic = {true, false, false};
    const auto d = generate_box(s);
    EXPECT_EQ(d.periodic.size(), 2u);
    Mesh m(d);
    EXPECT_TRUE(m.patch_slots("xmin").empty());
    EXPECT_EQ(m.neighbor(2, 1), (Slot{0, 0}));
    EXPECT_EQ(m.neighbor(0, 0), (Slot{2, 1}));
}

TEST(Mesh, AnnulusRing)
{
    AnnulusSpec s;
    s.nr = 1;
    s.ntheta = 8;
    const auto d = generate_annulus(s);
    Mesh m(d);
    EXPECT_EQ(m.num_cells(), 8u);
    int theta_interior = 0;
    for (const auto& f : m.faces())
        if (!f.is_boundary() && face_axis(f.side[0].local) == 1) ++theta_interior;
    EXPECT_EQ(theta_interior, 8);
    const auto rep = validate_mesh(d);
    EXPECT_TRUE(rep.ok());
    EXPECT_EQ(rep.count(MeshFinding::Kind::NearSingularDenominator), 0u);
}

TEST(Mesh, AnnulusVolume)
{
    AnnulusSpec s;
    s.nr = 3;
    s.ntheta = 32;
    Mesh m(generate_annulus(s));
    const double exact = std::numbers::pi * (s.r_outer * s.r_outer - s.r_inner * s.r_inner) * s.length;
    EXPECT_NEAR(m.total_volume(), exact, 0.02 * exact);
    for (std::size_t c = 0; c < m.num_cells(); ++c) {
        const auto& g = m.geometry(c);
        for (int f = 0; f < 6; ++f) EXPECT_LT(face_parity(f) * g.flux[f][face_axis(f)], 0.0);
    }
}

TEST(Mesh, AnnulusMirrorSymmetry)
{
    AnnulusSpec s;
    s.nr = 2;
    s.ntheta = 16;
    Mesh m(generate_annulus(s));
    for (int r = 0; r < s.nr; ++r)
        for (int j = 0; j < s.ntheta; ++j) {
            const auto& a = m.geometry(j * s.nr + r).center;
            const auto& b = m.geometry((s.ntheta - 1 - j) * s.nr + r).center;
            EXPECT_NEAR(a.x, -b.x, 1e-12);
            EXPECT_NEAR(a.y, b.y, 1e-12);
        }
}

TEST(Mesh, InvalidAnnulus)
{
    AnnulusSpec s;
    s.ntheta = 6;
    EXPECT_THROW(generate_annulus(s), InvalidDimensions);
    s.ntheta = 8;
    s.r_inner = 0.2;
    EXPECT_THROW(generate_annulus(s), InvalidDimensions);
}

TEST(Mesh, ValidationReportsCollapsedCell)
{
    BoxSpec s;
    s.nx = 3;
    auto d = generate_box(s);
    // Squash cell 1 flat by moving its +x corners onto the -x ones.
    auto& c = d.cells[1];
    for (int k : {1, 3, 5, 7}) d.vertices[c[k]] = d.vertices[c[k - 1]];
    const auto rep = validate_mesh(d);
    ASSERT_FALSE(rep.ok());
    ASSERT_GE(rep.count(MeshFinding::Kind::DegenerateCell), 1u);
    bool named = false;
    for (const auto& f : rep.findings)
        if (f.kind == MeshFinding::Kind::DegenerateCell) named = named || f.cell == 1;
    EXPECT_TRUE(named);
    EXPECT_THROW(Mesh{d}, MeshError);
}

TEST(Mesh, ValidationCollectsAllFindings)
{
    BoxSpec s;
    s.nx = 2;
    auto d = generate_box(s);
    d.boundary.erase(d.boundary.begin());              // untagged boundary face
    d.boundary.push_back({0, 1, BoundaryTag{}, ""});   // tag on the interior face
    d.boundary.push_back(d.boundary.front());          // duplicate tag
    d.cells.push_back({0, 1, 2, 3, 4, 5, 6, 999});     // bad vertex index
    const auto rep = validate_mesh(d);
    EXPECT_EQ(rep.count(MeshFinding::Kind::UntaggedBoundary), 1u);
    EXPECT_EQ(rep.count(MeshFinding::Kind::TagOnInteriorFace), 1u);
    EXPECT_EQ(rep.count(MeshFinding::Kind::DuplicateTag), 1u);
    EXPECT_EQ(rep.count(MeshFinding::Kind::InvalidVertexIndex), 1u);
    try {
        Mesh m(d);
        FAIL();
    } catch (const MeshError& e) {
        EXPECT_EQ(e.findings().size(), rep.findings.size());
    }
}

TEST(Mesh, UnitCubeReport)
{
    const auto rep = validate_mesh(generate_box({}));
    EXPECT_TRUE(rep.ok());
    EXPECT_DOUBLE_EQ(rep.min_volume, 1.0);
    EXPECT_NEAR(rep.worst_nonorthogonality_deg, 0.0, 1e-12);
}

TEST(Mesh, BoundaryTagNames)
{
    for (const auto& t : {BoundaryTag::no_slip_adiabatic(), BoundaryTag::no_slip_fixed(300.0),
                          BoundaryTag::free_slip_adiabatic(), BoundaryTag::free_slip_fixed(1.5)}) {
        const auto back = BoundaryTag::from_name(t.name(), t.has_value() ? std::optional(t.temperature) : std::nullopt);
        EXPECT_EQ(back, t);
    }
    EXPECT_THROW(BoundaryTag::from_name("sticky"), UnknownTag);
    EXPECT_THROW(BoundaryTag::from_name("noslip-fixed"), UnknownTag);
}

TEST(MeshIo, RoundTripIsExact)
{
    auto d = dsc::test::jittered_box(3, 0.3, 5);
    d.assign_patch("xmin", BoundaryTag::no_slip_fixed(1.0 / 3.0));
    std::stringstream ss;
    write_mesh(ss, d);
    const auto back = read_mesh(ss);
    ASSERT_EQ(back.vertices.size(), d.vertices.size());
    for (std::size_t i = 0; i < d.vertices.size(); ++i) EXPECT_EQ(back.vertices[i], d.vertices[i]);
    EXPECT_EQ(back.cells, d.cells);
    ASSERT_EQ(back.boundary.size(), d.boundary.size());
    for (std::size_t i = 0; i < d.boundary.size(); ++i) {
        EXPECT_EQ(back.boundary[i].cell, d.boundary[i].cell);
        EXPECT_EQ(back.boundary[i].local_face, d.boundary[i].local_face);
        EXPECT_EQ(back.boundary[i].tag, d.boundary[i].tag);
    }
    std::stringstream again;
    write_mesh(again, back);
    std::stringstream first;
    write_mesh(first, d);
    EXPECT_EQ(again.str(), first.str());
}

TEST(MeshIo, PeriodicSectionRoundTrips)
{
    BoxSpec s;
    s.nx = 2;
    s.periodic = {true, false, false};
    const auto d = generate_box(s);
    std::stringstream ss;
    write_mesh(ss, d);
    const auto back = read_mesh(ss);
    ASSERT_EQ(back.periodic.size(), 1u);
    EXPECT_EQ(back.periodic[0].cell_a, d.periodic[0].cell_a);
    EXPECT_NO_THROW(Mesh{back});
}

TEST(MeshIo, MalformedInputReportsLine)
{
    std::stringstream ss("VERTICES 1\n0 0 0\nCELLS 1\n0 0 0 0 0 0 0\n");
    try {
        read_mesh(ss);
        FAIL();
    } catch (const IoError& e) {
        EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
    }
    std::stringstream tag("VERTICES 0\nCELLS 0\nBOUNDARY 1\n0 0 warm\n");
    EXPECT_THROW(read_mesh(tag), Error);
    EXPECT_THROW(read_mesh_file("/nonexistent/mesh.txt"), IoError);
}
