#include "dsc/mesh.hpp"

#include "dsc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace dsc {

BoundaryTag BoundaryTag::from_name(const std::string& name, std::optional<double> value)
{
    BoundaryTag t;
    const auto dash = name.find('-');
    if (dash == std::string::npos) throw UnknownTag("unknown boundary tag '" + name + "'");
    const std::string vel = name.substr(0, dash);
    const std::string th = name.substr(dash + 1);
    if (vel == "noslip")
        t.velocity = VelocityCondition::NoSlip;
    else if (vel == "freeslip")
        t.velocity = VelocityCondition::FreeSlip;
    else
        throw UnknownTag("unknown boundary tag '" + name + "'");
    if (th == "adiabatic") {
        t.thermal = ThermalCondition::Adiabatic;
    } else if (th == "fixed") {
        if (!value) throw UnknownTag("boundary tag '" + name + "' requires a temperature");
        t.thermal = ThermalCondition::FixedTemperature;
        t.temperature = *value;
    } else {
        throw UnknownTag("unknown boundary tag '" + name + "'");
    }
    return t;
}

std::string BoundaryTag::name() const
{
    std::string s = velocity == VelocityCondition::NoSlip ? "noslip" : "freeslip";
    return s + (thermal == ThermalCondition::Adiabatic ? "-adiabatic" : "-fixed");
}

HexVertices MeshData::cell_vertices(std::size_t cell) const
{
    HexVertices hv;
    for (int k = 0; k < 8; ++k) hv[k] = vertices[cells[cell][k]];
    return hv;
}

std::size_t MeshData::assign_patch(const std::string& patch, const BoundaryTag& tag)
{
    std::size_t n = 0;
    for (auto& b : boundary)
        if (b.patch == patch) {
            b.tag = tag;
            ++n;
        }
    return n;
}

std::vector<std::string> MeshData::patch_names() const
{
    std::vector<std::string> names;
    for (const auto& b : boundary)
        if (!b.patch.empty() && std::find(names.begin(), names.end(), b.patch) == names.end())
            names.push_back(b.patch);
    return names;
}

std::string MeshFinding::describe() const
{
    static const char* names[] = {"DegenerateCell",     "InvalidVertexIndex", "OverSharedFace",
                                  "UntaggedBoundary",   "DuplicateTag",       "TagOnInteriorFace",
                                  "PeriodicMismatch",   "AreaMismatch",       "SignInconsistency",
                                  "NearSingularDenominator"};
    std::ostringstream os;
    os << names[static_cast<int>(kind)];
    if (cell >= 0) os << " cell " << cell;
    if (face >= 0) os << " face " << face;
    if (!detail.empty()) os << ": " << detail;
    return os.str();
}

std::size_t MeshReport::count(MeshFinding::Kind k) const
{
    return static_cast<std::size_t>(
        std::count_if(findings.begin(), findings.end(), [k](const auto& f) { return f.kind == k; }));
}

namespace {

using Kind = MeshFinding::Kind;

struct Assembly {
    MeshReport report;
    std::vector<CellGeometry> geometry;
    std::vector<bool> geometry_ok;
    std::vector<Face> faces;
    std::vector<int> slot_face;
};

std::array<int, 4> face_key(const MeshData& d, int cell, int local)
{
    std::array<int, 4> key{};
    const auto corners = face_corners(local);
    for (int i = 0; i < 4; ++i) key[i] = d.cells[cell][corners[i]];
    std::sort(key.begin(), key.end());
    return key;
}

Assembly assemble(const MeshData& d)
{
    Assembly a;
    auto& rep = a.report;
    const auto ncell = d.cells.size();
    rep.cells = ncell;
    a.geometry.resize(ncell);
    a.geometry_ok.assign(ncell, false);
    a.slot_face.assign(6 * ncell, -1);

    const auto nvert = static_cast<long>(d.vertices.size());
    rep.min_volume = std::numeric_limits<double>::infinity();
    rep.max_volume = 0.0;
    rep.min_relative_denominator = std::numeric_limits<double>::infinity();

    std::vector<bool> indices_ok(ncell, true);
    for (std::size_t c = 0; c < ncell; ++c) {
        for (int v : d.cells[c])
            if (v < 0 || v >= nvert) indices_ok[c] = false;
        if (!indices_ok[c]) {
            rep.findings.push_back({Kind::InvalidVertexIndex, static_cast<long>(c), -1, ""});
            continue;
        }
        try {
            a.geometry[c] = build_cell_geometry(d.cell_vertices(c), static_cast<long>(c));
            a.geometry_ok[c] = true;
        } catch (const DegenerateCell& e) {
            rep.findings.push_back({Kind::DegenerateCell, static_cast<long>(c), -1, e.what()});
            continue;
        }
        const auto& g = a.geometry[c];
        rep.min_volume = std::min(rep.min_volume, g.volume);
        rep.max_volume = std::max(rep.max_volume, g.volume);
        for (int f = 0; f < 6; ++f) {
            const double signed_s = face_parity(f) * g.flux[f][face_axis(f)];
            const double ref = face_parity(0) * g.flux[0][0];
            if (!(signed_s * ref > 0.0))
                rep.findings.push_back({Kind::SignInconsistency, static_cast<long>(c), f,
                                        "(-1)^i s[i][i/2] = " + std::to_string(signed_s)});
            const Vec3& b = g.node_vec[face_axis(f)];
            const double cosang = std::abs(dot(g.face[f], b)) / (norm(g.face[f]) * norm(b));
            const double ang = std::acos(std::min(1.0, cosang)) * 180.0 / std::numbers::pi;
            rep.worst_nonorthogonality_deg = std::max(rep.worst_nonorthogonality_deg, ang);
        }
    }
    if (ncell == 0) rep.min_volume = 0.0;

    // Slot pairing by sorted vertex keys; std::map keeps the order deterministic.
    std::map<std::array<int, 4>, std::vector<Slot>> by_key;
    for (std::size_t c = 0; c < ncell; ++c) {
        if (!indices_ok[c]) continue;
        for (int f = 0; f < 6; ++f)
            by_key[face_key(d, static_cast<int>(c), f)].push_back({static_cast<int>(c), f});
    }

    std::map<std::pair<int, int>, Slot> partner;
    for (const auto& [key, slots] : by_key) {
        if (slots.size() > 2) {
            rep.findings.push_back({Kind::OverSharedFace, slots[0].cell, slots[0].local,
                                    std::to_string(slots.size()) + " cells share the face"});
        } else if (slots.size() == 2) {
            partner[{slots[0].cell, slots[0].local}] = slots[1];
            partner[{slots[1].cell, slots[1].local}] = slots[0];
        }
    }
    for (const auto& p : d.periodic) {
        const Slot sa{p.cell_a, p.face_a};
        const Slot sb{p.cell_b, p.face_b};
        const bool in_range = p.cell_a >= 0 && p.cell_b >= 0 && static_cast<std::size_t>(p.cell_a) < ncell
                           && static_cast<std::size_t>(p.cell_b) < ncell && p.face_a >= 0 && p.face_a < 6
                           && p.face_b >= 0 && p.face_b < 6;
        if (!in_range || partner.count({sa.cell, sa.local}) || partner.count({sb.cell, sb.local})
            || (sa == sb)) {
            rep.findings.push_back({Kind::PeriodicMismatch, p.cell_a, p.face_a, "invalid or already matched slot"});
            continue;
        }
        if (a.geometry_ok[sa.cell] && a.geometry_ok[sb.cell]) {
            const Vec3 fa = a.geometry[sa.cell].face[sa.local];
            const Vec3 fb = a.geometry[sb.cell].face[sb.local];
            if (norm(fa + fb) > 1e-10 * norm(fa))
                rep.findings.push_back({Kind::PeriodicMismatch, p.cell_a, p.face_a, "face vectors are not opposite"});
        }
        partner[{sa.cell, sa.local}] = sb;
        partner[{sb.cell, sb.local}] = sa;
    }

    std::map<std::pair<int, int>, const BoundaryEntry*> tags;
    for (const auto& b : d.boundary) {
        if (b.cell < 0 || static_cast<std::size_t>(b.cell) >= ncell || b.local_face < 0 || b.local_face > 5) {
            rep.findings.push_back({Kind::UntaggedBoundary, b.cell, b.local_face, "tag references a missing slot"});
            continue;
        }
        const std::pair<int, int> k{b.cell, b.local_face};
        if (partner.count(k)) {
            rep.findings.push_back({Kind::TagOnInteriorFace, b.cell, b.local_face, b.tag.name()});
            continue;
        }
        if (tags.count(k)) {
            rep.findings.push_back({Kind::DuplicateTag, b.cell, b.local_face, b.tag.name()});
            continue;
        }
        tags[k] = &b;
    }

    // Faces in cell/slot order.
    for (std::size_t c = 0; c < ncell; ++c) {
        if (!indices_ok[c]) continue;
        for (int f = 0; f < 6; ++f) {
            const int ci = static_cast<int>(c);
            if (a.slot_face[6 * c + f] >= 0) continue;
            Face face;
            face.side[0] = {ci, f};
            face.side[1] = {-1, -1};
            const auto it = partner.find({ci, f});
            if (it != partner.end()) {
                face.side[1] = it->second;
            } else {
                const auto t = tags.find({ci, f});
                if (t == tags.end())
                    rep.findings.push_back({Kind::UntaggedBoundary, ci, f, ""});
                else
                    face.tag = t->second->tag;
            }
            const int idx = static_cast<int>(a.faces.size());
            a.slot_face[6 * c + f] = idx;
            if (!face.is_boundary()) a.slot_face[6 * face.side[1].cell + face.side[1].local] = idx;
            a.faces.push_back(face);
        }
    }

    for (std::size_t fi = 0; fi < a.faces.size(); ++fi) {
        const auto& face = a.faces[fi];
        if (face.is_boundary()) {
            ++rep.boundary_faces;
            continue;
        }
        ++rep.interior_faces;
        const Slot z = face.side[0];
        const Slot x = face.side[1];
        if (!a.geometry_ok[z.cell] || !a.geometry_ok[x.cell]) continue;
        const auto& gz = a.geometry[z.cell];
        const auto& gx = a.geometry[x.cell];
        const double az = norm(gz.face[z.local]);
        const double ax = norm(gx.face[x.local]);
        if (std::abs(az - ax) > 1e-12 * std::max(az, ax))
            rep.findings.push_back({Kind::AreaMismatch, z.cell, z.local,
                                    "areas " + std::to_string(az) + " vs " + std::to_string(ax)});
        const double denom = gz.flux[z.local][face_axis(z.local)]
                           + face_parity(z.local) * face_parity(x.local) * gx.flux[x.local][face_axis(x.local)];
        const double scale = std::cbrt(std::min(gz.volume, gx.volume));
        rep.min_relative_denominator = std::min(rep.min_relative_denominator, std::abs(denom) / scale);
        if (!(std::abs(denom) >= 1e-12 * scale))
            rep.findings.push_back({Kind::NearSingularDenominator, z.cell, z.local,
                                    "|d| = " + std::to_string(std::abs(denom))});
    }
    if (rep.interior_faces == 0) rep.min_relative_denominator = 0.0;
    return a;
}

} // namespace

MeshReport validate_mesh(const MeshData& data) { return assemble(data).report; }

Mesh::Mesh(MeshData data) : data_(std::move(data))
{
    auto a = assemble(data_);
    if (!a.report.ok()) {
        std::vector<std::string> lines;
        for (const auto& f : a.report.findings) lines.push_back(f.describe());
        throw MeshError("mesh validation failed with " + std::to_string(lines.size()) + " finding(s)",
                        std::move(lines));
    }
    geometry_ = std::move(a.geometry);
    faces_ = std::move(a.faces);
    slot_face_ = std::move(a.slot_face);
}

Slot Mesh::neighbor(int cell, int local) const
{
    const auto& f = faces_[face_of(cell, local)];
    if (f.is_boundary()) return {-1, -1};
    return f.side[0] == Slot{cell, local} ? f.side[1] : f.side[0];
}

double Mesh::total_volume() const
{
    double v = 0.0;
    for (const auto& g : geometry_) v += g.volume;
    return v;
}

double Mesh::mean_face_area() const
{
    double a = 0.0;
    for (const auto& f : faces_) a += norm(geometry_[f.side[0].cell].face[f.side[0].local]);
    return faces_.empty() ? 0.0 : a / static_cast<double>(faces_.size());
}

std::vector<int> Mesh::cells_on_patch(const std::string& patch) const
{
    std::set<int> cells;
    for (const auto& b : data_.boundary)
        if (b.patch == patch) cells.insert(b.cell);
    return {cells.begin(), cells.end()};
}

std::vector<Slot> Mesh::patch_slots(const std::string& patch) const
{
    std::vector<Slot> s;
    for (const auto& b : data_.boundary)
        if (b.patch == patch) s.push_back({b.cell, b.local_face});
    return s;
}

namespace {

std::vector<double> graded_nodes(int n, double length, double origin, double ratio)
{
    std::vector<double> x(n + 1);
    if (ratio == 1.0 || n == 1) {
        for (int i = 0; i <= n; ++i) x[i] = origin + length * i / n;
        return x;
    }
    const double q = std::pow(ratio, 1.0 / (n - 1));
    double total = 0.0, h = 1.0;
    for (int i = 0; i < n; ++i, h *= q) total += h;
    x[0] = origin;
    h = length / total;
    for (int i = 0; i < n; ++i, h *= q) x[i + 1] = x[i] + h;
    x[n] = origin + length;
    return x;
}

} // namespace

MeshData generate_box(const BoxSpec& s)
{
    if (s.nx < 1 || s.ny < 1 || s.nz < 1)
        throw InvalidDimensions("box cell counts must be >= 1");
    for (int a = 0; a < 3; ++a)
        if (!(s.lengths[a] > 0.0) || !std::isfinite(s.lengths[a]))
            throw InvalidDimensions("box lengths must be positive and finite");
    for (int a = 0; a < 3; ++a)
        if (!(s.grading[a] > 0.0)) throw InvalidDimensions("box grading ratios must be positive");

    const std::array<int, 3> n{s.nx, s.ny, s.nz};
    std::array<std::vector<double>, 3> x;
    for (int a = 0; a < 3; ++a) x[a] = graded_nodes(n[a], s.lengths[a], s.origin[a], s.grading[a]);

    MeshData d;
    auto vid = [&](int i, int j, int k) { return i + (s.nx + 1) * (j + (s.ny + 1) * k); };
    for (int k = 0; k <= s.nz; ++k)
        for (int j = 0; j <= s.ny; ++j)
            for (int i = 0; i <= s.nx; ++i) d.vertices.push_back({x[0][i], x[1][j], x[2][k]});
    auto cid = [&](int i, int j, int k) { return i + s.nx * (j + s.ny * k); };
    for (int k = 0; k < s.nz; ++k)
        for (int j = 0; j < s.ny; ++j)
            for (int i = 0; i < s.nx; ++i) {
                std::array<int, 8> c{};
                for (int corner = 0; corner < 8; ++corner)
                    c[corner] = vid(i + (corner & 1), j + ((corner >> 1) & 1), k + ((corner >> 2) & 1));
                d.cells.push_back(c);
            }

    static const char* patch[6] = {"xmin", "xmax", "ymin", "ymax", "zmin", "zmax"};
    for (int k = 0; k < s.nz; ++k)
        for (int j = 0; j < s.ny; ++j)
            for (int i = 0; i < s.nx; ++i) {
                const std::array<int, 3> idx{i, j, k};
                for (int f = 0; f < 6; ++f) {
                    const int axis = face_axis(f);
                    const bool at_side = (f % 2 == 0) ? idx[axis] == 0 : idx[axis] == n[axis] - 1;
                    if (!at_side) continue;
                    if (s.periodic[axis]) {
                        if (f % 2 == 1) {
                            auto other = idx;
                            other[axis] = 0;
                            d.periodic.push_back({cid(i, j, k), f, cid(other[0], other[1], other[2]), f - 1});
                        }
                        continue;
                    }
                    d.boundary.push_back({cid(i, j, k), f, BoundaryTag::no_slip_adiabatic(), patch[f]});
                }
            }
    return d;
}

MeshData generate_annulus(const AnnulusSpec& s)
{
    if (s.nr < 1 || s.nz < 1) throw InvalidDimensions("annulus cell counts must be >= 1");
    if (s.ntheta < 8) throw InvalidDimensions("annulus needs ntheta >= 8");
    if (!(s.r_inner > 0.0) || !(s.r_outer > s.r_inner) || !(s.length > 0.0))
        throw InvalidDimensions("annulus requires 0 < r_inner < r_outer and length > 0");

    MeshData d;
    const int nrv = s.nr + 1;
    auto vid = [&](int i, int j, int k) { return i + nrv * ((j % s.ntheta) + s.ntheta * k); };
    for (int k = 0; k <= s.nz; ++k) {
        const double z = s.length * k / s.nz;
        for (int j = 0; j < s.ntheta; ++j) {
            const double th = s.theta0 + 2.0 * std::numbers::pi * j / s.ntheta;
            for (int i = 0; i <= s.nr; ++i) {
                const double r = s.r_inner + (s.r_outer - s.r_inner) * i / s.nr;
                d.vertices.push_back({r * std::cos(th), r * std::sin(th), z});
            }
        }
    }
    auto cid = [&](int i, int j, int k) { return i + s.nr * (j + s.ntheta * k); };
    for (int k = 0; k < s.nz; ++k)
        for (int j = 0; j < s.ntheta; ++j)
            for (int i = 0; i < s.nr; ++i) {
                std::array<int, 8> c{};
                for (int corner = 0; corner < 8; ++corner)
                    c[corner] = vid(i + (corner & 1), j + ((corner >> 1) & 1), k + ((corner >> 2) & 1));
                d.cells.push_back(c);
            }
    for (int k = 0; k < s.nz; ++k)
        for (int j = 0; j < s.ntheta; ++j)
            for (int i = 0; i < s.nr; ++i) {
                if (i == 0) d.boundary.push_back({cid(i, j, k), 0, BoundaryTag::no_slip_adiabatic(), "inner"});
                if (i == s.nr - 1)
                    d.boundary.push_back({cid(i, j, k), 1, BoundaryTag::no_slip_adiabatic(), "outer"});
                if (k == 0) d.boundary.push_back({cid(i, j, k), 4, BoundaryTag::no_slip_adiabatic(), "zmin"});
                if (k == s.nz - 1)
                    d.boundary.push_back({cid(i, j, k), 5, BoundaryTag::no_slip_adiabatic(), "zmax"});
            }
    return d;
}

} // namespace dsc
