#include "dsc/connection.hpp"

#include "dsc/errors.hpp"

#include <cmath>

namespace dsc {

namespace {

const std::vector<double>& tangential_ports(const ScalarField& z, Tangential level)
{
    return level == Tangential::Previous ? z.port_prev : z.port;
}

void write_port(const Mesh& mesh, int face_index, ScalarField& z, double value)
{
    const auto& f = mesh.face(face_index);
    z.port[6 * f.side[0].cell + f.side[0].local] = value;
    if (!f.is_boundary()) z.port[6 * f.side[1].cell + f.side[1].local] = value;
}

constexpr std::array<Group, 3> kDefaultGroups{Group::Temperature, Group::Velocity, Group::Pressure};

} // namespace

std::array<double, 3> assemble_znode(const Mesh& mesh, int cell, int face, const ScalarField& z,
                                     Tangential level)
{
    (void)mesh;
    const auto& ports = tangential_ports(z, level);
    const int m = face_axis(face);
    std::array<double, 3> zn{};
    for (int mu = 0; mu < 3; ++mu) {
        zn[mu] = (mu == m) ? 2.0 * face_parity(face) * z.node[cell]
                           : ports[6 * cell + 2 * mu + 1] - ports[6 * cell + 2 * mu];
    }
    return zn;
}

Vec3 face_differences(const Mesh& mesh, int cell, int face, const ScalarField& z, Tangential level)
{
    const auto zn = assemble_znode(mesh, cell, face, z, level);
    const int m = face_axis(face);
    Vec3 d{zn[0], zn[1], zn[2]};
    d[m] -= 2.0 * face_parity(face) * z.port_at(cell, face);
    return d;
}

double face_flux(const Mesh& mesh, int cell, int face, const ScalarField& z, Tangential level)
{
    const auto& s = mesh.geometry(cell).flux[face];
    const Vec3 d = face_differences(mesh, cell, face, z, level);
    return s[0] * d[0] + s[1] * d[1] + s[2] * d[2];
}

Vec3 face_gradient(const Mesh& mesh, int cell, int face, const ScalarField& z, Tangential level)
{
    const Vec3 own = mesh.geometry(cell).gradient_from_differences(face_differences(mesh, cell, face, z, level));
    const Slot nb = mesh.neighbor(cell, face);
    if (nb.cell < 0) return own;
    const Vec3 other = mesh.geometry(nb.cell).gradient_from_differences(
        face_differences(mesh, nb.cell, nb.local, z, level));
    return 0.5 * (own + other);
}

double zero_flux_port(const Mesh& mesh, int cell, int face, const ScalarField& z, Tangential level)
{
    const auto& s = mesh.geometry(cell).flux[face];
    const auto zn = assemble_znode(mesh, cell, face, z, level);
    const int m = face_axis(face);
    double tangential = 0.0;
    for (int mu = 0; mu < 3; ++mu)
        if (mu != m) tangential += s[mu] * zn[mu];
    const double zp = zn[m] + tangential / s[m];
    return face_parity(face) * zp / 2.0;
}

double connect_interior_face(const Mesh& mesh, int face_index, ScalarField& z, Tangential level)
{
    const auto& f = mesh.face(face_index);
    const Slot a = f.side[0];
    const Slot b = f.side[1];
    const auto& sa = mesh.geometry(a.cell).flux[a.local];
    const auto& sb = mesh.geometry(b.cell).flux[b.local];
    const auto za = assemble_znode(mesh, a.cell, a.local, z, level);
    const auto zb = assemble_znode(mesh, b.cell, b.local, z, level);

    double numerator = 0.0;
    for (int mu = 0; mu < 3; ++mu) numerator += sa[mu] * za[mu] + sb[mu] * zb[mu];
    const double sam = sa[face_axis(a.local)];
    const double sbm = sb[face_axis(b.local)];
    const double denominator = sam + face_parity(a.local) * face_parity(b.local) * sbm;
    if (!(std::abs(denominator) > 1e-12 * (std::abs(sam) + std::abs(sbm))))
        throw NearSingularDenominator(face_index, std::abs(denominator));

    // Port value from the normal component of z^p of side a.
    const double value = face_parity(a.local) * (numerator / denominator) / 2.0;
    write_port(mesh, face_index, z, value);
    return value;
}

void apply_velocity_boundary(const Mesh& mesh, int face_index, ScalarField& ux, ScalarField& uy,
                             ScalarField& uz, Tangential level)
{
    const auto& f = mesh.face(face_index);
    const Slot sl = f.side[0];
    if (f.tag->velocity == VelocityCondition::NoSlip) {
        write_port(mesh, face_index, ux, 0.0);
        write_port(mesh, face_index, uy, 0.0);
        write_port(mesh, face_index, uz, 0.0);
        return;
    }
    Vec3 u{zero_flux_port(mesh, sl.cell, sl.local, ux, level), zero_flux_port(mesh, sl.cell, sl.local, uy, level),
           zero_flux_port(mesh, sl.cell, sl.local, uz, level)};
    const Vec3 area = mesh.geometry(sl.cell).face[sl.local];
    const Vec3 n = area / norm(area);
    u -= dot(u, n) * n;
    write_port(mesh, face_index, ux, u.x);
    write_port(mesh, face_index, uy, u.y);
    write_port(mesh, face_index, uz, u.z);
}

void connect_boundary_face(const Mesh& mesh, int face_index, FieldState& s, Group group, Tangential level)
{
    const auto& f = mesh.face(face_index);
    if (!f.tag) throw UnknownTag("boundary face " + std::to_string(face_index) + " has no tag");
    const Slot sl = f.side[0];
    switch (group) {
    case Group::Temperature: {
        auto& t = s[Field::T];
        if (f.tag->thermal == ThermalCondition::FixedTemperature)
            write_port(mesh, face_index, t, f.tag->temperature);
        else
            write_port(mesh, face_index, t, zero_flux_port(mesh, sl.cell, sl.local, t, level));
        break;
    }
    case Group::Velocity:
        apply_velocity_boundary(mesh, face_index, s[Field::Ux], s[Field::Uy], s[Field::Uz], level);
        break;
    case Group::Pressure: {
        auto& p = s[Field::P];
        write_port(mesh, face_index, p, zero_flux_port(mesh, sl.cell, sl.local, p, level));
        break;
    }
    }
}

void connection_step(const Mesh& mesh, FieldState& s, std::span<const Group> groups)
{
    if (groups.empty()) groups = kDefaultGroups;
    const int nfaces = static_cast<int>(mesh.faces().size());
    for (Group g : groups) {
        for (int fi = 0; fi < nfaces; ++fi) {
            const auto& f = mesh.face(fi);
            if (f.is_boundary()) {
                connect_boundary_face(mesh, fi, s, g, Tangential::Previous);
                continue;
            }
            switch (g) {
            case Group::Temperature: connect_interior_face(mesh, fi, s[Field::T]); break;
            case Group::Velocity:
                connect_interior_face(mesh, fi, s[Field::Ux]);
                connect_interior_face(mesh, fi, s[Field::Uy]);
                connect_interior_face(mesh, fi, s[Field::Uz]);
                break;
            case Group::Pressure: connect_interior_face(mesh, fi, s[Field::P]); break;
            }
        }
    }
}

void connect_scalar_zero_flux(const Mesh& mesh, ScalarField& z, Tangential level)
{
    const int nfaces = static_cast<int>(mesh.faces().size());
    for (int fi = 0; fi < nfaces; ++fi) {
        const auto& f = mesh.face(fi);
        if (f.is_boundary())
            write_port(mesh, fi, z, zero_flux_port(mesh, f.side[0].cell, f.side[0].local, z, level));
        else
            connect_interior_face(mesh, fi, z, level);
    }
}

} // namespace dsc
