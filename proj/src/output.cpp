#include "dsc/output.hpp"

#include "dsc/errors.hpp"

#include <iomanip>

namespace dsc {

void write_vtk(const std::string& path, const Mesh& mesh, const FieldState& s)
{
    std::ofstream os(path);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    const auto& d = mesh.data();
    const std::size_t n = mesh.num_cells();
    os << std::setprecision(9);
    os << "# vtk DataFile Version 3.0\n";
    os << "dsc state t=" << s.time << " step=" << s.step_index << "\n";
    os << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
    os << "POINTS " << d.vertices.size() << " double\n";
    for (const auto& v : d.vertices) os << v.x << ' ' << v.y << ' ' << v.z << '\n';
    os << "CELLS " << n << ' ' << 9 * n << '\n';
    // Corner k sits at (k&1, k>>1&1, k>>2&1); VTK_HEXAHEDRON runs the
    // bottom quad counter-clockwise, then the top one.
    static constexpr int order[8] = {0, 1, 3, 2, 4, 5, 7, 6};
    for (const auto& c : d.cells) {
        os << 8;
        for (int k : order) os << ' ' << c[k];
        os << '\n';
    }
    os << "CELL_TYPES " << n << '\n';
    for (std::size_t c = 0; c < n; ++c) os << "12\n";
    os << "CELL_DATA " << n << '\n';
    for (Field f : {Field::T, Field::P}) {
        os << "SCALARS " << (f == Field::T ? "T" : "p") << " double 1\nLOOKUP_TABLE default\n";
        for (double v : s[f].node) os << v << '\n';
    }
    os << "VECTORS u double\n";
    for (std::size_t c = 0; c < n; ++c) {
        const Vec3 u = s.node_velocity(static_cast<int>(c));
        os << u.x << ' ' << u.y << ' ' << u.z << '\n';
    }
    if (!os) throw IoError("write to '" + path + "' failed");
}

ProbeWriter::ProbeWriter(const std::string& path, const Mesh& mesh, std::vector<int> cells)
    : cells_(std::move(cells)), path_(path)
{
    for (int c : cells_)
        if (c < 0 || c >= static_cast<int>(mesh.num_cells()))
            throw InvalidProbe("probe cell " + std::to_string(c) + " outside mesh of "
                               + std::to_string(mesh.num_cells()) + " cells");
    out_.open(path);
    if (!out_) throw IoError("cannot open '" + path + "' for writing");
    out_ << "# units: t [s], T [K], ux uy uz [m/s], p [Pa]; node values at cell centres\n";
    out_ << "t";
    for (int c : cells_)
        for (const char* f : {"T", "ux", "uy", "uz", "p"}) out_ << ',' << f << '_' << c;
    out_ << '\n';
    out_.flush();
}

void ProbeWriter::record(const FieldState& s)
{
    out_ << std::setprecision(12) << s.time;
    for (int c : cells_)
        for (Field f : kAllFields) out_ << ',' << s[f].node[c];
    out_ << '\n';
    out_.flush();
    if (!out_) throw IoError("write to '" + path_ + "' failed");
}

} // namespace dsc
