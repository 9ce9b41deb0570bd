#include "dsc/errors.hpp"
#include "dsc/mesh.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace dsc {

void write_mesh(std::ostream& os, const MeshData& d)
{
    os << std::setprecision(17);
    os << "VERTICES " << d.vertices.size() << '\n';
    for (const auto& v : d.vertices) os << v.x << ' ' << v.y << ' ' << v.z << '\n';
    os << "CELLS " << d.cells.size() << '\n';
    for (const auto& c : d.cells) {
        for (int k = 0; k < 8; ++k) os << c[k] << (k == 7 ? '\n' : ' ');
    }
    os << "BOUNDARY " << d.boundary.size() << '\n';
    for (const auto& b : d.boundary) {
        os << b.cell << ' ' << b.local_face << ' ' << b.tag.name();
        if (b.tag.has_value()) os << ' ' << b.tag.temperature;
        os << '\n';
    }
    if (!d.periodic.empty()) {
        os << "PERIODIC " << d.periodic.size() << '\n';
        for (const auto& p : d.periodic)
            os << p.cell_a << ' ' << p.face_a << ' ' << p.cell_b << ' ' << p.face_b << '\n';
    }
}

void write_mesh_file(const std::string& path, const MeshData& d)
{
    std::ofstream os(path);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    write_mesh(os, d);
    if (!os) throw IoError("write to '" + path + "' failed");
}

namespace {

class LineReader {
public:
    explicit LineReader(std::istream& is) : is_(is) {}

    // Next non-blank line; false at end of input.
    bool next(std::istringstream& out)
    {
        std::string line;
        while (std::getline(is_, line)) {
            ++line_no_;
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            out.clear();
            out.str(line);
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) const
    {
        throw IoError("mesh line " + std::to_string(line_no_) + ": " + what);
    }

    std::size_t header(std::istringstream& ls, const std::string& keyword)
    {
        std::string word;
        long n = -1;
        if (!(ls >> word) || word != keyword || !(ls >> n) || n < 0)
            fail("expected '" + keyword + " <count>'");
        return static_cast<std::size_t>(n);
    }

private:
    std::istream& is_;
    long line_no_ = 0;
};

template <typename... T>
void read_fields(LineReader& r, std::istringstream& ls, T&... out)
{
    if (!(ls >> ... >> out)) r.fail("malformed record");
}

} // namespace

MeshData read_mesh(std::istream& is)
{
    MeshData d;
    LineReader r(is);
    std::istringstream ls;

    if (!r.next(ls)) r.fail("empty mesh file");
    const auto nv = r.header(ls, "VERTICES");
    d.vertices.resize(nv);
    for (auto& v : d.vertices) {
        if (!r.next(ls)) r.fail("unexpected end of VERTICES");
        read_fields(r, ls, v.x, v.y, v.z);
    }

    if (!r.next(ls)) r.fail("missing CELLS section");
    const auto nc = r.header(ls, "CELLS");
    d.cells.resize(nc);
    for (auto& c : d.cells) {
        if (!r.next(ls)) r.fail("unexpected end of CELLS");
        for (int k = 0; k < 8; ++k) read_fields(r, ls, c[k]);
    }

    if (!r.next(ls)) r.fail("missing BOUNDARY section");
    const auto nb = r.header(ls, "BOUNDARY");
    d.boundary.resize(nb);
    for (auto& b : d.boundary) {
        if (!r.next(ls)) r.fail("unexpected end of BOUNDARY");
        std::string name;
        read_fields(r, ls, b.cell, b.local_face, name);
        std::optional<double> value;
        double t = 0.0;
        if (ls >> t) value = t;
        try {
            b.tag = BoundaryTag::from_name(name, value);
        } catch (const UnknownTag& e) {
            r.fail(e.what());
        }
    }

    if (r.next(ls)) {
        const auto np = r.header(ls, "PERIODIC");
        d.periodic.resize(np);
        for (auto& p : d.periodic) {
            if (!r.next(ls)) r.fail("unexpected end of PERIODIC");
            read_fields(r, ls, p.cell_a, p.face_a, p.cell_b, p.face_b);
        }
        if (r.next(ls)) r.fail("trailing content");
    }
    return d;
}

MeshData read_mesh_file(const std::string& path)
{
    std::ifstream is(path);
    if (!is) throw IoError("cannot open mesh file '" + path + "'");
    return read_mesh(is);
}

} // namespace dsc
