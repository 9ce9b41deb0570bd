#include "dsc/config.hpp"

#include "dsc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace dsc {

namespace {

struct Entry {
    std::string value;
    int line = 0;
};

using Section = std::map<std::string, Entry>;

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s)
{
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string w;
    while (is >> w) out.push_back(w);
    return out;
}

const char* const kSections[] = {"mesh", "fluid", "boundary", "initial", "source", "run", "pressure", "output"};

/// Reads typed values out of the raw sections and records every problem.
class Reader {
public:
    std::map<std::string, Section> sections;
    std::map<std::string, std::vector<std::pair<std::string, Entry>>> ordered;
    std::vector<std::string> errors;

    void error(const std::string& msg) { errors.push_back(msg); }
    void error(const Entry& e, const std::string& sec, const std::string& key, const std::string& msg)
    {
        errors.push_back("line " + std::to_string(e.line) + ": [" + sec + "] " + key + ": " + msg);
    }

    const Entry* find(const std::string& sec, const std::string& key)
    {
        used_.insert(sec + "." + key);
        auto s = sections.find(sec);
        if (s == sections.end()) return nullptr;
        auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    }

    bool has(const std::string& sec, const std::string& key)
    {
        auto s = sections.find(sec);
        return s != sections.end() && s->second.count(key);
    }

    void require(const std::string& sec, const std::string& key)
    {
        if (!has(sec, key)) error("[" + sec + "] " + key + ": required key missing");
    }

    bool parse_double(const std::string& text, double& out)
    {
        if (text.empty()) return false;
        char* end = nullptr;
        out = std::strtod(text.c_str(), &end);
        return end == text.c_str() + text.size() && std::isfinite(out);
    }

    void number(const std::string& sec, const std::string& key, double& out)
    {
        const Entry* e = find(sec, key);
        if (!e) return;
        double v;
        if (!parse_double(e->value, v))
            error(*e, sec, key, "expected a finite number, got '" + e->value + "'");
        else
            out = v;
    }

    template <typename Int>
    void integer(const std::string& sec, const std::string& key, Int& out)
    {
        const Entry* e = find(sec, key);
        if (!e) return;
        std::istringstream is(e->value);
        long long v;
        if (!(is >> v) || !is.eof())
            error(*e, sec, key, "expected an integer, got '" + e->value + "'");
        else
            out = static_cast<Int>(v);
    }

    void boolean(const std::string& sec, const std::string& key, bool& out)
    {
        const Entry* e = find(sec, key);
        if (!e) return;
        if (e->value == "true")
            out = true;
        else if (e->value == "false")
            out = false;
        else
            error(*e, sec, key, "expected true or false, got '" + e->value + "'");
    }

    void vector3(const std::string& sec, const std::string& key, Vec3& out)
    {
        const Entry* e = find(sec, key);
        if (!e) return;
        const auto w = split_ws(e->value);
        Vec3 v;
        bool ok = w.size() == 3;
        for (std::size_t i = 0; ok && i < 3; ++i) ok = parse_double(w[i], v[static_cast<int>(i)]);
        if (!ok)
            error(*e, sec, key, "expected three numbers, got '" + e->value + "'");
        else
            out = v;
    }

    void number_list(const std::string& sec, const std::string& key, std::vector<double>& out)
    {
        const Entry* e = find(sec, key);
        if (!e) return;
        out.clear();
        for (const auto& w : split_ws(e->value)) {
            double v;
            if (!parse_double(w, v)) {
                error(*e, sec, key, "expected a list of numbers, got '" + w + "'");
                return;
            }
            out.push_back(v);
        }
    }

    void string(const std::string& sec, const std::string& key, std::string& out)
    {
        if (const Entry* e = find(sec, key)) out = e->value;
    }

    /// "auto" leaves the optional empty.
    void optional_number(const std::string& sec, const std::string& key, std::optional<double>& out)
    {
        const Entry* e = find(sec, key);
        if (!e) return;
        if (e->value == "auto") {
            out.reset();
            return;
        }
        double v;
        if (!parse_double(e->value, v))
            error(*e, sec, key, "expected 'auto' or a finite number, got '" + e->value + "'");
        else
            out = v;
    }

    /// Keys present but never read by the schema.
    void reject_unused()
    {
        for (const auto& [sec, keys] : sections) {
            if (sec == "boundary") continue;
            for (const auto& [key, e] : keys)
                if (!used_.count(sec + "." + key)) error(e, sec, key, "unknown key or not applicable to the chosen options");
        }
    }

    void check(bool ok, const std::string& sec, const std::string& key, const std::string& msg)
    {
        if (ok) return;
        if (const Entry* e = find(sec, key))
            error(*e, sec, key, msg);
        else
            error("[" + sec + "] " + key + ": " + msg);
    }

private:
    std::set<std::string> used_;
};

int parse_axis(const std::string& s)
{
    if (s == "x") return 0;
    if (s == "y") return 1;
    if (s == "z") return 2;
    return -1;
}

const char* axis_name(int a) { return a == 0 ? "x" : a == 1 ? "y" : "z"; }

void read_mesh_section(Reader& r, MeshConfig& m)
{
    std::string gen = "box";
    r.string("mesh", "generator", gen);
    if (gen == "box") {
        m.generator = MeshConfig::Generator::Box;
        auto& b = m.box;
        r.integer("mesh", "nx", b.nx);
        r.integer("mesh", "ny", b.ny);
        r.integer("mesh", "nz", b.nz);
        r.number("mesh", "lx", b.lengths.x);
        r.number("mesh", "ly", b.lengths.y);
        r.number("mesh", "lz", b.lengths.z);
        r.vector3("mesh", "origin", b.origin);
        r.vector3("mesh", "grading", b.grading);
        if (const Entry* e = r.find("mesh", "periodic")) {
            b.periodic = {false, false, false};
            for (const auto& w : split_ws(e->value)) {
                if (w == "none") continue;
                const int a = parse_axis(w);
                if (a < 0)
                    r.error(*e, "mesh", "periodic", "expected axes x, y, z or none, got '" + w + "'");
                else
                    b.periodic[a] = true;
            }
        }
        r.check(b.nx >= 1 && b.ny >= 1 && b.nz >= 1, "mesh", "nx", "cell counts must be >= 1");
        r.check(b.lengths.x > 0 && b.lengths.y > 0 && b.lengths.z > 0, "mesh", "lx", "lengths must be > 0");
        r.check(b.grading.x > 0 && b.grading.y > 0 && b.grading.z > 0, "mesh", "grading", "ratios must be > 0");
    } else if (gen == "annulus") {
        m.generator = MeshConfig::Generator::Annulus;
        auto& a = m.annulus;
        r.integer("mesh", "nr", a.nr);
        r.integer("mesh", "ntheta", a.ntheta);
        r.integer("mesh", "nz", a.nz);
        r.number("mesh", "r_inner", a.r_inner);
        r.number("mesh", "r_outer", a.r_outer);
        r.number("mesh", "length", a.length);
        r.number("mesh", "theta0", a.theta0);
        r.check(a.nr >= 1 && a.nz >= 1, "mesh", "nr", "cell counts must be >= 1");
        r.check(a.ntheta >= 8, "mesh", "ntheta", "must be >= 8");
        r.check(a.r_inner > 0 && a.r_outer > a.r_inner, "mesh", "r_outer", "need 0 < r_inner < r_outer");
        r.check(a.length > 0, "mesh", "length", "must be > 0");
    } else if (gen == "file") {
        m.generator = MeshConfig::Generator::File;
        r.string("mesh", "path", m.path);
        r.check(!m.path.empty(), "mesh", "path", "required for generator file");
    } else {
        r.check(false, "mesh", "generator", "expected box, annulus or file, got '" + gen + "'");
    }
}

void read_fluid_section(Reader& r, FluidProperties& f)
{
    for (const char* k : {"alpha", "mu", "rho_inf", "beta", "T_inf"}) r.require("fluid", k);
    r.number("fluid", "alpha", f.alpha);
    r.number("fluid", "mu", f.mu);
    r.number("fluid", "rho_inf", f.rho_inf);
    r.number("fluid", "beta", f.beta_exp);
    r.number("fluid", "T_inf", f.T_inf);
    r.vector3("fluid", "gravity", f.g);
    if (r.has("fluid", "alpha")) r.check(f.alpha > 0, "fluid", "alpha", "must be > 0");
    if (r.has("fluid", "mu")) r.check(f.mu > 0, "fluid", "mu", "must be > 0");
    if (r.has("fluid", "rho_inf")) r.check(f.rho_inf > 0, "fluid", "rho_inf", "must be > 0");
}

void read_boundary_section(Reader& r, std::vector<BoundaryAssignment>& out)
{
    for (const auto& [patch, e] : r.ordered["boundary"]) {
        const auto w = split_ws(e.value);
        BoundaryTag tag;
        bool ok = w.size() >= 2;
        if (ok) {
            if (w[0] == "noslip")
                tag.velocity = VelocityCondition::NoSlip;
            else if (w[0] == "freeslip")
                tag.velocity = VelocityCondition::FreeSlip;
            else
                ok = false;
        }
        if (ok) {
            if (w[1] == "adiabatic" && w.size() == 2) {
                tag.thermal = ThermalCondition::Adiabatic;
            } else if (w[1] == "fixed" && w.size() == 3) {
                tag.thermal = ThermalCondition::FixedTemperature;
                ok = r.parse_double(w[2], tag.temperature);
            } else {
                ok = false;
            }
        }
        if (!ok)
            r.error(e, "boundary", patch,
                    "expected 'noslip|freeslip adiabatic' or 'noslip|freeslip fixed <K>', got '" + e.value + "'");
        else
            out.push_back({patch, tag});
    }
}

void read_initial_section(Reader& r, InitialConfig& ic, double T_inf)
{
    ic.T = T_inf;
    r.number("initial", "T", ic.T);
    r.vector3("initial", "u", ic.u);
    r.number("initial", "p", ic.p);
    if (const Entry* e = r.find("initial", "T_profile")) {
        const auto w = split_ws(e->value);
        auto& pr = ic.profile;
        bool ok = !w.empty();
        if (ok && w[0] == "uniform" && w.size() == 1) {
            pr = {};
        } else if (ok && w[0] == "linear" && w.size() == 4) {
            pr.kind = TemperatureProfile::Kind::Linear;
            ok = r.parse_double(w[1], pr.a) && r.parse_double(w[2], pr.b) && (pr.axis = parse_axis(w[3])) >= 0;
        } else if (ok && w[0] == "sine" && w.size() == 3) {
            pr.kind = TemperatureProfile::Kind::Sine;
            ok = r.parse_double(w[1], pr.a) && (pr.axis = parse_axis(w[2])) >= 0;
        } else {
            ok = false;
        }
        if (!ok)
            r.error(*e, "initial", "T_profile",
                    "expected 'uniform', 'linear <T_low> <T_high> <axis>' or 'sine <amplitude> <axis>'");
    }
}

void read_source_section(Reader& r, SourceConfig& s)
{
    std::string kind = "none";
    r.string("source", "kind", kind);
    using K = SourceConfig::Kind;
    if (kind == "none") {
        s.kind = K::None;
        return;
    }
    if (kind == "constant") {
        s.kind = K::Constant;
    } else if (kind == "box_region") {
        s.kind = K::BoxRegion;
        r.require("source", "box_min");
        r.require("source", "box_max");
        r.vector3("source", "box_min", s.box_min);
        r.vector3("source", "box_max", s.box_max);
        r.check(s.box_min.x < s.box_max.x && s.box_min.y < s.box_max.y && s.box_min.z < s.box_max.z, "source",
                "box_max", "must exceed box_min in every coordinate");
    } else if (kind == "near_patch") {
        s.kind = K::NearPatch;
        r.require("source", "patch");
        r.string("source", "patch", s.patch);
    } else if (kind == "table") {
        s.kind = K::Table;
        r.require("source", "times");
        r.require("source", "values");
        r.number_list("source", "times", s.times);
        r.number_list("source", "values", s.values);
        r.check(!s.times.empty() && s.times.size() == s.values.size(), "source", "values",
                "times and values must be non-empty lists of equal length");
        r.check(std::adjacent_find(s.times.begin(), s.times.end(), std::greater_equal<>()) == s.times.end(),
                "source", "times", "must be strictly increasing");
        return;
    } else {
        r.check(false, "source", "kind",
                "expected none, constant, box_region, near_patch or table, got '" + kind + "'");
        return;
    }
    r.require("source", "q");
    r.number("source", "q", s.q);
}

void read_run_section(Reader& r, RunSection& run)
{
    r.require("run", "t_end");
    r.number("run", "t_end", run.t_end);
    r.optional_number("run", "tau", run.tau);
    r.number("run", "safety", run.safety);
    r.integer("run", "recompute_every", run.recompute_every);
    r.integer("run", "max_steps", run.max_steps);
    r.number("run", "steady_tol", run.steady_tol);
    r.boolean("run", "flow", run.flow);
    r.boolean("run", "advect", run.advect);
    if (r.has("run", "t_end")) r.check(run.t_end > 0, "run", "t_end", "must be > 0");
    r.check(!run.tau || *run.tau > 0, "run", "tau", "must be > 0");
    r.check(run.safety > 0 && run.safety <= 1, "run", "safety", "must lie in (0, 1]");
    r.check(run.recompute_every >= 0, "run", "recompute_every", "must be >= 0");
    r.check(run.max_steps >= 1, "run", "max_steps", "must be >= 1");
    r.check(run.steady_tol >= 0, "run", "steady_tol", "must be >= 0");
}

void read_pressure_section(Reader& r, PressureConfig& p)
{
    r.number("pressure", "omega", p.sor.omega);
    r.optional_number("pressure", "eps_global", p.eps_global);
    r.number("pressure", "eps_cell", p.sor.eps_cell);
    r.number("pressure", "u_ref", p.u_ref);
    r.integer("pressure", "max_inner", p.sor.max_inner);
    r.integer("pressure", "max_outer", p.sor.max_outer);
    r.boolean("pressure", "abort_on_not_converged", p.sor.abort_on_not_converged);
    r.check(p.sor.omega > 0 && p.sor.omega < 2, "pressure", "omega", "must lie in (0, 2)");
    r.check(!p.eps_global || *p.eps_global > 0, "pressure", "eps_global", "must be > 0");
    r.check(p.sor.eps_cell >= 0, "pressure", "eps_cell", "must be >= 0");
    r.check(p.u_ref > 0, "pressure", "u_ref", "must be > 0");
    r.check(p.sor.max_inner >= 1, "pressure", "max_inner", "must be >= 1");
    r.check(p.sor.max_outer >= 1, "pressure", "max_outer", "must be >= 1");
}

void read_output_section(Reader& r, OutputConfig& o)
{
    r.string("output", "directory", o.directory);
    r.integer("output", "every", o.every);
    r.boolean("output", "vtk", o.vtk);
    r.string("output", "prefix", o.prefix);
    r.string("output", "probe_file", o.probe_file);
    if (const Entry* e = r.find("output", "probes")) {
        for (const auto& w : split_ws(e->value)) {
            std::istringstream is(w);
            int id;
            if (!(is >> id) || !is.eof() || id < 0) {
                r.error(*e, "output", "probes", "expected non-negative cell ids, got '" + w + "'");
                break;
            }
            o.probes.push_back(id);
        }
    }
    r.check(o.every >= 1, "output", "every", "must be >= 1");
    r.check(!o.directory.empty(), "output", "directory", "must not be empty");
    r.check(!o.prefix.empty(), "output", "prefix", "must not be empty");
}

} // namespace

ScenarioConfig parse_config(const std::string& text)
{
    Reader r;
    std::istringstream is(text);
    std::string raw, section;
    int line_no = 0;
    const std::set<std::string> known(std::begin(kSections), std::end(kSections));
    while (std::getline(is, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                r.error("line " + std::to_string(line_no) + ": malformed section header '" + line + "'");
                section.clear();
                continue;
            }
            section = trim(line.substr(1, line.size() - 2));
            if (!known.count(section)) {
                r.error("line " + std::to_string(line_no) + ": unknown section [" + section + "]");
                section = "?";
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            r.error("line " + std::to_string(line_no) + ": expected 'key = value'");
            continue;
        }
        if (section.empty()) {
            r.error("line " + std::to_string(line_no) + ": key outside of any section");
            continue;
        }
        if (section == "?") continue;
        const std::string key = trim(line.substr(0, eq));
        const Entry e{trim(line.substr(eq + 1)), line_no};
        if (key.empty()) {
            r.error("line " + std::to_string(line_no) + ": empty key");
            continue;
        }
        auto [it, inserted] = r.sections[section].emplace(key, e);
        if (!inserted) {
            r.error(e, section, key, "duplicate key (first on line " + std::to_string(it->second.line) + ")");
            continue;
        }
        r.ordered[section].emplace_back(key, e);
    }

    ScenarioConfig cfg;
    read_mesh_section(r, cfg.mesh);
    read_fluid_section(r, cfg.fluid);
    read_boundary_section(r, cfg.boundary);
    read_initial_section(r, cfg.initial, cfg.fluid.T_inf);
    read_source_section(r, cfg.source);
    read_run_section(r, cfg.run);
    read_pressure_section(r, cfg.pressure);
    read_output_section(r, cfg.output);
    r.reject_unused();
    if (!r.errors.empty()) throw SchemaError(r.errors);
    return cfg;
}

ScenarioConfig parse_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw SchemaError({"cannot read configuration file '" + path + "'"});
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

namespace {

std::string num(double v)
{
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

std::string vec(const Vec3& v) { return num(v.x) + " " + num(v.y) + " " + num(v.z); }

std::string numbers(const std::vector<double>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + num(v[i]);
    return s;
}

} // namespace

std::string echo_config(const ScenarioConfig& c)
{
    std::ostringstream os;
    os << "[mesh]\n";
    switch (c.mesh.generator) {
    case MeshConfig::Generator::Box: {
        const auto& b = c.mesh.box;
        os << "generator = box\nnx = " << b.nx << "\nny = " << b.ny << "\nnz = " << b.nz << "\nlx = "
           << num(b.lengths.x) << "\nly = " << num(b.lengths.y) << "\nlz = " << num(b.lengths.z)
           << "\norigin = " << vec(b.origin) << "\ngrading = " << vec(b.grading) << "\nperiodic =";
        bool any = false;
        for (int a = 0; a < 3; ++a)
            if (b.periodic[a]) {
                os << ' ' << axis_name(a);
                any = true;
            }
        if (!any) os << " none";
        os << '\n';
        break;
    }
    case MeshConfig::Generator::Annulus: {
        const auto& a = c.mesh.annulus;
        os << "generator = annulus\nnr = " << a.nr << "\nntheta = " << a.ntheta << "\nnz = " << a.nz
           << "\nr_inner = " << num(a.r_inner) << "\nr_outer = " << num(a.r_outer) << "\nlength = "
           << num(a.length) << "\ntheta0 = " << num(a.theta0) << '\n';
        break;
    }
    case MeshConfig::Generator::File: os << "generator = file\npath = " << c.mesh.path << '\n'; break;
    }

    const auto& f = c.fluid;
    os << "\n[fluid]\nalpha = " << num(f.alpha) << "\nmu = " << num(f.mu) << "\nrho_inf = " << num(f.rho_inf)
       << "\nbeta = " << num(f.beta_exp) << "\nT_inf = " << num(f.T_inf) << "\ngravity = " << vec(f.g) << '\n';

    os << "\n[boundary]\n";
    for (const auto& b : c.boundary) {
        os << b.patch << " = " << (b.tag.velocity == VelocityCondition::NoSlip ? "noslip" : "freeslip");
        if (b.tag.has_value())
            os << " fixed " << num(b.tag.temperature) << '\n';
        else
            os << " adiabatic\n";
    }

    const auto& ic = c.initial;
    os << "\n[initial]\nT = " << num(ic.T) << "\nT_profile = ";
    switch (ic.profile.kind) {
    case TemperatureProfile::Kind::Uniform: os << "uniform"; break;
    case TemperatureProfile::Kind::Linear:
        os << "linear " << num(ic.profile.a) << ' ' << num(ic.profile.b) << ' ' << axis_name(ic.profile.axis);
        break;
    case TemperatureProfile::Kind::Sine: os << "sine " << num(ic.profile.a) << ' ' << axis_name(ic.profile.axis); break;
    }
    os << "\nu = " << vec(ic.u) << "\np = " << num(ic.p) << '\n';

    const auto& s = c.source;
    os << "\n[source]\nkind = ";
    switch (s.kind) {
    case SourceConfig::Kind::None: os << "none\n"; break;
    case SourceConfig::Kind::Constant: os << "constant\nq = " << num(s.q) << '\n'; break;
    case SourceConfig::Kind::BoxRegion:
        os << "box_region\nq = " << num(s.q) << "\nbox_min = " << vec(s.box_min) << "\nbox_max = " << vec(s.box_max)
           << '\n';
        break;
    case SourceConfig::Kind::NearPatch: os << "near_patch\nq = " << num(s.q) << "\npatch = " << s.patch << '\n'; break;
    case SourceConfig::Kind::Table:
        os << "table\ntimes = " << numbers(s.times) << "\nvalues = " << numbers(s.values) << '\n';
        break;
    }

    const auto& r = c.run;
    os << "\n[run]\nt_end = " << num(r.t_end) << "\ntau = " << (r.tau ? num(*r.tau) : "auto")
       << "\nsafety = " << num(r.safety) << "\nrecompute_every = " << r.recompute_every
       << "\nmax_steps = " << r.max_steps << "\nsteady_tol = " << num(r.steady_tol)
       << "\nflow = " << (r.flow ? "true" : "false") << "\nadvect = " << (r.advect ? "true" : "false") << '\n';

    const auto& p = c.pressure;
    os << "\n[pressure]\nomega = " << num(p.sor.omega) << "\neps_global = "
       << (p.eps_global ? num(*p.eps_global) : "auto") << "\neps_cell = " << num(p.sor.eps_cell)
       << "\nu_ref = " << num(p.u_ref) << "\nmax_inner = " << p.sor.max_inner << "\nmax_outer = " << p.sor.max_outer
       << "\nabort_on_not_converged = " << (p.sor.abort_on_not_converged ? "true" : "false") << '\n';

    const auto& o = c.output;
    os << "\n[output]\ndirectory = " << o.directory << "\nevery = " << o.every
       << "\nvtk = " << (o.vtk ? "true" : "false") << "\nprefix = " << o.prefix << "\nprobes =";
    for (int id : o.probes) os << ' ' << id;
    os << "\nprobe_file = " << o.probe_file << '\n';
    return os.str();
}

MeshData build_mesh_data(const ScenarioConfig& cfg)
{
    MeshData d;
    switch (cfg.mesh.generator) {
    case MeshConfig::Generator::Box: d = generate_box(cfg.mesh.box); break;
    case MeshConfig::Generator::Annulus: d = generate_annulus(cfg.mesh.annulus); break;
    case MeshConfig::Generator::File: d = read_mesh_file(cfg.mesh.path); break;
    }
    std::vector<std::string> errors;
    for (const auto& b : cfg.boundary) {
        if (d.assign_patch(b.patch, b.tag) == 0) {
            std::string avail;
            for (const auto& n : d.patch_names()) avail += (avail.empty() ? "" : ", ") + n;
            errors.push_back("[boundary] " + b.patch + ": no such patch in the mesh (available: "
                             + (avail.empty() ? "none" : avail) + ")");
        }
    }
    if (!errors.empty()) throw SchemaError(errors);
    return d;
}

InitialCondition make_initial_condition(const ScenarioConfig& cfg, const Mesh& mesh)
{
    Vec3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
    Vec3 hi = -1.0 * lo;
    for (const auto& v : mesh.data().vertices)
        for (int a = 0; a < 3; ++a) {
            lo[a] = std::min(lo[a], v[a]);
            hi[a] = std::max(hi[a], v[a]);
        }
    const auto ic = cfg.initial;
    InitialCondition out;
    out.temperature = [ic, lo, hi](const Vec3& x) {
        const int a = ic.profile.axis;
        const double s = (x[a] - lo[a]) / (hi[a] - lo[a]);
        switch (ic.profile.kind) {
        case TemperatureProfile::Kind::Linear: return ic.profile.a + (ic.profile.b - ic.profile.a) * s;
        case TemperatureProfile::Kind::Sine: return ic.T + ic.profile.a * std::sin(3.141592653589793 * s);
        case TemperatureProfile::Kind::Uniform: break;
        }
        return ic.T;
    };
    out.velocity = [u = ic.u](const Vec3&) { return u; };
    out.pressure = [p = ic.p](const Vec3&) { return p; };
    return out;
}

HeatSource make_heat_source(const ScenarioConfig& cfg, const Mesh& mesh)
{
    const auto s = cfg.source;
    switch (s.kind) {
    case SourceConfig::Kind::None: return {};
    case SourceConfig::Kind::Constant: return [q = s.q](const Vec3&, double) { return q; };
    case SourceConfig::Kind::BoxRegion:
        return [s](const Vec3& x, double) {
            const bool in = x.x >= s.box_min.x && x.x <= s.box_max.x && x.y >= s.box_min.y && x.y <= s.box_max.y
                            && x.z >= s.box_min.z && x.z <= s.box_max.z;
            return in ? s.q : 0.0;
        };
    case SourceConfig::Kind::NearPatch: {
        const auto cells = mesh.cells_on_patch(s.patch);
        if (cells.empty()) throw SchemaError({"[source] patch: no such patch in the mesh: '" + s.patch + "'"});
        // Reflection evaluates q at cell centres, so membership is by centre.
        std::vector<std::array<double, 3>> centres;
        for (int c : cells) {
            const auto& x = mesh.geometry(c).center;
            centres.push_back({x.x, x.y, x.z});
        }
        std::sort(centres.begin(), centres.end());
        return [centres, q = s.q](const Vec3& x, double) {
            return std::binary_search(centres.begin(), centres.end(), std::array<double, 3>{x.x, x.y, x.z}) ? q
                                                                                                           : 0.0;
        };
    }
    case SourceConfig::Kind::Table:
        return [t = s.times, v = s.values](const Vec3&, double time) {
            if (time <= t.front()) return v.front();
            if (time >= t.back()) return v.back();
            const auto it = std::upper_bound(t.begin(), t.end(), time);
            const std::size_t i = static_cast<std::size_t>(it - t.begin());
            const double w = (time - t[i - 1]) / (t[i] - t[i - 1]);
            return v[i - 1] + w * (v[i] - v[i - 1]);
        };
    }
    return {};
}

RunConfig make_run_config(const ScenarioConfig& cfg, const Mesh& mesh)
{
    RunConfig rc;
    rc.t_end = cfg.run.t_end;
    if (cfg.run.tau) {
        rc.tau_policy.kind = TimeStepPolicy::Kind::Fixed;
        rc.tau_policy.tau = *cfg.run.tau;
    } else {
        rc.tau_policy.kind = TimeStepPolicy::Kind::Auto;
    }
    rc.tau_policy.safety = cfg.run.safety;
    rc.tau_policy.recompute_every = cfg.run.recompute_every;
    rc.max_steps = cfg.run.max_steps;
    rc.output_every = cfg.output.every;
    rc.steady_tol = cfg.run.steady_tol;
    rc.step.flow = cfg.run.flow;
    rc.step.advect = cfg.run.advect;
    rc.step.sor = cfg.pressure.sor;
    const double total_area = mesh.mean_face_area() * static_cast<double>(mesh.faces().size());
    rc.step.sor.eps_global = cfg.pressure.eps_global ? *cfg.pressure.eps_global : 1e-8 * cfg.pressure.u_ref * total_area;
    return rc;
}

} // namespace dsc
