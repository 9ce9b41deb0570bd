#pragma once

#include "dsc/mesh.hpp"
#include "dsc/pressure.hpp"
#include "dsc/reflection.hpp"
#include "dsc/solver.hpp"
#include "dsc/state.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dsc {

struct MeshConfig {
    enum class Generator { Box, Annulus, File };
    Generator generator = Generator::Box;
    BoxSpec box;
    AnnulusSpec annulus;
    std::string path;

    friend bool operator==(const MeshConfig&, const MeshConfig&) = default;
};

struct BoundaryAssignment {
    std::string patch;
    BoundaryTag tag;

    friend bool operator==(const BoundaryAssignment&, const BoundaryAssignment&) = default;
};

/// Initial temperature over the mesh bounding box along one axis.
struct TemperatureProfile {
    enum class Kind { Uniform, Linear, Sine };
    Kind kind = Kind::Uniform;
    /// Linear: value at the low end. Sine: amplitude added to T.
    double a = 0.0;
    /// Linear: value at the high end.
    double b = 0.0;
    int axis = 0;

    friend bool operator==(const TemperatureProfile&, const TemperatureProfile&) = default;
};

struct InitialConfig {
    double T = 0.0; ///< K
    TemperatureProfile profile;
    Vec3 u{};       ///< m/s
    double p = 0.0; ///< Pa

    friend bool operator==(const InitialConfig&, const InitialConfig&) = default;
};

struct SourceConfig {
    enum class Kind { None, Constant, BoxRegion, NearPatch, Table };
    Kind kind = Kind::None;
    double q = 0.0; ///< K/s
    Vec3 box_min{};
    Vec3 box_max{};
    std::string patch;
    /// Table: q(t) piecewise linear through (times[i], values[i]), applied
    /// to every cell; held constant outside the table.
    std::vector<double> times;
    std::vector<double> values;

    friend bool operator==(const SourceConfig&, const SourceConfig&) = default;
};

struct PressureConfig {
    SorParams sor;
    /// Unset: eps_global = 1e-8 * u_ref * total face area.
    std::optional<double> eps_global;
    double u_ref = 1.0; ///< m/s

    friend bool operator==(const PressureConfig& a, const PressureConfig& b)
    {
        return a.sor.omega == b.sor.omega && a.sor.eps_cell == b.sor.eps_cell && a.sor.max_inner == b.sor.max_inner
               && a.sor.max_outer == b.sor.max_outer && a.sor.abort_on_not_converged == b.sor.abort_on_not_converged
               && a.eps_global == b.eps_global && a.u_ref == b.u_ref;
    }
};

struct RunSection {
    double t_end = 0.0;
    std::optional<double> tau; ///< unset: automatic
    double safety = 0.5;
    int recompute_every = 10;
    long max_steps = 1000000;
    double steady_tol = 0.0;
    bool flow = true;
    bool advect = true;

    friend bool operator==(const RunSection&, const RunSection&) = default;
};

struct OutputConfig {
    std::string directory = "output";
    int every = 100;
    bool vtk = true;
    std::string prefix = "state";
    std::vector<int> probes;
    std::string probe_file = "probes.csv";

    friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

struct ScenarioConfig {
    MeshConfig mesh;
    FluidProperties fluid;
    std::vector<BoundaryAssignment> boundary;
    InitialConfig initial;
    SourceConfig source;
    RunSection run;
    PressureConfig pressure;
    OutputConfig output;

    friend bool operator==(const ScenarioConfig& a, const ScenarioConfig& b)
    {
        const auto& f = a.fluid;
        const auto& g = b.fluid;
        return a.mesh == b.mesh && f.alpha == g.alpha && f.mu == g.mu && f.rho_inf == g.rho_inf
               && f.beta_exp == g.beta_exp && f.T_inf == g.T_inf && f.g == g.g && a.boundary == b.boundary
               && a.initial == b.initial && a.source == b.source && a.run == b.run && a.pressure == b.pressure
               && a.output == b.output;
    }
};

/// Parses the sectioned key = value format documented in
/// docs/config_schema.md. Throws SchemaError listing every violation.
ScenarioConfig parse_config(const std::string& text);
/// Reads and parses a file; an unreadable file is a SchemaError too.
ScenarioConfig parse_config_file(const std::string& path);

/// Complete effective configuration, every key spelled out, numbers with 17
/// significant digits. parse_config(echo_config(c)) == c.
std::string echo_config(const ScenarioConfig& cfg);

/// Generated or loaded mesh with the boundary assignments applied. Throws
/// SchemaError for assignments to patches the mesh does not have.
MeshData build_mesh_data(const ScenarioConfig& cfg);
InitialCondition make_initial_condition(const ScenarioConfig& cfg, const Mesh& mesh);
HeatSource make_heat_source(const ScenarioConfig& cfg, const Mesh& mesh);
/// Run settings with the automatic eps_global resolved against the mesh.
RunConfig make_run_config(const ScenarioConfig& cfg, const Mesh& mesh);

} // namespace dsc
