// Command line front end: run, mesh-gen, check-mesh, validate.
#include "dsc/config.hpp"
#include "dsc/errors.hpp"
#include "dsc/output.hpp"
#include "dsc/solver.hpp"
#include "dsc/validation.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace dsc;

namespace {

enum Exit { kOk = 0, kRunError = 1, kConfigError = 2, kValidationFailure = 3 };

const char* const kOutputEnv = "DSC_OUTPUT_DIR";

void print_nested(const std::exception& e, int depth = 0)
{
    std::cerr << (depth == 0 ? "error: " : "  caused by: ") << e.what() << '\n';
    try {
        std::rethrow_if_nested(e);
    } catch (const std::exception& inner) {
        print_nested(inner, depth + 1);
    }
}

int report_schema(const SchemaError& e)
{
    std::cerr << "configuration error:\n";
    for (const auto& v : e.violations()) std::cerr << "  " << v << '\n';
    return kConfigError;
}

/// Environment override first, then the configured directory.
std::string output_directory(const ScenarioConfig& cfg)
{
    if (const char* env = std::getenv(kOutputEnv); env && *env) return env;
    return cfg.output.directory;
}

std::string numbered(const std::string& prefix, long index)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "_%06ld.vtk", index);
    return prefix + buf;
}

int cmd_run(const std::string& config_path, bool quiet)
{
    ScenarioConfig cfg;
    try {
        cfg = parse_config_file(config_path);
    } catch (const SchemaError& e) {
        return report_schema(e);
    }
    cfg.output.directory = output_directory(cfg);
    const fs::path dir = cfg.output.directory;

    std::optional<Mesh> mesh;
    try {
        mesh.emplace(build_mesh_data(cfg));
    } catch (const SchemaError& e) {
        return report_schema(e);
    } catch (const std::exception& e) {
        print_nested(e);
        return kRunError;
    }
    try {
        fs::create_directories(dir);
        {
            std::ofstream echo(dir / "config.ini");
            if (!echo) throw IoError("cannot write " + (dir / "config.ini").string());
            echo << echo_config(cfg);
        }
        const Mesh& m = *mesh;
        const auto props = cfg.fluid;
        props.validate();
        auto state = initialize(m, make_initial_condition(cfg, m));
        const auto source = make_heat_source(cfg, m);
        const auto rc = make_run_config(cfg, m);
        ProbeWriter probes((dir / cfg.output.probe_file).string(), m, cfg.output.probes);
        long frame = 0;
        auto on_output = [&](const FieldState& s) {
            probes.record(s);
            if (cfg.output.vtk) write_vtk((dir / numbered(cfg.output.prefix, frame)).string(), m, s);
            ++frame;
        };
        if (!quiet)
            std::cout << "mesh: " << m.num_cells() << " cells, " << m.faces().size() << " faces; output -> "
                      << dir.string() << std::endl;
        const auto sum = run(m, state, props, source, rc, quiet ? nullptr : &std::cout, on_output);
        std::cout << "finished: " << sum.steps << " steps, t = " << sum.time << " s"
                  << (sum.reached_steady_state ? ", steady state reached" : "") << ", max outer iterations "
                  << sum.max_outer_iterations << ", unconverged projections " << sum.projection_failures << '\n';
    } catch (const SchemaError& e) {
        return report_schema(e);
    } catch (const std::exception& e) {
        print_nested(e);
        return kRunError;
    }
    return kOk;
}

int cmd_mesh_gen(const std::string& config_path, const std::string& out)
{
    ScenarioConfig cfg;
    try {
        cfg = parse_config_file(config_path);
    } catch (const SchemaError& e) {
        return report_schema(e);
    }
    try {
        const auto data = build_mesh_data(cfg);
        Mesh m(data);
        fs::path path = out;
        if (path.empty()) {
            path = fs::path(output_directory(cfg)) / "mesh.txt";
            fs::create_directories(path.parent_path());
        }
        write_mesh_file(path.string(), data);
        std::cout << "wrote " << path.string() << ": " << m.num_cells() << " cells, " << data.vertices.size()
                  << " vertices\n";
    } catch (const SchemaError& e) {
        return report_schema(e);
    } catch (const std::exception& e) {
        print_nested(e);
        return kRunError;
    }
    return kOk;
}

int cmd_check_mesh(const std::string& path)
{
    MeshReport rep;
    try {
        rep = validate_mesh(read_mesh_file(path));
    } catch (const std::exception& e) {
        print_nested(e);
        return kRunError;
    }
    std::cout << "cells " << rep.cells << ", interior faces " << rep.interior_faces << ", boundary faces "
              << rep.boundary_faces << '\n'
              << "volume min " << rep.min_volume << " max " << rep.max_volume << '\n'
              << "worst non-orthogonality " << rep.worst_nonorthogonality_deg << " deg\n"
              << "min relative port denominator " << rep.min_relative_denominator << '\n';
    for (const auto& f : rep.findings) std::cout << "finding: " << f.describe() << '\n';
    std::cout << (rep.ok() ? "mesh OK" : "mesh INVALID: " + std::to_string(rep.findings.size()) + " findings")
              << '\n';
    return rep.ok() ? kOk : kValidationFailure;
}

int cmd_validate(const std::string& suite, bool inject, bool verbose)
{
    std::vector<int> checks;
    try {
        checks = suite_checks(suite);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    }
    ValidationOptions opt;
    opt.inject_flux_sign_error = inject;
    opt.log = verbose ? &std::cerr : nullptr;
    bool ok = true;
    for (const auto& r : run_validation_suite(checks, opt)) {
        std::cout << format_result(r) << std::endl;
        ok = ok && r.passed;
    }
    return ok ? kOk : kValidationFailure;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Hexahedral-mesh solver for buoyant incompressible flow"};
    app.require_subcommand(1);
    app.footer(std::string("Environment: ") + kOutputEnv + " overrides the output directory.\n"
               "Exit codes: 0 ok, 1 run error, 2 configuration error, 3 validation failure.");

    std::string config_path, mesh_path, mesh_out, suite = "all";
    bool quiet = false, inject = false, verbose = false;

    auto* run_cmd = app.add_subcommand("run", "Run a scenario configuration");
    run_cmd->add_option("config", config_path, "Scenario file")->required();
    run_cmd->add_flag("-q,--quiet", quiet, "No progress lines");

    auto* gen_cmd = app.add_subcommand("mesh-gen", "Write the mesh of a configuration to a mesh file");
    gen_cmd->add_option("config", config_path, "Scenario file")->required();
    gen_cmd->add_option("-o,--output", mesh_out, "Mesh file (default <output dir>/mesh.txt)");

    auto* check_cmd = app.add_subcommand("check-mesh", "Validate a mesh file and print a quality report");
    check_cmd->add_option("mesh", mesh_path, "Mesh file")->required();

    auto* val_cmd = app.add_subcommand("validate", "Run acceptance checks");
    val_cmd->add_option("suite", suite,
                        "geometry, gradient, diffusion, conservation, projection, channel, cavity, annulus, "
                        "scattering, quick, all, or 1..9");
    val_cmd->add_flag("--inject-sign-error", inject, "Flip one flux coefficient sign in the geometry check");
    val_cmd->add_flag("-v,--verbose", verbose, "Progress on stderr");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    if (*run_cmd) return cmd_run(config_path, quiet);
    if (*gen_cmd) return cmd_mesh_gen(config_path, mesh_out);
    if (*check_cmd) return cmd_check_mesh(mesh_path);
    return cmd_validate(suite, inject, verbose);
}
