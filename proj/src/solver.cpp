#include "dsc/solver.hpp"

#include "dsc/connection.hpp"
#include "dsc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <iomanip>
#include <limits>
#include <ostream>

namespace dsc {

ScatteringDiagnostic::ScatteringDiagnostic(std::size_t cells) : cells_(cells)
{
    for (auto& v : incident_) v.assign(6 * cells, 0.0);
    for (auto& v : outgoing_) v.assign(6 * cells, 0.0);
}

void ScatteringDiagnostic::check(double lhs, double rhs, const char* which)
{
    const double defect = std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
    worst_ = std::max(worst_, defect);
    if (!(defect <= kTolerance))
        throw ReconstructionMismatch(std::string("scattering reconstruction of ") + which + " off by "
                                     + std::to_string(defect));
}

void ScatteringDiagnostic::record_ports(const FieldState& s)
{
    for (int k = 0; k < kNumFields; ++k) {
        const auto& port = s.fields[k].port;
        auto& in = incident_[k];
        const auto& out = outgoing_[k];
        for (std::size_t slot = 0; slot < 6 * cells_; ++slot) {
            in[slot] = port[slot] - out[slot];
            check(port[slot], out[slot] + in[slot], "port");
        }
    }
    ++records_;
}

void ScatteringDiagnostic::record_nodes(const FieldState& s)
{
    for (int k = 0; k < kNumFields; ++k) {
        const auto& node = s.fields[k].node;
        const auto& in = incident_[k];
        auto& out = outgoing_[k];
        for (std::size_t slot = 0; slot < 6 * cells_; ++slot) {
            const double zn = node[slot / 6];
            out[slot] = zn - in[slot];
            check(zn, in[slot] + out[slot], "node");
        }
    }
    ++records_;
}

StepReport step(const Mesh& mesh, FieldState& s, const FluidProperties& props, const HeatSource& q, double tau,
                const StepOptions& opt, ScatteringDiagnostic* diag)
{
    StepReport report;
    report.tau = tau;
    try {
        static constexpr Group kFlowGroups[] = {Group::Temperature, Group::Velocity, Group::Pressure};
        static constexpr Group kThermalGroups[] = {Group::Temperature};
        if (opt.flow)
            connection_step(mesh, s, kFlowGroups);
        else
            connection_step(mesh, s, kThermalGroups);

        if (opt.flow) report.projection = projection_loop(mesh, s, props, tau, opt.sor);
        if (diag) diag->record_ports(s);

        ReflectionOptions ro;
        ro.advect = opt.advect;
        ro.update_velocity = opt.flow;
        ro.buoyancy = opt.flow;
        reflection_step(mesh, s, props, q, s.time, tau, ro);
        if (diag) diag->record_nodes(s);

        rotate_port_history(s);
    } catch (const Error& e) {
        std::throw_with_nested(StepFailure(s.step_index, s.time, e.what()));
    }
    ++s.step_index;
    s.time += tau;
    return report;
}

double auto_timestep(const Mesh& mesh, const FieldState& s, const FluidProperties& props, double safety)
{
    const double diffusivity = std::max(props.alpha, props.mu / props.rho_inf);
    double tau = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        const double h = std::cbrt(mesh.geometry(c).volume);
        if (diffusivity > 0.0) tau = std::min(tau, h * h / (6.0 * diffusivity));
        tau = std::min(tau, h / (norm(s.node_velocity(static_cast<int>(c))) + kVelocityFloor));
    }
    return safety * tau;
}

bool monitor_steady_state(const FieldState& s, const FieldState& prev, double tol)
{
    auto relative_change = [&](std::initializer_list<Field> fields) {
        double diff = 0.0, scale = 0.0;
        for (std::size_t c = 0; c < s.num_cells(); ++c) {
            double d2 = 0.0, p2 = 0.0;
            for (Field f : fields) {
                const double a = s[f].node[c];
                const double b = prev[f].node[c];
                d2 += (a - b) * (a - b);
                p2 += b * b;
            }
            diff = std::max(diff, std::sqrt(d2));
            scale = std::max(scale, std::sqrt(p2));
        }
        if (diff == 0.0) return 0.0;
        return diff / std::max(scale, std::numeric_limits<double>::min());
    };
    return relative_change({Field::T}) < tol && relative_change({Field::Ux, Field::Uy, Field::Uz}) < tol;
}

namespace {

void progress_line(std::ostream& os, const Mesh& mesh, const FieldState& s, const StepReport& r)
{
    double umax = 0.0, tmax = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        umax = std::max(umax, norm(s.node_velocity(static_cast<int>(c))));
        tmax = std::max(tmax, s[Field::T].node[c]);
    }
    os << "step " << s.step_index << " t " << std::setprecision(6) << s.time << " max|u| " << umax << " maxT "
       << tmax << " p_outer " << r.projection.outer_iterations << " sum|I| " << r.projection.final_sum << '\n';
}

} // namespace

RunSummary run(const Mesh& mesh, FieldState& s, const FluidProperties& props, const HeatSource& q,
               const RunConfig& cfg, std::ostream* progress, const std::function<void(const FieldState&)>& on_output)
{
    RunSummary sum;
    const auto& pol = cfg.tau_policy;
    double tau = pol.kind == TimeStepPolicy::Kind::Fixed ? pol.tau : auto_timestep(mesh, s, props, pol.safety);
    if (!(tau > 0.0) || !std::isfinite(tau)) throw Error("time step must be positive and finite");

    if (on_output) on_output(s);
    FieldState snapshot = s;
    const int every = std::max(1, cfg.output_every);
    StepReport last;
    while (s.time < cfg.t_end * (1.0 - 1e-12) && sum.steps < cfg.max_steps) {
        const double dt = std::min(tau, cfg.t_end - s.time);
        last = step(mesh, s, props, q, dt, cfg.step);
        ++sum.steps;
        sum.max_outer_iterations = std::max(sum.max_outer_iterations, last.projection.outer_iterations);
        if (!last.projection.converged) ++sum.projection_failures;
        if (pol.kind == TimeStepPolicy::Kind::Auto && pol.recompute_every > 0 && sum.steps % pol.recompute_every == 0)
            tau = auto_timestep(mesh, s, props, pol.safety);
        if (!s.all_finite()) throw NonFiniteUpdate(-1, "state after step " + std::to_string(s.step_index));
        if (sum.steps % every == 0) {
            if (progress) progress_line(*progress, mesh, s, last);
            if (on_output) on_output(s);
            if (cfg.steady_tol > 0.0 && monitor_steady_state(s, snapshot, cfg.steady_tol)) {
                sum.reached_steady_state = true;
                break;
            }
            snapshot = s;
        }
    }
    sum.time = s.time;
    return sum;
}

} // namespace dsc
