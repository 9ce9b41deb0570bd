#pragma once

#include "dsc/mesh.hpp"
#include "dsc/pressure.hpp"
#include "dsc/reflection.hpp"
#include "dsc/state.hpp"

#include <functional>
#include <iosfwd>
#include <vector>

namespace dsc {

struct TimeStepPolicy {
    enum class Kind { Fixed, Auto };
    Kind kind = Kind::Auto;
    double tau = 0.0;    ///< s, Fixed only
    double safety = 0.5; ///< (0, 1], Auto only
    int recompute_every = 10;
};

struct StepOptions {
    /// Momentum, pressure projection and velocity connection. When off the
    /// velocity field is frozen at its current value.
    bool flow = true;
    bool advect = true;
    SorParams sor;
};

struct StepReport {
    double tau = 0.0;
    ProjectionStats projection;
};

/// Recorder of the incident / outgoing decomposition of a run. Channels are
/// (cell, face) slots; the nodal image of a channel is its cell's node.
class ScatteringDiagnostic {
public:
    explicit ScatteringDiagnostic(std::size_t cells);

    /// Ports at t: z_in(t) = z^p(t) - z_out(t - tau/2).
    void record_ports(const FieldState& s);
    /// Nodes at t + tau/2: z_out = z^n - z_in(t).
    void record_nodes(const FieldState& s);

    const std::vector<double>& incident(Field f) const { return incident_[static_cast<int>(f)]; }
    const std::vector<double>& outgoing(Field f) const { return outgoing_[static_cast<int>(f)]; }
    /// Largest relative reconstruction defect seen so far.
    double worst_mismatch() const { return worst_; }
    long records() const { return records_; }

    /// Relative tolerance for the reconstruction identities.
    static constexpr double kTolerance = 1e-12;

private:
    void check(double lhs, double rhs, const char* which);

    std::size_t cells_;
    std::array<std::vector<double>, kNumFields> incident_;
    std::array<std::vector<double>, kNumFields> outgoing_;
    double worst_ = 0.0;
    long records_ = 0;
};

/// One DSC cycle: connection, pressure projection, reflection, port history
/// rotation. Advances step_index and time. Errors carry step/time context.
StepReport step(const Mesh& mesh, FieldState& s, const FluidProperties& props, const HeatSource& q, double tau,
                const StepOptions& opt = {}, ScatteringDiagnostic* diag = nullptr);

/// Lower bound of the advective speed in the time step estimate, m/s.
inline constexpr double kVelocityFloor = 1e-9;

/// safety * min_cell min(h^2 / (6 max(alpha, mu/rho)), h / (|u| + floor)),
/// h = V^(1/3).
double auto_timestep(const Mesh& mesh, const FieldState& s, const FluidProperties& props, double safety);

/// Max relative change of T and of u between two snapshots below tol.
bool monitor_steady_state(const FieldState& s, const FieldState& prev, double tol);

struct RunConfig {
    double t_end = 1.0;
    TimeStepPolicy tau_policy;
    long max_steps = 1000000;
    int output_every = 100;
    /// Stop at the first output interval with relative change below this;
    /// zero disables steady-state stopping.
    double steady_tol = 0.0;
    StepOptions step;
};

struct RunSummary {
    long steps = 0;
    double time = 0.0;
    bool reached_steady_state = false;
    int max_outer_iterations = 0;
    long projection_failures = 0;
};

/// Time loop with progress lines on `progress` (may be null). `on_output`
/// is invoked on the initial state and then every output_every steps.
RunSummary run(const Mesh& mesh, FieldState& s, const FluidProperties& props, const HeatSource& q,
               const RunConfig& cfg, std::ostream* progress = nullptr,
               const std::function<void(const FieldState&)>& on_output = {});

} // namespace dsc
