#pragma once

#include "dsc/connection.hpp"
#include "dsc/mesh.hpp"
#include "dsc/state.hpp"

#include <functional>

namespace dsc {

/// Constant Oberbeck-Boussinesq fluid properties (SI units).
struct FluidProperties {
    double alpha = 0.0;    ///< thermal diffusivity, m^2/s
    double mu = 0.0;       ///< dynamic viscosity, Pa s
    double rho_inf = 1.0;  ///< reference density, kg/m^3
    double beta_exp = 0.0; ///< thermal expansion coefficient, 1/K
    double T_inf = 0.0;    ///< reference temperature, K
    Vec3 g{0.0, 0.0, -9.81};

    double kinematic_viscosity() const { return mu / rho_inf; }
    /// Throws Error when alpha, mu or rho_inf is not positive or beta_exp is
    /// not finite.
    void validate() const;
};

/// Volumetric heat source q(x, t) in K/s.
using HeatSource = std::function<double(const Vec3& x, double t)>;

/// Node gradient from opposite-face port differences at the current port
/// level.
Vec3 nodal_gradient(const Mesh& mesh, int cell, const ScalarField& z);

struct ReflectionOptions {
    bool advect = true;        ///< include -u . grad terms
    bool update_velocity = true;
    bool buoyancy = true;
};

/// T^n(t + tau/2) of one cell; does not write.
double update_temperature(const Mesh& mesh, int cell, const FieldState& s, const FluidProperties& props,
                          const HeatSource& q, double t, double tau, const ReflectionOptions& opt = {});

/// u^n(t + tau/2) of one cell; does not write.
Vec3 update_velocity(const Mesh& mesh, int cell, const FieldState& s, const FluidProperties& props, double tau,
                     const ReflectionOptions& opt = {});

/// Whole-mesh reflection step: all new node values are computed from the
/// old ones, then written. Throws NonFiniteUpdate.
void reflection_step(const Mesh& mesh, FieldState& s, const FluidProperties& props, const HeatSource& q,
                     double t, double tau, const ReflectionOptions& opt = {});

} // namespace dsc
