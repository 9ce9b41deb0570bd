#include "dsc/reflection.hpp"

#include "dsc/errors.hpp"

#include <cmath>
#include <vector>

namespace dsc {

void FluidProperties::validate() const
{
    if (!(alpha > 0.0)) throw Error("fluid property alpha must be > 0");
    if (!(mu > 0.0)) throw Error("fluid property mu must be > 0");
    if (!(rho_inf > 0.0)) throw Error("fluid property rho_inf must be > 0");
    if (!std::isfinite(beta_exp)) throw Error("fluid property beta_exp must be finite");
}

Vec3 nodal_gradient(const Mesh& mesh, int cell, const ScalarField& z)
{
    Vec3 d;
    for (int mu = 0; mu < 3; ++mu) d[mu] = z.port_at(cell, 2 * mu + 1) - z.port_at(cell, 2 * mu);
    return mesh.geometry(cell).gradient_from_differences(d);
}

namespace {

double surface_flux(const Mesh& mesh, int cell, const ScalarField& z)
{
    double sum = 0.0;
    for (int f = 0; f < 6; ++f) sum += face_flux(mesh, cell, f, z, Tangential::Previous);
    return sum;
}

} // namespace

double update_temperature(const Mesh& mesh, int cell, const FieldState& s, const FluidProperties& props,
                          const HeatSource& q, double t, double tau, const ReflectionOptions& opt)
{
    const auto& g = mesh.geometry(cell);
    const auto& temp = s[Field::T];
    double rate = props.alpha / g.volume * surface_flux(mesh, cell, temp);
    if (opt.advect) rate -= dot(s.node_velocity(cell), nodal_gradient(mesh, cell, temp));
    if (q) rate += q(g.center, t);
    return temp.node[cell] + tau * rate;
}

Vec3 update_velocity(const Mesh& mesh, int cell, const FieldState& s, const FluidProperties& props, double tau,
                     const ReflectionOptions& opt)
{
    const auto& g = mesh.geometry(cell);
    const Vec3 u = s.node_velocity(cell);
    const double visc = props.mu / (g.volume * props.rho_inf);

    Vec3 rate = -(1.0 / props.rho_inf) * nodal_gradient(mesh, cell, s[Field::P]);
    const Field comps[3] = {Field::Ux, Field::Uy, Field::Uz};
    for (int k = 0; k < 3; ++k) {
        const auto& uk = s[comps[k]];
        rate[k] += visc * surface_flux(mesh, cell, uk);
        if (opt.advect) rate[k] -= dot(u, nodal_gradient(mesh, cell, uk));
    }
    if (opt.buoyancy) rate += props.beta_exp * (s[Field::T].node[cell] - props.T_inf) * props.g;
    return u + tau * rate;
}

void reflection_step(const Mesh& mesh, FieldState& s, const FluidProperties& props, const HeatSource& q,
                     double t, double tau, const ReflectionOptions& opt)
{
    const int n = static_cast<int>(mesh.num_cells());
    std::vector<double> temp(n);
    std::vector<Vec3> vel(opt.update_velocity ? n : 0);
    for (int c = 0; c < n; ++c) {
        temp[c] = update_temperature(mesh, c, s, props, q, t, tau, opt);
        if (!std::isfinite(temp[c])) throw NonFiniteUpdate(c, "temperature");
        if (opt.update_velocity) {
            vel[c] = update_velocity(mesh, c, s, props, tau, opt);
            if (!is_finite(vel[c])) throw NonFiniteUpdate(c, "velocity");
        }
    }
    s[Field::T].node = std::move(temp);
    if (opt.update_velocity) {
        for (int c = 0; c < n; ++c) {
            s[Field::Ux].node[c] = vel[c].x;
            s[Field::Uy].node[c] = vel[c].y;
            s[Field::Uz].node[c] = vel[c].z;
        }
    }
}

} // namespace dsc
