#include "dsc/pressure.hpp"

#include "dsc/connection.hpp"
#include "dsc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dsc {

void SorParams::validate() const
{
    if (!(omega > 0.0 && omega < 2.0)) throw Error("SOR omega must lie in (0, 2)");
    if (!(eps_global > 0.0)) throw Error("eps_global must be > 0");
    if (eps_cell < 0.0) throw Error("eps_cell must be >= 0");
    if (max_inner < 1 || max_outer < 1) throw Error("SOR iteration caps must be >= 1");
}

double divergence_integral(const Mesh& mesh, int cell, const FieldState& s)
{
    const auto& g = mesh.geometry(cell);
    double sum = 0.0;
    for (int f = 0; f < 6; ++f) sum += dot(s.port_velocity(cell, f), g.face[f]);
    return sum;
}

std::vector<double> divergence_integrals(const Mesh& mesh, const FieldState& s)
{
    std::vector<double> I(mesh.num_cells());
    for (std::size_t c = 0; c < I.size(); ++c) I[c] = divergence_integral(mesh, static_cast<int>(c), s);
    return I;
}

namespace {

double cell_flux_sum(const Mesh& mesh, int cell, const ScalarField& p)
{
    double sum = 0.0;
    for (int f = 0; f < 6; ++f) sum += face_flux(mesh, cell, f, p, Tangential::Current);
    return sum;
}

// d(sum_face S)/d(node) with the adjacent ports following the node.
double diagonal(const Mesh& mesh, int cell)
{
    const auto& g = mesh.geometry(cell);
    double diag = 0.0;
    for (int f = 0; f < 6; ++f) {
        const Slot nb = mesh.neighbor(cell, f);
        if (nb.cell < 0 || nb.cell == cell) continue;
        const double sm = g.flux[f][face_axis(f)];
        const double snb = mesh.geometry(nb.cell).flux[nb.local][face_axis(nb.local)];
        const double d = sm + face_parity(f) * face_parity(nb.local) * snb;
        diag += 2.0 * face_parity(f) * sm * (1.0 - sm / d);
    }
    return diag;
}

void refresh_cell_ports(const Mesh& mesh, int cell, ScalarField& p)
{
    for (int f = 0; f < 6; ++f) {
        const int fi = mesh.face_of(cell, f);
        if (mesh.face(fi).is_boundary())
            p.port[6 * cell + f] = zero_flux_port(mesh, cell, f, p, Tangential::Current);
        else
            connect_interior_face(mesh, fi, p, Tangential::Current);
    }
}

double residual_norm(const Mesh& mesh, const std::vector<double>& rhs, const ScalarField& p, double scale)
{
    double r = 0.0;
    for (std::size_t c = 0; c < rhs.size(); ++c)
        r = std::max(r, std::abs(rhs[c] - cell_flux_sum(mesh, static_cast<int>(c), p)));
    return r * scale;
}

double effective_eps_cell(const SorParams& params, std::size_t cells)
{
    return params.eps_cell > 0.0 ? params.eps_cell : params.eps_global / (2.0 * static_cast<double>(cells));
}

} // namespace

SorStats solve_pressure(const Mesh& mesh, std::span<const double> divergence, double tau, double rho_inf,
                        const SorParams& params, ScalarField& p)
{
    const int n = static_cast<int>(mesh.num_cells());
    const double to_volume_rate = tau / rho_inf;
    const double mean = std::accumulate(divergence.begin(), divergence.end(), 0.0) / n;
    std::vector<double> rhs(n);
    for (int c = 0; c < n; ++c) rhs[c] = (divergence[c] - mean) / to_volume_rate;

    std::vector<double> diag(n);
    for (int c = 0; c < n; ++c) diag[c] = diagonal(mesh, c);

    const double eps = effective_eps_cell(params, mesh.num_cells());
    SorStats stats;
    stats.residual = residual_norm(mesh, rhs, p, to_volume_rate);
    int growth = 0;
    double best = stats.residual;
    while (stats.residual >= eps && stats.sweeps < params.max_inner) {
        // Residual of each cell just before its update (Gauss-Seidel residual).
        double sweep_residual = 0.0;
        for (int c = 0; c < n; ++c) {
            const double r = rhs[c] - cell_flux_sum(mesh, c, p);
            sweep_residual = std::max(sweep_residual, std::abs(r));
            if (diag[c] == 0.0) continue;
            p.node[c] += params.omega * r / diag[c];
            refresh_cell_ports(mesh, c, p);
        }
        connect_scalar_zero_flux(mesh, p, Tangential::Current);
        ++stats.sweeps;
        const double r = sweep_residual * to_volume_rate;
        // Round-off level wobble is not growth.
        growth = (r > stats.residual && r > 2.0 * best) ? growth + 1 : 0;
        best = std::min(best, r);
        stats.residual = r;
        if (!std::isfinite(r) || growth >= 10) throw SorDiverged(stats.sweeps, r);
    }

    if (stats.sweeps > 0) stats.residual = residual_norm(mesh, rhs, p, to_volume_rate);

    const double gauge = p.node[0];
    if (gauge != 0.0) {
        for (auto& v : p.node) v -= gauge;
        for (auto& v : p.port) v -= gauge;
    }
    return stats;
}

void correct_velocity(const Mesh& mesh, FieldState& s, const ScalarField& p, double tau, double rho_inf)
{
    const double k = tau / rho_inf;
    auto& ux = s[Field::Ux];
    auto& uy = s[Field::Uy];
    auto& uz = s[Field::Uz];
    const int nfaces = static_cast<int>(mesh.faces().size());
    for (int fi = 0; fi < nfaces; ++fi) {
        const auto& f = mesh.face(fi);
        const Slot a = f.side[0];
        const Vec3 g = face_gradient(mesh, a.cell, a.local, p, Tangential::Current);
        const int na = f.is_boundary() ? 1 : 2;
        for (int side = 0; side < na; ++side) {
            const int slot = 6 * f.side[side].cell + f.side[side].local;
            ux.port[slot] -= k * g.x;
            uy.port[slot] -= k * g.y;
            uz.port[slot] -= k * g.z;
        }
        if (!f.is_boundary()) continue;
        const int slot = 6 * a.cell + a.local;
        if (f.tag->velocity == VelocityCondition::NoSlip) {
            ux.port[slot] = uy.port[slot] = uz.port[slot] = 0.0;
        } else {
            const Vec3 area = mesh.geometry(a.cell).face[a.local];
            const Vec3 nrm = area / norm(area);
            Vec3 u{ux.port[slot], uy.port[slot], uz.port[slot]};
            u -= dot(u, nrm) * nrm;
            ux.port[slot] = u.x;
            uy.port[slot] = u.y;
            uz.port[slot] = u.z;
        }
    }
    const int n = static_cast<int>(mesh.num_cells());
    auto& pressure = s[Field::P];
    for (int c = 0; c < n; ++c) {
        const Vec3 g = nodal_gradient(mesh, c, p);
        ux.node[c] -= k * g.x;
        uy.node[c] -= k * g.y;
        uz.node[c] -= k * g.z;
        pressure.node[c] += p.node[c];
    }
    for (std::size_t i = 0; i < pressure.port.size(); ++i) pressure.port[i] += p.port[i];
}

ProjectionStats projection_loop(const Mesh& mesh, FieldState& s, const FluidProperties& props, double tau,
                                const SorParams& params)
{
    ProjectionStats st;
    auto I = divergence_integrals(mesh, s);
    auto sum_abs = [](const std::vector<double>& v) {
        double a = 0.0;
        for (double x : v) a += std::abs(x);
        return a;
    };
    auto max_abs = [](const std::vector<double>& v) {
        double a = 0.0;
        for (double x : v) a = std::max(a, std::abs(x));
        return a;
    };
    st.initial_sum = st.final_sum = sum_abs(I);
    st.final_max = max_abs(I);
    if (st.final_max <= effective_eps_cell(params, mesh.num_cells())) return st;

    do {
        ScalarField dp(mesh.num_cells());
        const auto sor = solve_pressure(mesh, I, tau, props.rho_inf, params, dp);
        st.total_sweeps += sor.sweeps;
        correct_velocity(mesh, s, dp, tau, props.rho_inf);
        ++st.outer_iterations;
        I = divergence_integrals(mesh, s);
        st.final_sum = sum_abs(I);
        st.final_max = max_abs(I);
    } while (st.final_sum >= params.eps_global && st.outer_iterations < params.max_outer);

    st.converged = st.final_sum < params.eps_global;
    if (!st.converged && params.abort_on_not_converged) throw NotConverged(st.outer_iterations, st.final_sum);
    return st;
}

} // namespace dsc
