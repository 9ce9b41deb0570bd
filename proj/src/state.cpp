#include "dsc/state.hpp"

#include <algorithm>
#include <cmath>

namespace dsc {

std::string_view field_name(Field f)
{
    switch (f) {
    case Field::T: return "T";
    case Field::Ux: return "ux";
    case Field::Uy: return "uy";
    case Field::Uz: return "uz";
    case Field::P: return "p";
    }
    return "?";
}

bool FieldState::all_finite() const
{
    auto finite = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
    };
    return std::all_of(fields.begin(), fields.end(), [&](const ScalarField& f) {
        return finite(f.node) && finite(f.port) && finite(f.port_prev);
    });
}

FieldState initialize(const Mesh& mesh, const InitialCondition& ic)
{
    const auto n = mesh.num_cells();
    FieldState s;
    for (auto& f : s.fields) f = ScalarField(n);

    auto sample = [&](const Vec3& x, std::array<double, kNumFields>& out) {
        const Vec3 u = ic.velocity(x);
        out = {ic.temperature(x), u.x, u.y, u.z, ic.pressure(x)};
    };

    std::array<double, kNumFields> v{};
    for (std::size_t c = 0; c < n; ++c) {
        const auto& g = mesh.geometry(c);
        sample(g.center, v);
        for (int k = 0; k < kNumFields; ++k) s.fields[k].node[c] = v[k];
        for (int f = 0; f < 6; ++f) {
            sample(g.face_center[f], v);
            for (int k = 0; k < kNumFields; ++k) {
                s.fields[k].port[6 * c + f] = v[k];
                s.fields[k].port_prev[6 * c + f] = v[k];
            }
        }
    }
    return s;
}

void rotate_port_history(FieldState& s)
{
    for (auto& f : s.fields) f.port_prev = f.port;
}

} // namespace dsc
