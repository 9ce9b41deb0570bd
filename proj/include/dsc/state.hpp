#pragma once

#include "dsc/mesh.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

namespace dsc {

/// Transported scalars. Velocity is carried component-wise.
enum class Field : int { T = 0, Ux = 1, Uy = 2, Uz = 3, P = 4 };
inline constexpr int kNumFields = 5;
inline constexpr std::array<Field, 5> kAllFields{Field::T, Field::Ux, Field::Uy, Field::Uz, Field::P};
std::string_view field_name(Field f);

/// One scalar of the DSC state: node values (cell centres, half steps) and
/// port values (per cell and local face, integer steps) at two time levels.
struct ScalarField {
    std::vector<double> node;
    /// Port values at the current integer step, indexed 6 * cell + face.
    std::vector<double> port;
    /// Port values one step earlier.
    std::vector<double> port_prev;

    ScalarField() = default;
    explicit ScalarField(std::size_t cells, double value = 0.0)
        : node(cells, value), port(6 * cells, value), port_prev(6 * cells, value) {}

    double port_at(int cell, int face) const { return port[6 * cell + face]; }
    double prev_at(int cell, int face) const { return port_prev[6 * cell + face]; }
};

struct FieldState {
    std::array<ScalarField, kNumFields> fields;
    /// t = step_index * tau.
    long step_index = 0;
    double time = 0.0;

    ScalarField& operator[](Field f) { return fields[static_cast<int>(f)]; }
    const ScalarField& operator[](Field f) const { return fields[static_cast<int>(f)]; }
    std::size_t num_cells() const { return fields[0].node.size(); }

    Vec3 node_velocity(int cell) const
    {
        return {(*this)[Field::Ux].node[cell], (*this)[Field::Uy].node[cell], (*this)[Field::Uz].node[cell]};
    }
    Vec3 port_velocity(int cell, int face) const
    {
        return {(*this)[Field::Ux].port_at(cell, face), (*this)[Field::Uy].port_at(cell, face),
                (*this)[Field::Uz].port_at(cell, face)};
    }
    /// True when every node and port value of every field is finite.
    bool all_finite() const;
};

using ScalarProfile = std::function<double(const Vec3&)>;
using VectorProfile = std::function<Vec3(const Vec3&)>;

struct InitialCondition {
    ScalarProfile temperature = [](const Vec3&) { return 0.0; };
    VectorProfile velocity = [](const Vec3&) { return Vec3{}; };
    ScalarProfile pressure = [](const Vec3&) { return 0.0; };
};

/// Samples nodes at cell centres and ports at face centres; both port
/// levels receive the same sample.
FieldState initialize(const Mesh& mesh, const InitialCondition& ic);

/// port_prev <- port for every field.
void rotate_port_history(FieldState& s);

} // namespace dsc
