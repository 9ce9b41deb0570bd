#pragma once

#include "dsc/mesh.hpp"
#include "dsc/state.hpp"

#include <array>
#include <span>

namespace dsc {

/// Which port level supplies the directional differences along the node
/// vectors that do not pierce the face.  The time-stepping cycle reads the
/// previous level; the pressure solve works on a single (current) level.
enum class Tangential { Previous, Current };

/// z^n of a (cell, face) slot: component face/2 is 2 (-1)^face Z^n, the
/// other two are opposite-face port differences.
std::array<double, 3> assemble_znode(const Mesh& mesh, int cell, int face, const ScalarField& z,
                                     Tangential level = Tangential::Previous);

/// Directional differences b_mu . grad Z seen from one side of a face:
/// the normal component from the node and the face's current port value,
/// the tangential ones from z^n.
Vec3 face_differences(const Mesh& mesh, int cell, int face, const ScalarField& z,
                      Tangential level = Tangential::Previous);

/// Discrete f . grad Z on a face (outward area vector of `cell`).
double face_flux(const Mesh& mesh, int cell, int face, const ScalarField& z,
                 Tangential level = Tangential::Previous);

/// Reconstructed gradient on a face. Interior faces return the mean of the
/// two one-sided reconstructions, so both slots see the same vector.
Vec3 face_gradient(const Mesh& mesh, int cell, int face, const ScalarField& z,
                   Tangential level = Tangential::Previous);

/// Port value that makes the face flux vanish (insulating / zero normal
/// gradient rule).
double zero_flux_port(const Mesh& mesh, int cell, int face, const ScalarField& z,
                      Tangential level = Tangential::Previous);

/// Flux-continuity update of a shared face. Writes the new port value into
/// both slots and returns it. Throws NearSingularDenominator.
double connect_interior_face(const Mesh& mesh, int face_index, ScalarField& z,
                             Tangential level = Tangential::Previous);

/// Field groups that share a boundary rule.
enum class Group { Temperature, Velocity, Pressure };

/// Applies the boundary condition of a boundary face to one field group.
void connect_boundary_face(const Mesh& mesh, int face_index, FieldState& s, Group group,
                           Tangential level = Tangential::Previous);

/// Velocity port rule alone (no-slip zero, free-slip normal removal) on a
/// set of three velocity component fields.
void apply_velocity_boundary(const Mesh& mesh, int face_index, ScalarField& ux, ScalarField& uy,
                             ScalarField& uz, Tangential level);

/// Full connection step for the listed groups: interior faces by flux
/// continuity, boundary faces by their tags.
void connection_step(const Mesh& mesh, FieldState& s,
                     std::span<const Group> groups = std::span<const Group>{});

/// Connection of a single scalar with every boundary face treated by the
/// zero-flux rule.
void connect_scalar_zero_flux(const Mesh& mesh, ScalarField& z, Tangential level);

} // namespace dsc
