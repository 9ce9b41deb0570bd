#pragma once

#include "dsc/vec3.hpp"

#include <array>

namespace dsc {

/// Eight corners of a hexahedron. Corner k sits at reference coordinates
/// (k & 1, (k >> 1) & 1, (k >> 2) & 1), so bit mu of k selects the side
/// along reference direction mu.
using HexVertices = std::array<Vec3, 8>;

/// Per-cell geometric algebra of the DSC scheme.
///
/// Edges 4*mu + nu (nu = 0..3) are the four edges parallel to reference
/// direction mu, directed from bit mu = 0 to bit mu = 1, ordered by the
/// ascending index of their base corner.  Node vector b[mu] is the mean of
/// those four edges.  Faces 2*mu and 2*mu + 1 are the pair pierced by b[mu];
/// face 2*mu lies at node - b[mu]/2, face 2*mu + 1 at node + b[mu]/2.
struct CellGeometry {
    std::array<Vec3, 12> edge{};
    std::array<Vec3, 3> node_vec{};
    /// Outward area vectors. For a positively oriented cell these coincide
    /// with the (-1)^face signed face vectors of the scheme.
    std::array<Vec3, 6> face{};
    /// Vertex average of each face.
    std::array<Vec3, 6> face_center{};
    /// Vertex average of the cell (the node position).
    Vec3 center;
    double volume = 0.0;
    /// Columns are the node vectors.
    Mat3 beta;
    /// gamma = (beta^T)^-1; column mu is the dual vector b^mu.
    Mat3 gamma;
    /// flux[face][mu] = face . b^mu.
    std::array<std::array<double, 3>, 6> flux{};

    /// Cartesian vector from the directional differences (b_mu . grad Z).
    Vec3 gradient_from_differences(const Vec3& diff) const { return gamma * diff; }
};

/// Reference direction pierced by a face.
constexpr int face_axis(int face) { return face / 2; }

/// (-1)^face.
constexpr double face_parity(int face) { return (face % 2 == 0) ? 1.0 : -1.0; }

/// Local corner indices of a face, in a cyclic order.
std::array<int, 4> face_corners(int face);

/// Builds the full per-cell geometry. Throws DegenerateCell (tagged with
/// cell_id) on non-finite corners, non-positive volume, or a singular node
/// vector basis.
CellGeometry build_cell_geometry(const HexVertices& v, long cell_id = -1);

/// Divergence-theorem volume (1/3) sum_face c_face . f_face. Throws
/// DegenerateCell if the result is not positive.
double cell_volume(const HexVertices& v, long cell_id = -1);

struct DualBasis {
    Mat3 beta;
    Mat3 gamma;
};

/// beta has the node vectors as columns; gamma = (beta^T)^-1.
/// Throws SingularBasis when |det beta| < 1e-14 (max |b|)^3.
DualBasis dual_basis(const std::array<Vec3, 3>& b);

/// flux[face][mu] = sum_nu f_face^nu gamma_nu^mu.
std::array<std::array<double, 3>, 6> flux_coefficients(const std::array<Vec3, 6>& face,
                                                       const Mat3& gamma);
std::array<std::array<double, 3>, 6> flux_coefficients(const CellGeometry& g);

} // namespace dsc
