#pragma once

#include "dsc/geometry.hpp"
#include "dsc/vec3.hpp"

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dsc {

enum class VelocityCondition { NoSlip, FreeSlip };
enum class ThermalCondition { Adiabatic, FixedTemperature };

/// Physical condition on a boundary face.
struct BoundaryTag {
    VelocityCondition velocity = VelocityCondition::NoSlip;
    ThermalCondition thermal = ThermalCondition::Adiabatic;
    /// Kelvin; meaningful for FixedTemperature only.
    double temperature = 0.0;

    static BoundaryTag no_slip_adiabatic() { return {}; }
    static BoundaryTag no_slip_fixed(double kelvin)
    {
        return {VelocityCondition::NoSlip, ThermalCondition::FixedTemperature, kelvin};
    }
    static BoundaryTag free_slip_adiabatic()
    {
        return {VelocityCondition::FreeSlip, ThermalCondition::Adiabatic, 0.0};
    }
    static BoundaryTag free_slip_fixed(double kelvin)
    {
        return {VelocityCondition::FreeSlip, ThermalCondition::FixedTemperature, kelvin};
    }

    /// One of noslip-adiabatic, noslip-fixed, freeslip-adiabatic,
    /// freeslip-fixed. Throws UnknownTag.
    static BoundaryTag from_name(const std::string& name, std::optional<double> value = {});
    std::string name() const;
    bool has_value() const { return thermal == ThermalCondition::FixedTemperature; }

    friend bool operator==(const BoundaryTag&, const BoundaryTag&) = default;
};

struct BoundaryEntry {
    int cell = 0;
    int local_face = 0;
    BoundaryTag tag;
    /// Generator patch name (xmin, inner, ...); empty for file meshes.
    std::string patch;
};

/// Explicit pairing of two faces that do not share vertices (periodic
/// closure of a box).
struct PeriodicEntry {
    int cell_a = 0;
    int face_a = 0;
    int cell_b = 0;
    int face_b = 0;
};

/// Raw, unvalidated cell complex as produced by generators and the reader.
struct MeshData {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 8>> cells;
    std::vector<BoundaryEntry> boundary;
    std::vector<PeriodicEntry> periodic;

    HexVertices cell_vertices(std::size_t cell) const;
    /// Re-tags every boundary entry of a generator patch; returns the count.
    std::size_t assign_patch(const std::string& patch, const BoundaryTag& tag);
    std::vector<std::string> patch_names() const;
};

/// (cell, local face) pair.
struct Slot {
    int cell = -1;
    int local = -1;
    friend bool operator==(const Slot&, const Slot&) = default;
};

struct Face {
    std::array<Slot, 2> side{};
    /// Set for boundary faces only.
    std::optional<BoundaryTag> tag;
    bool is_boundary() const { return side[1].cell < 0; }
};

struct MeshFinding {
    enum class Kind {
        DegenerateCell,
        InvalidVertexIndex,
        OverSharedFace,
        UntaggedBoundary,
        DuplicateTag,
        TagOnInteriorFace,
        PeriodicMismatch,
        AreaMismatch,
        SignInconsistency,
        NearSingularDenominator,
    };
    Kind kind;
    long cell = -1;
    int face = -1;
    std::string detail;

    std::string describe() const;
};

struct MeshReport {
    std::size_t cells = 0;
    std::size_t interior_faces = 0;
    std::size_t boundary_faces = 0;
    double min_volume = 0.0;
    double max_volume = 0.0;
    /// Largest angle between a face vector and its node vector, degrees.
    double worst_nonorthogonality_deg = 0.0;
    /// Smallest port update denominator relative to the local length scale.
    double min_relative_denominator = 0.0;
    std::vector<MeshFinding> findings;

    bool ok() const { return findings.empty(); }
    std::size_t count(MeshFinding::Kind k) const;
};

/// Scans the whole complex and reports every problem found.
MeshReport validate_mesh(const MeshData& data);

/// Validated, immutable cell complex with face adjacency and geometry.
class Mesh {
public:
    /// Throws MeshError listing every finding when validation fails.
    explicit Mesh(MeshData data);

    const MeshData& data() const { return data_; }
    std::size_t num_cells() const { return data_.cells.size(); }
    std::size_t num_slots() const { return 6 * num_cells(); }
    const CellGeometry& geometry(std::size_t cell) const { return geometry_[cell]; }
    const std::vector<Face>& faces() const { return faces_; }
    const Face& face(std::size_t f) const { return faces_[f]; }
    int face_of(int cell, int local) const { return slot_face_[6 * cell + local]; }
    /// Opposite slot across an interior face; cell = -1 on the boundary.
    Slot neighbor(int cell, int local) const;
    const std::optional<BoundaryTag>& boundary_tag(int cell, int local) const
    {
        return faces_[face_of(cell, local)].tag;
    }
    double total_volume() const;
    double mean_face_area() const;
    /// Cells owning at least one face of the named generator patch.
    std::vector<int> cells_on_patch(const std::string& patch) const;
    /// Boundary slots of the named generator patch.
    std::vector<Slot> patch_slots(const std::string& patch) const;

private:
    MeshData data_;
    std::vector<CellGeometry> geometry_;
    std::vector<Face> faces_;
    std::vector<int> slot_face_;
};

struct BoxSpec {
    int nx = 1, ny = 1, nz = 1;
    Vec3 lengths{1.0, 1.0, 1.0};
    Vec3 origin{};
    /// Ratio of last to first cell size per axis; 1 gives uniform spacing.
    Vec3 grading{1.0, 1.0, 1.0};
    std::array<bool, 3> periodic{false, false, false};

    friend bool operator==(const BoxSpec&, const BoxSpec&) = default;
};

/// Structured box with patches xmin, xmax, ymin, ymax, zmin, zmax (absent on
/// periodic axes), all tagged noslip-adiabatic. Throws InvalidDimensions.
MeshData generate_box(const BoxSpec& spec);

struct AnnulusSpec {
    int nr = 4, ntheta = 16, nz = 1;
    double r_inner = 0.05, r_outer = 0.115, length = 0.02;
    /// Angle of the first radial grid line. The default pi/2 makes the mesh
    /// mirror-symmetric about the x = 0 plane.
    double theta0 = 1.5707963267948966;

    friend bool operator==(const AnnulusSpec&, const AnnulusSpec&) = default;
};

/// Body-fitted annulus around the z axis; cell axes (r, theta, z). Patches
/// inner, outer, zmin, zmax. Throws InvalidDimensions.
MeshData generate_annulus(const AnnulusSpec& spec);

/// Line-oriented text format: VERTICES / CELLS / BOUNDARY [/ PERIODIC].
void write_mesh(std::ostream& os, const MeshData& data);
void write_mesh_file(const std::string& path, const MeshData& data);
/// Throws IoError with a line number on malformed input.
MeshData read_mesh(std::istream& is);
MeshData read_mesh_file(const std::string& path);

} // namespace dsc
