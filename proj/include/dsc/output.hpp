#pragma once

#include "dsc/mesh.hpp"
#include "dsc/state.hpp"

#include <fstream>
#include <string>
#include <vector>

namespace dsc {

/// Legacy ASCII VTK unstructured grid: hexahedra with cell data T, p and the
/// velocity vector u, 9 significant digits. Throws IoError.
void write_vtk(const std::string& path, const Mesh& mesh, const FieldState& s);

/// CSV time series of node values at fixed cells.
class ProbeWriter {
public:
    /// Throws InvalidProbe for ids outside the mesh, IoError when the file
    /// cannot be opened. The header is written immediately.
    ProbeWriter(const std::string& path, const Mesh& mesh, std::vector<int> cells);

    /// One row: t followed by T, ux, uy, uz, p per probe.
    void record(const FieldState& s);
    const std::vector<int>& cells() const { return cells_; }

private:
    std::ofstream out_;
    std::vector<int> cells_;
    std::string path_;
};

} // namespace dsc
