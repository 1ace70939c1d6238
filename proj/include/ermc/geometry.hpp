#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

namespace ermc {

using Vec3 = std::array<double, 3>;

// Uniform Cartesian grid. Cell indices are 0-based throughout.
struct CartesianGrid {
  int nx = 1, ny = 1, nz = 1;
  double dx = 1.0, dy = 1.0, dz = 1.0;
  Vec3 origin = {0.0, 0.0, 0.0};

  int count(int axis) const { return axis == 0 ? nx : axis == 1 ? ny : nz; }
  double spacing(int axis) const { return axis == 0 ? dx : axis == 1 ? dy : dz; }
  double extent(int axis) const { return count(axis) * spacing(axis); }
  std::int64_t cell_count() const {
    return static_cast<std::int64_t>(nx) * ny * nz;
  }
  // Linear index, k-fastest.
  std::int64_t linear(int i, int j, int k) const {
    return (static_cast<std::int64_t>(i) * ny + j) * nz + k;
  }
  Vec3 cell_center(int i, int j, int k) const {
    return {origin[0] + (i + 0.5) * dx, origin[1] + (j + 0.5) * dy,
            origin[2] + (k + 0.5) * dz};
  }
  double cell_volume() const { return dx * dy * dz; }
  double min_spacing() const;

  void validate() const;
};

enum class AxisKind { periodic, wall };

struct Wall {
  double temperature = 0.0;  // [K]
  double emissivity = 1.0;   // in [0,1]
};

// Per-axis boundary: either periodic (both faces) or two walls.
struct BoundarySpec {
  std::array<AxisKind, 3> kind = {AxisKind::wall, AxisKind::wall,
                                  AxisKind::wall};
  std::array<Wall, 3> lo;  // face at origin side
  std::array<Wall, 3> hi;

  void validate() const;
  bool periodic(int axis) const { return kind[axis] == AxisKind::periodic; }
};

struct TemperatureField {
  CartesianGrid grid;
  std::vector<double> values;  // k-fastest, one per cell

  double at(int i, int j, int k) const { return values[grid.linear(i, j, k)]; }
  double max_value() const;
  double min_value() const;
  void validate() const;
};

struct CellIndex {
  int i = 0, j = 0, k = 0;
  int level = 0;
};

// Fine grid plus block-averaged coarser levels covering the same domain.
// steps_per_level[L] caps marching steps before demotion to level L+1; the
// coarsest level is uncapped.
struct GridHierarchy {
  std::vector<CartesianGrid> grids;
  std::vector<std::vector<double>> fields;
  std::vector<int> step_caps;

  int n_levels() const { return static_cast<int>(grids.size()); }
  double temperature(const CellIndex& c) const {
    return fields[c.level][grids[c.level].linear(c.i, c.j, c.k)];
  }
};

GridHierarchy build_hierarchy(const CartesianGrid& grid,
                              const std::vector<double>& field, int n_levels,
                              int ratio, int steps_per_level);

// Block-mean restriction; partial edge blocks average over available cells.
TemperatureField restrict_field(const TemperatureField& fine, int ratio);

// Cell containing `point` (0-based). Points exactly on an internal face
// resolve to the upper cell (floor semantics, clamped at the domain edge);
// pass a direction to resolve along the travel direction instead. Outside a
// walled domain is an error.
std::array<int, 3> locate(const CartesianGrid& grid, const Vec3& point);
std::array<int, 3> locate(const CartesianGrid& grid, const Vec3& point,
                          const Vec3& dir);

struct FaceCrossing {
  std::array<double, 3> df;  // distance to the next face along each axis
  double ds = 0.0;           // min over axes, clamped at zero
  int axis = 0;              // which index advances; ties resolve x,y,z
};

// Distances from pos to the cell faces in the direction of travel. A zero
// direction component yields an infinite distance on that axis.
FaceCrossing face_distances(const CartesianGrid& grid, const Vec3& pos,
                            const Vec3& dir, int i, int j, int k);

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Geometric tolerance used to nudge positions off faces.
inline double geom_eps(const CartesianGrid& grid) {
  return 1e-12 * grid.min_spacing();
}

}  // namespace ermc
