#include "ermc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ermc/errors.hpp"

namespace ermc {

double CartesianGrid::min_spacing() const {
  return std::min({dx, dy, dz});
}

void CartesianGrid::validate() const {
  if (nx < 1 || ny < 1 || nz < 1)
    throw Error("CartesianGrid: cell counts must be >= 1");
  if (dx <= 0.0 || dy <= 0.0 || dz <= 0.0)
    throw Error("CartesianGrid: spacings must be positive");
}

void BoundarySpec::validate() const {
  for (int a = 0; a < 3; ++a) {
    if (kind[a] == AxisKind::periodic) continue;
    for (const Wall* w : {&lo[a], &hi[a]}) {
      if (w->emissivity < 0.0 || w->emissivity > 1.0)
        throw Error("BoundarySpec: wall emissivity must be in [0,1]");
      if (w->temperature < 0.0)
        throw Error("BoundarySpec: wall temperature must be >= 0");
    }
  }
}

double TemperatureField::max_value() const {
  return *std::max_element(values.begin(), values.end());
}

double TemperatureField::min_value() const {
  return *std::min_element(values.begin(), values.end());
}

void TemperatureField::validate() const {
  grid.validate();
  if (static_cast<std::int64_t>(values.size()) != grid.cell_count())
    throw Error("TemperatureField: value count does not match grid");
  for (double v : values)
    if (!(v > 0.0))
      throw Error("TemperatureField: temperatures must be positive");
}

TemperatureField restrict_field(const TemperatureField& fine, int ratio) {
  if (ratio < 2) throw Error("restrict_field: ratio must be >= 2");
  const CartesianGrid& fg = fine.grid;
  CartesianGrid cg;
  cg.nx = (fg.nx + ratio - 1) / ratio;
  cg.ny = (fg.ny + ratio - 1) / ratio;
  cg.nz = (fg.nz + ratio - 1) / ratio;
  cg.dx = fg.extent(0) / cg.nx;
  cg.dy = fg.extent(1) / cg.ny;
  cg.dz = fg.extent(2) / cg.nz;
  cg.origin = fg.origin;

  TemperatureField coarse;
  coarse.grid = cg;
  coarse.values.assign(cg.cell_count(), 0.0);
  for (int ci = 0; ci < cg.nx; ++ci) {
    for (int cj = 0; cj < cg.ny; ++cj) {
      for (int ck = 0; ck < cg.nz; ++ck) {
        double sum = 0.0;
        int count = 0;
        for (int i = ci * ratio; i < std::min((ci + 1) * ratio, fg.nx); ++i)
          for (int j = cj * ratio; j < std::min((cj + 1) * ratio, fg.ny); ++j)
            for (int k = ck * ratio; k < std::min((ck + 1) * ratio, fg.nz); ++k) {
              sum += fine.values[fg.linear(i, j, k)];
              ++count;
            }
        coarse.values[cg.linear(ci, cj, ck)] = sum / count;
      }
    }
  }
  return coarse;
}

GridHierarchy build_hierarchy(const CartesianGrid& grid,
                              const std::vector<double>& field, int n_levels,
                              int ratio, int steps_per_level) {
  grid.validate();
  if (n_levels < 1) throw Error("build_hierarchy: n_levels must be >= 1");
  if (n_levels > 1 && ratio < 2)
    throw Error("build_hierarchy: ratio must be >= 2");
  if (static_cast<std::int64_t>(field.size()) != grid.cell_count())
    throw Error("build_hierarchy: field size does not match grid");

  GridHierarchy h;
  h.grids.push_back(grid);
  h.fields.push_back(field);
  TemperatureField level{grid, field};
  for (int l = 1; l < n_levels; ++l) {
    const CartesianGrid& prev = h.grids.back();
    if (prev.nx == 1 && prev.ny == 1 && prev.nz == 1)
      throw Error("build_hierarchy: cannot coarsen below one cell; achievable "
                  "depth is " + std::to_string(l));
    level = restrict_field(level, ratio);
    h.grids.push_back(level.grid);
    h.fields.push_back(level.values);
  }
  h.step_caps.assign(n_levels, steps_per_level);
  h.step_caps.back() = -1;  // coarsest level marches until termination
  return h;
}

std::array<int, 3> locate(const CartesianGrid& grid, const Vec3& point) {
  std::array<int, 3> idx;
  for (int a = 0; a < 3; ++a) {
    double rel = (point[a] - grid.origin[a]) / grid.spacing(a);
    int i = static_cast<int>(std::floor(rel));
    if (i < 0 || i >= grid.count(a)) {
      if (rel >= -1e-9 && i < 0) {
        i = 0;
      } else if (rel <= grid.count(a) + 1e-9 && i >= grid.count(a)) {
        i = grid.count(a) - 1;
      } else {
        throw Error("locate: point outside domain on axis " +
                    std::to_string(a));
      }
    }
    idx[a] = i;
  }
  return idx;
}

std::array<int, 3> locate(const CartesianGrid& grid, const Vec3& point,
                          const Vec3& dir) {
  double eps = geom_eps(grid);
  Vec3 nudged = {point[0] + eps * dir[0], point[1] + eps * dir[1],
                 point[2] + eps * dir[2]};
  return locate(grid, nudged);
}

FaceCrossing face_distances(const CartesianGrid& grid, const Vec3& pos,
                            const Vec3& dir, int i, int j, int k) {
  FaceCrossing fc;
  std::array<int, 3> idx = {i, j, k};
  for (int a = 0; a < 3; ++a) {
    if (dir[a] == 0.0) {
      fc.df[a] = kInf;
      continue;
    }
    int face_idx = idx[a] + (dir[a] > 0.0 ? 1 : 0);
    double face = grid.origin[a] + face_idx * grid.spacing(a);
    fc.df[a] = (face - pos[a]) / dir[a];
  }
  fc.ds = fc.df[0];
  fc.axis = 0;
  for (int a = 1; a < 3; ++a) {
    if (fc.df[a] < fc.ds) {
      fc.ds = fc.df[a];
      fc.axis = a;
    }
  }
  fc.ds = std::max(fc.ds, 0.0);
  return fc;
}

}  // namespace ermc
