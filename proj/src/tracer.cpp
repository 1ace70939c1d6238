#include "ermc/tracer.hpp"

#include <cmath>
#include <string>

#include "ermc/constants.hpp"
#include "ermc/errors.hpp"

namespace ermc {

double absorptivity(double kappa, double ds) {
  return -std::expm1(-kappa * ds);
}

namespace {

struct Dda {
  std::array<double, 3> t_next;   // ray distance to the next face per axis
  std::array<double, 3> t_delta;  // ray distance across one cell per axis
  std::array<int, 3> step;

  void setup(const CartesianGrid& grid, const Vec3& pos, const Vec3& dir,
             const std::array<int, 3>& idx) {
    for (int a = 0; a < 3; ++a) {
      if (dir[a] == 0.0) {
        t_next[a] = kInf;
        t_delta[a] = kInf;
        step[a] = 0;
        continue;
      }
      step[a] = dir[a] > 0.0 ? 1 : -1;
      int face_idx = idx[a] + (dir[a] > 0.0 ? 1 : 0);
      double face = grid.origin[a] + face_idx * grid.spacing(a);
      t_next[a] = (face - pos[a]) / dir[a];
      t_delta[a] = grid.spacing(a) / std::abs(dir[a]);
    }
  }
};

// Diffuse (cosine-weighted) hemisphere direction about the inward normal of
// a wall face on `axis`; `inward` is +1 at the low face, -1 at the high face.
Vec3 diffuse_reflection(double r1, double r2, int axis, int inward) {
  double sin_t = std::sqrt(r1);
  double cos_t = std::sqrt(1.0 - r1);
  double phi = 2.0 * kPi * r2;
  int t1 = (axis + 1) % 3;
  int t2 = (axis + 2) % 3;
  Vec3 dir = {0.0, 0.0, 0.0};
  dir[axis] = inward * cos_t;
  dir[t1] = sin_t * std::cos(phi);
  dir[t2] = sin_t * std::sin(phi);
  return dir;
}

}  // namespace

MarchResult march(RayState ray, const GridHierarchy& hierarchy,
                  const SpectralModel& model, const BoundarySpec& boundary,
                  double q_emission, const TraceOptions& options) {
  const int n_levels = hierarchy.n_levels();
  MarchResult result;
  result.steps_per_level.assign(n_levels, 0);

  const double ib1 = ray.ib_source;
  const double prefactor = ray.prefactor;
  double q = 0.0;
  double last_ib2 = ib1;  // degenerate termination dumps zero
  double tau = ray.transmissivity;

  int level = ray.cell.level;
  std::array<int, 3> idx = {ray.cell.i, ray.cell.j, ray.cell.k};
  Vec3 pos = ray.pos;
  Vec3 dir = ray.dir;
  const CartesianGrid* grid = &hierarchy.grids[level];
  const std::vector<double>* field = &hierarchy.fields[level];
  double eps = geom_eps(*grid);
  int steps_at_level = 0;
  Dda dda;
  dda.setup(*grid, pos, dir, idx);

  Termination term = Termination::tolerance;
  while (true) {
    if (tau <= options.tolerance) {
      term = Termination::tolerance;
      break;
    }
    if (result.steps >= options.max_steps) {
      term = Termination::step_cap;
      break;
    }
    int cap = hierarchy.step_caps[level];
    if (cap >= 0 && steps_at_level >= cap && level + 1 < n_levels) {
      // Demote: same position, direction and transmissivity, coarser cells.
      ++level;
      grid = &hierarchy.grids[level];
      field = &hierarchy.fields[level];
      eps = geom_eps(*grid);
      idx = locate(*grid, pos, dir);
      steps_at_level = 0;
      dda.setup(*grid, pos, dir, idx);
    }

    int axis = 0;
    double ds = dda.t_next[0];
    if (dda.t_next[1] < ds) {
      ds = dda.t_next[1];
      axis = 1;
    }
    if (dda.t_next[2] < ds) {
      ds = dda.t_next[2];
      axis = 2;
    }
    if (ds < 0.0) ds = 0.0;

    double t_cell = (*field)[grid->linear(idx[0], idx[1], idx[2])];
    double kappa, ib2;
    model.interp_pair(ray.band, ray.quad, t_cell, &kappa, &ib2);
    double alpha = -std::expm1(-kappa * ds);
    last_ib2 = ib2;
    q += q_emission * tau * alpha * ((ib2 - ib1) / ib1) * prefactor;
    result.weight_absorbed += tau * alpha;
    tau *= 1.0 - alpha;

    double advance = ds + eps;
    pos[0] += advance * dir[0];
    pos[1] += advance * dir[1];
    pos[2] += advance * dir[2];
    for (int a = 0; a < 3; ++a) dda.t_next[a] -= advance;
    dda.t_next[axis] += dda.t_delta[axis];
    ++result.steps;
    ++result.steps_per_level[level];
    ++steps_at_level;

    if (!std::isfinite(q) || !std::isfinite(tau))
      throw Error("march: non-finite value at cell " +
                  std::to_string(ray.cell_id) + " ray " +
                  std::to_string(ray.ray_id) + " step " +
                  std::to_string(result.steps));

    idx[axis] += dda.step[axis];
    if (idx[axis] >= 0 && idx[axis] < grid->count(axis)) continue;

    if (boundary.periodic(axis)) {
      double extent = grid->extent(axis);
      if (idx[axis] < 0) {
        idx[axis] = grid->count(axis) - 1;
        pos[axis] += extent;
      } else {
        idx[axis] = 0;
        pos[axis] -= extent;
      }
      continue;
    }

    // Wall exchange, then absorption or reflection.
    bool at_hi = dda.step[axis] > 0;
    const Wall& wall = at_hi ? boundary.hi[axis] : boundary.lo[axis];
    double ib_w = wall.temperature > 0.0
                      ? model.interp_ib(ray.band, wall.temperature)
                      : 0.0;
    q += q_emission * tau * wall.emissivity * ((ib_w - ib1) / ib1) * prefactor;
    result.weight_walls += tau * wall.emissivity;
    tau *= 1.0 - wall.emissivity;
    if (tau <= options.tolerance) {
      term = Termination::wall_absorbed;
      break;
    }

    ++ray.reflections;
    idx[axis] -= dda.step[axis];  // back into the boundary cell
    double face = grid->origin[axis] + (at_hi ? grid->extent(axis) : 0.0);
    pos[axis] = face;
    int inward = at_hi ? -1 : 1;
    if (options.specular_walls) {
      dir[axis] = -dir[axis];
    } else {
      double r1 = uniform({ray.seed, ray.cell_id, ray.ray_id, ray.next_draw++});
      double r2 = uniform({ray.seed, ray.cell_id, ray.ray_id, ray.next_draw++});
      dir = diffuse_reflection(r1, r2, axis, inward);
    }
    pos[0] += eps * dir[0];
    pos[1] += eps * dir[1];
    pos[2] += eps * dir[2];
    dda.setup(*grid, pos, dir, idx);
  }

  // Residual dump into the source cell, using the last in-loop Ib2.
  q += q_emission * tau * ((last_ib2 - ib1) / ib1) * prefactor;
  result.weight_residual = tau;
  result.q_contribution = q;
  result.terminated_by = term;
  result.reflections = ray.reflections;
  return result;
}

}  // namespace ermc
