#pragma once

#include <cstdint>
#include <vector>

#include "ermc/geometry.hpp"
#include "ermc/sampling.hpp"
#include "ermc/spectral.hpp"

namespace ermc {

enum class Termination { tolerance, wall_absorbed, step_cap };

struct MarchResult {
  double q_contribution = 0.0;  // source-cell radiative power increment
  std::int64_t steps = 0;
  std::vector<std::int64_t> steps_per_level;
  Termination terminated_by = Termination::tolerance;
  int reflections = 0;
  // Emitted-weight bookkeeping: absorbed + wall exchanges + residual == 1.
  double weight_absorbed = 0.0;
  double weight_walls = 0.0;
  double weight_residual = 0.0;
};

struct TraceOptions {
  double tolerance = 1e-4;
  std::int64_t max_steps = 100000;
  bool specular_walls = false;
};

// Marches one ray through the hierarchy accumulating the reciprocal exchange
// of its source cell. q_emission is the per-ray emission weight
// 4 kappa_p(T_max) sigma T_max^4 / N_rays. The sign convention is that of a
// heat source: negative where the cell loses energy by radiation.
MarchResult march(RayState ray, const GridHierarchy& hierarchy,
                  const SpectralModel& model, const BoundarySpec& boundary,
                  double q_emission, const TraceOptions& options);

// Absorbed fraction over one segment, 1 - exp(-kappa ds).
double absorptivity(double kappa, double ds);

}  // namespace ermc
