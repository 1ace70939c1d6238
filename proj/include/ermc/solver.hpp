#pragma once

#include <cstdint>
#include <vector>

#include "ermc/geometry.hpp"
#include "ermc/spectral.hpp"
#include "ermc/tracer.hpp"

namespace ermc {

struct SolveConfig {
  int rays_per_cell = 2000;
  double tolerance = 1e-4;
  std::uint64_t seed = 0;
  bool sorting = false;
  int n_levels = 1;
  int steps_per_level = 5;
  int coarsen_ratio = 2;
  std::int64_t max_steps = 100000;
  bool volume_sampling = false;
  bool specular_walls = false;
  int workers = 0;  // 0 = hardware concurrency

  void validate() const;
};

struct SolutionField {
  CartesianGrid grid;
  std::vector<double> q_r;      // per-cell radiative power [W/m^3]
  std::vector<double> std_dev;  // standard error of q_r
  std::vector<std::int64_t> steps_per_level;
  std::int64_t total_steps = 0;
  double wall_time = 0.0;  // [s]
};

// One presampled ray: marching in ascending-kappa order leaves results
// bitwise unchanged because draws are keyed, not sequential.
struct PlanEntry {
  std::uint32_t ray_id = 0;
  int band = 0;
  int quad = 0;
  double k_sort = 0.0;
};

std::vector<PlanEntry> presample_and_sort(std::uint64_t cell_id,
                                          std::uint32_t n_rays,
                                          std::uint64_t seed,
                                          const SamplingCdfs& cdfs,
                                          const SpectralModel& model);

// Full ERMC solve: embarrassingly parallel over cells, each worker owning a
// disjoint contiguous cell range. Output is a pure function of
// (inputs, config, seed), independent of worker count and sorting.
SolutionField solve(const CartesianGrid& grid, const TemperatureField& field,
                    const BoundarySpec& boundary, const SpectralModel& model,
                    const SolveConfig& config);

struct StepCensus {
  std::vector<std::int64_t> steps_per_level;
  std::int64_t total_steps = 0;
  double saved_ratio = 1.0;  // steps(single level) / steps(n levels)
};

// Paired-run census: reruns the solve single-level to measure step savings.
StepCensus step_census(const SolutionField& solution,
                       const CartesianGrid& grid,
                       const TemperatureField& field,
                       const BoundarySpec& boundary,
                       const SpectralModel& model, const SolveConfig& config);

}  // namespace ermc
