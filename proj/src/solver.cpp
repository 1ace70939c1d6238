#include "ermc/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <thread>

#include "ermc/constants.hpp"
#include "ermc/errors.hpp"
#include "ermc/sampling.hpp"

namespace ermc {

void SolveConfig::validate() const {
  if (rays_per_cell < 1) throw Error("SolveConfig: rays_per_cell must be >= 1");
  if (!(tolerance > 0.0 && tolerance < 1.0))
    throw Error("SolveConfig: tolerance must be in (0,1)");
  if (n_levels < 1) throw Error("SolveConfig: n_levels must be >= 1");
  if (steps_per_level < 1)
    throw Error("SolveConfig: steps_per_level must be >= 1");
  if (max_steps < 1) throw Error("SolveConfig: max_steps must be >= 1");
  if (workers < 0) throw Error("SolveConfig: workers must be >= 0");
}

namespace {

double compute_t_max(const TemperatureField& field,
                     const BoundarySpec& boundary) {
  // Sampling must cover the hottest emitter, walls included.
  double t_max = field.max_value();
  for (int a = 0; a < 3; ++a) {
    if (boundary.periodic(a)) continue;
    t_max = std::max({t_max, boundary.lo[a].temperature,
                      boundary.hi[a].temperature});
  }
  return t_max;
}

void validate_inputs(const CartesianGrid& grid, const TemperatureField& field,
                     const BoundarySpec& boundary, const SpectralModel& model,
                     const SolveConfig& config) {
  config.validate();
  grid.validate();
  field.validate();
  boundary.validate();
  if (field.grid.cell_count() != grid.cell_count())
    throw Error("solve: temperature field does not match the grid");
  double lo = model.t_min(), hi = model.t_max_table();
  if (field.min_value() < lo || field.max_value() > hi)
    throw Error("solve: field temperatures outside spectral table range");
  for (int a = 0; a < 3; ++a) {
    if (boundary.periodic(a)) continue;
    for (const Wall* w : {&boundary.lo[a], &boundary.hi[a]})
      if (w->temperature != 0.0 &&
          (w->temperature < lo || w->temperature > hi))
        throw Error("solve: wall temperature outside spectral table range");
  }
}

}  // namespace

std::vector<PlanEntry> presample_and_sort(std::uint64_t cell_id,
                                          std::uint32_t n_rays,
                                          std::uint64_t seed,
                                          const SamplingCdfs& cdfs,
                                          const SpectralModel& model) {
  std::vector<PlanEntry> plan(n_rays);
  for (std::uint32_t r = 0; r < n_rays; ++r) {
    // Same keys (draw ids 2 and 3) the unsorted path consumes in init_ray.
    double r_n = uniform({seed, cell_id, r, 2});
    double r_g = uniform({seed, cell_id, r, 3});
    auto [n, g] = sample_band(r_n, r_g, cdfs);
    plan[r] = {r, n, g, model.interp_k(n, g, cdfs.t_max)};
  }
  std::stable_sort(plan.begin(), plan.end(),
                   [](const PlanEntry& a, const PlanEntry& b) {
                     return a.k_sort < b.k_sort;
                   });
  return plan;
}

SolutionField solve(const CartesianGrid& grid, const TemperatureField& field,
                    const BoundarySpec& boundary, const SpectralModel& model,
                    const SolveConfig& config) {
  validate_inputs(grid, field, boundary, model, config);
  auto t_start = std::chrono::steady_clock::now();

  double t_max = compute_t_max(field, boundary);
  SamplingCdfs cdfs = build_cdfs(model, t_max);
  double kp_max = model.planck_mean(t_max);
  int n_rays = config.rays_per_cell;
  double q_emission = 4.0 * kp_max * kSigma * t_max * t_max * t_max * t_max /
                      n_rays;
  GridHierarchy hierarchy =
      build_hierarchy(grid, field.values, config.n_levels,
                      config.coarsen_ratio, config.steps_per_level);
  TraceOptions options{config.tolerance, config.max_steps,
                       config.specular_walls};

  SolutionField out;
  out.grid = grid;
  std::int64_t n_cells = grid.cell_count();
  out.q_r.assign(n_cells, 0.0);
  out.std_dev.assign(n_cells, 0.0);

  int n_workers = config.workers > 0
                      ? config.workers
                      : std::max(1u, std::thread::hardware_concurrency());
  n_workers = static_cast<int>(std::min<std::int64_t>(n_workers, n_cells));
  std::vector<std::vector<std::int64_t>> worker_steps(
      n_workers, std::vector<std::int64_t>(config.n_levels, 0));

  // Cells are sharded in contiguous blocks; accumulation is cell-private,
  // so scheduling affects load balance only, never results.
  auto run_range = [&](int worker, std::int64_t lo, std::int64_t hi) {
    std::vector<double> per_ray(n_rays);
    auto& level_steps = worker_steps[worker];
    for (std::int64_t c = lo; c < hi; ++c) {
      CellIndex cell;
      cell.i = static_cast<int>(c / (static_cast<std::int64_t>(grid.ny) * grid.nz));
      cell.j = static_cast<int>((c / grid.nz) % grid.ny);
      cell.k = static_cast<int>(c % grid.nz);

      auto trace_one = [&](std::uint32_t ray_id) {
        RayState ray = init_ray(cell, ray_id, config.seed, model, cdfs,
                                hierarchy, config.volume_sampling);
        MarchResult res =
            march(ray, hierarchy, model, boundary, q_emission, options);
        per_ray[ray_id] = res.q_contribution;
        for (int l = 0; l < config.n_levels; ++l)
          level_steps[l] += res.steps_per_level[l];
      };
      if (config.sorting) {
        auto plan = presample_and_sort(static_cast<std::uint64_t>(c), n_rays,
                                       config.seed, cdfs, model);
        for (const PlanEntry& e : plan) trace_one(e.ray_id);
      } else {
        for (std::uint32_t r = 0; r < static_cast<std::uint32_t>(n_rays); ++r)
          trace_one(r);
      }

      // Reduce in ray_id order regardless of marching order.
      double sum = 0.0, mean = 0.0, m2 = 0.0;
      for (int r = 0; r < n_rays; ++r) {
        double x = per_ray[r];
        sum += x;
        double delta = x - mean;
        mean += delta / (r + 1);
        m2 += delta * (x - mean);
      }
      // q_r is a sum of n independent ray contributions, so its standard
      // error is sqrt(n) times the per-ray sample deviation.
      out.q_r[c] = sum;
      out.std_dev[c] =
          n_rays > 1 ? std::sqrt(m2 * n_rays / (n_rays - 1.0)) : 0.0;
    }
  };

  if (n_workers == 1) {
    run_range(0, 0, n_cells);
  } else {
    std::vector<std::thread> threads;
    std::int64_t chunk = (n_cells + n_workers - 1) / n_workers;
    for (int w = 0; w < n_workers; ++w) {
      std::int64_t lo = w * chunk;
      std::int64_t hi = std::min(n_cells, lo + chunk);
      threads.emplace_back(run_range, w, lo, hi);
    }
    for (auto& t : threads) t.join();
  }

  out.steps_per_level.assign(config.n_levels, 0);
  for (const auto& ws : worker_steps)
    for (int l = 0; l < config.n_levels; ++l) out.steps_per_level[l] += ws[l];
  for (std::int64_t s : out.steps_per_level) out.total_steps += s;
  out.wall_time = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t_start)
                      .count();
  return out;
}

StepCensus step_census(const SolutionField& solution,
                       const CartesianGrid& grid,
                       const TemperatureField& field,
                       const BoundarySpec& boundary,
                       const SpectralModel& model, const SolveConfig& config) {
  StepCensus census;
  census.steps_per_level = solution.steps_per_level;
  census.total_steps = solution.total_steps;
  if (config.n_levels == 1) {
    census.saved_ratio = 1.0;
    return census;
  }
  SolveConfig single = config;
  single.n_levels = 1;
  SolutionField base = solve(grid, field, boundary, model, single);
  census.saved_ratio =
      static_cast<double>(base.total_steps) / solution.total_steps;
  return census;
}

}  // namespace ermc
