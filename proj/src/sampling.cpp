#include "ermc/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "ermc/constants.hpp"
#include "ermc/errors.hpp"

namespace ermc {

namespace {

inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

}  // namespace

double uniform(const RandomKey& key) {
  std::uint64_t h = mix64(key.seed + 0x9e3779b97f4a7c15ULL);
  h = mix64(h ^ key.cell_id);
  h = mix64(h ^ ((static_cast<std::uint64_t>(key.ray_id) << 32) | key.draw_id));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

Direction sample_direction(double r_theta, double r_phi) {
  Direction d;
  double cos_theta = 1.0 - 2.0 * r_theta;
  d.theta = std::acos(cos_theta);
  d.phi = 2.0 * kPi * r_phi;
  double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
  d.unit = {sin_theta * std::cos(d.phi), sin_theta * std::sin(d.phi),
            cos_theta};
  return d;
}

std::pair<int, int> sample_band(double r_n, double r_g,
                                const SamplingCdfs& cdfs) {
  auto nit = std::upper_bound(cdfs.band_cdf.begin(), cdfs.band_cdf.end(), r_n);
  int n = static_cast<int>(nit - cdfs.band_cdf.begin());
  if (n >= static_cast<int>(cdfs.band_cdf.size()))
    n = static_cast<int>(cdfs.band_cdf.size()) - 1;
  const auto& qc = cdfs.quad_cdf[n];
  auto git = std::upper_bound(qc.begin(), qc.end(), r_g);
  int g = static_cast<int>(git - qc.begin());
  if (g >= static_cast<int>(qc.size())) g = static_cast<int>(qc.size()) - 1;
  return {n, g};
}

RayState init_ray(const CellIndex& cell, std::uint32_t ray_id,
                  std::uint64_t seed, const SpectralModel& model,
                  const SamplingCdfs& cdfs, const GridHierarchy& hierarchy,
                  bool volume_sampling) {
  const CartesianGrid& grid = hierarchy.grids[0];
  RayState ray;
  ray.cell = cell;
  ray.cell.level = 0;
  ray.seed = seed;
  ray.cell_id = static_cast<std::uint64_t>(grid.linear(cell.i, cell.j, cell.k));
  ray.ray_id = ray_id;

  auto draw = [&ray]() {
    return uniform({ray.seed, ray.cell_id, ray.ray_id, ray.next_draw++});
  };

  double r_theta = draw();
  double r_phi = draw();
  double r_n = draw();
  double r_g = draw();
  ray.dir = sample_direction(r_theta, r_phi).unit;
  auto [n, g] = sample_band(r_n, r_g, cdfs);
  ray.band = n;
  ray.quad = g;
  ray.transmissivity = 1.0;

  ray.pos = grid.cell_center(cell.i, cell.j, cell.k);
  if (volume_sampling) {
    for (int a = 0; a < 3; ++a)
      ray.pos[a] += (draw() - 0.5) * grid.spacing(a);
  }

  double t_cell = hierarchy.temperature(ray.cell);
  ray.ib_source = model.interp_ib(n, t_cell);
  double k_max = model.interp_k(n, g, cdfs.t_max);
  double ib_max = model.interp_ib(n, cdfs.t_max);
  if (k_max <= 0.0 || ib_max <= 0.0)
    throw Error("init_ray: sampled a transparent point at T_max; spectral "
                "tables are inconsistent with the sampling CDFs");
  ray.prefactor = model.interp_k(n, g, t_cell) * ray.ib_source / (k_max * ib_max);
  return ray;
}

}  // namespace ermc
