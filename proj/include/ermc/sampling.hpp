#pragma once

#include <cstdint>
#include <utility>

#include "ermc/geometry.hpp"
#include "ermc/spectral.hpp"

namespace ermc {

// Key of one uniform draw. The generator is a pure function of the key, so
// any evaluation order (and any worker count) reproduces the same stream.
struct RandomKey {
  std::uint64_t seed = 0;
  std::uint64_t cell_id = 0;
  std::uint32_t ray_id = 0;
  std::uint32_t draw_id = 0;
};

double uniform(const RandomKey& key);

struct Direction {
  double theta = 0.0;
  double phi = 0.0;
  Vec3 unit = {0.0, 0.0, 1.0};
};

// Isotropic inversion: theta = arccos(1 - 2 R_theta), phi = 2 pi R_phi.
// z is the polar axis.
Direction sample_direction(double r_theta, double r_phi);

// Smallest indices with CDF value strictly above the draw.
std::pair<int, int> sample_band(double r_n, double r_g,
                                const SamplingCdfs& cdfs);

struct RayState {
  Vec3 pos = {0.0, 0.0, 0.0};
  Vec3 dir = {0.0, 0.0, 1.0};
  CellIndex cell;
  double transmissivity = 1.0;
  int band = 0;
  int quad = 0;
  double prefactor = 1.0;    // R_I emission-temperature correction
  double ib_source = 0.0;    // band blackbody of the source cell
  int reflections = 0;
  // Random stream bookkeeping: next_draw advances with every consumed draw.
  std::uint64_t seed = 0;
  std::uint64_t cell_id = 0;
  std::uint32_t ray_id = 0;
  std::uint32_t next_draw = 0;
};

// Draw order: theta, phi, band, quad (draw ids 0-3), then three position
// draws when volume_sampling is set. The default start is the cell center.
RayState init_ray(const CellIndex& cell, std::uint32_t ray_id,
                  std::uint64_t seed, const SpectralModel& model,
                  const SamplingCdfs& cdfs, const GridHierarchy& hierarchy,
                  bool volume_sampling = false);

}  // namespace ermc
