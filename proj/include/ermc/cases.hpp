#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ermc/geometry.hpp"
#include "ermc/oracles.hpp"
#include "ermc/solver.hpp"
#include "ermc/spectral.hpp"

namespace ermc {

// A built-in verification case: grid + field + boundary + spectral model,
// with an oracle where a deterministic reference exists.
struct VerifyCase {
  std::string name;
  std::string description;
  CartesianGrid grid;
  TemperatureField field;
  BoundarySpec boundary;
  SpectralModel model;
  // Relative tolerance on the peak plus a sigma multiplier; pass when either
  // bound holds at every sample point.
  double peak_tol = 0.02;
  double sigma_mult = 3.0;

  // 1D cases: oracle sampled at the x cell centers, MC averaged over the
  // periodic directions. 3D cases: centerline y = z = 0.5.
  std::optional<SlabCase> slab;
  std::optional<BoxCase> box;
  std::optional<LineSpectrum> lbl_spectrum;  // line-by-line reference
  bool is_3d = false;
};

// Case library: grey slab/box benchmarks with deterministic references plus
// synthetic-spectrum narrow-band cases. grid_n/rays override the built-in
// defaults when positive.
std::vector<std::string> case_names();
VerifyCase make_case(const std::string& name, int grid_n = 0);

// One comparison sample: MC estimate vs deterministic (or line-by-line)
// reference at position x along the profile direction.
struct CasePoint {
  double x = 0.0;
  double q_mc = 0.0;
  double sigma = 0.0;  // combined standard error
  double q_ref = 0.0;
};

struct CaseReport {
  std::string name;
  std::vector<CasePoint> points;
  double peak = 0.0;         // max |q_ref| over the samples
  double max_abs_err = 0.0;  // max |q_mc - q_ref|
  bool passed = true;
  SolutionField solution;
};

// Solves the case and compares against its reference. 1D cases average the
// MC field over the periodic directions; 3D cases sample the centerline
// y = z = 0.5. A point passes when |q_mc - q_ref| is within
// max(peak_tol * peak, sigma_mult * sigma).
CaseReport run_case(const VerifyCase& vc, const SolveConfig& config,
                    int oracle_refine = 1);

// Temperature profiles used by the library.
double profile_lin1(double x);    // 500 + 1000 x
double profile_lin2(double x);    // 295 + 10 x
double profile_parab(double x);   // 500 - 2000 x^2 + 2000 x
double profile_sin(const Vec3& p);      // (sin pix sin piy sin piz pi/sigma)^0.25
double profile_3dimens(const Vec3& p);  // 500 - 2000 (xyz)^2 + 2000 xyz

// Slab-style grid: x walls, y/z periodic, unit extents.
CartesianGrid slab_grid(int n);
TemperatureField sample_profile_x(const CartesianGrid& grid,
                                  const std::function<double(double)>& profile);
TemperatureField sample_profile_3d(const CartesianGrid& grid,
                                   const std::function<double(const Vec3&)>& profile);

}  // namespace ermc
