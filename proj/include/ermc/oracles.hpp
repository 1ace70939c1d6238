#pragma once

#include <functional>
#include <vector>

#include "ermc/geometry.hpp"
#include "ermc/solver.hpp"
#include "ermc/spectral.hpp"

namespace ermc {

// Exponential integrals E1, E2, E3 for x >= 0.
double expint_e1(double x);
double expint_e2(double x);
double expint_e3(double x);

// 1D plane-parallel slab with a grey coefficient and diffuse walls.
struct SlabCase {
  double length = 1.0;                      // [m]
  std::function<double(double)> t_profile;  // T(x) [K]
  double kappa = 1.0;                       // [m^-1]
  Wall wall_lo;                             // x = 0
  Wall wall_hi;                             // x = L
};

// Deterministic radiative power via exponential-integral kernels,
// Q^R(x) = kappa (G(x) - 4 sigma T^4(x)), with a reflection series for
// emissivities below one. Quadrature is refined until successive
// refinements agree to 0.01%.
// refine doubles the quadrature resolution (self-convergence checks).
std::vector<double> slab_oracle(const SlabCase& slab,
                                const std::vector<double>& x_points,
                                int refine = 1);

// Unit-cube enclosure with a grey coefficient and black walls.
struct BoxCase {
  std::function<double(const Vec3&)> t_profile;
  double kappa = 1.0;
  double wall_temperature = 0.0;
};

// Brute-force incident-radiation integral (volume kernel e^{-kr}/(pi r^2)
// plus the six wall faces), adaptively subdivided near the singularity.
std::vector<double> box_oracle(const BoxCase& box,
                               const std::vector<Vec3>& points,
                               int refine = 1);

// Runs the ERMC solver with one band per spectral sample and a single
// quadrature point: the narrow-band machinery degenerates to line-by-line.
SolutionField lbl_reference(const CartesianGrid& grid,
                            const TemperatureField& field,
                            const BoundarySpec& boundary,
                            const LineSpectrum& spectrum,
                            const SolveConfig& config,
                            std::size_t memory_cap_bytes = std::size_t(2) << 30);

// The line-by-line degenerate model itself (exposed for tests).
SpectralModel lbl_model(const LineSpectrum& spectrum,
                        std::size_t memory_cap_bytes = std::size_t(2) << 30);

}  // namespace ermc
