#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace ermc {

// One narrow band [nu_lo, nu_hi) in wavenumber space [cm^-1].
struct NarrowBand {
  double nu_lo = 0.0;
  double nu_hi = 0.0;
  double nu_center = 0.0;  // representative wavenumber for the band blackbody

  double delta_nu() const { return nu_hi - nu_lo; }
};

// Quadrature abscissae/weights on (0,1); weights sum to one.
struct QuadratureSet {
  std::vector<double> g_points;
  std::vector<double> weights;

  int count() const { return static_cast<int>(g_points.size()); }

  // Gauss-Legendre rule mapped from (-1,1) to (0,1).
  static QuadratureSet gauss_legendre(int n);
  // Single midpoint abscissa with unit weight.
  static QuadratureSet single_point();
};

// High-resolution absorption spectrum kappa_nu(T) on a wavenumber grid.
// kappa[t][s] is the coefficient at temperature node t, spectral sample s.
struct LineSpectrum {
  std::vector<double> nu_grid;    // [cm^-1], strictly increasing
  std::vector<double> temps;      // [K], ascending
  std::vector<std::vector<double>> kappa;  // [m^-1]

  void validate() const;
};

struct SamplingCdfs {
  std::vector<double> band_cdf;               // cumulative f_n at t_max
  std::vector<std::vector<double>> quad_cdf;  // per band, cumulative f_g
  double t_max = 0.0;
};

// Narrow-band correlated-k model with temperature-tabulated k, band
// blackbody and Planck-mean coefficients. Immutable after construction.
class SpectralModel {
 public:
  SpectralModel() = default;
  SpectralModel(std::vector<NarrowBand> bands, QuadratureSet quadrature,
                std::vector<double> temp_grid, std::vector<double> k_table,
                std::vector<double> ib_table);

  int n_bands() const { return static_cast<int>(bands_.size()); }
  int n_quad() const { return quadrature_.count(); }
  int n_temps() const { return static_cast<int>(temp_grid_.size()); }

  const std::vector<NarrowBand>& bands() const { return bands_; }
  const QuadratureSet& quadrature() const { return quadrature_; }
  const std::vector<double>& temp_grid() const { return temp_grid_; }
  const std::vector<double>& k_table() const { return k_table_; }
  const std::vector<double>& ib_table() const { return ib_table_; }
  const std::vector<double>& kp_table() const { return kp_table_; }

  double t_min() const { return temp_grid_.front(); }
  double t_max_table() const { return temp_grid_.back(); }

  // Piecewise-linear interpolation in T. T outside the table range is an
  // error, never a clamp.
  double interp_k(int band, int g, double temperature) const;
  double interp_ib(int band, double temperature) const;
  // One temperature lookup for both tables (march inner loop).
  void interp_pair(int band, int g, double temperature, double* k,
                   double* ib) const;

  // Planck mean absorption coefficient from the defining band sum.
  double planck_mean(double temperature) const;

  double k_at_node(int band, int g, int t) const {
    return k_table_[(static_cast<size_t>(band) * n_quad() + g) * n_temps() + t];
  }
  double ib_at_node(int band, int t) const {
    return ib_table_[static_cast<size_t>(band) * n_temps() + t];
  }

 private:
  std::vector<NarrowBand> bands_;
  QuadratureSet quadrature_;
  std::vector<double> temp_grid_;
  std::vector<double> k_table_;   // [band][g][T]
  std::vector<double> ib_table_;  // [band][T]
  std::vector<double> kp_table_;  // [T]

  struct TempLookup {
    int idx;
    double frac;
  };
  TempLookup lookup(double temperature) const;
  bool uniform_temps_ = false;
  double t0_ = 0.0;
  double dt_ = 1.0;
};

// Planck spectral blackbody intensity per unit wavenumber
// [W m^-2 sr^-1 / cm^-1]. nu in [cm^-1], T in [K]; both must be positive.
double planck_intensity(double nu, double temperature);

// Builds the correlated-k model: per (band, temperature node) the spectral
// samples are sorted ascending into g(k) and inverted at the quadrature
// abscissae.
SpectralModel build_k_distribution(const LineSpectrum& spectrum,
                                   const std::vector<NarrowBand>& bands,
                                   const QuadratureSet& quadrature);

// Constant-kappa model over the given band partition; usable by every
// downstream operation unchanged.
SpectralModel grey_model(double kappa, const std::vector<NarrowBand>& bands,
                         const std::vector<double>& temp_grid,
                         const QuadratureSet& quadrature = QuadratureSet::single_point());

// Band/quadrature sampling CDFs evaluated at t_max.
SamplingCdfs build_cdfs(const SpectralModel& model, double t_max);

// Uniform partition of [nu_lo, nu_hi] into n bands (arithmetic centers).
std::vector<NarrowBand> make_bands(double nu_lo, double nu_hi, int n);

// Log-spaced partition wide enough to carry the blackbody emission of every
// temperature in [t_lo, t_hi] (geometric centers).
std::vector<NarrowBand> make_planck_bands(double t_lo, double t_hi, int n);

// Ascending uniform temperature nodes, t_lo..t_hi inclusive.
std::vector<double> make_temp_grid(double t_lo, double t_hi, double spacing);

// Synthetic regularly spaced Lorentzian line spectrum; stands in for a real
// line-list database. Line strengths scale as (t_ref/T)^1.5 so the spectrum
// stays rank-correlated across temperature.
struct ElsasserParams {
  double nu_lo = 200.0;       // [cm^-1]
  double nu_hi = 2200.0;      // [cm^-1]
  double line_spacing = 20.0; // [cm^-1]
  double strength = 30.0;     // integrated line strength [m^-1 cm^-1]
  double half_width = 1.0;    // Lorentz half-width [cm^-1]
  double continuum = 0.01;    // background [m^-1]
  double t_ref = 1000.0;      // [K]
  double resolution = 0.25;   // sample spacing [cm^-1]
};
LineSpectrum elsasser_spectrum(const ElsasserParams& params,
                               const std::vector<double>& temps);

}  // namespace ermc
