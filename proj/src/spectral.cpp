#include "ermc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ermc/constants.hpp"
#include "ermc/errors.hpp"

namespace ermc {

QuadratureSet QuadratureSet::gauss_legendre(int n) {
  if (n < 1) throw Error("gauss_legendre: need at least one point");
  QuadratureSet q;
  q.g_points.resize(n);
  q.weights.resize(n);
  // Newton iteration on Legendre P_n, nodes on (-1,1) mapped to (0,1).
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    q.g_points[n - 1 - i] = 0.5 * (x + 1.0);
    q.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return q;
}

QuadratureSet QuadratureSet::single_point() {
  QuadratureSet q;
  q.g_points = {0.5};
  q.weights = {1.0};
  return q;
}

void LineSpectrum::validate() const {
  if (nu_grid.size() < 2) throw Error("LineSpectrum: need at least 2 samples");
  for (size_t s = 1; s < nu_grid.size(); ++s)
    if (nu_grid[s] <= nu_grid[s - 1])
      throw Error("LineSpectrum: nu_grid must be strictly increasing");
  if (temps.empty() || kappa.size() != temps.size())
    throw Error("LineSpectrum: one kappa row per temperature node");
  for (const auto& row : kappa) {
    if (row.size() != nu_grid.size())
      throw Error("LineSpectrum: kappa row size mismatch");
    for (double v : row)
      if (v < 0.0 || !std::isfinite(v))
        throw Error("LineSpectrum: kappa must be finite and non-negative");
  }
}

double planck_intensity(double nu, double temperature) {
  if (nu <= 0.0) throw Error("planck_intensity: wavenumber must be positive");
  if (temperature <= 0.0)
    throw Error("planck_intensity: temperature must be positive");
  double nu_m = nu * 100.0;  // cm^-1 -> m^-1
  double x = kPlanckC2 * nu_m / temperature;
  // result per cm^-1
  return 100.0 * kPlanckC1 * nu_m * nu_m * nu_m / std::expm1(x);
}

namespace {

// Band blackbody with the T -> 0 limit folded in (cold-wall tables).
double band_ib(const NarrowBand& band, double temperature) {
  if (temperature <= 0.0) return 0.0;
  return planck_intensity(band.nu_center, temperature);
}

void validate_bands(const std::vector<NarrowBand>& bands) {
  if (bands.empty()) throw Error("SpectralModel: no bands");
  for (size_t n = 0; n < bands.size(); ++n) {
    if (bands[n].nu_hi <= bands[n].nu_lo)
      throw Error("SpectralModel: band " + std::to_string(n) +
                  " has non-positive width");
    if (n > 0 && bands[n].nu_lo < bands[n - 1].nu_hi - 1e-9)
      throw Error("SpectralModel: bands overlap at index " + std::to_string(n));
  }
}

}  // namespace

SpectralModel::SpectralModel(std::vector<NarrowBand> bands,
                             QuadratureSet quadrature,
                             std::vector<double> temp_grid,
                             std::vector<double> k_table,
                             std::vector<double> ib_table)
    : bands_(std::move(bands)),
      quadrature_(std::move(quadrature)),
      temp_grid_(std::move(temp_grid)),
      k_table_(std::move(k_table)),
      ib_table_(std::move(ib_table)) {
  validate_bands(bands_);
  if (temp_grid_.empty()) throw Error("SpectralModel: empty temperature grid");
  for (size_t t = 1; t < temp_grid_.size(); ++t)
    if (temp_grid_[t] <= temp_grid_[t - 1])
      throw Error("SpectralModel: temperature grid must be ascending");
  double wsum = std::accumulate(quadrature_.weights.begin(),
                                quadrature_.weights.end(), 0.0);
  if (std::abs(wsum - 1.0) > 1e-12)
    throw Error("SpectralModel: quadrature weights must sum to 1");
  size_t nk = bands_.size() * quadrature_.count() * temp_grid_.size();
  if (k_table_.size() != nk || ib_table_.size() != bands_.size() * temp_grid_.size())
    throw Error("SpectralModel: table size mismatch");
  for (double k : k_table_)
    if (k < 0.0 || !std::isfinite(k))
      throw Error("SpectralModel: k_table entries must be non-negative");

  // Uniform temperature grids get a direct-index lookup.
  if (n_temps() >= 2) {
    t0_ = temp_grid_.front();
    dt_ = temp_grid_[1] - temp_grid_[0];
    uniform_temps_ = true;
    for (int t = 1; t < n_temps(); ++t)
      if (std::abs(temp_grid_[t] - (t0_ + t * dt_)) > 1e-9 * dt_) {
        uniform_temps_ = false;
        break;
      }
  }

  // kp[t] = sum_n pi dnu_n Ib_n sum_g w_g k_ng / (sigma T^4)
  kp_table_.assign(temp_grid_.size(), 0.0);
  for (size_t t = 0; t < temp_grid_.size(); ++t) {
    double temperature = temp_grid_[t];
    if (temperature <= 0.0) continue;  // kp -> 0 with Ib
    double sum = 0.0;
    for (int n = 0; n < n_bands(); ++n) {
      double gk = 0.0;
      for (int g = 0; g < n_quad(); ++g)
        gk += quadrature_.weights[g] * k_at_node(n, g, static_cast<int>(t));
      sum += kPi * bands_[n].delta_nu() * ib_at_node(n, static_cast<int>(t)) * gk;
    }
    kp_table_[t] = sum / (kSigma * temperature * temperature * temperature *
                          temperature);
  }
}

SpectralModel::TempLookup SpectralModel::lookup(double temperature) const {
  if (!(temperature >= temp_grid_.front() && temperature <= temp_grid_.back()))
    throw Error("temperature " + std::to_string(temperature) +
                " K outside table range [" +
                std::to_string(temp_grid_.front()) + ", " +
                std::to_string(temp_grid_.back()) + "]");
  if (uniform_temps_) {
    int lo = static_cast<int>((temperature - t0_) / dt_);
    lo = std::clamp(lo, 0, n_temps() - 2);
    double frac = (temperature - temp_grid_[lo]) /
                  (temp_grid_[lo + 1] - temp_grid_[lo]);
    // Guard against landing in the neighbor interval through rounding.
    if (frac < 0.0 && lo > 0) {
      --lo;
      frac = (temperature - temp_grid_[lo]) /
             (temp_grid_[lo + 1] - temp_grid_[lo]);
    } else if (frac > 1.0 && lo < n_temps() - 2) {
      ++lo;
      frac = (temperature - temp_grid_[lo]) /
             (temp_grid_[lo + 1] - temp_grid_[lo]);
    }
    return {lo, frac};
  }
  auto it = std::upper_bound(temp_grid_.begin(), temp_grid_.end(), temperature);
  int hi = static_cast<int>(it - temp_grid_.begin());
  if (hi == 0) return {0, 0.0};
  if (hi == n_temps()) return {n_temps() - 2, 1.0};
  int lo = hi - 1;
  return {lo, (temperature - temp_grid_[lo]) / (temp_grid_[hi] - temp_grid_[lo])};
}

double SpectralModel::interp_k(int band, int g, double temperature) const {
  TempLookup l = lookup(temperature);
  double a = k_at_node(band, g, l.idx);
  if (l.frac == 0.0) return a;
  return a + l.frac * (k_at_node(band, g, l.idx + 1) - a);
}

double SpectralModel::interp_ib(int band, double temperature) const {
  TempLookup l = lookup(temperature);
  double a = ib_at_node(band, l.idx);
  if (l.frac == 0.0) return a;
  return a + l.frac * (ib_at_node(band, l.idx + 1) - a);
}

void SpectralModel::interp_pair(int band, int g, double temperature, double* k,
                                double* ib) const {
  TempLookup l = lookup(temperature);
  double ka = k_at_node(band, g, l.idx);
  double iba = ib_at_node(band, l.idx);
  if (l.frac == 0.0) {
    *k = ka;
    *ib = iba;
    return;
  }
  *k = ka + l.frac * (k_at_node(band, g, l.idx + 1) - ka);
  *ib = iba + l.frac * (ib_at_node(band, l.idx + 1) - iba);
}

double SpectralModel::planck_mean(double temperature) const {
  lookup(temperature);  // range check
  if (temperature <= 0.0) return 0.0;
  double sum = 0.0;
  for (int n = 0; n < n_bands(); ++n) {
    double gk = 0.0;
    for (int g = 0; g < n_quad(); ++g)
      gk += quadrature_.weights[g] * interp_k(n, g, temperature);
    sum += kPi * bands_[n].delta_nu() * interp_ib(n, temperature) * gk;
  }
  return sum / (kSigma * temperature * temperature * temperature * temperature);
}

SpectralModel build_k_distribution(const LineSpectrum& spectrum,
                                   const std::vector<NarrowBand>& bands,
                                   const QuadratureSet& quadrature) {
  spectrum.validate();
  validate_bands(bands);
  const auto& nu = spectrum.nu_grid;
  int n_t = static_cast<int>(spectrum.temps.size());
  int n_q = quadrature.count();
  std::vector<double> k_table(bands.size() * n_q * n_t);
  std::vector<double> ib_table(bands.size() * n_t);

  // Spectral weight of each sample: its trapezoid share of the grid.
  std::vector<double> share(nu.size());
  for (size_t s = 0; s < nu.size(); ++s) {
    double lo = s == 0 ? nu[0] : 0.5 * (nu[s - 1] + nu[s]);
    double hi = s + 1 == nu.size() ? nu.back() : 0.5 * (nu[s] + nu[s + 1]);
    share[s] = hi - lo;
  }

  for (size_t n = 0; n < bands.size(); ++n) {
    std::vector<size_t> in_band;
    for (size_t s = 0; s < nu.size(); ++s)
      if (nu[s] >= bands[n].nu_lo && nu[s] < bands[n].nu_hi)
        in_band.push_back(s);
    if (in_band.size() < 2)
      throw Error("build_k_distribution: band [" +
                  std::to_string(bands[n].nu_lo) + ", " +
                  std::to_string(bands[n].nu_hi) +
                  "] cm^-1 has fewer than 2 spectral samples");

    for (int t = 0; t < n_t; ++t) {
      // Sort samples ascending into the cumulative distribution g(k).
      std::vector<std::pair<double, double>> kw;  // (kappa, weight)
      kw.reserve(in_band.size());
      double wtot = 0.0;
      for (size_t s : in_band) {
        kw.emplace_back(spectrum.kappa[t][s], share[s]);
        wtot += share[s];
      }
      std::sort(kw.begin(), kw.end());
      std::vector<double> gpos(kw.size());
      double cum = 0.0;
      for (size_t s = 0; s < kw.size(); ++s) {
        gpos[s] = (cum + 0.5 * kw[s].second) / wtot;
        cum += kw[s].second;
      }
      // Invert g(k) at each quadrature abscissa by linear interpolation.
      for (int g = 0; g < n_q; ++g) {
        double a = quadrature.g_points[g];
        double value;
        if (a <= gpos.front()) {
          value = kw.front().first;
        } else if (a >= gpos.back()) {
          value = kw.back().first;
        } else {
          auto it = std::upper_bound(gpos.begin(), gpos.end(), a);
          size_t hi = it - gpos.begin();
          size_t lo = hi - 1;
          double f = (a - gpos[lo]) / (gpos[hi] - gpos[lo]);
          value = kw[lo].first + f * (kw[hi].first - kw[lo].first);
        }
        k_table[(n * n_q + g) * n_t + t] = value;
      }
      ib_table[n * n_t + t] = band_ib(bands[n], spectrum.temps[t]);
    }
  }
  return SpectralModel(bands, quadrature, spectrum.temps, std::move(k_table),
                       std::move(ib_table));
}

SpectralModel grey_model(double kappa, const std::vector<NarrowBand>& bands,
                         const std::vector<double>& temp_grid,
                         const QuadratureSet& quadrature) {
  if (kappa < 0.0) throw Error("grey_model: kappa must be non-negative");
  validate_bands(bands);
  int n_t = static_cast<int>(temp_grid.size());
  int n_q = quadrature.count();
  std::vector<double> k_table(bands.size() * n_q * n_t, kappa);
  std::vector<double> ib_table(bands.size() * n_t);
  for (size_t n = 0; n < bands.size(); ++n)
    for (int t = 0; t < n_t; ++t)
      ib_table[n * n_t + t] = band_ib(bands[n], temp_grid[t]);
  return SpectralModel(bands, quadrature, temp_grid, std::move(k_table),
                       std::move(ib_table));
}

SamplingCdfs build_cdfs(const SpectralModel& model, double t_max) {
  int n_b = model.n_bands();
  int n_q = model.n_quad();
  SamplingCdfs cdfs;
  cdfs.t_max = t_max;
  cdfs.band_cdf.resize(n_b);
  cdfs.quad_cdf.assign(n_b, std::vector<double>(n_q));

  std::vector<double> band_weight(n_b);
  double total = 0.0;
  for (int n = 0; n < n_b; ++n) {
    double gk = 0.0;
    for (int g = 0; g < n_q; ++g)
      gk += model.quadrature().weights[g] * model.interp_k(n, g, t_max);
    band_weight[n] =
        kPi * model.bands()[n].delta_nu() * model.interp_ib(n, t_max) * gk;
    total += band_weight[n];
  }
  if (!(total > 0.0))
    throw Error("build_cdfs: medium is transparent at T_max (kappa_p = 0)");

  double cum = 0.0;
  for (int n = 0; n < n_b; ++n) {
    cum += band_weight[n] / total;
    cdfs.band_cdf[n] = cum;
  }
  cdfs.band_cdf.back() = 1.0;

  for (int n = 0; n < n_b; ++n) {
    double gsum = 0.0;
    std::vector<double> w(n_q);
    for (int g = 0; g < n_q; ++g) {
      w[g] = model.quadrature().weights[g] * model.interp_k(n, g, t_max);
      gsum += w[g];
    }
    if (gsum <= 0.0) {
      // Unreachable band (zero weight); keep the CDF valid anyway.
      for (int g = 0; g < n_q; ++g) w[g] = model.quadrature().weights[g];
      gsum = 1.0;
    }
    double c = 0.0;
    for (int g = 0; g < n_q; ++g) {
      c += w[g] / gsum;
      cdfs.quad_cdf[n][g] = c;
    }
    cdfs.quad_cdf[n].back() = 1.0;
  }
  return cdfs;
}

std::vector<NarrowBand> make_bands(double nu_lo, double nu_hi, int n) {
  if (n < 1 || nu_hi <= nu_lo) throw Error("make_bands: invalid partition");
  std::vector<NarrowBand> bands(n);
  double step = (nu_hi - nu_lo) / n;
  for (int i = 0; i < n; ++i) {
    bands[i].nu_lo = nu_lo + i * step;
    bands[i].nu_hi = nu_lo + (i + 1) * step;
    bands[i].nu_center = 0.5 * (bands[i].nu_lo + bands[i].nu_hi);
  }
  bands.back().nu_hi = nu_hi;
  return bands;
}

std::vector<NarrowBand> make_planck_bands(double t_lo, double t_hi, int n) {
  if (t_lo <= 0.0 || t_hi < t_lo)
    throw Error("make_planck_bands: need 0 < t_lo <= t_hi");
  if (n < 8) throw Error("make_planck_bands: need at least 8 bands");
  // x = hc nu / (kB T); [0.05, 35] carries all but ~1e-5 of the emission.
  double scale = 100.0 * kPlanckC2;  // [cm K]
  double nu_lo = 0.05 * t_lo / scale;
  double nu_hi = 35.0 * t_hi / scale;
  std::vector<NarrowBand> bands(n);
  double ratio = std::pow(nu_hi / nu_lo, 1.0 / n);
  double lo = nu_lo;
  for (int i = 0; i < n; ++i) {
    double hi = (i + 1 == n) ? nu_hi : lo * ratio;
    bands[i].nu_lo = lo;
    bands[i].nu_hi = hi;
    bands[i].nu_center = std::sqrt(lo * hi);
    lo = hi;
  }
  return bands;
}

std::vector<double> make_temp_grid(double t_lo, double t_hi, double spacing) {
  if (t_lo < 0.0 || t_hi <= t_lo || spacing <= 0.0)
    throw Error("make_temp_grid: invalid range");
  std::vector<double> grid;
  int n = static_cast<int>(std::ceil((t_hi - t_lo) / spacing));
  grid.reserve(n + 1);
  for (int i = 0; i < n; ++i) grid.push_back(t_lo + i * spacing);
  grid.push_back(t_hi);
  return grid;
}

LineSpectrum elsasser_spectrum(const ElsasserParams& params,
                               const std::vector<double>& temps) {
  if (params.nu_hi <= params.nu_lo || params.line_spacing <= 0.0 ||
      params.half_width <= 0.0 || params.resolution <= 0.0)
    throw Error("elsasser_spectrum: invalid parameters");
  for (double t : temps)
    if (t <= 0.0) throw Error("elsasser_spectrum: temperatures must be positive");

  LineSpectrum spectrum;
  spectrum.temps = temps;
  int n_samples = static_cast<int>(
      std::floor((params.nu_hi - params.nu_lo) / params.resolution)) + 1;
  spectrum.nu_grid.resize(n_samples);
  for (int s = 0; s < n_samples; ++s)
    spectrum.nu_grid[s] = params.nu_lo + s * params.resolution;

  // Regular line comb with a few lines of margin past each edge.
  std::vector<double> centers;
  for (double c = params.nu_lo - 5.0 * params.line_spacing;
       c < params.nu_hi + 5.0 * params.line_spacing; c += params.line_spacing)
    centers.push_back(c + 0.5 * params.line_spacing);

  spectrum.kappa.assign(temps.size(), std::vector<double>(n_samples));
  for (size_t t = 0; t < temps.size(); ++t) {
    double s_t = params.strength * std::pow(params.t_ref / temps[t], 1.5);
    double gamma = params.half_width;
    for (int s = 0; s < n_samples; ++s) {
      double nu = spectrum.nu_grid[s];
      double k = params.continuum;
      for (double c : centers) {
        double d = nu - c;
        k += s_t / kPi * gamma / (d * d + gamma * gamma);
      }
      spectrum.kappa[t][s] = k;
    }
  }
  return spectrum;
}

}  // namespace ermc
