#include <cmath>
#include <vector>

#include "doctest.h"
#include "ermc/constants.hpp"
#include "ermc/errors.hpp"
#include "ermc/spectral.hpp"

using namespace ermc;

TEST_CASE("planck intensity integrates to sigma T^4 / pi") {
  double t = 1000.0;
  double sum = 0.0;
  double d_nu = 0.5;
  for (double nu = d_nu / 2; nu < 60000.0; nu += d_nu)
    sum += kPi * planck_intensity(nu, t) * d_nu;
  double exact = kSigma * t * t * t * t;
  CHECK(std::abs(sum - exact) / exact < 0.005);
}

TEST_CASE("planck intensity is monotone in temperature") {
  for (double nu = 100.0; nu <= 10000.0; nu += 250.0)
    CHECK(planck_intensity(nu, 1500.0) > planck_intensity(nu, 500.0));
}

TEST_CASE("planck intensity rejects non-positive arguments") {
  CHECK_THROWS_AS(planck_intensity(0.0, 1000.0), Error);
  CHECK_THROWS_AS(planck_intensity(1000.0, 0.0), Error);
  CHECK_THROWS_AS(planck_intensity(-1.0, 1000.0), Error);
}

TEST_CASE("gauss-legendre quadrature on (0,1)") {
  for (int n : {4, 8, 16}) {
    QuadratureSet q = QuadratureSet::gauss_legendre(n);
    REQUIRE(q.count() == n);
    double wsum = 0.0;
    for (int i = 0; i < n; ++i) {
      wsum += q.weights[i];
      CHECK(q.weights[i] > 0.0);
      CHECK(q.g_points[i] > 0.0);
      CHECK(q.g_points[i] < 1.0);
      if (i > 0) CHECK(q.g_points[i] > q.g_points[i - 1]);
    }
    CHECK(std::abs(wsum - 1.0) < 1e-12);
    // Exact for polynomials up to degree 2n-1: integral of x^3 over (0,1).
    double cube = 0.0;
    for (int i = 0; i < n; ++i)
      cube += q.weights[i] * q.g_points[i] * q.g_points[i] * q.g_points[i];
    CHECK(std::abs(cube - 0.25) < 1e-13);
  }
}

namespace {

LineSpectrum flat_spectrum(double value, double nu_lo, double nu_hi, int n,
                           std::vector<double> temps) {
  LineSpectrum s;
  s.temps = std::move(temps);
  for (int i = 0; i < n; ++i)
    s.nu_grid.push_back(nu_lo + (nu_hi - nu_lo) * i / (n - 1));
  s.kappa.assign(s.temps.size(), std::vector<double>(n, value));
  return s;
}

}  // namespace

TEST_CASE("k-distribution of a constant spectrum is constant") {
  LineSpectrum s = flat_spectrum(2.5, 500.0, 600.0, 64, {500.0, 1000.0});
  auto model = build_k_distribution(s, make_bands(500.0, 600.0, 1),
                                    QuadratureSet::gauss_legendre(8));
  for (int g = 0; g < 8; ++g) {
    CHECK(model.interp_k(0, g, 500.0) == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(model.interp_k(0, g, 750.0) == doctest::Approx(2.5).epsilon(1e-14));
  }
}

TEST_CASE("k-distribution inverts a two-valued step spectrum") {
  // Half the band at kappa=1, half at kappa=3; abscissae 0.25 / 0.75 land in
  // the flat halves of the cumulative distribution.
  LineSpectrum s = flat_spectrum(1.0, 500.0, 600.0, 64, {1000.0});
  for (int i = 32; i < 64; ++i) s.kappa[0][i] = 3.0;
  QuadratureSet quad;
  quad.g_points = {0.25, 0.75};
  quad.weights = {0.5, 0.5};
  auto model = build_k_distribution(s, make_bands(500.0, 600.0, 1), quad);
  CHECK(model.interp_k(0, 0, 1000.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(model.interp_k(0, 1, 1000.0) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("k-distribution rejects empty bands and bad grids") {
  LineSpectrum s = flat_spectrum(1.0, 500.0, 600.0, 64, {1000.0});
  CHECK_THROWS_WITH_AS(
      build_k_distribution(s, make_bands(500.0, 800.0, 3),
                           QuadratureSet::single_point()),
      doctest::Contains("fewer than 2 spectral samples"), Error);
  LineSpectrum bad = s;
  std::swap(bad.nu_grid[5], bad.nu_grid[6]);
  CHECK_THROWS_AS(build_k_distribution(bad, make_bands(500.0, 600.0, 1),
                                       QuadratureSet::single_point()),
                  Error);
}

TEST_CASE("k-distribution is monotone in g at every band and temperature") {
  std::vector<double> temps = make_temp_grid(500.0, 1500.0, 250.0);
  LineSpectrum s = elsasser_spectrum(ElsasserParams{}, temps);
  auto model = build_k_distribution(
      s, make_bands(s.nu_grid.front(), s.nu_grid.back() + 1e-6, 12),
      QuadratureSet::gauss_legendre(8));
  for (int n = 0; n < model.n_bands(); ++n)
    for (int t = 0; t < model.n_temps(); ++t)
      for (int g = 1; g < model.n_quad(); ++g)
        CHECK(model.k_at_node(n, g, t) >= model.k_at_node(n, g - 1, t));
}

TEST_CASE("band transmissivity matches line-by-line within 1%") {
  std::vector<double> temps = {800.0, 1000.0, 1200.0};
  LineSpectrum s = elsasser_spectrum(ElsasserParams{}, temps);
  std::vector<NarrowBand> bands =
      make_bands(s.nu_grid.front(), s.nu_grid.back() + 1e-6, 8);

  auto band_error = [&](int n_quad) {
    auto model =
        build_k_distribution(s, bands, QuadratureSet::gauss_legendre(n_quad));
    double worst = 0.0;
    for (double path : {0.01, 0.1, 1.0}) {
      for (int b = 0; b < model.n_bands(); ++b) {
        double tau_k = 0.0;
        for (int g = 0; g < n_quad; ++g)
          tau_k += model.quadrature().weights[g] *
                   std::exp(-model.interp_k(b, g, 1000.0) * path);
        double tau_l = 0.0;
        int count = 0;
        for (size_t i = 0; i < s.nu_grid.size(); ++i)
          if (s.nu_grid[i] >= bands[b].nu_lo && s.nu_grid[i] < bands[b].nu_hi) {
            tau_l += std::exp(-s.kappa[1][i] * path);
            ++count;
          }
        tau_l /= count;
        worst = std::max(worst, std::abs(tau_k - tau_l));
      }
    }
    return worst;
  };

  double e4 = band_error(4), e16 = band_error(16);
  CHECK(e16 < 0.01);
  // Refinement tightens the worst-band error (not strictly monotone per
  // band, but the 16-point rule must not be worse than the 4-point rule).
  CHECK(e16 <= e4);
}

TEST_CASE("planck mean of a grey model equals the grey coefficient") {
  std::vector<double> temps = make_temp_grid(500.0, 1500.0, 100.0);
  auto model = grey_model(1.0, make_planck_bands(500.0, 1500.0, 64), temps);
  CHECK(std::abs(model.planck_mean(1000.0) - 1.0) < 0.005);
  auto half = grey_model(0.5, make_planck_bands(500.0, 1500.0, 64), temps);
  CHECK(std::abs(half.planck_mean(1000.0) - 0.5) < 0.0025);
  auto zero = grey_model(0.0, make_planck_bands(500.0, 1500.0, 64), temps);
  CHECK(zero.planck_mean(1000.0) == 0.0);
}

TEST_CASE("planck mean matches an independent evaluation of its sum") {
  std::vector<double> temps = {900.0, 1100.0};
  LineSpectrum s = flat_spectrum(2.0, 1000.0, 2000.0, 128, temps);
  for (size_t t = 0; t < temps.size(); ++t)
    for (int i = 64; i < 128; ++i) s.kappa[t][i] = 6.0;
  std::vector<NarrowBand> bands = make_bands(1000.0, 2000.0, 2);
  auto model = build_k_distribution(s, bands, QuadratureSet::gauss_legendre(4));
  double t = 1000.0;
  double expect = 0.0;
  for (int b = 0; b < model.n_bands(); ++b) {
    double ksum = 0.0;
    for (int g = 0; g < model.n_quad(); ++g)
      ksum += model.quadrature().weights[g] * model.interp_k(b, g, t);
    expect += kPi * bands[b].delta_nu() * model.interp_ib(b, t) * ksum;
  }
  expect /= kSigma * t * t * t * t;
  CHECK(model.planck_mean(t) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("planck mean refuses out-of-range temperatures") {
  auto model = grey_model(1.0, make_planck_bands(500.0, 1500.0, 16),
                          make_temp_grid(500.0, 1500.0, 100.0));
  CHECK_THROWS_AS(model.planck_mean(499.0), Error);
  CHECK_THROWS_AS(model.planck_mean(1501.0), Error);
}

TEST_CASE("sampling cdfs") {
  std::vector<double> temps = make_temp_grid(500.0, 1500.0, 100.0);
  SUBCASE("single band gives a one-entry cdf") {
    auto model = grey_model(1.0, make_bands(100.0, 10000.0, 1), temps);
    auto cdfs = build_cdfs(model, 1000.0);
    REQUIRE(cdfs.band_cdf.size() == 1);
    CHECK(cdfs.band_cdf[0] == 1.0);
  }
  SUBCASE("two identical bands split evenly") {
    // Same ib on both bands: force identical widths and centers via a
    // hand-built model.
    std::vector<NarrowBand> bands = {{1000.0, 1100.0, 1050.0},
                                     {1100.0, 1200.0, 1050.0}};
    std::vector<double> k_table(2, 1.0), ib_table;
    for (const NarrowBand& b : bands) {
      (void)b;
      ib_table.push_back(planck_intensity(1050.0, 1000.0));
    }
    SpectralModel model(bands, QuadratureSet::single_point(), {1000.0},
                        k_table, ib_table);
    auto cdfs = build_cdfs(model, 1000.0);
    CHECK(cdfs.band_cdf[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(cdfs.band_cdf[1] == 1.0);
  }
  SUBCASE("cdfs are non-decreasing and end at one") {
    LineSpectrum s = elsasser_spectrum(ElsasserParams{}, temps);
    auto model = build_k_distribution(
        s, make_bands(s.nu_grid.front(), s.nu_grid.back() + 1e-6, 16),
        QuadratureSet::gauss_legendre(8));
    auto cdfs = build_cdfs(model, 1234.5);
    for (size_t n = 0; n < cdfs.band_cdf.size(); ++n) {
      if (n > 0) CHECK(cdfs.band_cdf[n] >= cdfs.band_cdf[n - 1]);
      for (size_t g = 1; g < cdfs.quad_cdf[n].size(); ++g)
        CHECK(cdfs.quad_cdf[n][g] >= cdfs.quad_cdf[n][g - 1]);
      CHECK(std::abs(cdfs.quad_cdf[n].back() - 1.0) <= 1e-12);
    }
    CHECK(std::abs(cdfs.band_cdf.back() - 1.0) <= 1e-12);
  }
  SUBCASE("transparent medium is an error") {
    auto model = grey_model(0.0, make_bands(100.0, 10000.0, 4), temps);
    CHECK_THROWS_AS(build_cdfs(model, 1000.0), Error);
  }
}

TEST_CASE("temperature interpolation") {
  // Hand-built single band, temps {500, 1000}, k {2, 4}.
  std::vector<NarrowBand> bands = {{1000.0, 1100.0, 1050.0}};
  std::vector<double> temps = {500.0, 1000.0};
  std::vector<double> k_table = {2.0, 4.0};
  std::vector<double> ib_table = {planck_intensity(1050.0, 500.0),
                                  planck_intensity(1050.0, 1000.0)};
  SpectralModel model(bands, QuadratureSet::single_point(), temps, k_table,
                      ib_table);
  SUBCASE("exact at nodes") {
    CHECK(model.interp_k(0, 0, 500.0) == 2.0);
    CHECK(model.interp_k(0, 0, 1000.0) == 4.0);
    CHECK(model.interp_ib(0, 500.0) == ib_table[0]);
  }
  SUBCASE("linear midpoint") {
    CHECK(model.interp_k(0, 0, 750.0) == doctest::Approx(3.0).epsilon(1e-14));
  }
  SUBCASE("random temperatures match a scalar oracle") {
    for (int i = 0; i < 200; ++i) {
      double t = 500.0 + 500.0 * ((i * 2654435761u % 1000) / 1000.0);
      double frac = (t - 500.0) / 500.0;
      double expect = (1.0 - frac) * 2.0 + frac * 4.0;
      CHECK(model.interp_k(0, 0, t) ==
            doctest::Approx(expect).epsilon(1e-14));
      double k, ib;
      model.interp_pair(0, 0, t, &k, &ib);
      CHECK(k == model.interp_k(0, 0, t));
      CHECK(ib == model.interp_ib(0, t));
    }
  }
  SUBCASE("no extrapolation") {
    CHECK_THROWS_WITH_AS(model.interp_k(0, 0, 499.9),
                         doctest::Contains("outside table range"), Error);
    CHECK_THROWS_AS(model.interp_ib(0, 1000.1), Error);
  }
}

TEST_CASE("grey model answers the same kappa for every draw") {
  auto model = grey_model(1.0, make_planck_bands(500.0, 1500.0, 32),
                          make_temp_grid(500.0, 1500.0, 100.0));
  for (int n = 0; n < model.n_bands(); ++n)
    CHECK(model.interp_k(n, 0, 789.0) == 1.0);
  CHECK_THROWS_AS(grey_model(-1.0, make_bands(100.0, 200.0, 1),
                             make_temp_grid(500.0, 1500.0, 100.0)),
                  Error);
}

TEST_CASE("band partitions") {
  auto bands = make_bands(100.0, 500.0, 4);
  REQUIRE(bands.size() == 4);
  CHECK(bands[0].nu_lo == 100.0);
  CHECK(bands[3].nu_hi == 500.0);
  for (size_t i = 1; i < bands.size(); ++i)
    CHECK(bands[i].nu_lo == doctest::Approx(bands[i - 1].nu_hi));
  auto planck = make_planck_bands(500.0, 1500.0, 64);
  REQUIRE(planck.size() == 64);
  for (size_t i = 1; i < planck.size(); ++i) {
    CHECK(planck[i].nu_lo == doctest::Approx(planck[i - 1].nu_hi));
    CHECK(planck[i].delta_nu() > planck[i - 1].delta_nu());  // log-spaced
  }
}
