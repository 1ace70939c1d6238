#include "ermc/oracles.hpp"

#include <cmath>
#include <functional>

#include "ermc/constants.hpp"
#include "ermc/errors.hpp"

namespace ermc {

namespace {

// Fixed Gauss-Legendre panel rule (8 or 16 points).
struct Panel {
  const double* x;
  const double* w;
  int n;
};

constexpr double kGl8x[] = {-0.9602898564975363, -0.7966664774136267,
                            -0.5255324099163290, -0.1834346424956498,
                            0.1834346424956498,  0.5255324099163290,
                            0.7966664774136267,  0.9602898564975363};
constexpr double kGl8w[] = {0.1012285362903763, 0.2223810344533745,
                            0.3137066458778873, 0.3626837833783620,
                            0.3626837833783620, 0.3137066458778873,
                            0.2223810344533745, 0.1012285362903763};

double panel_integrate(const std::function<double(double)>& f, double a,
                       double b, int subdiv) {
  double sum = 0.0;
  double h = (b - a) / subdiv;
  for (int s = 0; s < subdiv; ++s) {
    double lo = a + s * h;
    double mid = lo + 0.5 * h;
    for (int i = 0; i < 8; ++i) sum += kGl8w[i] * f(mid + 0.5 * h * kGl8x[i]);
  }
  return sum * 0.5 * h;
}

// Integral of f over [a,b] where f has an integrable singularity at `s`
// (an endpoint or interior point): dyadic panels grade the mesh into the
// singular point.
double graded_integrate(const std::function<double(double)>& f, double a,
                        double b, double s, int refine) {
  if (b <= a) return 0.0;
  auto one_side = [&](double from, double to) {
    // from = singular end, graded toward it
    double total = 0.0;
    double len = std::abs(to - from);
    if (len <= 0.0) return 0.0;
    // Halving panels toward the singular end; the innermost sliver of width
    // ~1e-13 len is dropped (its mass is O(delta log delta), negligible).
    int depth = 44;
    double sign = to > from ? 1.0 : -1.0;
    double hi = len;
    for (int d = 0; d < depth; ++d) {
      double lo = hi * 0.5;
      double pa = from + sign * lo;
      double pb = from + sign * hi;
      total += panel_integrate(f, std::min(pa, pb), std::max(pa, pb), refine);
      hi = lo;
    }
    return total;
  };
  if (s <= a) return one_side(a, b);
  if (s >= b) return one_side(b, a);
  return one_side(s, a) + one_side(s, b);
}

}  // namespace

std::vector<double> slab_oracle(const SlabCase& slab,
                                const std::vector<double>& x_points,
                                int refine) {
  if (slab.length <= 0.0) throw Error("slab_oracle: length must be positive");
  if (slab.kappa < 0.0) throw Error("slab_oracle: kappa must be non-negative");
  if (!slab.t_profile) throw Error("slab_oracle: missing temperature profile");
  const double kappa = slab.kappa;
  const double length = slab.length;
  auto sig_t4 = [&](double x) {
    double t = slab.t_profile(x);
    return kSigma * t * t * t * t;
  };

  // Wall radiosities: reflection series, diffuse walls.
  double tau_l = kappa * length;
  double emit1 = slab.wall_lo.emissivity * kSigma *
                 std::pow(slab.wall_lo.temperature, 4);
  double emit2 = slab.wall_hi.emissivity * kSigma *
                 std::pow(slab.wall_hi.temperature, 4);
  double j1 = emit1, j2 = emit2;
  if (slab.wall_lo.emissivity < 1.0 || slab.wall_hi.emissivity < 1.0) {
    double hm1 = 2.0 * kappa *
                 graded_integrate(
                     [&](double t) { return sig_t4(t) * expint_e2(kappa * t); },
                     0.0, length, 0.0, refine);
    double hm2 = 2.0 * kappa *
                 graded_integrate(
                     [&](double t) {
                       return sig_t4(t) * expint_e2(kappa * (length - t));
                     },
                     0.0, length, length, refine);
    for (int it = 0; it < 10000; ++it) {
      double n1 = emit1 + (1.0 - slab.wall_lo.emissivity) *
                              (2.0 * j2 * expint_e3(tau_l) + hm1);
      double n2 = emit2 + (1.0 - slab.wall_hi.emissivity) *
                              (2.0 * j1 * expint_e3(tau_l) + hm2);
      double change = std::abs(n1 - j1) + std::abs(n2 - j2);
      j1 = n1;
      j2 = n2;
      if (change < 1e-6 * (std::abs(j1) + std::abs(j2) + 1e-300)) break;
    }
  }

  std::vector<double> q(x_points.size());
  for (size_t p = 0; p < x_points.size(); ++p) {
    double x = x_points[p];
    if (x < 0.0 || x > length) throw Error("slab_oracle: x outside slab");
    double medium = graded_integrate(
        [&](double xp) { return sig_t4(xp) * expint_e1(kappa * std::abs(x - xp)); },
        0.0, length, x, refine);
    q[p] = kappa * (2.0 * j1 * expint_e2(kappa * x) +
                    2.0 * j2 * expint_e2(kappa * (length - x)) +
                    2.0 * kappa * medium - 4.0 * sig_t4(x));
  }
  return q;
}

namespace {

struct BoxQuad {
  const BoxCase* box;
  Vec3 target;
  double h_min;

  double sig_t4(const Vec3& p) const {
    double t = box->t_profile(p);
    return kSigma * t * t * t * t;
  }

  // Volume kernel kappa sigT4 e^{-kr}/(pi r^2); cells subdivide while wider
  // than a quarter of their distance to the target, with the innermost cell
  // replaced by its equal-volume-sphere integral.
  double volume(const Vec3& lo, double size) const {
    Vec3 c = {lo[0] + 0.5 * size, lo[1] + 0.5 * size, lo[2] + 0.5 * size};
    double rx = c[0] - target[0], ry = c[1] - target[1], rz = c[2] - target[2];
    double r = std::sqrt(rx * rx + ry * ry + rz * rz);
    bool contains = target[0] >= lo[0] && target[0] <= lo[0] + size &&
                    target[1] >= lo[1] && target[1] <= lo[1] + size &&
                    target[2] >= lo[2] && target[2] <= lo[2] + size;
    if ((contains || r < 8.0 * size) && size > h_min) {
      double half = 0.5 * size;
      double sum = 0.0;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k)
            sum += volume({lo[0] + i * half, lo[1] + j * half,
                           lo[2] + k * half},
                          half);
      return sum;
    }
    double vol = size * size * size;
    if (contains || r < 1e-12) {
      double a = std::cbrt(3.0 * vol / (4.0 * kPi));
      return 4.0 * sig_t4(c) * -std::expm1(-box->kappa * a);
    }
    return box->kappa * sig_t4(c) * std::exp(-box->kappa * r) /
           (kPi * r * r) * vol;
  }

  // Black wall patches: sigTw4/pi e^{-kr} cos(theta)/r^2.
  double face(int axis, double coord, const Vec3& lo2d, double size) const {
    int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
    Vec3 c;
    c[axis] = coord;
    c[a1] = lo2d[0] + 0.5 * size;
    c[a2] = lo2d[1] + 0.5 * size;
    double rx = c[0] - target[0], ry = c[1] - target[1], rz = c[2] - target[2];
    double r = std::sqrt(rx * rx + ry * ry + rz * rz);
    if (size > 0.125 * r && size > h_min) {
      double half = 0.5 * size;
      double sum = 0.0;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          sum += face(axis, coord,
                      {lo2d[0] + i * half, lo2d[1] + j * half}, half);
      return sum;
    }
    double tw = box->wall_temperature;
    double sig = kSigma * tw * tw * tw * tw;
    double cos_t = std::abs(c[axis] - target[axis]) / r;
    return sig / kPi * std::exp(-box->kappa * r) * cos_t / (r * r) * size *
           size;
  }
};

}  // namespace

std::vector<double> box_oracle(const BoxCase& box,
                               const std::vector<Vec3>& points, int refine) {
  if (!box.t_profile) throw Error("box_oracle: missing temperature profile");
  if (box.kappa < 0.0) throw Error("box_oracle: kappa must be non-negative");

  std::vector<double> q(points.size());
  for (size_t p = 0; p < points.size(); ++p) {
    const Vec3& x = points[p];
    for (int a = 0; a < 3; ++a)
      if (x[a] <= 0.0 || x[a] >= 1.0)
        throw Error("box_oracle: sample point outside the unit cube");
    BoxQuad quad{&box, x, 2e-6 / refine};
    double g = 0.0;
    const int base = 8;
    double size = 1.0 / base;
    for (int i = 0; i < base; ++i)
      for (int j = 0; j < base; ++j)
        for (int k = 0; k < base; ++k)
          g += quad.volume({i * size, j * size, k * size}, size);
    if (box.wall_temperature > 0.0) {
      for (int axis = 0; axis < 3; ++axis)
        for (double coord : {0.0, 1.0})
          for (int i = 0; i < base; ++i)
            for (int j = 0; j < base; ++j)
              g += quad.face(axis, coord, {i * size, j * size}, size);
    }
    double t = box.t_profile(x);
    q[p] = box.kappa * (g - 4.0 * kSigma * t * t * t * t);
  }
  return q;
}

SpectralModel lbl_model(const LineSpectrum& spectrum,
                        std::size_t memory_cap_bytes) {
  spectrum.validate();
  size_t n_s = spectrum.nu_grid.size();
  size_t n_t = spectrum.temps.size();
  size_t bytes = n_s * n_t * 2 * sizeof(double);
  if (bytes > memory_cap_bytes)
    throw Error("lbl_model: tables would need " + std::to_string(bytes) +
                " bytes; coarsen the spectrum or raise the cap");

  // One band per spectral sample, a single quadrature point per band.
  std::vector<NarrowBand> bands(n_s);
  const auto& nu = spectrum.nu_grid;
  for (size_t s = 0; s < n_s; ++s) {
    bands[s].nu_lo = s == 0 ? nu[0] - 0.5 * (nu[1] - nu[0])
                            : 0.5 * (nu[s - 1] + nu[s]);
    bands[s].nu_hi = s + 1 == n_s ? nu[n_s - 1] + 0.5 * (nu[n_s - 1] - nu[n_s - 2])
                                  : 0.5 * (nu[s] + nu[s + 1]);
    bands[s].nu_center = nu[s];
  }
  std::vector<double> k_table(n_s * n_t);
  std::vector<double> ib_table(n_s * n_t);
  for (size_t s = 0; s < n_s; ++s)
    for (size_t t = 0; t < n_t; ++t) {
      k_table[s * n_t + t] = spectrum.kappa[t][s];
      ib_table[s * n_t + t] = spectrum.temps[t] > 0.0
                                  ? planck_intensity(nu[s], spectrum.temps[t])
                                  : 0.0;
    }
  return SpectralModel(std::move(bands), QuadratureSet::single_point(),
                       spectrum.temps, std::move(k_table),
                       std::move(ib_table));
}

SolutionField lbl_reference(const CartesianGrid& grid,
                            const TemperatureField& field,
                            const BoundarySpec& boundary,
                            const LineSpectrum& spectrum,
                            const SolveConfig& config,
                            std::size_t memory_cap_bytes) {
  SpectralModel model = lbl_model(spectrum, memory_cap_bytes);
  return solve(grid, field, boundary, model, config);
}

}  // namespace ermc
