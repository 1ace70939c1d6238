#include "ermc/cases.hpp"

#include <algorithm>
#include <cmath>

#include "ermc/constants.hpp"
#include "ermc/errors.hpp"

namespace ermc {

double profile_lin1(double x) { return 500.0 + 1000.0 * x; }

double profile_lin2(double x) { return 295.0 + 10.0 * x; }

double profile_parab(double x) { return 500.0 - 2000.0 * x * x + 2000.0 * x; }

double profile_sin(const Vec3& p) {
  double s = std::sin(kPi * p[0]) * std::sin(kPi * p[1]) * std::sin(kPi * p[2]);
  return std::pow(s * kPi / kSigma, 0.25);
}

double profile_3dimens(const Vec3& p) {
  double u = p[0] * p[1] * p[2];
  return 500.0 - 2000.0 * u * u + 2000.0 * u;
}

CartesianGrid slab_grid(int n) {
  CartesianGrid grid;
  grid.nx = grid.ny = grid.nz = n;
  grid.dx = grid.dy = grid.dz = 1.0 / n;
  return grid;
}

TemperatureField sample_profile_x(
    const CartesianGrid& grid, const std::function<double(double)>& profile) {
  TemperatureField field;
  field.grid = grid;
  field.values.resize(grid.cell_count());
  for (int i = 0; i < grid.nx; ++i) {
    double t = profile(grid.origin[0] + (i + 0.5) * grid.dx);
    for (int j = 0; j < grid.ny; ++j)
      for (int k = 0; k < grid.nz; ++k) field.values[grid.linear(i, j, k)] = t;
  }
  return field;
}

TemperatureField sample_profile_3d(
    const CartesianGrid& grid,
    const std::function<double(const Vec3&)>& profile) {
  TemperatureField field;
  field.grid = grid;
  field.values.resize(grid.cell_count());
  for (int i = 0; i < grid.nx; ++i)
    for (int j = 0; j < grid.ny; ++j)
      for (int k = 0; k < grid.nz; ++k)
        field.values[grid.linear(i, j, k)] = profile(grid.cell_center(i, j, k));
  return field;
}

namespace {

BoundarySpec slab_boundary(Wall lo, Wall hi) {
  BoundarySpec boundary;
  boundary.kind = {AxisKind::wall, AxisKind::periodic, AxisKind::periodic};
  boundary.lo[0] = lo;
  boundary.hi[0] = hi;
  return boundary;
}

BoundarySpec box_boundary(Wall wall) {
  BoundarySpec boundary;
  for (int a = 0; a < 3; ++a) {
    boundary.lo[a] = wall;
    boundary.hi[a] = wall;
  }
  return boundary;
}

// Grey slab: linear or parabolic x profile, black or partially reflecting
// x walls, periodic transverse directions.
VerifyCase grey_slab(const std::string& name, int n, double kappa,
                     double (*profile)(double), Wall lo, Wall hi, double t_lo,
                     double t_hi, double t_step) {
  VerifyCase vc;
  vc.name = name;
  vc.grid = slab_grid(n);
  vc.field = sample_profile_x(vc.grid, profile);
  vc.boundary = slab_boundary(lo, hi);
  vc.model = grey_model(kappa, make_planck_bands(t_lo, t_hi, 64),
                        make_temp_grid(t_lo, t_hi, t_step));
  vc.slab = SlabCase{1.0, [profile](double x) { return profile(x); }, kappa,
                     lo, hi};
  return vc;
}

LineSpectrum synthetic_spectrum() {
  return elsasser_spectrum(ElsasserParams{}, make_temp_grid(450.0, 1050.0, 5.0));
}

SpectralModel synthetic_model(const LineSpectrum& spectrum, int n_bands,
                              int n_quad) {
  double lo = spectrum.nu_grid.front();
  double hi = spectrum.nu_grid.back() + 1e-6;
  return build_k_distribution(spectrum, make_bands(lo, hi, n_bands),
                              QuadratureSet::gauss_legendre(n_quad));
}

}  // namespace

namespace {

// Average the MC field (and its variance) over the periodic y/z directions,
// one value per x index.
void average_transverse(const SolutionField& sol, std::vector<double>* mean,
                        std::vector<double>* sigma) {
  const CartesianGrid& g = sol.grid;
  mean->assign(g.nx, 0.0);
  sigma->assign(g.nx, 0.0);
  int np = g.ny * g.nz;
  for (int i = 0; i < g.nx; ++i) {
    double sum = 0.0, var = 0.0;
    for (int j = 0; j < g.ny; ++j)
      for (int k = 0; k < g.nz; ++k) {
        std::int64_t c = g.linear(i, j, k);
        sum += sol.q_r[c];
        var += sol.std_dev[c] * sol.std_dev[c];
      }
    (*mean)[i] = sum / np;
    (*sigma)[i] = std::sqrt(var) / np;
  }
}

void centerline(const SolutionField& sol, std::vector<double>* mean,
                std::vector<double>* sigma) {
  const CartesianGrid& g = sol.grid;
  int j = g.ny / 2, k = g.nz / 2;
  mean->assign(g.nx, 0.0);
  sigma->assign(g.nx, 0.0);
  for (int i = 0; i < g.nx; ++i) {
    std::int64_t c = g.linear(i, j, k);
    (*mean)[i] = sol.q_r[c];
    (*sigma)[i] = sol.std_dev[c];
  }
}

}  // namespace

CaseReport run_case(const VerifyCase& vc, const SolveConfig& config,
                    int oracle_refine) {
  CaseReport report;
  report.name = vc.name;
  report.solution = solve(vc.grid, vc.field, vc.boundary, vc.model, config);

  std::vector<double> mc, sigma;
  if (vc.is_3d)
    centerline(report.solution, &mc, &sigma);
  else
    average_transverse(report.solution, &mc, &sigma);

  const CartesianGrid& g = vc.grid;
  std::vector<double> xs(g.nx);
  for (int i = 0; i < g.nx; ++i) xs[i] = g.origin[0] + (i + 0.5) * g.dx;

  std::vector<double> ref;
  if (vc.slab) {
    ref = slab_oracle(*vc.slab, xs, oracle_refine);
  } else if (vc.box) {
    std::vector<Vec3> pts(g.nx);
    int j = g.ny / 2, k = g.nz / 2;
    for (int i = 0; i < g.nx; ++i) pts[i] = g.cell_center(i, j, k);
    ref = box_oracle(*vc.box, pts, oracle_refine);
  } else if (vc.lbl_spectrum) {
    SolveConfig lbl_config = config;
    lbl_config.seed = config.seed + 1;  // independent noise for combined sigma
    SolutionField lbl = lbl_reference(vc.grid, vc.field, vc.boundary,
                                      *vc.lbl_spectrum, lbl_config);
    std::vector<double> lbl_sigma;
    if (vc.is_3d)
      centerline(lbl, &ref, &lbl_sigma);
    else
      average_transverse(lbl, &ref, &lbl_sigma);
    for (int i = 0; i < g.nx; ++i)
      sigma[i] = std::sqrt(sigma[i] * sigma[i] + lbl_sigma[i] * lbl_sigma[i]);
  } else {
    throw Error("case \"" + vc.name + "\" has no reference solution");
  }

  for (double r : ref) report.peak = std::max(report.peak, std::abs(r));
  // Absolute floor covering the deterministic oracle's own quadrature
  // truncation, far below any physically meaningful difference.
  double t_hot = vc.field.max_value();
  double floor = 1e-9 * 4.0 * vc.model.planck_mean(t_hot) * kSigma * t_hot *
                 t_hot * t_hot * t_hot;
  report.points.resize(g.nx);
  for (int i = 0; i < g.nx; ++i) {
    report.points[i] = {xs[i], mc[i], sigma[i], ref[i]};
    double err = std::abs(mc[i] - ref[i]);
    report.max_abs_err = std::max(report.max_abs_err, err);
    double bound = std::max(
        {vc.peak_tol * report.peak, vc.sigma_mult * sigma[i], floor});
    if (err > bound) report.passed = false;
  }
  return report;
}

std::vector<std::string> case_names() {
  return {"isothermal", "grey-lin1", "grey-parab", "box-sin-05", "box-sin-5",
          "epsw-11",    "epsw-01",   "epsw-low",   "nb-parab",   "nb-3dimens"};
}

VerifyCase make_case(const std::string& name, int grid_n) {
  auto n_or = [grid_n](int fallback) { return grid_n > 0 ? grid_n : fallback; };

  if (name == "isothermal") {
    VerifyCase vc = grey_slab(name, n_or(16), 1.0,
                              [](double) { return 1000.0; }, {1000.0, 1.0},
                              {1000.0, 1.0}, 900.0, 1100.0, 10.0);
    vc.description = "uniform 1000 K medium between 1000 K black walls; "
                     "the radiative power vanishes identically";
    return vc;
  }
  if (name == "grey-lin1") {
    VerifyCase vc = grey_slab(name, n_or(32), 1.0, profile_lin1, {500.0, 1.0},
                              {1500.0, 1.0}, 450.0, 1550.0, 5.0);
    vc.description = "grey slab, T = 500 + 1000 x, black walls at the "
                     "profile endpoints";
    return vc;
  }
  if (name == "grey-parab") {
    VerifyCase vc = grey_slab(name, n_or(32), 1.0, profile_parab, {500.0, 1.0},
                              {500.0, 1.0}, 450.0, 1050.0, 5.0);
    vc.description = "grey slab, parabolic profile peaking at 1000 K, "
                     "500 K black walls";
    return vc;
  }
  if (name == "box-sin-05" || name == "box-sin-5") {
    double kappa = name == "box-sin-5" ? 5.0 : 0.5;
    VerifyCase vc;
    vc.name = name;
    vc.grid = slab_grid(n_or(32));
    vc.field = sample_profile_3d(vc.grid, profile_sin);
    vc.boundary = box_boundary({0.0, 1.0});
    vc.model = grey_model(kappa, make_planck_bands(2.0, 90.0, 64),
                          make_temp_grid(2.0, 90.0, 0.25));
    vc.box = BoxCase{profile_sin, kappa, 0.0};
    vc.is_3d = true;
    vc.peak_tol = 0.03;
    vc.description = "grey unit cube, product-of-sines emissive power, cold "
                     "black walls";
    return vc;
  }
  if (name == "epsw-11" || name == "epsw-01" || name == "epsw-low") {
    Wall lo{295.0, 1.0}, hi{305.0, 1.0};
    if (name == "epsw-01") lo.emissivity = 0.0;
    if (name == "epsw-low") lo.emissivity = hi.emissivity = 0.1;
    VerifyCase vc = grey_slab(name, n_or(32), 1.0, profile_lin2, lo, hi, 290.0,
                              310.0, 1.0);
    vc.description = "near-isothermal grey slab with wall emissivities " +
                     std::to_string(lo.emissivity) + "/" +
                     std::to_string(hi.emissivity);
    return vc;
  }
  if (name == "nb-parab") {
    VerifyCase vc;
    vc.name = name;
    vc.grid = slab_grid(n_or(32));
    vc.field = sample_profile_x(vc.grid, profile_parab);
    vc.boundary = slab_boundary({500.0, 1.0}, {500.0, 1.0});
    LineSpectrum spectrum = synthetic_spectrum();
    vc.model = synthetic_model(spectrum, 16, 16);
    vc.lbl_spectrum = std::move(spectrum);
    vc.peak_tol = 0.05;
    vc.description = "narrow-band correlated-k slab with a synthetic "
                     "Lorentzian line spectrum, parabolic profile";
    return vc;
  }
  if (name == "nb-3dimens") {
    VerifyCase vc;
    vc.name = name;
    vc.grid = slab_grid(n_or(16));
    vc.field = sample_profile_3d(vc.grid, profile_3dimens);
    vc.boundary = box_boundary({500.0, 1.0});
    LineSpectrum spectrum = synthetic_spectrum();
    vc.model = synthetic_model(spectrum, 16, 16);
    vc.lbl_spectrum = std::move(spectrum);
    vc.is_3d = true;
    vc.peak_tol = 0.05;
    vc.description = "narrow-band correlated-k cube, T = 500 + 2000 u(1-u) "
                     "with u = xyz, 500 K black walls";
    return vc;
  }
  throw Error("unknown case \"" + name + "\"; known cases: isothermal, "
              "grey-lin1, grey-parab, box-sin-05, box-sin-5, epsw-11, "
              "epsw-01, epsw-low, nb-parab, nb-3dimens");
}

}  // namespace ermc
