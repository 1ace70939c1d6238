#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ermc/cases.hpp"
#include "ermc/constants.hpp"
#include "ermc/errors.hpp"
#include "ermc/io.hpp"
#include "ermc/oracles.hpp"
#include "ermc/solver.hpp"

using namespace ermc;

namespace {

struct GlobalOpts {
  std::uint64_t seed = 0;
  int workers = 0;
  std::string output_dir = ".";
  std::string config_path;
};

std::string out_path(const GlobalOpts& g, const std::string& name) {
  return g.output_dir + "/" + name;
}

std::ofstream open_csv(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Least-squares slope of log(y) vs log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = static_cast<int>(x.size());
  for (int i = 0; i < n; ++i) {
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

SolveConfig config_from(const Config& cfg, const GlobalOpts& g) {
  SolveConfig sc;
  sc.rays_per_cell = static_cast<int>(cfg.get_int("solve.rays", sc.rays_per_cell));
  sc.tolerance = cfg.get_double("solve.tolerance", sc.tolerance);
  sc.seed = static_cast<std::uint64_t>(cfg.get_int("solve.seed", g.seed));
  sc.sorting = cfg.get_bool("solve.sorting", sc.sorting);
  sc.n_levels = static_cast<int>(cfg.get_int("solve.levels", sc.n_levels));
  sc.steps_per_level =
      static_cast<int>(cfg.get_int("solve.steps_per_level", sc.steps_per_level));
  sc.coarsen_ratio =
      static_cast<int>(cfg.get_int("solve.coarsen_ratio", sc.coarsen_ratio));
  sc.max_steps = cfg.get_int("solve.max_steps", sc.max_steps);
  sc.volume_sampling = cfg.get_bool("solve.volume_sampling", sc.volume_sampling);
  sc.specular_walls = cfg.get_bool("solve.specular_walls", sc.specular_walls);
  sc.workers = static_cast<int>(cfg.get_int("solve.workers", g.workers));
  return sc;
}

Wall parse_wall(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  Wall w;
  if (!(in >> w.temperature))
    throw Error("config: bad wall value for " + key +
                " (want \"temperature [emissivity]\")");
  in >> w.emissivity;
  return w;
}

BoundarySpec boundary_from(const Config& cfg) {
  BoundarySpec b;
  const char* axes = "xyz";
  for (int a = 0; a < 3; ++a) {
    std::string ax(1, axes[a]);
    std::string kind = cfg.get_or("boundary." + ax, "periodic");
    if (kind == "periodic") {
      b.kind[a] = AxisKind::periodic;
    } else if (kind == "wall") {
      b.kind[a] = AxisKind::wall;
      b.lo[a] = parse_wall(cfg.get("boundary." + ax + "_lo"),
                           "boundary." + ax + "_lo");
      b.hi[a] = parse_wall(cfg.get("boundary." + ax + "_hi"),
                           "boundary." + ax + "_hi");
    } else {
      throw Error("config: boundary." + ax + " must be periodic or wall");
    }
  }
  return b;
}

void write_case_csv(const std::string& path, const CaseReport& report) {
  auto out = open_csv(path);
  out << "x,q_mc,sigma,q_oracle\n";
  for (const CasePoint& p : report.points)
    out << fmt(p.x) << "," << fmt(p.q_mc) << "," << fmt(p.sigma) << ","
        << fmt(p.q_ref) << "\n";
}

int cmd_verify(const GlobalOpts& g, std::vector<std::string> names, bool all,
               int grid_n, int rays, bool sorting, int levels) {
  if (all) names = case_names();
  if (names.empty())
    throw Error("verify: select cases with --case or run --all");
  for (const std::string& n : names) make_case(n);  // fail fast on bad names

  SolveConfig cfg;
  cfg.seed = g.seed;
  cfg.workers = g.workers;
  if (rays > 0) cfg.rays_per_cell = rays;
  cfg.sorting = sorting;
  if (levels > 0) cfg.n_levels = levels;

  auto summary = open_csv(out_path(g, "verify-summary.csv"));
  summary << "case,result,peak,max_abs_err,points\n";
  bool all_passed = true;
  for (const std::string& name : names) {
    VerifyCase vc = make_case(name, grid_n);
    CaseReport report = run_case(vc, cfg);
    write_case_csv(out_path(g, "verify-" + name + ".csv"), report);
    summary << name << "," << (report.passed ? "pass" : "fail") << ","
            << fmt(report.peak) << "," << fmt(report.max_abs_err) << ","
            << report.points.size() << "\n";
    std::printf("%-12s %s  peak=%.6g  max_err=%.6g\n", name.c_str(),
                report.passed ? "PASS" : "FAIL", report.peak,
                report.max_abs_err);
    all_passed = all_passed && report.passed;
  }
  return all_passed ? 0 : 1;
}

int cmd_solve(const GlobalOpts& g) {
  if (g.config_path.empty()) throw Error("solve: --config is required");
  Config cfg = Config::parse_file(g.config_path);
  SolveConfig sc = config_from(cfg, g);

  CartesianGrid grid;
  TemperatureField field;
  BoundarySpec boundary;
  SpectralModel model;
  std::map<std::string, std::string> hashes;
  hashes["config"] = file_hash(g.config_path);

  if (cfg.has("case.name")) {
    VerifyCase vc = make_case(cfg.get("case.name"),
                              static_cast<int>(cfg.get_int("case.grid", 0)));
    grid = vc.grid;
    field = vc.field;
    boundary = vc.boundary;
    model = vc.model;
  } else {
    std::string tfld = cfg.get("input.field");
    std::string ktab = cfg.get("input.ktab");
    field = read_tfld(tfld);
    grid = field.grid;
    model = read_ktab(ktab);
    boundary = boundary_from(cfg);
    hashes["input.field"] = file_hash(tfld);
    hashes["input.ktab"] = file_hash(ktab);
  }

  SolutionField sol = solve(grid, field, boundary, model, sc);
  write_qrf(out_path(g, "solution.qrf"), sol);

  StepCensus census = step_census(sol, grid, field, boundary, model, sc);
  auto census_csv = open_csv(out_path(g, "steps.csv"));
  census_csv << "level,steps\n";
  for (size_t l = 0; l < census.steps_per_level.size(); ++l)
    census_csv << l << "," << census.steps_per_level[l] << "\n";
  census_csv << "total," << census.total_steps << "\n";
  census_csv << "saved_ratio," << fmt(census.saved_ratio) << "\n";

  auto manifest = open_csv(out_path(g, "manifest.txt"));
  manifest << "# run manifest: the solve is reproducible from this file\n";
  Config echo = cfg;
  echo.set("solve.seed", std::to_string(sc.seed));
  echo.set("solve.workers", std::to_string(sc.workers));
  for (const auto& [key, value] : echo.entries())
    manifest << key << " = " << value << "\n";
  for (const auto& [name, hash] : hashes)
    manifest << "hash." << name << " = " << hash << "\n";

  std::printf("solved %d x %d x %d, %lld steps, %.2f s\n", grid.nx, grid.ny,
              grid.nz, static_cast<long long>(sol.total_steps), sol.wall_time);
  return 0;
}

int cmd_bench(const GlobalOpts& g, const std::string& case_name,
              std::vector<int> rays_sweep, std::vector<int> grid_sweep,
              std::vector<int> levels_sweep, int rays_fixed, int grid_fixed,
              double budget) {
  auto csv = open_csv(out_path(g, "bench.csv"));
  // Expected scalings: near-linear in cells and rays. The exponents below
  // are measured on this machine, not asserted.
  csv << "# expected exponents: t~N^1.0 (cells), t~R^1.0 (rays)\n";
  csv << "grid_n,rays,levels,wall_time,total_steps,max_sigma\n";

  auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };
  bool truncated = false;

  struct Row {
    int grid_n, rays, levels;
    double wall_time, max_sigma;
    std::int64_t total_steps;
  };
  std::vector<Row> rows;
  auto run_one = [&](int grid_n, int rays, int levels) -> bool {
    if (elapsed() > budget) {
      truncated = true;
      return false;
    }
    VerifyCase vc = make_case(case_name, grid_n);
    SolveConfig sc;
    sc.seed = g.seed;
    sc.workers = g.workers;
    sc.rays_per_cell = rays;
    sc.n_levels = levels;
    SolutionField sol = solve(vc.grid, vc.field, vc.boundary, vc.model, sc);
    double max_sigma = 0.0;
    for (double s : sol.std_dev) max_sigma = std::max(max_sigma, s);
    rows.push_back({grid_n, rays, levels, sol.wall_time, max_sigma,
                    sol.total_steps});
    csv << grid_n << "," << rays << "," << levels << "," << fmt(sol.wall_time)
        << "," << sol.total_steps << "," << fmt(max_sigma) << "\n";
    csv.flush();
    return true;
  };

  std::vector<double> rx, rt, gx, gt;
  for (int r : rays_sweep)
    if (run_one(grid_fixed, r, 1)) {
      rx.push_back(r);
      rt.push_back(rows.back().wall_time);
    }
  for (int n : grid_sweep)
    if (run_one(n, rays_fixed, 1)) {
      gx.push_back(static_cast<double>(n) * n * n);
      gt.push_back(rows.back().wall_time);
    }

  if (!levels_sweep.empty()) {
    std::int64_t base_steps = -1;
    for (int l : levels_sweep) {
      if (!run_one(grid_fixed, rays_fixed, l)) break;
      if (l == 1) base_steps = rows.back().total_steps;
      if (base_steps > 0 && l > 1)
        std::printf("levels=%d step ratio %.3f\n", l,
                    static_cast<double>(base_steps) / rows.back().total_steps);
    }
  }
  if (truncated) csv << "# truncated: time budget exceeded\n";

  if (rx.size() >= 2)
    std::printf("time vs rays:  slope %.3f (measured on CPU)\n",
                loglog_slope(rx, rt));
  if (gx.size() >= 2)
    std::printf("time vs cells: slope %.3f (measured on CPU)\n",
                loglog_slope(gx, gt));
  if (truncated) std::printf("sweep truncated by time budget\n");
  return 0;
}

int cmd_spectra(const GlobalOpts& g, const std::string& lines_path,
                double kappa_const, int n_bands, int n_quad, double t_lo,
                double t_hi, double t_step, double resolution,
                double continuum, double path_length) {
  std::vector<double> temps = make_temp_grid(t_lo, t_hi, t_step);
  LineSpectrum spectrum;
  if (!lines_path.empty()) {
    spectrum = evaluate_line_list(read_line_list(lines_path), resolution,
                                  continuum, temps);
  } else if (kappa_const > 0.0) {
    ElsasserParams p;
    p.strength = 0.0;
    p.continuum = kappa_const;
    p.resolution = resolution;
    spectrum = elsasser_spectrum(p, temps);
  } else {
    ElsasserParams p;
    p.resolution = resolution;
    p.continuum = continuum;
    spectrum = elsasser_spectrum(p, temps);
  }

  double nu_lo = spectrum.nu_grid.front();
  double nu_hi = spectrum.nu_grid.back() + 1e-9;
  std::vector<NarrowBand> bands = make_bands(nu_lo, nu_hi, n_bands);
  // A band with no lines and no continuum can never be sampled.
  for (size_t b = 0; b < bands.size(); ++b) {
    double k_max = 0.0;
    for (size_t s = 0; s < spectrum.nu_grid.size(); ++s)
      if (spectrum.nu_grid[s] >= bands[b].nu_lo &&
          spectrum.nu_grid[s] < bands[b].nu_hi)
        for (size_t t = 0; t < spectrum.temps.size(); ++t)
          k_max = std::max(k_max, spectrum.kappa[t][s]);
    if (k_max <= 0.0)
      throw Error("spectra: band " + std::to_string(b) + " [" +
                  std::to_string(bands[b].nu_lo) + ", " +
                  std::to_string(bands[b].nu_hi) +
                  ") has no lines and no continuum");
  }

  SpectralModel model = build_k_distribution(
      spectrum, bands, QuadratureSet::gauss_legendre(n_quad));
  write_ktab(out_path(g, "spectra.ktab"), model);

  // Band transmissivity check at the table midpoint temperature.
  double t_mid = temps[temps.size() / 2];
  int t_idx = static_cast<int>(temps.size() / 2);
  auto csv = open_csv(out_path(g, "spectra-validation.csv"));
  csv << "band,nu_lo,nu_hi,tau_kdist,tau_lbl,abs_err\n";
  double max_err = 0.0;
  for (int b = 0; b < model.n_bands(); ++b) {
    double tau_k = 0.0;
    for (int q = 0; q < model.n_quad(); ++q)
      tau_k += model.quadrature().weights[q] *
               std::exp(-model.interp_k(b, q, t_mid) * path_length);
    double tau_l = 0.0;
    int count = 0;
    for (size_t s = 0; s < spectrum.nu_grid.size(); ++s)
      if (spectrum.nu_grid[s] >= bands[b].nu_lo &&
          spectrum.nu_grid[s] < bands[b].nu_hi) {
        tau_l += std::exp(-spectrum.kappa[t_idx][s] * path_length);
        ++count;
      }
    tau_l /= count;
    double err = std::abs(tau_k - tau_l);
    max_err = std::max(max_err, err);
    csv << b << "," << fmt(bands[b].nu_lo) << "," << fmt(bands[b].nu_hi) << ","
        << fmt(tau_k) << "," << fmt(tau_l) << "," << fmt(err) << "\n";
  }
  std::printf("%d bands, N_q=%d, max band transmissivity error %.3e\n",
              model.n_bands(), n_quad, max_err);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Emission-based reciprocal Monte Carlo radiation solver"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--seed", g.seed, "Base RNG seed");
  app.add_option("--workers", g.workers, "Worker threads (0 = hardware)");
  app.add_option("--output-dir", g.output_dir, "Directory for output files");
  app.add_option("--config", g.config_path, "Config file path");

  auto* verify = app.add_subcommand("verify", "Run built-in validation cases");
  verify->fallthrough();
  std::vector<std::string> names;
  bool all = false, sorting = false;
  int grid_n = 0, rays = 0, levels = 0;
  verify->add_option("--case", names, "Case name (repeatable)");
  verify->add_flag("--all", all, "Run every case");
  verify->add_option("--grid", grid_n, "Override grid resolution");
  verify->add_option("--rays", rays, "Override rays per cell");
  verify->add_flag("--sorting", sorting, "Presort rays by absorption");
  verify->add_option("--levels", levels, "Multigrid levels");

  auto* solve_cmd = app.add_subcommand("solve", "Solve a configured problem");
  solve_cmd->fallthrough();

  auto* bench = app.add_subcommand("bench", "Scaling sweeps");
  bench->fallthrough();
  std::string bench_case = "grey-lin1";
  std::vector<int> rays_sweep, grid_sweep, levels_sweep;
  int rays_fixed = 500, grid_fixed = 16;
  double budget = 600.0;
  bench->add_option("--case", bench_case, "Case to sweep");
  bench->add_option("--rays-sweep", rays_sweep, "Ray counts to sweep");
  bench->add_option("--grid-sweep", grid_sweep, "Grid resolutions to sweep");
  bench->add_option("--levels-sweep", levels_sweep,
                    "Multigrid level counts (include 1 for the baseline)");
  bench->add_option("--rays", rays_fixed, "Rays per cell for fixed sweeps");
  bench->add_option("--grid", grid_fixed, "Grid resolution for fixed sweeps");
  bench->add_option("--budget", budget, "Time budget in seconds");

  auto* spectra = app.add_subcommand("spectra", "Build a k-distribution table");
  spectra->fallthrough();
  std::string lines_path;
  double kappa_const = 0.0;
  int n_bands = 16, n_quad = 16;
  double t_lo = 450.0, t_hi = 1050.0, t_step = 5.0;
  double resolution = 0.25, continuum = 0.01, path_length = 1.0;
  spectra->add_option("--lines", lines_path, "Line-list file");
  spectra->add_option("--constant", kappa_const,
                      "Constant-kappa generator [m^-1]");
  spectra->add_option("--bands", n_bands, "Number of narrow bands");
  spectra->add_option("--quad", n_quad, "Quadrature points per band");
  spectra->add_option("--t-lo", t_lo, "Lowest table temperature [K]");
  spectra->add_option("--t-hi", t_hi, "Highest table temperature [K]");
  spectra->add_option("--t-step", t_step, "Table spacing [K]");
  spectra->add_option("--resolution", resolution,
                      "Spectral sampling step [cm^-1]");
  spectra->add_option("--continuum", continuum, "Continuum level [m^-1]");
  spectra->add_option("--path-length", path_length,
                      "Validation path length [m]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(verify))
      return cmd_verify(g, names, all, grid_n, rays, sorting, levels);
    if (app.got_subcommand(solve_cmd)) return cmd_solve(g);
    if (app.got_subcommand(bench))
      return cmd_bench(g, bench_case, rays_sweep, grid_sweep, levels_sweep,
                       rays_fixed, grid_fixed, budget);
    if (app.got_subcommand(spectra))
      return cmd_spectra(g, lines_path, kappa_const, n_bands, n_quad, t_lo,
                         t_hi, t_step, resolution, continuum, path_length);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
