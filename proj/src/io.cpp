#include "ermc/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "ermc/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "file formats are little-endian");

namespace ermc {

namespace {

void write_f64(std::ostream& out, const std::vector<double>& data) {
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(double)));
}

std::vector<double> read_f64(std::istream& in, size_t count,
                             const std::string& path) {
  std::vector<double> data(count);
  in.read(reinterpret_cast<char*>(data.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (!in)
    throw Error(path + ": truncated binary payload (expected " +
                std::to_string(count) + " float64 values)");
  return data;
}

std::string read_header_line(std::istream& in, const std::string& path) {
  std::string line;
  if (!std::getline(in, line))
    throw Error(path + ": unexpected end of header");
  return line;
}

void expect_magic(std::istream& in, const std::string& magic,
                  const std::string& path) {
  std::string line = read_header_line(in, path);
  if (line != magic)
    throw Error(path + ": bad magic at offset 0 (expected \"" + magic +
                "\", got \"" + line + "\")");
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open: " + path);
  return in;
}

}  // namespace

void write_ktab(const std::string& path, const SpectralModel& model) {
  auto out = open_out(path);
  out << "KTAB1\n";
  out << "nbands " << model.n_bands() << "\n";
  out << "nq " << model.n_quad() << "\n";
  out << "ntemps " << model.n_temps() << "\n";
  out.precision(17);
  out << "temps";
  for (double t : model.temp_grid()) out << " " << t;
  out << "\n";
  for (const NarrowBand& b : model.bands())
    out << "band " << b.nu_lo << " " << b.nu_hi << " " << b.nu_center << "\n";
  for (int g = 0; g < model.n_quad(); ++g)
    out << "quad " << model.quadrature().g_points[g] << " "
        << model.quadrature().weights[g] << "\n";
  out << "data\n";
  write_f64(out, model.k_table());
  write_f64(out, model.ib_table());
}

SpectralModel read_ktab(const std::string& path) {
  auto in = open_in(path);
  expect_magic(in, "KTAB1", path);
  int n_b = -1, n_q = -1, n_t = -1;
  std::vector<double> temps;
  std::vector<NarrowBand> bands;
  QuadratureSet quad;
  for (;;) {
    std::string line = read_header_line(in, path);
    if (line == "data") break;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "nbands") {
      ls >> n_b;
    } else if (key == "nq") {
      ls >> n_q;
    } else if (key == "ntemps") {
      ls >> n_t;
    } else if (key == "temps") {
      double t;
      while (ls >> t) temps.push_back(t);
    } else if (key == "band") {
      NarrowBand b;
      ls >> b.nu_lo >> b.nu_hi >> b.nu_center;
      bands.push_back(b);
    } else if (key == "quad") {
      double g, w;
      ls >> g >> w;
      quad.g_points.push_back(g);
      quad.weights.push_back(w);
    } else {
      throw Error(path + ": unknown header key \"" + key + "\"");
    }
    if (!ls && key != "temps") throw Error(path + ": malformed header line \"" + line + "\"");
  }
  if (n_b <= 0 || n_q <= 0 || n_t <= 0 ||
      static_cast<int>(bands.size()) != n_b ||
      static_cast<int>(temps.size()) != n_t || quad.count() != n_q)
    throw Error(path + ": inconsistent KTAB1 header");
  auto k_table = read_f64(in, static_cast<size_t>(n_b) * n_q * n_t, path);
  auto ib_table = read_f64(in, static_cast<size_t>(n_b) * n_t, path);
  // kp is recomputed by the model constructor.
  return SpectralModel(std::move(bands), std::move(quad), std::move(temps),
                       std::move(k_table), std::move(ib_table));
}

void write_tfld(const std::string& path, const TemperatureField& field) {
  auto out = open_out(path);
  out.precision(17);
  out << "TFLD1\n";
  out << "dims " << field.grid.nx << " " << field.grid.ny << " "
      << field.grid.nz << "\n";
  out << "spacing " << field.grid.dx << " " << field.grid.dy << " "
      << field.grid.dz << "\n";
  out << "origin " << field.grid.origin[0] << " " << field.grid.origin[1]
      << " " << field.grid.origin[2] << "\n";
  out << "data\n";
  write_f64(out, field.values);
}

TemperatureField read_tfld(const std::string& path) {
  auto in = open_in(path);
  expect_magic(in, "TFLD1", path);
  TemperatureField field;
  for (;;) {
    std::string line = read_header_line(in, path);
    if (line == "data") break;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "dims") {
      ls >> field.grid.nx >> field.grid.ny >> field.grid.nz;
    } else if (key == "spacing") {
      ls >> field.grid.dx >> field.grid.dy >> field.grid.dz;
    } else if (key == "origin") {
      ls >> field.grid.origin[0] >> field.grid.origin[1] >>
          field.grid.origin[2];
    } else {
      throw Error(path + ": unknown header key \"" + key + "\"");
    }
    if (!ls) throw Error(path + ": malformed header line \"" + line + "\"");
  }
  field.grid.validate();
  field.values = read_f64(in, field.grid.cell_count(), path);
  return field;
}

void write_qrf(const std::string& path, const SolutionField& solution) {
  auto out = open_out(path);
  out.precision(17);
  out << "QRF1\n";
  out << "dims " << solution.grid.nx << " " << solution.grid.ny << " "
      << solution.grid.nz << "\n";
  out << "spacing " << solution.grid.dx << " " << solution.grid.dy << " "
      << solution.grid.dz << "\n";
  out << "origin " << solution.grid.origin[0] << " " << solution.grid.origin[1]
      << " " << solution.grid.origin[2] << "\n";
  out << "units W/m^3\n";
  out << "data\n";
  write_f64(out, solution.q_r);
  write_f64(out, solution.std_dev);
}

SolutionField read_qrf(const std::string& path) {
  auto in = open_in(path);
  expect_magic(in, "QRF1", path);
  SolutionField sol;
  for (;;) {
    std::string line = read_header_line(in, path);
    if (line == "data") break;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "dims") {
      ls >> sol.grid.nx >> sol.grid.ny >> sol.grid.nz;
    } else if (key == "spacing") {
      ls >> sol.grid.dx >> sol.grid.dy >> sol.grid.dz;
    } else if (key == "origin") {
      ls >> sol.grid.origin[0] >> sol.grid.origin[1] >> sol.grid.origin[2];
    } else if (key == "units") {
      // informational
    } else {
      throw Error(path + ": unknown header key \"" + key + "\"");
    }
  }
  sol.grid.validate();
  sol.q_r = read_f64(in, sol.grid.cell_count(), path);
  sol.std_dev = read_f64(in, sol.grid.cell_count(), path);
  return sol;
}

Config Config::parse_file(const std::string& path) {
  auto in = open_in(path);
  return parse(in, path);
}

Config Config::parse(std::istream& in, const std::string& name) {
  Config cfg;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    if (line.front() == '[') {
      if (line.back() != ']')
        throw Error(name + ":" + std::to_string(lineno) +
                    ": malformed section header");
      section = line.substr(1, line.size() - 2);
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(name + ":" + std::to_string(lineno) +
                  ": expected key = value");
    auto strip = [](std::string s) {
      auto a = s.find_first_not_of(" \t");
      auto b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::string key = strip(line.substr(0, eq));
    std::string value = strip(line.substr(eq + 1));
    if (key.empty())
      throw Error(name + ":" + std::to_string(lineno) + ": empty key");
    cfg.entries_[section.empty() ? key : section + "." + key] = value;
  }
  return cfg;
}

bool Config::has(const std::string& key) const {
  return entries_.count(key) > 0;
}

std::string Config::get(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw Error("config: missing key \"" + key + "\"");
  return it->second;
}

std::string Config::get_or(const std::string& key,
                           const std::string& fallback) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  try {
    std::size_t used = 0;
    double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(it->second);
    return v;
  } catch (const std::exception&) {
    throw Error("config: key \"" + key + "\" is not a number: " + it->second);
  }
}

std::int64_t Config::get_int(const std::string& key,
                             std::int64_t fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  try {
    std::size_t used = 0;
    std::int64_t v = std::stoll(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(it->second);
    return v;
  } catch (const std::exception&) {
    throw Error("config: key \"" + key + "\" is not an integer: " + it->second);
  }
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  const std::string& v = it->second;
  if (v == "true" || v == "on" || v == "1") return true;
  if (v == "false" || v == "off" || v == "0") return false;
  throw Error("config: key \"" + key + "\" is not a boolean: " + v);
}

void Config::set(const std::string& key, const std::string& value) {
  entries_[key] = value;
}

LineList read_line_list(const std::string& path) {
  auto in = open_in(path);
  LineList lines;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "tref") {
      ls >> lines.t_ref;
    } else if (first == "exponent") {
      ls >> lines.strength_exponent;
    } else {
      double nu = std::stod(first), s, w;
      if (!(ls >> s >> w))
        throw Error(path + ":" + std::to_string(lineno) +
                    ": expected nu strength half_width");
      lines.nu_center.push_back(nu);
      lines.strength.push_back(s);
      lines.half_width.push_back(w);
    }
  }
  if (lines.nu_center.empty()) throw Error(path + ": no lines");
  return lines;
}

LineSpectrum evaluate_line_list(const LineList& lines, double resolution,
                                double continuum,
                                const std::vector<double>& temps) {
  if (resolution <= 0.0) throw Error("evaluate_line_list: bad resolution");
  double nu_lo = lines.nu_center.front(), nu_hi = lines.nu_center.front();
  for (size_t l = 0; l < lines.nu_center.size(); ++l) {
    nu_lo = std::min(nu_lo, lines.nu_center[l] - 20.0 * lines.half_width[l]);
    nu_hi = std::max(nu_hi, lines.nu_center[l] + 20.0 * lines.half_width[l]);
  }
  nu_lo = std::max(nu_lo, resolution);
  LineSpectrum spectrum;
  spectrum.temps = temps;
  int n = static_cast<int>((nu_hi - nu_lo) / resolution) + 1;
  spectrum.nu_grid.resize(n);
  for (int s = 0; s < n; ++s) spectrum.nu_grid[s] = nu_lo + s * resolution;
  spectrum.kappa.assign(temps.size(), std::vector<double>(n, continuum));
  for (size_t t = 0; t < temps.size(); ++t) {
    double scale = std::pow(lines.t_ref / temps[t], lines.strength_exponent);
    for (size_t l = 0; l < lines.nu_center.size(); ++l) {
      double s_t = lines.strength[l] * scale;
      double gamma = lines.half_width[l];
      for (int s = 0; s < n; ++s) {
        double d = spectrum.nu_grid[s] - lines.nu_center[l];
        spectrum.kappa[t][s] += s_t / 3.14159265358979323846 * gamma /
                                (d * d + gamma * gamma);
      }
    }
  }
  return spectrum;
}

std::string file_hash(const std::string& path) {
  auto in = open_in(path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[65536];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
    if (!in) break;
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(h));
  return hex;
}

}  // namespace ermc
