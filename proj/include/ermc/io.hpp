#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "ermc/geometry.hpp"
#include "ermc/solver.hpp"
#include "ermc/spectral.hpp"

namespace ermc {

// Spectral table: text header (magic "KTAB1", band count, N_q, temperature
// nodes, band edges/centers, quadrature), then little-endian f64 arrays for
// k_table [band][g][T] and ib_table [band][T]. kp is recomputed on load.
void write_ktab(const std::string& path, const SpectralModel& model);
SpectralModel read_ktab(const std::string& path);

// Temperature field: text header ("TFLD1", nx ny nz, dx dy dz, origin),
// then little-endian f64 values, k-fastest.
void write_tfld(const std::string& path, const TemperatureField& field);
TemperatureField read_tfld(const std::string& path);

// Solution: text header ("QRF1", dims, units), then q_r and std_dev arrays.
void write_qrf(const std::string& path, const SolutionField& solution);
SolutionField read_qrf(const std::string& path);

// Flat key-value config with [section] headers; '#' starts a comment.
// Keys are addressed as "section.key".
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse(std::istream& in, const std::string& name);

  bool has(const std::string& key) const;
  std::string get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  void set(const std::string& key, const std::string& value);

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

// Columnar line list: nu_center, strength, half_width per line, with a
// header line naming the temperature scaling exponent and reference.
struct LineList {
  std::vector<double> nu_center;   // [cm^-1]
  std::vector<double> strength;    // [m^-1 cm^-1]
  std::vector<double> half_width;  // [cm^-1]
  double t_ref = 1000.0;
  double strength_exponent = 1.5;  // S(T) = S (t_ref/T)^exponent
};
LineList read_line_list(const std::string& path);
LineSpectrum evaluate_line_list(const LineList& lines, double resolution,
                                double continuum,
                                const std::vector<double>& temps);

// FNV-1a content hash of a file, for run manifests.
std::string file_hash(const std::string& path);

}  // namespace ermc
