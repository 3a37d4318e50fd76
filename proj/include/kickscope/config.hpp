// Run configuration: flat `key = value` text with dotted section names.
//
//   # comment
//   geometry.d = 1
//   geometry.sigma = 0.01
//   units.hbar = 1
//   units.mass = 1
//   units.t = 5
//   grid.n = 2^21
//   grid.x_min = -2620.94
//   grid.x_max = 2621.94
//   detector.c = 0.5
//   detector.theta = pi/3
//   basis = symmetric            # computational | symmetric | tilted:<angle>
//   sampling.count = 100000
//   sampling.seed = 12345
//   scan.c_values = 0,0.25,0.5,0.75,1
//   output.dir = results
//   output.stride = 16
//   verify.tolerance_scale = 1
//
// Angles accept plain numbers or multiples of pi ("pi/4", "-3pi/4", "0.5*pi").
#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "kickscope/hilbert.hpp"
#include "kickscope/wavepacket.hpp"

namespace kickscope::config {

struct SamplingConfig {
  std::size_t count = 100000;
  std::uint64_t seed = 12345;
};

struct OutputConfig {
  std::optional<std::string> dir;
  std::size_t stride = 16;
};

struct RunConfig {
  wavepacket::SlitGeometry geometry;
  wavepacket::PhysicalUnits units;
  wavepacket::GridSpec grid;
  hilbert::DetectorConfig detector;
  hilbert::BasisChoice basis = hilbert::BasisChoice::symmetric();
  SamplingConfig sampling;
  OutputConfig output;
  std::vector<double> scan_c_values{0.0, 0.25, 0.5, 0.75, 1.0};
  /// Multiplies every verification tolerance; 0 makes tolerance checks fail.
  double tolerance_scale = 1.0;

  /// Re-validates every module-level invariant. Throws ConfigError naming the
  /// violated invariant.
  void validate() const;
  /// Non-fatal diagnostics (narrow-slit regime).
  std::vector<std::string> warnings() const;

  /// Sets one key; throws ConfigError for unknown keys or malformed values.
  void set(const std::string& key, const std::string& value);
};

RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

double parse_real(const std::string& text, const std::string& key);
double parse_angle(const std::string& text, const std::string& key);
std::uint64_t parse_count(const std::string& text, const std::string& key);
std::vector<double> parse_real_list(const std::string& text, const std::string& key);
hilbert::BasisChoice parse_basis(const std::string& text);

}  // namespace kickscope::config
