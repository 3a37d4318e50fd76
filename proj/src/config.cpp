#include "kickscope/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "kickscope/errors.hpp"

namespace kickscope::config {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& text,
                            const std::string& what) {
  throw ConfigError("invalid value '" + text + "' for " + key + ": expected " + what);
}

std::optional<double> to_double(const std::string& text) {
  if (text.empty()) return std::nullopt;
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace

double parse_real(const std::string& text, const std::string& key) {
  const auto v = to_double(trim(text));
  if (!v) bad_value(key, text, "a finite real number");
  return *v;
}

double parse_angle(const std::string& raw, const std::string& key) {
  const std::string text = trim(raw);
  if (auto v = to_double(text)) return *v;
  const auto at = text.find("pi");
  if (at == std::string::npos) bad_value(key, raw, "an angle (number or multiple of pi)");

  std::string head = text.substr(0, at);
  std::string tail = text.substr(at + 2);
  if (!head.empty() && head.back() == '*') head.pop_back();
  double factor = 1.0;
  if (head == "-") {
    factor = -1.0;
  } else if (!head.empty() && head != "+") {
    const auto v = to_double(head);
    if (!v) bad_value(key, raw, "an angle (number or multiple of pi)");
    factor = *v;
  }
  double divisor = 1.0;
  if (!tail.empty()) {
    if (tail.front() != '/') bad_value(key, raw, "an angle (number or multiple of pi)");
    const auto v = to_double(tail.substr(1));
    if (!v || *v == 0.0) bad_value(key, raw, "an angle (number or multiple of pi)");
    divisor = *v;
  }
  return factor * kPi / divisor;
}

std::uint64_t parse_count(const std::string& raw, const std::string& key) {
  const std::string text = trim(raw);
  const auto caret = text.find('^');
  auto parse_u64 = [&](const std::string& s) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
      bad_value(key, raw, "a non-negative integer (or 2^k)");
    return v;
  };
  if (caret == std::string::npos) return parse_u64(text);
  if (text.substr(0, caret) != "2") bad_value(key, raw, "a non-negative integer (or 2^k)");
  const std::uint64_t k = parse_u64(text.substr(caret + 1));
  if (k >= 63) bad_value(key, raw, "an exponent below 63");
  return std::uint64_t{1} << k;
}

std::vector<double> parse_real_list(const std::string& text, const std::string& key) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) values.push_back(parse_real(item, key));
  if (values.empty()) bad_value(key, text, "a comma-separated list of numbers");
  return values;
}

hilbert::BasisChoice parse_basis(const std::string& raw) {
  const std::string text = trim(raw);
  if (text == "computational") return hilbert::BasisChoice::computational();
  if (text == "symmetric") return hilbert::BasisChoice::symmetric();
  if (text.rfind("tilted:", 0) == 0)
    return hilbert::BasisChoice::tilted(parse_angle(text.substr(7), "basis"));
  bad_value("basis", raw, "computational, symmetric or tilted:<angle>");
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "geometry.d") {
    geometry.d = parse_real(value, key);
  } else if (key == "geometry.sigma") {
    geometry.sigma = parse_real(value, key);
  } else if (key == "units.hbar") {
    units.hbar = parse_real(value, key);
  } else if (key == "units.mass") {
    units.mass = parse_real(value, key);
  } else if (key == "units.t") {
    units.t = parse_real(value, key);
  } else if (key == "grid.n") {
    grid.n = static_cast<std::size_t>(parse_count(value, key));
  } else if (key == "grid.x_min") {
    grid.x_min = parse_real(value, key);
  } else if (key == "grid.x_max") {
    grid.x_max = parse_real(value, key);
  } else if (key == "detector.c") {
    detector.overlap_magnitude = parse_real(value, key);
  } else if (key == "detector.theta") {
    detector.overlap_phase = parse_angle(value, key);
  } else if (key == "basis") {
    basis = parse_basis(value);
  } else if (key == "sampling.count") {
    sampling.count = static_cast<std::size_t>(parse_count(value, key));
  } else if (key == "sampling.seed") {
    sampling.seed = parse_count(value, key);
  } else if (key == "scan.c_values") {
    scan_c_values = parse_real_list(value, key);
  } else if (key == "output.dir") {
    output.dir = trim(value);
  } else if (key == "output.stride") {
    output.stride = static_cast<std::size_t>(parse_count(value, key));
  } else if (key == "verify.tolerance_scale") {
    tolerance_scale = parse_real(value, key);
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
}

void RunConfig::validate() const {
  geometry.validate();
  units.validate();
  grid.validate_for(geometry, units);
  try {
    detector.validate();
  } catch (const std::domain_error& e) {
    throw ConfigError(e.what());
  }
  if (basis.kind == hilbert::BasisKind::Tilted && !std::isfinite(basis.theta_prime))
    throw ConfigError("tilted basis angle must be finite");
  if (sampling.count < 1) throw ConfigError("sampling.count must be >= 1");
  if (output.stride < 1) throw ConfigError("output.stride must be >= 1");
  if (output.dir && output.dir->empty()) throw ConfigError("output.dir must not be empty");
  for (double c : scan_c_values)
    if (!(c >= 0.0 && c <= 1.0)) throw ConfigError("scan.c_values entries must lie in [0, 1]");
  if (!(tolerance_scale >= 0.0)) throw ConfigError("verify.tolerance_scale must be >= 0");
}

std::vector<std::string> RunConfig::warnings() const {
  std::vector<std::string> out;
  if (auto w = geometry.narrow_slit_warning()) out.push_back(*w);
  return out;
}

RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      std::ostringstream os;
      os << "line " << lineno << ": expected key = value, got '" << line << "'";
      throw ConfigError(os.str());
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      std::ostringstream os;
      os << "line " << lineno << ": empty key";
      throw ConfigError(os.str());
    }
    cfg.set(key, value);
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

}  // namespace kickscope::config
