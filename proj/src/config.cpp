#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "illposed/sweep.hpp"

namespace illposed {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_real(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(x))
    throw ConfigError(key + ": '" + text + "' is not a finite number");
  return x;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::uint64_t x = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
  if (ec != std::errc() || ptr != t.data() + t.size())
    throw ConfigError(key + ": '" + text + "' is not a nonnegative integer");
  return x;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError(key + ": '" + text + "' is not a boolean");
}

}  // namespace

Method parse_method(const std::string& s) {
  if (s == "variational") return Method::variational;
  if (s == "quasi") return Method::quasi;
  if (s == "both") return Method::both;
  throw ConfigError("method: '" + s + "' (expected variational, quasi or both)");
}

std::string to_string(Method m) {
  switch (m) {
    case Method::variational:
      return "variational";
    case Method::quasi:
      return "quasi";
    case Method::both:
      return "both";
  }
  return "?";
}

void apply_setting(SweepConfig& cfg, const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "problem") {
    cfg.problem = value;
  } else if (key == "n") {
    cfg.n = static_cast<std::size_t>(parse_unsigned(key, value));
  } else if (key == "sigma") {
    cfg.params.sigma = parse_real(key, value);
  } else if (key == "method") {
    cfg.method = parse_method(value);
  } else if (key == "delta") {
    cfg.deltas = {parse_real(key, value)};
  } else if (key == "deltas") {
    cfg.deltas.clear();
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!trim(item).empty()) cfg.deltas.push_back(parse_real(key, item));
  } else if (key == "seed") {
    cfg.seed = parse_unsigned(key, value);
  } else if (key == "alpha0") {
    cfg.alpha0 = parse_real(key, value);
  } else if (key == "alpha1") {
    cfg.alpha1 = parse_real(key, value);
  } else if (key == "rho") {
    cfg.rho = parse_real(key, value);
  } else if (key == "rho-factor") {
    cfg.rho_factor = parse_real(key, value);
  } else if (key == "noise-mode") {
    try {
      cfg.noise_mode = parse_noise_mode(value);
    } catch (const InvalidParameter& e) {
      throw ConfigError(e.what());
    }
  } else if (key == "out") {
    cfg.out = value;
  } else if (key == "timing") {
    cfg.timing = parse_bool(key, value);
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
}

void SweepConfig::validate() {
  const auto& names = problem_names();
  if (std::find(names.begin(), names.end(), problem) == names.end())
    throw ConfigError("problem: unknown name '" + problem + "'");
  if (n < 4) throw ConfigError("n: must be at least 4");
  if (deltas.empty()) throw ConfigError("deltas: at least one noise level is required");
  for (double d : deltas)
    if (!(d > 0.0)) throw ConfigError("deltas: every noise level must be positive");
  std::sort(deltas.begin(), deltas.end(), std::greater<>());
  if (std::adjacent_find(deltas.begin(), deltas.end()) != deltas.end())
    throw ConfigError("deltas: duplicate noise level");
  if (!(alpha0 > 0.0) || !(alpha1 >= 0.0))
    throw ConfigError("alpha0 must be positive and alpha1 nonnegative");
  if (rho && !(*rho > 0.0)) throw ConfigError("rho: must be positive");
  if (!(rho_factor > 0.0)) throw ConfigError("rho-factor: must be positive");
  if (!(params.sigma > 0.0)) throw ConfigError("sigma: must be positive");
}

std::map<std::string, std::string> parse_config_text(std::istream& is) {
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

SweepConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  SweepConfig cfg;
  for (const auto& [key, value] : parse_config_text(in)) apply_setting(cfg, key, value);
  return cfg;
}

}  // namespace illposed
