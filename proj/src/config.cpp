#include "delaydyn/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "delaydyn/errors.hpp"

namespace delaydyn {

namespace {

using nlohmann::json;

double parse_number(const std::string& token, const char* key) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(token, &pos);
    if (pos != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    std::ostringstream os;
    os << key << ": cannot parse number '" << token << "'";
    throw ValidationError(os.str());
  }
}

template <typename T>
T get_as(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    std::ostringstream os;
    os << "config: type mismatch for key '" << key << "'";
    throw ValidationError(os.str());
  }
}

}  // namespace

std::vector<double> parse_tau_grid(const std::string& spec) {
  if (spec.empty()) throw ValidationError("tau-grid: must not be empty");
  std::vector<double> grid;
  if (spec.find(':') != std::string::npos) {
    std::istringstream in(spec);
    std::string a, s, b;
    if (!std::getline(in, a, ':') || !std::getline(in, s, ':') ||
        !std::getline(in, b)) {
      throw ValidationError("tau-grid: expected start:step:stop");
    }
    const double start = parse_number(a, "tau-grid");
    const double step = parse_number(s, "tau-grid");
    const double stop = parse_number(b, "tau-grid");
    if (!(step > 0.0) || stop < start) {
      throw ValidationError("tau-grid: need step > 0 and stop >= start");
    }
    const long count = std::lround(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= count; ++i) {
      grid.push_back(start + static_cast<double>(i) * step);
    }
  } else {
    std::istringstream in(spec);
    std::string token;
    while (std::getline(in, token, ',')) {
      grid.push_back(parse_number(token, "tau-grid"));
    }
  }
  if (grid.empty()) throw ValidationError("tau-grid: no values parsed");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw ValidationError("tau-grid: values must be strictly increasing");
    }
  }
  return grid;
}

void apply_json_config(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) {
    throw ValidationError("config: top level must be a flat JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    if (key == "model") cfg.model = get_as<std::string>(value, key);
    else if (key == "r") cfg.params.r = get_as<double>(value, key);
    else if (key == "K") cfg.params.K = get_as<double>(value, key);
    else if (key == "beta") cfg.params.beta = get_as<double>(value, key);
    else if (key == "sigma") cfg.params.sigma = get_as<double>(value, key);
    else if (key == "a") cfg.params.a = get_as<double>(value, key);
    else if (key == "tau") cfg.params.tau = get_as<double>(value, key);
    else if (key == "nu1") cfg.params.nu1 = get_as<double>(value, key);
    else if (key == "nu2") cfg.params.nu2 = get_as<double>(value, key);
    else if (key == "x0") cfg.x0 = get_as<double>(value, key);
    else if (key == "y0") cfg.y0 = get_as<double>(value, key);
    else if (key == "dt") cfg.dt = get_as<double>(value, key);
    else if (key == "t-end") cfg.t_end = get_as<double>(value, key);
    else if (key == "scheme") cfg.scheme = get_as<std::string>(value, key);
    else if (key == "n-runs") cfg.n_runs = get_as<int>(value, key);
    else if (key == "base-seed") cfg.base_seed = get_as<std::uint64_t>(value, key);
    else if (key == "tau-grid") cfg.tau_grid_spec = get_as<std::string>(value, key);
    else if (key == "threshold") cfg.threshold = get_as<double>(value, key);
    else if (key == "transient-fraction")
      cfg.transient_fraction = get_as<double>(value, key);
    else if (key == "output") cfg.output = get_as<std::string>(value, key);
    else if (key == "threads") cfg.threads = get_as<int>(value, key);
    else {
      throw ValidationError("config: unknown key '" + key + "'");
    }
  }
}

void validate_run_config(const RunConfig& cfg) {
  if (cfg.model != "deterministic" && cfg.model != "model1" &&
      cfg.model != "model2") {
    throw ValidationError(
        "model: must be deterministic, model1, or model2 (got '" + cfg.model +
        "')");
  }
  cfg.params.validate();
  auto positive = [](double v, const char* key) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      std::ostringstream os;
      os << key << ": must be > 0 (got " << v << ")";
      throw ValidationError(os.str());
    }
  };
  auto nonneg = [](double v, const char* key) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      std::ostringstream os;
      os << key << ": must be >= 0 (got " << v << ")";
      throw ValidationError(os.str());
    }
  };
  nonneg(cfg.x0, "x0");
  nonneg(cfg.y0, "y0");
  positive(cfg.dt, "dt");
  positive(cfg.t_end, "t-end");
  nonneg(cfg.threshold, "threshold");
  if (!(cfg.transient_fraction >= 0.0) || cfg.transient_fraction >= 1.0) {
    throw ValidationError("transient-fraction: must lie in [0, 1)");
  }
  if (cfg.n_runs < 1) throw ValidationError("n-runs: must be >= 1");
  if (cfg.scheme != "default" && cfg.scheme != "rk4" &&
      cfg.scheme != "euler-maruyama" && cfg.scheme != "milstein") {
    throw ValidationError(
        "scheme: must be rk4, euler-maruyama, milstein, or default (got '" +
        cfg.scheme + "')");
  }
}

Scheme resolve_scheme(const RunConfig& cfg) {
  const bool deterministic = cfg.model == "deterministic";
  if (cfg.scheme == "default") {
    if (deterministic) return Scheme::RK4;
    return cfg.model == "model1" ? Scheme::Milstein : Scheme::EulerMaruyama;
  }
  if (cfg.scheme == "rk4") {
    if (!deterministic) {
      throw ValidationError("scheme: rk4 applies to the deterministic model "
                            "only");
    }
    return Scheme::RK4;
  }
  if (deterministic) {
    throw ValidationError("scheme: the deterministic model uses rk4 only");
  }
  return cfg.scheme == "milstein" ? Scheme::Milstein : Scheme::EulerMaruyama;
}

int resolve_threads_from_env(const RunConfig& cfg) {
  if (cfg.threads >= 0) return cfg.threads;
  const char* env = std::getenv("DELAYDYN_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == nullptr || *end != '\0' || v < 0) {
    throw ValidationError(
        std::string("DELAYDYN_THREADS: must be a non-negative integer (got '") +
        env + "')");
  }
  return static_cast<int>(v);
}

}  // namespace delaydyn
