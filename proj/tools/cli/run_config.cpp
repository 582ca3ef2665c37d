#include "cli/run_config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "modred/bounds.hpp"
#include "modred/models.hpp"

namespace modred::cli {

namespace {

[[noreturn]] void config_error(const std::string& msg) {
  throw Error(ErrorCode::InvalidParams, msg);
}

template <typename T>
std::optional<T> pick(const std::optional<T>& flag, const nlohmann::json& file, const char* key) {
  if (flag) return flag;
  if (file.is_object() && file.contains(key) && !file.at(key).is_null()) {
    try {
      return file.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      config_error(std::string("config key '") + key + "' has the wrong type");
    }
  }
  return std::nullopt;
}

// Numbers in the config file may also be given as strings ("inf").
std::optional<double> pick_number(const std::optional<double>& flag, const nlohmann::json& file,
                                  const char* key) {
  if (flag) return flag;
  if (file.is_object() && file.contains(key) && !file.at(key).is_null()) {
    const auto& v = file.at(key);
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
      try {
        std::size_t used = 0;
        const std::string s = v.get<std::string>();
        const double parsed = std::stod(s, &used);
        if (used == s.size()) return parsed;
      } catch (const std::exception&) {
      }
    }
    config_error(std::string("config key '") + key + "' must be a number");
  }
  return std::nullopt;
}

Spacing parse_spacing(const std::string& s) {
  if (s == "linear") return Spacing::Linear;
  if (s == "geometric") return Spacing::Geometric;
  if (s == "composite") return Spacing::Composite;
  config_error("t-spacing must be linear, geometric or composite (got '" + s + "')");
}

double model_rate(const RunConfig& cfg) {
  if (cfg.model == ModelKind::Oscillator) return cfg.oscillator.lambda2();
  if (cfg.coupled.is_symmetric_normalized()) return -cfg.coupled.a;
  return -cfg.coupled.lambda_plus();
}

}  // namespace

std::string to_string(ModelKind kind) {
  return kind == ModelKind::Oscillator ? "oscillator" : "coupled";
}

std::string to_string(Spacing spacing) {
  switch (spacing) {
    case Spacing::Linear: return "linear";
    case Spacing::Geometric: return "geometric";
    case Spacing::Composite: return "composite";
  }
  return "composite";
}

SweepSpec parse_sweep(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == text.size()) {
    config_error("sweep must look like name=v1,v2,... (got '" + text + "')");
  }
  SweepSpec spec;
  spec.name = text.substr(0, eq);
  std::istringstream values(text.substr(eq + 1));
  std::string item;
  while (std::getline(values, item, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      spec.values.push_back(v);
    } catch (const std::exception&) {
      config_error("sweep value '" + item + "' is not a number");
    }
  }
  if (spec.values.empty()) config_error("sweep has no values");
  return spec;
}

nlohmann::json load_config_file(const FlagValues& flags) {
  if (!flags.config) return nlohmann::json::object();
  std::ifstream in(*flags.config);
  if (!in) config_error("cannot open config file '" + *flags.config + "'");
  try {
    auto j = nlohmann::json::parse(in);
    if (!j.is_object()) config_error("config file must hold a JSON object");
    return j;
  } catch (const nlohmann::json::parse_error& e) {
    config_error("config file is not valid JSON: " + std::string(e.what()));
  }
}

RunConfig resolve_config(const FlagValues& flags, const nlohmann::json& file) {
  RunConfig cfg;
  if (auto m = pick(flags.model, file, "model")) {
    if (*m == "oscillator") {
      cfg.model = ModelKind::Oscillator;
    } else if (*m == "coupled") {
      cfg.model = ModelKind::Coupled;
    } else {
      config_error("model must be oscillator or coupled (got '" + *m + "')");
    }
  }

  auto& o = cfg.oscillator;
  if (auto v = pick_number(flags.gamma, file, "gamma")) o.gamma = *v;
  if (auto v = pick_number(flags.omega, file, "omega")) o.omega = *v;
  if (auto v = pick_number(flags.beta, file, "beta")) o.beta = *v;
  if (auto v = pick_number(flags.x0, file, "x0")) o.x0 = *v;
  if (auto v = pick_number(flags.v0, file, "v0")) o.v0 = *v;

  auto& c = cfg.coupled;
  if (auto v = pick_number(flags.a, file, "a")) c.a = *v;
  // d defaults to a (identical oscillators) unless given.
  c.d = c.a;
  if (auto v = pick_number(flags.d, file, "d")) c.d = *v;
  if (auto v = pick_number(flags.k, file, "k")) c.k = *v;
  if (auto v = pick_number(flags.x1, file, "x1")) c.x1 = *v;
  if (auto v = pick_number(flags.x2, file, "x2")) c.x2 = *v;
  if (auto v = pick_number(flags.sigma1, file, "sigma1")) c.sigma1 = *v;
  if (auto v = pick_number(flags.sigma2, file, "sigma2")) c.sigma2 = *v;
  if (auto v = pick_number(flags.k_max, file, "k_max")) cfg.k_max = *v;

  if (auto v = pick_number(flags.t_start, file, "t_start")) {
    cfg.grid.start = *v;
    cfg.grid_explicit = true;
  }
  if (auto v = pick_number(flags.t_end, file, "t_end")) {
    cfg.grid.end = *v;
    cfg.grid_explicit = true;
  }
  if (auto v = pick(flags.t_count, file, "t_count")) {
    cfg.grid.count = *v;
    cfg.grid_explicit = true;
  }
  if (auto v = pick(flags.t_spacing, file, "t_spacing")) {
    cfg.grid.spacing = parse_spacing(*v);
    cfg.grid_explicit = true;
  }

  if (flags.sweep) {
    cfg.sweep = parse_sweep(*flags.sweep);
  } else if (file.is_object() && file.contains("sweep") && !file.at("sweep").is_null()) {
    const auto& s = file.at("sweep");
    if (s.is_string()) {
      cfg.sweep = parse_sweep(s.get<std::string>());
    } else if (s.is_object() && s.contains("name") && s.contains("values")) {
      try {
        cfg.sweep = SweepSpec{s.at("name").get<std::string>(), s.at("values").get<std::vector<double>>()};
      } catch (const nlohmann::json::exception&) {
        config_error("config key 'sweep' must hold a name and numeric values");
      }
    } else {
      config_error("config key 'sweep' must be \"name=v1,...\" or {name, values}");
    }
  }

  if (auto v = pick_number(flags.dt, file, "dt")) cfg.sim.dt = *v;
  if (auto v = pick(flags.paths, file, "paths")) cfg.sim.paths = *v;
  if (auto v = pick(flags.steps, file, "steps")) cfg.sim.steps = *v;
  if (auto v = pick(flags.seed, file, "seed")) cfg.sim.seed = *v;

  if (auto v = pick(flags.out, file, "out")) cfg.out = *v;
  if (auto v = pick(flags.format, file, "format")) {
    if (*v == "csv") {
      cfg.format = OutputFormat::Csv;
    } else if (*v == "json") {
      cfg.format = OutputFormat::Json;
    } else {
      config_error("format must be csv or json (got '" + *v + "')");
    }
  }

  validate(cfg);
  return cfg;
}

RunConfig with_parameter(const RunConfig& cfg, const std::string& name, double value) {
  RunConfig out = cfg;
  auto& o = out.oscillator;
  auto& c = out.coupled;
  if (out.model == ModelKind::Oscillator) {
    if (name == "gamma") o.gamma = value;
    else if (name == "omega") o.omega = value;
    else if (name == "beta") o.beta = value;
    else if (name == "x0") o.x0 = value;
    else if (name == "v0") o.v0 = value;
    else config_error("unknown oscillator sweep parameter '" + name + "'");
  } else {
    if (name == "a") {
      // Sweeping a keeps the oscillators identical when they were.
      if (c.d == c.a) c.d = value;
      c.a = value;
    } else if (name == "d") c.d = value;
    else if (name == "k") c.k = value;
    else if (name == "x1") c.x1 = value;
    else if (name == "x2") c.x2 = value;
    else if (name == "sigma1") c.sigma1 = value;
    else if (name == "sigma2") c.sigma2 = value;
    else config_error("unknown coupled sweep parameter '" + name + "'");
  }
  return out;
}

void validate(const RunConfig& cfg) {
  auto check_one = [](const RunConfig& r) {
    if (r.model == ModelKind::Oscillator) {
      r.oscillator.validate();
    } else {
      r.coupled.validate();
      if (r.coupled.k > r.k_max) {
        config_error("coupling k exceeds k_max");
      }
    }
  };
  if (cfg.sweep) {
    for (double v : cfg.sweep->values) check_one(with_parameter(cfg, cfg.sweep->name, v));
  } else {
    check_one(cfg);
  }
  if (cfg.grid_explicit) {
    const auto& g = cfg.grid;
    if (!std::isfinite(g.start) || g.start < 0.0) config_error("t-start must be >= 0");
    if (g.end && (!std::isfinite(*g.end) || *g.end < g.start)) config_error("t-end must be >= t-start");
    if (g.count < 1) config_error("t-count must be positive");
  }
  if (!(cfg.sim.dt > 0.0) || !std::isfinite(cfg.sim.dt)) config_error("dt must be positive");
  if (cfg.sim.paths < 2) config_error("paths must be at least 2");
  if (cfg.sim.steps && *cfg.sim.steps < 1) config_error("steps must be positive");
}

nlohmann::json to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["model"] = to_string(cfg.model);
  auto number = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
  };
  if (cfg.model == ModelKind::Oscillator) {
    const auto& o = cfg.oscillator;
    j["gamma"] = o.gamma;
    j["omega"] = o.omega;
    j["beta"] = number(o.beta);
    j["x0"] = o.x0;
    j["v0"] = o.v0;
  } else {
    const auto& c = cfg.coupled;
    j["a"] = c.a;
    j["d"] = c.d;
    j["k"] = c.k;
    j["x1"] = c.x1;
    j["x2"] = c.x2;
    j["sigma1"] = c.sigma1;
    j["sigma2"] = c.sigma2;
    j["k_max"] = cfg.k_max;
  }
  if (cfg.grid_explicit) {
    j["t_start"] = cfg.grid.start;
    if (cfg.grid.end) j["t_end"] = *cfg.grid.end;
    j["t_count"] = cfg.grid.count;
    j["t_spacing"] = to_string(cfg.grid.spacing);
  }
  if (cfg.sweep) {
    j["sweep"] = {{"name", cfg.sweep->name}, {"values", cfg.sweep->values}};
  }
  j["dt"] = cfg.sim.dt;
  j["paths"] = cfg.sim.paths;
  if (cfg.sim.steps) j["steps"] = *cfg.sim.steps;
  j["seed"] = cfg.sim.seed;
  if (!cfg.out.empty()) j["out"] = cfg.out;
  j["format"] = cfg.format == OutputFormat::Csv ? "csv" : "json";
  return j;
}

std::vector<double> make_grid(const RunConfig& cfg) {
  const double rate = model_rate(cfg);
  if (!cfg.grid_explicit) return default_grid(rate);

  const auto& g = cfg.grid;
  const double start = g.start;
  const double end = g.end.value_or(20.0 / rate);
  const int n = g.count;
  std::vector<double> t;
  t.reserve(static_cast<std::size_t>(n));
  if (n == 1) return {start};

  auto linear = [&](double lo, double hi, int count, bool closed) {
    const int denom = closed ? count - 1 : count;
    for (int i = 0; i < count; ++i) {
      t.push_back(i == count - 1 && closed ? hi : lo + (hi - lo) * i / denom);
    }
  };
  // Geometric spacing needs a positive left end; from 0 it starts with 0
  // followed by points from end/1000.
  auto geometric = [&](double lo, double hi, int count) {
    if (count <= 0) return;
    if (lo <= 0.0) {
      t.push_back(0.0);
      --count;
      lo = hi * 1e-3;
      if (count <= 0) return;
    }
    if (count == 1) {
      t.push_back(hi);
      return;
    }
    const double ratio = std::pow(hi / lo, 1.0 / (count - 1));
    for (int i = 0; i < count; ++i) {
      t.push_back(i == count - 1 ? hi : lo * std::pow(ratio, i));
    }
  };

  switch (g.spacing) {
    case Spacing::Linear:
      linear(start, end, n, true);
      break;
    case Spacing::Geometric:
      geometric(start, end, n);
      break;
    case Spacing::Composite: {
      // Linear on the first tenth of the window, geometric afterwards.
      const double knee = start + (end - start) / 10.0;
      const int head = n / 2;
      linear(start, knee, head, false);
      geometric(knee, end, n - head);
      break;
    }
  }
  return t;
}

}  // namespace modred::cli
