#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "modred/bounds.hpp"
#include "modred/reduction.hpp"

namespace modred::cli {

enum class ModelKind { Oscillator, Coupled };
enum class Spacing { Linear, Geometric, Composite };
enum class OutputFormat { Csv, Json };

/// Time grid. With no explicit end the model's default 60-point grid is used.
struct GridSpec {
  double start = 0.0;
  std::optional<double> end;
  int count = 60;
  Spacing spacing = Spacing::Composite;
};

struct SweepSpec {
  std::string name;
  std::vector<double> values;
};

struct SimSpec {
  double dt = 1e-3;
  std::int64_t paths = 100000;
  std::optional<std::int64_t> steps;
  std::uint64_t seed = 20240607;
};

struct RunConfig {
  ModelKind model = ModelKind::Oscillator;
  OscillatorParams oscillator;
  CoupledParams coupled{-1.0, -1.0, 1.0, 1.0, 1.0, 1.0, 0.0};
  GridSpec grid;
  bool grid_explicit = false;
  std::optional<SweepSpec> sweep;
  SimSpec sim;
  std::string out;
  OutputFormat format = OutputFormat::Csv;
  double k_max = kDefaultMaxCoupling;
};

/// Values given on the command line; unset fields fall back to the config
/// file, then to RunConfig defaults.
struct FlagValues {
  std::optional<std::string> config;
  std::optional<std::string> model;
  std::optional<double> gamma, omega, beta, x0, v0;
  std::optional<double> a, d, k, x1, x2, sigma1, sigma2, k_max;
  std::optional<double> t_start, t_end;
  std::optional<int> t_count;
  std::optional<std::string> t_spacing;
  std::optional<std::string> sweep;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<std::int64_t> paths, steps;
  std::optional<std::string> out, format;
};

/// Parses "name=v1,v2,...". Throws modred::Error(InvalidParams).
SweepSpec parse_sweep(const std::string& text);

/// Merges file values (flat JSON object keyed like the long flags with
/// underscores) and flags; flags win. Validates the target model.
RunConfig resolve_config(const FlagValues& flags, const nlohmann::json& file);

/// Reads and parses the JSON config file named by flags.config, if any.
nlohmann::json load_config_file(const FlagValues& flags);

/// Copy of cfg with one named parameter replaced.
RunConfig with_parameter(const RunConfig& cfg, const std::string& name, double value);

/// Validates model parameters (and every sweep value individually).
void validate(const RunConfig& cfg);

/// The effective configuration, as written to the provenance sidecar.
nlohmann::json to_json(const RunConfig& cfg);

/// Grid for a parameter set: explicit spec or the model default.
std::vector<double> make_grid(const RunConfig& cfg);

std::string to_string(ModelKind kind);
std::string to_string(Spacing spacing);

}  // namespace modred::cli
