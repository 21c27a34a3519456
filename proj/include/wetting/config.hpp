#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wetting/model.hpp"

namespace wetting {

struct RegionConfig {
  Region::Kind kind = Region::Kind::semi_box;
  int n = 1;
  int m = 2;
  Reflection reflection = Reflection::half_plane;
  friend bool operator==(const RegionConfig&, const RegionConfig&) = default;
};

struct ModelConfig {
  int d = 2;
  RegionConfig region;
  BoundaryCondition::Kind bc = BoundaryCondition::Kind::minus;
  CouplingSpec coupling = CouplingSpec::uniform(1.0);
  FieldSpec field = FieldSpec::zero();
  double beta = 1.0;
  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

struct RunConfig {
  std::uint64_t sweeps = 10000;
  std::uint64_t burn_in = 1000;
  std::uint64_t thin = 1;
  std::uint64_t seed = 1;
  int chains = 1;
  std::string update = "heat_bath";  // heat_bath | metropolis
  std::string order = "checkerboard";  // raster | checkerboard | random
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct OutputConfig {
  std::string dir = "wetting_out";
  std::vector<std::string> formats{"csv", "pgm"};
  friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

struct ToleranceConfig {
  double oracle = 1e-6;
  double slack = 1e-12;
  double sigmas = 4.0;
  friend bool operator==(const ToleranceConfig&, const ToleranceConfig&) = default;
};

struct ScanConfig {
  double delta = 2.0;
  double lambda_max = 1.0;
  double lambda_step = 0.1;
  std::vector<double> grid;  // overrides lambda_max / lambda_step when non-empty
  std::vector<int> ladder{4, 6};
  int depth = 4;
  double epsilon = 1e-3;
  std::string path = "decay";            // decay | wall
  std::string estimator = "exact";       // exact | mc
  std::string observable = "central_column";  // central_column | layer_average
  int gauss = 32;
  friend bool operator==(const ScanConfig&, const ScanConfig&) = default;
};

struct FiguresConfig {
  double lambda_high = 1.0;
  double lambda_low = 0.03;
  friend bool operator==(const FiguresConfig&, const FiguresConfig&) = default;
};

struct ExperimentConfig {
  std::string command;
  ModelConfig model;
  RunConfig run;
  OutputConfig output;
  ToleranceConfig tolerance;
  ScanConfig scan;
  FiguresConfig figures;
  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;

  /// The model block as an instance.
  ModelInstance instance() const;
  /// Lambda grid of the scan block.
  std::vector<double> lambda_grid() const;
};

/// Applies `text` on top of `base`. Throws ConfigError naming the line and key.
ExperimentConfig parse_config(const std::string& text, ExperimentConfig base = {});

/// Canonical text; parse_config(render_config(c)) == c.
std::string render_config(const ExperimentConfig& config);

/// Range checks across the whole config; `line` is reported in errors.
void validate_config(const ExperimentConfig& config, int line = 0);

std::string render_field(const FieldSpec& field);
FieldSpec parse_field(const std::string& text);
std::string render_coupling(const CouplingSpec& coupling);
CouplingSpec parse_coupling(const std::string& text);

/// Named starting points for the CLI.
ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

/// printf("%.17g").
std::string format_double(double x);

}  // namespace wetting
