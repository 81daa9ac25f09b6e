#pragma once

// Versioned JSON model description shared by the CLI and the Python module.

#include "qpc/cocycle.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qpc {

inline constexpr int kModelSchemaVersion = 1;

struct ModelConfig {
  int schema_version = kModelSchemaVersion;
  CocycleKind kind = CocycleKind::general;
  double lambda = 1.0;
  // Band models and schrodinger_1d take E in operator units; A_lambda_E
  // takes it in the units of V.
  double E = 0.0;
  Rotation rot;
  double rho = 0.5;
  int d = 1;  // corner size, general kind only
  std::map<std::string, LaurentMatrixFunction> blocks;
  std::vector<double> E_sweep;
  std::vector<double> lambda_sweep;
  std::optional<std::array<double, 3>> radii;
  nlohmann::json estimator = nlohmann::json::object();

  const LaurentMatrixFunction& block(const std::string& name) const;
  LaurentScalar scalar_block(const std::string& name) const;
};

std::vector<std::string> required_blocks(CocycleKind kind);

/// Throws ErrorKind::parse on malformed or unknown content.
ModelConfig parse_model_config(const nlohmann::json& j);
ModelConfig load_model_config(const std::string& path);

BlockCocycle build_model(const ModelConfig& c, double lambda, double E);
inline BlockCocycle build_model(const ModelConfig& c) { return build_model(c, c.lambda, c.E); }

}  // namespace qpc
