#include "qpc/model_config.hpp"

#include "qpc/error.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace qpc {

namespace {

std::vector<double> parse_range(const nlohmann::json& j, const std::string& what) {
  if (j.is_array()) {
    std::vector<double> out;
    for (const auto& v : j) out.push_back(v.get<double>());
    return out;
  }
  require(j.is_object(), ErrorKind::parse, "sweep '" + what + "' must be a list or {from, to, count}");
  for (const char* key : {"from", "to", "count"})
    require(j.contains(key), ErrorKind::parse, "sweep '" + what + "' is missing '" + key + "'");
  const double a = j.at("from").get<double>(), b = j.at("to").get<double>();
  const int n = j.at("count").get<int>();
  const bool log = j.value("log", false);
  require(n >= 1 && n <= 100000, ErrorKind::parse, "sweep '" + what + "': count must lie in [1, 100000]");
  require(!log || (a > 0 && b > 0), ErrorKind::parse, "sweep '" + what + "': log sweep needs positive ends");
  std::vector<double> out;
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    out.push_back(log ? std::exp(std::log(a) + t * (std::log(b) - std::log(a))) : a + t * (b - a));
  }
  return out;
}

ModelConfig parse(const nlohmann::json& j) {
  require(j.is_object(), ErrorKind::parse, "model config must be a JSON object");
  static const std::set<std::string> known = {"schema_version", "kind",   "lambda",    "E",     "omega",
                                              "rho",            "d",      "blocks",    "sweep", "estimator",
                                              "radii",          "name",   "description"};
  for (const auto& [key, _] : j.items())
    require(known.count(key) > 0, ErrorKind::parse, "unknown config key '" + key + "'");
  require(j.contains("schema_version"), ErrorKind::parse, "config is missing schema_version");
  ModelConfig c;
  c.schema_version = j.at("schema_version").get<int>();
  require(c.schema_version == kModelSchemaVersion, ErrorKind::parse,
          "unsupported schema_version " + std::to_string(c.schema_version));
  require(j.contains("kind"), ErrorKind::parse, "config is missing kind");
  c.kind = cocycle_kind_from_string(j.at("kind").get<std::string>());
  c.lambda = j.value("lambda", 1.0);
  c.E = j.value("E", 0.0);
  if (j.contains("omega")) c.rot = Rotation(j.at("omega").get<double>());
  c.rho = j.value("rho", 0.5);
  require(c.rho > 0.0 && c.rho < 1.0, ErrorKind::parse, "rho must lie in (0, 1)");
  c.d = j.value("d", 1);

  require(j.contains("blocks") && j.at("blocks").is_object(), ErrorKind::parse, "config needs a 'blocks' object");
  const auto need = required_blocks(c.kind);
  for (const auto& [name, value] : j.at("blocks").items()) {
    require(std::find(need.begin(), need.end(), name) != need.end(), ErrorKind::parse,
            "block '" + name + "' is not used by kind " + std::string(to_string(c.kind)));
    // a bare scalar entry is a 1x1 block
    LaurentMatrixFunction f = value.is_number() || (value.is_object() && !value.contains("entries")) ||
                                      (value.is_array() && (value.empty() || !value.front().is_array()))
                                  ? LaurentMatrixFunction::scalar(value.get<LaurentScalar>())
                                  : value.get<LaurentMatrixFunction>();
    f.set_rho(c.rho);
    c.blocks.emplace(name, std::move(f));
  }
  for (const auto& name : need)
    require(c.blocks.count(name) > 0, ErrorKind::parse,
            "kind " + std::string(to_string(c.kind)) + " needs block '" + name + "'");

  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    require(s.is_object(), ErrorKind::parse, "sweep must be an object");
    for (const auto& [key, _] : s.items())
      require(key == "E" || key == "lambda", ErrorKind::parse, "unknown sweep key '" + key + "'");
    if (s.contains("E")) c.E_sweep = parse_range(s.at("E"), "E");
    if (s.contains("lambda")) c.lambda_sweep = parse_range(s.at("lambda"), "lambda");
  }
  if (j.contains("radii")) {
    const auto r = j.at("radii").get<std::vector<double>>();
    require(r.size() == 3 && 0 < r[0] && r[0] < r[1] && r[1] < r[2], ErrorKind::parse,
            "radii must be [r1, r, r2] with 0 < r1 < r < r2");
    c.radii = std::array<double, 3>{r[0], r[1], r[2]};
  }
  if (j.contains("estimator")) {
    c.estimator = j.at("estimator");
    require(c.estimator.is_object(), ErrorKind::parse, "estimator must be an object");
  }
  return c;
}

}  // namespace

const LaurentMatrixFunction& ModelConfig::block(const std::string& name) const {
  const auto it = blocks.find(name);
  require(it != blocks.end(), ErrorKind::invalid_input, "model has no block '" + name + "'");
  return it->second;
}

LaurentScalar ModelConfig::scalar_block(const std::string& name) const {
  const auto& b = block(name);
  require(b.rows() == 1 && b.cols() == 1, ErrorKind::dimension, "block '" + name + "' must be 1x1");
  return b.at(0, 0);
}

std::vector<std::string> required_blocks(CocycleKind kind) {
  switch (kind) {
    case CocycleKind::A_lambda: return {"V", "Wb", "Ws", "O"};
    case CocycleKind::A_lambda_E: return {"U", "V", "Wb", "Ws", "O"};
    case CocycleKind::schrodinger_1d: return {"v"};
    case CocycleKind::band_jacobi:
    case CocycleKind::adjugate_regularized:
    case CocycleKind::symplectic_weighted: return {"W", "R", "D"};
    case CocycleKind::scalar: return {"g"};
    case CocycleKind::general: return {"A"};
  }
  return {};
}

ModelConfig parse_model_config(const nlohmann::json& j) {
  try {
    return parse(j);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::parse, std::string("model config: ") + e.what());
  }
}

ModelConfig load_model_config(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::invalid_input, "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::parse, "config '" + path + "': " + e.what());
  }
  return parse_model_config(j);
}

BlockCocycle build_model(const ModelConfig& c, double lambda, double E) {
  switch (c.kind) {
    case CocycleKind::A_lambda:
      return build_A_lambda(c.block("V"), c.block("Wb"), c.block("Ws"), c.block("O"), lambda, c.rot);
    case CocycleKind::A_lambda_E:
      return build_A_lambda_E(c.block("U"), c.block("V"), c.block("Wb"), c.block("Ws"), c.block("O"), lambda, E,
                              c.rot);
    case CocycleKind::schrodinger_1d: return build_schrodinger_1d(c.scalar_block("v"), lambda, E, c.rot);
    case CocycleKind::band_jacobi: return build_band_jacobi(c.block("W"), c.block("R"), c.block("D"), lambda, E, c.rot);
    case CocycleKind::adjugate_regularized:
      return build_adjugate_regularized(c.block("W"), c.block("R"), c.block("D"), lambda, E, c.rot);
    case CocycleKind::symplectic_weighted:
      return build_symplectic_weighted(c.block("W"), c.block("R"), c.block("D"), lambda, E, c.rot);
    case CocycleKind::scalar: return build_scalar(c.scalar_block("g"), c.rot);
    case CocycleKind::general: return build_general(c.block("A"), c.d, c.rot);
  }
  fail(ErrorKind::invalid_input, "unknown cocycle kind");
}

}  // namespace qpc
