#include "svg.hpp"

#include "qpc/qpc.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <thread>

namespace {

using namespace qpc;
using nlohmann::json;
namespace fs = std::filesystem;

// Exit codes; README has the table.
enum Exit : int {
  kOk = 0,
  kCheckFailed = 1,
  kUsage = 2,
  kIo = 14,
  kInternal = 15,
};

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::parse: return 3;
    case ErrorKind::invalid_input: return 4;
    case ErrorKind::dimension: return 5;
    case ErrorKind::domain: return 6;
    case ErrorKind::boundary_degenerate: return 7;
    case ErrorKind::transversality_violation: return 8;
    case ErrorKind::singular_phase: return 9;
    case ErrorKind::precondition: return 10;
    case ErrorKind::parameter: return 11;
    case ErrorKind::compound_overflow: return 12;
    case ErrorKind::no_good_circle: return 13;
  }
  return kInternal;
}

struct Options {
  std::string command;
  std::string config;
  std::string out = ".";
  std::optional<int> n;
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  std::optional<double> rho;
  std::optional<double> delta;
  bool svg = false;
  int threads = 0;
  bool force = false;
  int scan = 64;
  // growth-test
  int instances = 1000;
  double lambda = 10.0;
  double B = 1.0;
  int steps = 20;
  int max_d = 3;
  int max_m = 6;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

int threads_of(const Options& o) {
  return o.threads > 0 ? o.threads : std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
}

void write_file(const Options& o, const std::string& name, const std::string& text) {
  fs::create_directories(o.out);
  const fs::path p = fs::path(o.out) / name;
  std::ofstream f(p, std::ios::binary);
  require(static_cast<bool>(f), ErrorKind::invalid_input, "cannot write '" + p.string() + "'");
  f << text;
}

void write_json(const Options& o, const std::string& name, const json& j) { write_file(o, name, j.dump(2) + "\n"); }

void write_svg(const Options& o, const std::string& name, const svg::Plot& p) {
  fs::create_directories(o.out);
  p.write((fs::path(o.out) / name).string());
}

ModelConfig load(const Options& o) {
  require(!o.config.empty(), ErrorKind::invalid_input, o.command + " needs --config");
  require(fs::exists(o.config), ErrorKind::invalid_input, "config file '" + o.config + "' does not exist");
  ModelConfig c = load_model_config(o.config);
  if (o.rho) {
    require(*o.rho > 0.0 && *o.rho < 1.0, ErrorKind::parameter, "--rho must lie in (0, 1)");
    c.rho = *o.rho;
    for (auto& [_, b] : c.blocks) b.set_rho(c.rho);
  }
  return c;
}

EstimatorConfig estimator(const Options& o, const ModelConfig& c) {
  EstimatorConfig e;
  e.n = c.estimator.value("n", e.n);
  e.samples = c.estimator.value("samples", e.samples);
  e.seed = c.estimator.value("seed", e.seed);
  if (o.n) e.n = *o.n;
  if (o.samples) e.samples = *o.samples;
  if (o.seed) e.seed = *o.seed;
  require(e.n >= 100 && e.n <= 100000000, ErrorKind::parameter, "n must lie in [100, 1e8]");
  require(e.samples >= 1 && e.samples <= 4096, ErrorKind::parameter, "samples must lie in [1, 4096]");
  e.threads = threads_of(o);
  return e;
}

double delta_of(const Options& o, double rho) {
  const double d = o.delta.value_or(default_delta(rho));
  require(d > 0.0 && d < max_delta(rho), ErrorKind::parameter,
          "--delta must lie in (0, " + fmt(max_delta(rho)) + ") for rho = " + fmt(rho));
  return d;
}

int corner_size(const ModelConfig& c) {
  switch (c.kind) {
    case CocycleKind::A_lambda: return c.block("V").rows();
    case CocycleKind::A_lambda_E: return c.block("V").rows();
    case CocycleKind::band_jacobi:
    case CocycleKind::adjugate_regularized:
    case CocycleKind::symplectic_weighted: return c.block("W").rows();
    case CocycleKind::general: return c.d;
    default: return 1;
  }
}

// The pieces of A_lambda_E (in the units of V) that a model reduces to.
struct CornerModel {
  LaurentMatrixFunction U, V, Wb, Ws, O;
  bool band = false;
};

std::optional<CornerModel> corner_model(const ModelConfig& c) {
  switch (c.kind) {
    case CocycleKind::A_lambda_E:
      return CornerModel{c.block("U"), c.block("V"), c.block("Wb"), c.block("Ws"), c.block("O")};
    case CocycleKind::schrodinger_1d:
      return CornerModel{LaurentMatrixFunction::identity(1, c.rho), c.block("v"),
                         LaurentMatrixFunction::constant(Matrix::Constant(1, 1, -1.0), c.rho),
                         LaurentMatrixFunction::identity(1, c.rho), LaurentMatrixFunction::zero(1, 1, c.rho)};
    case CocycleKind::band_jacobi:
    case CocycleKind::adjugate_regularized:
    case CocycleKind::symplectic_weighted: {
      CornerModel m;
      m.band = true;
      return m;
    }
    default: return std::nullopt;
  }
}

LaurentScalar band_det_U(const ModelConfig& c) {
  const auto& W = c.block("W");
  const LaurentScalar g = W.det().shifted(c.rot.omega());
  LaurentScalar out = LaurentScalar::constant(1.0);
  for (int i = 0; i < W.rows() - 1; ++i) out = out * g;
  return out;
}

ModelMeasurements measure_model(const ModelConfig& c, const CornerModel& m, double R, int threads) {
  if (m.band)
    return measure_band_model(c.block("W"), c.block("R"), c.block("D"), c.lambda, c.rho, R, c.rot, 2001, threads);
  return measure_A_lambda_E(m.U, m.V, m.Wb, m.Ws, m.O, c.rho, R, 2001, threads);
}

svg::Plot zero_map(const std::string& title, const LaurentScalar& f, double rho, const std::vector<double>& extra) {
  svg::Plot p;
  p.title = title;
  p.xlabel = "Re z";
  p.ylabel = "Im z";
  p.equal_aspect = true;
  p.circles = {1.0 - rho, 1.0, 1.0 + rho};
  p.circles.insert(p.circles.end(), extra.begin(), extra.end());
  svg::Series s;
  s.label = "zeros";
  s.points = true;
  for (const auto& z : zeros_in_annulus(f, rho).zeros) {
    s.x.push_back(z.location.real());
    s.y.push_back(z.location.imag());
  }
  p.series.push_back(s);
  return p;
}

int cmd_measure(const Options& o) {
  const auto c = load(o);
  const double R = certified_outer_radius(c.rho);
  const double delta = delta_of(o, c.rho);
  const int threads = threads_of(o);
  json out = {{"schema_version", 1}, {"command", "measure"}, {"kind", to_string(c.kind)},
              {"rho", c.rho},        {"R", R},               {"delta", delta}};

  LaurentScalar focus;
  if (const auto m = corner_model(c)) {
    const auto mm = measure_model(c, *m, R, threads);
    focus = m->band ? band_det_U(c) : m->U.det();
    const int d = corner_size(c);
    out["lambda"] = c.lambda;
    out["d"] = d;
    out["B"] = mm.B;
    out["det_U"] = measure_N_beta(focus, c.rho, R);
    out["hat"] = mm.hat;
    const auto tb = theorem_bounds(mm.meas, mm.B, d, c.rho, delta);
    out["thresholds"] = {{"bounded_E", tb.bounded}, {"large_E", tb.large}};
  } else {
    switch (c.kind) {
      case CocycleKind::A_lambda: focus = c.block("V").det(); break;
      case CocycleKind::scalar: focus = c.scalar_block("g"); break;
      default: focus = c.block("A").det(); break;
    }
    out["det"] = measure_N_beta(focus, c.rho, R);
  }
  const auto gc = find_good_circle(focus, delta, delta, c.rho);
  out["good_circle"] = gc;
  write_json(o, "measure.json", out);
  if (o.svg) write_svg(o, "measure.svg", zero_map("zeros on the annulus", focus, c.rho, {1.0 + gc.y0}));
  return kOk;
}

int cmd_lyapunov(const Options& o) {
  const auto c = load(o);
  const auto cfg = estimator(o, c);
  const std::vector<double> Es = c.E_sweep.empty() ? std::vector<double>{c.E} : c.E_sweep;
  const std::vector<double> lambdas = c.lambda_sweep.empty() ? std::vector<double>{c.lambda} : c.lambda_sweep;

  std::string csv = "lambda,E,k,L,spread\n";
  json points = json::array();
  std::vector<std::vector<double>> L;  // per point
  for (double lambda : lambdas)
    for (double E : Es) {
      const auto s = spectrum_qr(build_model(c, lambda, E), cfg);
      for (std::size_t k = 0; k < s.exponents.size(); ++k)
        csv += fmt(lambda) + "," + fmt(E) + "," + std::to_string(k + 1) + "," + fmt(s.exponents[k]) + "," +
               fmt(s.spread[k]) + "\n";
      points.push_back({{"lambda", lambda}, {"E", E}, {"spectrum", s}});
      L.push_back(s.exponents);
    }
  write_file(o, "lyapunov.csv", csv);
  write_json(o, "lyapunov.json", {{"schema_version", 1}, {"command", "lyapunov"}, {"kind", to_string(c.kind)},
                                  {"points", points}});

  if (o.svg) {
    svg::Plot p;
    const std::size_t m = L.front().size();
    if (Es.size() == 1 && lambdas.size() > 1) {
      p.title = "L(k) - log lambda at E = " + fmt(Es.front());
      p.xlabel = "log10 lambda";
      p.ylabel = "L(k) - log lambda";
      for (std::size_t k = 0; k < m; ++k) {
        svg::Series s;
        s.label = "k = " + std::to_string(k + 1);
        for (std::size_t i = 0; i < lambdas.size(); ++i) {
          s.x.push_back(std::log10(lambdas[i]));
          s.y.push_back(L[i][k] - std::log(lambdas[i]));
        }
        p.series.push_back(s);
      }
    } else {
      p.title = "Lyapunov exponents";
      p.xlabel = "E";
      p.ylabel = "L(k)";
      for (std::size_t l = 0; l < lambdas.size(); ++l)
        for (std::size_t k = 0; k < m; ++k) {
          svg::Series s;
          s.label = "k = " + std::to_string(k + 1) + (lambdas.size() > 1 ? ", lambda = " + fmt(lambdas[l]) : "");
          for (std::size_t i = 0; i < Es.size(); ++i) {
            s.x.push_back(Es[i]);
            s.y.push_back(L[l * Es.size() + i][k]);
          }
          p.series.push_back(s);
        }
    }
    write_svg(o, "lyapunov.svg", p);
  }
  return kOk;
}

int cmd_verify(const Options& o) {
  const auto c = load(o);
  const auto m = corner_model(c);
  require(m.has_value(), ErrorKind::invalid_input,
          "verify needs a model of kind A_lambda_E, schrodinger_1d or a band kind, got " +
              std::string(to_string(c.kind)));
  const auto cfg = estimator(o, c);
  const double R = certified_outer_radius(c.rho);
  const double delta = delta_of(o, c.rho);
  const int d = corner_size(c);
  const auto mm = measure_model(c, *m, R, cfg.threads);
  const auto tb = theorem_bounds(mm.meas, mm.B, d, c.rho, delta);

  const double lambda = c.lambda;
  CocycleFamily family;
  if (m->band) {
    // adjugate form; the estimator sees energies lambda e
    family = [&](double e) { return build_adjugate_regularized(c.block("W"), c.block("R"), c.block("D"), lambda,
                                                               lambda * e, c.rot); };
  } else if (c.kind == CocycleKind::schrodinger_1d) {
    family = [&](double e) { return build_schrodinger_1d(c.scalar_block("v"), lambda, lambda * e, c.rot); };
  } else {
    family = [&](double e) { return build_A_lambda_E(m->U, m->V, m->Wb, m->Ws, m->O, lambda, e, c.rot); };
  }
  const auto E = theorem_E_grid(mm.B);
  const auto rep = verify_theorem(family, tb, lambda, E, cfg, !o.force);

  json out = {{"schema_version", 1},
              {"command", "verify"},
              {"kind", to_string(c.kind)},
              {"energy_units", m->band || c.kind == CocycleKind::schrodinger_1d ? "E / lambda" : "E"},
              {"measurements",
               {{"N1", mm.meas.N1}, {"N2", mm.meas.N2}, {"beta1", mm.meas.beta1}, {"beta2", mm.meas.beta2},
                {"B", mm.B}}},
              {"bounds", {{"bounded_E", tb.bounded}, {"large_E", tb.large}}},
              {"estimator", {{"n", cfg.n}, {"samples", cfg.samples}, {"seed", cfg.seed}}},
              {"report", rep}};
  write_json(o, "verify.json", out);
  write_file(o, "verify.csv", theorem_csv(rep));
  if (o.svg) {
    svg::Plot p;
    p.title = "estimates against certified bounds, lambda = " + fmt(lambda);
    p.xlabel = "E";
    p.ylabel = "L(k)";
    for (int k = 1; k <= d; ++k) {
      svg::Series est, bnd;
      est.label = "L(" + std::to_string(k) + ")";
      bnd.label = "bound k = " + std::to_string(k);
      for (const auto& r : rep.rows)
        if (r.k == k) {
          est.x.push_back(r.E);
          est.y.push_back(r.estimate);
          bnd.x.push_back(r.E);
          bnd.y.push_back(r.bound);
        }
      p.series.push_back(est);
      p.series.push_back(bnd);
    }
    write_svg(o, "verify.svg", p);
  }
  return rep.all_pass ? kOk : kCheckFailed;
}

int cmd_genericity(const Options& o) {
  const auto c = load(o);
  std::string name;
  switch (c.kind) {
    case CocycleKind::A_lambda:
    case CocycleKind::A_lambda_E: name = "V"; break;
    case CocycleKind::band_jacobi:
    case CocycleKind::adjugate_regularized:
    case CocycleKind::symplectic_weighted: name = "D"; break;
    case CocycleKind::schrodinger_1d: name = "v"; break;
    default: fail(ErrorKind::invalid_input, "genericity needs a potential block, kind " +
                                                std::string(to_string(c.kind)) + " has none");
  }
  require(o.scan >= 1 && o.scan <= 100000, ErrorKind::parameter, "--scan must lie in [1, 100000]");
  const auto cert = has_no_constant_eigenvalues(c.block(name), o.scan, threads_of(o));
  json out = {{"schema_version", 1}, {"command", "genericity"}, {"kind", to_string(c.kind)}, {"block", name}};
  out.update(json(cert));
  write_json(o, "genericity.json", out);
  return kOk;
}

int cmd_growth(const Options& o) {
  require(o.instances >= 1 && o.instances <= 1000000, ErrorKind::parameter, "--instances must lie in [1, 1e6]");
  require(o.max_d >= 1 && o.max_m >= o.max_d && o.max_m <= 12, ErrorKind::parameter,
          "need 1 <= max-d <= max-m <= 12");
  require(o.steps >= 1 && o.steps <= 10000, ErrorKind::parameter, "--steps must lie in [1, 10000]");
  std::mt19937_64 gen(o.seed.value_or(1));
  std::string csv = "instance,d,m,k,bound,measured,max_step_ratio,pass\n";
  json rows = json::array();
  bool all = true;
  for (int i = 0; i < o.instances; ++i) {
    const int d = std::uniform_int_distribution<int>(1, o.max_d)(gen);
    const int m = std::uniform_int_distribution<int>(d, o.max_m)(gen);
    const int k = std::uniform_int_distribution<int>(1, d)(gen);
    const auto h = random_growth_hypothesis(gen, o.lambda, o.B, o.steps, d, m);
    const auto g = verify_growth(h, k);
    const bool pass = g.pass && g.step_invariant;
    all = all && pass;
    csv += std::to_string(i) + "," + std::to_string(d) + "," + std::to_string(m) + "," + std::to_string(k) + "," +
           fmt(g.bound) + "," + fmt(g.measured) + "," + fmt(g.max_step_ratio) + "," + (pass ? "true" : "false") +
           "\n";
    json r = g;
    r["instance"] = i;
    r["d"] = d;
    r["m"] = m;
    r["k"] = k;
    rows.push_back(r);
  }
  write_file(o, "growth.csv", csv);
  write_json(o, "growth.json", {{"schema_version", 1},
                                {"command", "growth-test"},
                                {"lambda", o.lambda},
                                {"B", o.B},
                                {"steps", o.steps},
                                {"seed", o.seed.value_or(1)},
                                {"all_pass", all},
                                {"instances", rows}});
  return all ? kOk : kCheckFailed;
}

int cmd_convexity(const Options& o) {
  const auto c = load(o);
  const auto radii = c.radii.value_or(std::array<double, 3>{1.0 - c.rho / 2, 1.0, 1.0 + c.rho / 2});
  const int n = o.n.value_or(500);
  require(n >= 1 && n <= 1000000, ErrorKind::parameter, "--n must lie in [1, 1e6] for convexity-test");
  const int angles = 512;
  const auto cocycle = build_model(c);
  json checks = json::array();
  bool all = true;
  for (int k = 1; k <= cocycle.m(); ++k) {
    const auto r = circle_convexity_check(cocycle, k, n, radii[0], radii[1], radii[2], angles, threads_of(o));
    const bool pass = r.residual >= -1e-6;
    all = all && pass;
    checks.push_back({{"k", k},
                      {"alpha", r.alpha},
                      {"m1", r.m1},
                      {"m", r.m},
                      {"m2", r.m2},
                      {"residual", r.residual},
                      {"pass", pass}});
  }
  write_json(o, "convexity.json", {{"schema_version", 1},
                                   {"command", "convexity-test"},
                                   {"kind", to_string(c.kind)},
                                   {"radii", radii},
                                   {"n", n},
                                   {"angles", angles},
                                   {"tolerance", -1e-6},
                                   {"all_pass", all},
                                   {"checks", checks}});
  return all ? kOk : kCheckFailed;
}

void diagnose(const std::string& command, const std::string& kind, const std::string& message, int code) {
  std::cerr << json{{"error", {{"command", command}, {"kind", kind}, {"message", message}, {"exit_code", code}}}}.dump()
            << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qpc: Lyapunov exponents and certified lower bounds for analytic quasi-periodic cocycles"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool needs_config) {
    auto* cfg = sub->add_option("--config", o.config, "model config (JSON)");
    if (needs_config) cfg->required();
    sub->add_option("--out", o.out, "output directory")->capture_default_str();
    sub->add_option("--n", o.n, "orbit length");
    sub->add_option("--samples", o.samples, "number of phase samples");
    sub->add_option("--seed", o.seed, "RNG seed");
    sub->add_option("--rho", o.rho, "annulus half-width");
    sub->add_option("--delta", o.delta, "good-circle parameter");
    sub->add_flag("--svg", o.svg, "also write SVG plots");
    sub->add_option("--threads", o.threads, "worker threads (0 = all cores)");
  };
  auto* measure = app.add_subcommand("measure", "zero counts, minimum moduli, good circle, thresholds");
  common(measure, true);
  auto* lyap = app.add_subcommand("lyapunov", "Lyapunov spectrum over the configured (lambda, E) points");
  common(lyap, true);
  auto* verify = app.add_subcommand("verify", "check estimated exponents against certified lower bounds");
  common(verify, true);
  verify->add_flag("--force", o.force, "run below the certified lambda threshold");
  auto* gen = app.add_subcommand("genericity", "certify that the potential has no constant eigenvalue");
  common(gen, true);
  gen->add_option("--scan", o.scan, "number of scanned phases")->capture_default_str();
  auto* growth = app.add_subcommand("growth-test", "random instances of the block growth inequality");
  common(growth, false);
  growth->add_option("--instances", o.instances)->capture_default_str();
  growth->add_option("--lambda", o.lambda)->capture_default_str();
  growth->add_option("--B", o.B)->capture_default_str();
  growth->add_option("--steps", o.steps, "product length")->capture_default_str();
  growth->add_option("--max-d", o.max_d)->capture_default_str();
  growth->add_option("--max-m", o.max_m)->capture_default_str();
  auto* conv = app.add_subcommand("convexity-test", "log-convexity of circle means of log norms");
  common(conv, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    diagnose("", "usage", e.what(), kUsage);
    return kUsage;
  }
  o.command = app.get_subcommands().front()->get_name();

  try {
    if (o.threads < 0 || o.threads > 1024) fail(ErrorKind::parameter, "--threads must lie in [0, 1024]");
    if (o.command == "measure") return cmd_measure(o);
    if (o.command == "lyapunov") return cmd_lyapunov(o);
    if (o.command == "verify") return cmd_verify(o);
    if (o.command == "genericity") return cmd_genericity(o);
    if (o.command == "growth-test") return cmd_growth(o);
    return cmd_convexity(o);
  } catch (const Error& e) {
    const int code = exit_code(e.kind());
    diagnose(o.command, std::string(to_string(e.kind())), e.what(), code);
    return code;
  } catch (const fs::filesystem_error& e) {
    diagnose(o.command, "io", e.what(), kIo);
    return kIo;
  } catch (const std::exception& e) {
    diagnose(o.command, "internal", e.what(), kInternal);
    return kInternal;
  }
}
