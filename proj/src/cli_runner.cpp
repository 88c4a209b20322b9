#include "tcsde/cli_runner.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tcsde/convergence.hpp"
#include "tcsde/models.hpp"
#include "tcsde/noise.hpp"
#include "tcsde/report_io.hpp"
#include "tcsde/rng.hpp"
#include "tcsde/schemes.hpp"
#include "tcsde/subordinator.hpp"

namespace tcsde {

namespace {

using ordered_json = nlohmann::ordered_json;

// Distinct sub-seeds for the validators bundled in one `validate` run.
constexpr std::uint64_t kMomentSalt = 0x4D31;
constexpr std::uint64_t kBoundSalt = 0x4D32;
constexpr std::uint64_t kIncrementSalt = 0x4D33;

const std::vector<std::string> kCommonKeys = {"alpha",   "delta",   "horizon",
                                              "seed",    "workers", "out_dir"};
const std::vector<std::string> kModelKeys = {
    "theta",       "model",       "model.a",     "model.sigma", "model.gamma",
    "model.mu",    "model.x0",    "jump.family", "jump.lambda", "jump.c",
    "jump.mass",   "jump.atom",   "mod.f_eta",   "mod.f_scale", "mod.f_shape",
    "mod.f_k0",    "mod.g_eta",   "mod.g_scale", "mod.g_shape", "mod.g_k0",
    "mod.h_eta",   "mod.h_scale", "mod.h_shape", "mod.h_k0"};

std::vector<std::string> known_keys_for(const std::string& command) {
  std::vector<std::string> keys = kCommonKeys;
  auto add = [&keys](const std::vector<std::string>& more) {
    keys.insert(keys.end(), more.begin(), more.end());
  };
  if (command == "validate" || command == "converge" || command == "audit")
    add(kModelKeys);
  if (command == "validate")
    add({"n_paths", "validate.t_list", "validate.p_list", "validate.oracle_scale",
         "validate.bound_t", "validate.t0", "validate.lags"});
  if (command == "converge")
    add({"n_paths", "ladder.delta_fine", "ladder.n_levels", "ladder.ref_delta"});
  if (command == "audit") add({"audit.radius", "audit.n_samples", "audit.slack"});
  return keys;
}

Config defaults_for(const std::string& command) {
  Config cfg;
  cfg.set("alpha", "0.8");
  cfg.set("delta", "0.01");
  cfg.set("horizon", "1");
  cfg.set("seed", "12345");
  cfg.set("workers", "0");
  cfg.set("out_dir", ".");
  if (command == "validate" || command == "converge" || command == "audit") {
    cfg.set("theta", "1");
    cfg.set("model", "linear");
    cfg.set("model.a", "-1");
    cfg.set("model.sigma", "0.5");
    cfg.set("model.gamma", "0.2");
    cfg.set("model.mu", "1");
    cfg.set("model.x0", "1");
    cfg.set("jump.family", "uniform");
    cfg.set("jump.lambda", "1");
    cfg.set("jump.c", "0.5");
    cfg.set("jump.mass", "1");
    cfg.set("jump.atom", "0.25");
  }
  if (command == "validate") {
    cfg.set("n_paths", "10000");
    cfg.set("validate.t_list", "0.5,1");
    cfg.set("validate.p_list", "1,2");
    cfg.set("validate.oracle_scale", "1");
    cfg.set("validate.bound_t", "1");
    cfg.set("validate.t0", "0.25");
    cfg.set("validate.lags", "0.25,0.125,0.0625,0.03125,0.015625");
  }
  if (command == "converge") {
    cfg.set("n_paths", "5000");
    cfg.set("ladder.delta_fine", "0.00390625");
    cfg.set("ladder.n_levels", "5");
    cfg.set("ladder.ref_delta", "0.0009765625");
  }
  if (command == "audit") {
    cfg.set("audit.radius", "5");
    cfg.set("audit.n_samples", "20000");
    cfg.set("audit.slack", "0");
  }
  return cfg;
}

JumpMeasureSpec jump_from(const Config& cfg) {
  const std::string family = cfg.get_string("jump.family", "uniform");
  if (family == "none") return no_jumps();
  const double lambda = cfg.get_double("jump.lambda", 1.0);
  const double c = cfg.get_double("jump.c", 0.5);
  const double mass = cfg.get_double("jump.mass", 1.0);
  if (family == "uniform") return uniform_jumps(lambda, c, mass);
  if (family == "two_point")
    return two_point_jumps(lambda, c, mass, cfg.get_double("jump.atom", 0.25));
  throw std::invalid_argument("config key 'jump.family': '" + family +
                              "' is not one of none, uniform, two_point");
}

CoefficientModel model_from(const Config& cfg, double horizon) {
  const JumpMeasureSpec jump = jump_from(cfg);
  const std::string name = cfg.get_string("model", "linear");
  CoefficientModel base;
  if (name == "linear") {
    base = builtin_linear(cfg.get_double("model.a", -1.0),
                          cfg.get_double("model.sigma", 0.5),
                          cfg.get_double("model.gamma", 0.2), jump,
                          cfg.get_double("model.x0", 1.0));
  } else if (name == "cubic") {
    base = builtin_cubic(cfg.get_double("model.mu", 1.0),
                         cfg.get_double("model.sigma", 0.5),
                         cfg.get_double("model.gamma", 0.2), jump,
                         cfg.get_double("model.x0", 1.0));
  } else {
    throw std::invalid_argument("config key 'model': '" + name +
                                "' is not one of linear, cubic");
  }
  const bool modulated = cfg.contains("mod.f_eta") || cfg.contains("mod.g_eta") ||
                         cfg.contains("mod.h_eta");
  if (!modulated) return base;
  auto envelope_for = [&](const char* eta_key, const char* scale_key,
                          const char* shape_key, const char* k0_key) {
    if (!cfg.contains(eta_key)) return constant_envelope();
    const double eta = cfg.get_double(eta_key, 1.0);
    const double scale = cfg.get_double(scale_key, 1.0);
    const std::string shape = cfg.get_string(shape_key, "power");
    if (shape == "power") return power_envelope(eta, horizon, scale);
    if (shape == "osc")
      return oscillatory_envelope(eta, scale, 18,
                                  static_cast<int>(cfg.get_long(k0_key, 0)));
    throw std::invalid_argument(std::string("config key '") + shape_key + "': '" + shape +
                                "' is not one of power, osc");
  };
  return time_modulated(
      base, envelope_for("mod.f_eta", "mod.f_scale", "mod.f_shape", "mod.f_k0"),
      envelope_for("mod.g_eta", "mod.g_scale", "mod.g_shape", "mod.g_k0"),
      envelope_for("mod.h_eta", "mod.h_scale", "mod.h_shape", "mod.h_k0"), horizon);
}

int workers_from(const Config& cfg) {
  const long w = cfg.get_long("workers", 0);
  if (w < 0) throw std::invalid_argument("config key 'workers': must be >= 0");
  return static_cast<int>(w);
}

long paths_from(const Config& cfg) {
  const long n = cfg.get_long("n_paths", 1);
  if (n < 1) throw std::invalid_argument("config key 'n_paths': must be >= 1");
  return n;
}

std::string out_file(const Config& cfg, const std::string& name) {
  const std::filesystem::path dir(cfg.get_string("out_dir", "."));
  return (dir / name).string();
}

ordered_json config_echo(const Config& cfg) {
  ordered_json echo = ordered_json::object();
  for (const auto& [key, value] : cfg.entries()) {
    // Execution plumbing is excluded: reports must not depend on where they
    // were written or how many workers produced them.
    if (key == "workers" || key == "out_dir") continue;
    echo[key] = value;
  }
  return echo;
}

ordered_json report_header(const std::string& command, const Config& cfg) {
  ordered_json doc = ordered_json::object();
  doc["schema_version"] = 1;
  doc["timestamp"] = utc_timestamp();
  doc["command"] = command;
  doc["config"] = config_echo(cfg);
  return doc;
}

int cmd_sample(const Config& cfg) {
  StableSpec spec;
  spec.alpha = cfg.get_double("alpha", 0.8);
  spec.delta = cfg.get_double("delta", 0.01);
  spec.horizon = cfg.get_double("horizon", 1.0);
  spec.validate();
  const SubordinatorPath path = generate_path(spec, cfg.get_u64("seed", 12345));
  const std::size_t rows = path.values.size();
  std::ostringstream csv;
  csv << "n,t_grid,D,E_tilde\n";
  for (std::size_t j = 0; j < rows; ++j) {
    const double t_j = spec.horizon * static_cast<double>(j) /
                       static_cast<double>(rows - 1);
    csv << j << ',' << format_double(t_j) << ',' << format_double(path.values[j])
        << ',' << format_double(inverse_at(path, t_j)) << '\n';
  }
  write_text_file(out_file(cfg, "sample.csv"), csv.str());
  return 0;
}

int cmd_validate(const Config& cfg) {
  const double alpha = cfg.get_double("alpha", 0.8);
  const double delta = cfg.get_double("delta", 0.01);
  const double horizon = cfg.get_double("horizon", 1.0);
  const double theta = cfg.get_double("theta", 1.0);
  const std::uint64_t seed = cfg.get_u64("seed", 12345);
  const int workers = workers_from(cfg);
  const long n_paths = paths_from(cfg);
  const CoefficientModel model = model_from(cfg, horizon);
  const std::vector<double> t_list = cfg.get_double_list("validate.t_list", {0.5, 1.0});
  const std::vector<double> p_list = cfg.get_double_list("validate.p_list", {1.0, 2.0});
  const double oracle_scale = cfg.get_double("validate.oracle_scale", 1.0);

  ordered_json doc = report_header("validate", cfg);
  bool all_pass = true;

  ordered_json moments = ordered_json::array();
  for (std::size_t i = 0; i < t_list.size(); ++i) {
    const MomentReport rep = validate_inverse_moments(
        alpha, t_list[i], p_list, n_paths, delta,
        rng::derive(seed, kMomentSalt + i), workers, oracle_scale);
    ordered_json entry = ordered_json::object();
    entry["alpha"] = rep.alpha;
    entry["t"] = rep.t;
    entry["delta"] = rep.delta;
    ordered_json checks = ordered_json::array();
    for (const MomentCheck& mc : rep.checks) {
      checks.push_back({{"p", mc.p},
                        {"estimate", mc.estimate},
                        {"std_error", mc.std_error},
                        {"oracle", mc.oracle},
                        {"bias_allowance", mc.bias_allowance},
                        {"z", mc.z},
                        {"pass", mc.pass}});
    }
    entry["checks"] = checks;
    entry["pass"] = rep.pass;
    moments.push_back(entry);
    all_pass = all_pass && rep.pass;
  }
  doc["inverse_moments"] = moments;

  const BoundReport bound = validate_solution_moment_bound(
      model, alpha, theta, cfg.get_double("validate.bound_t", 1.0), n_paths, delta,
      rng::derive(seed, kBoundSalt), workers);
  doc["moment_bound"] = {{"estimate", bound.estimate},
                         {"std_error", bound.std_error},
                         {"bound", bound.bound},
                         {"z", bound.z},
                         {"pass", bound.pass}};
  all_pass = all_pass && bound.pass;

  const IncrementReport incr = validate_increment_scaling(
      model, alpha, theta, cfg.get_double("validate.t0", 0.25),
      cfg.get_double_list("validate.lags", {0.25, 0.125, 0.0625, 0.03125, 0.015625}),
      n_paths, delta, rng::derive(seed, kIncrementSalt), workers);
  doc["increment_scaling"] = {{"lags", incr.lags},
                              {"means", incr.means},
                              {"std_errors", incr.std_errors},
                              {"slope", incr.slope},
                              {"band_low", incr.band_low},
                              {"band_high", incr.band_high},
                              {"pass", incr.pass}};
  all_pass = all_pass && incr.pass;

  doc["pass"] = all_pass;
  write_text_file(out_file(cfg, "validate.json"), doc.dump(2) + "\n");
  return all_pass ? 0 : 1;
}

int cmd_converge(const Config& cfg) {
  const double alpha = cfg.get_double("alpha", 0.8);
  const double horizon = cfg.get_double("horizon", 1.0);
  const double theta = cfg.get_double("theta", 1.0);
  const CoefficientModel model = model_from(cfg, horizon);
  LevelLadder ladder;
  ladder.delta_fine = cfg.get_double("ladder.delta_fine", 1.0 / 256.0);
  ladder.n_levels = static_cast<int>(cfg.get_long("ladder.n_levels", 5));
  ladder.ref_delta = cfg.get_double("ladder.ref_delta", 1.0 / 1024.0);

  const StrongErrorReport rep =
      strong_error(model, alpha, horizon, ladder, theta, paths_from(cfg),
                   cfg.get_u64("seed", 12345), workers_from(cfg));

  std::ostringstream csv;
  csv << "delta,error,std_error,n_paths\n";
  for (const LevelError& le : rep.levels)
    csv << format_double(le.delta) << ',' << format_double(le.error) << ','
        << format_double(le.std_error) << ',' << le.n_paths << '\n';
  write_text_file(out_file(cfg, "converge.csv"), csv.str());

  ordered_json doc = report_header("converge", cfg);
  ordered_json levels = ordered_json::array();
  for (const LevelError& le : rep.levels)
    levels.push_back({{"delta", le.delta},
                      {"error", le.error},
                      {"std_error", le.std_error},
                      {"n_paths", le.n_paths}});
  doc["levels"] = levels;
  doc["ref_delta"] = rep.ref_delta;
  doc["n_failed"] = rep.n_failed;
  doc["warnings"] = rep.warnings;
  doc["degenerate"] = rep.degenerate;
  const double predicted = predicted_order(model.constants, alpha);
  doc["predicted_order"] = predicted;
  doc["binding_exponent"] = binding_exponent(model.constants, alpha);
  int rc = 0;
  if (!rep.degenerate) {
    doc["fitted_order"] = rep.fit.slope;
    doc["slope_se"] = rep.fit.slope_se;
    doc["ci_low"] = rep.fit.ci_low;
    doc["ci_high"] = rep.fit.ci_high;
    doc["r_squared"] = rep.fit.r_squared;
    const bool pass = std::abs(rep.fit.slope - predicted) <= 0.15;
    doc["pass"] = pass;
    rc = pass ? 0 : 1;
  }
  write_text_file(out_file(cfg, "converge.json"), doc.dump(2) + "\n");
  return rc;
}

int cmd_audit(const Config& cfg) {
  const double horizon = cfg.get_double("horizon", 1.0);
  const CoefficientModel model = model_from(cfg, horizon);
  const long n_samples = cfg.get_long("audit.n_samples", 20000);
  if (n_samples < 1)
    throw std::invalid_argument("config key 'audit.n_samples': must be >= 1");
  const AuditReport rep =
      audit(model, horizon, cfg.get_double("audit.radius", 5.0),
            static_cast<std::size_t>(n_samples), cfg.get_u64("seed", 12345),
            cfg.get_double("audit.slack", 0.0));
  ordered_json doc = report_header("audit", cfg);
  doc["model"] = model.name;
  ordered_json checks = ordered_json::array();
  for (const AuditCheck& ac : rep.checks)
    checks.push_back({{"name", ac.name},
                      {"worst_ratio", ac.worst_ratio},
                      {"bound", ac.bound},
                      {"pass", ac.pass}});
  doc["checks"] = checks;
  doc["one_sided_linear_ratio"] = rep.one_sided_linear_ratio;
  doc["n_samples"] = rep.n_samples;
  doc["pass"] = rep.pass;
  write_text_file(out_file(cfg, "audit.json"), doc.dump(2) + "\n");
  return rep.pass ? 0 : 1;
}

}  // namespace

Config effective_config(const CliOptions& opts) {
  Config cfg = defaults_for(opts.command);
  if (const char* env = std::getenv("TCSDE_OUT_DIR")) cfg.set("out_dir", env);
  if (!opts.config_path.empty())
    cfg.load_text(read_text_file(opts.config_path), opts.config_path);
  cfg.apply_overrides(opts.overrides);
  if (opts.seed_set) cfg.set("seed", std::to_string(opts.seed));
  if (opts.workers_set) cfg.set("workers", std::to_string(opts.workers));
  if (opts.out_set) cfg.set("out_dir", opts.out_dir);
  cfg.require_known(known_keys_for(opts.command));
  return cfg;
}

int run_command(const CliOptions& opts) {
  const Config cfg = effective_config(opts);
  if (opts.command == "sample") return cmd_sample(cfg);
  if (opts.command == "validate") return cmd_validate(cfg);
  if (opts.command == "converge") return cmd_converge(cfg);
  if (opts.command == "audit") return cmd_audit(cfg);
  throw std::invalid_argument("unknown command '" + opts.command + "'");
}

}  // namespace tcsde
