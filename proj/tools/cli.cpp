#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "minsul/minsul.hpp"

namespace minsul::cli {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void config_error(const std::string& msg) { fail(ErrorCode::ConfigError, msg); }

void reject_unknown(const json& obj, const std::string& where, std::set<std::string> allowed) {
  if (!obj.is_object()) config_error(where + " must be an object");
  for (const auto& [k, v] : obj.items()) {
    if (!allowed.count(k)) config_error("unknown key " + where + "." + k);
  }
}

double get_number(const json& v, const std::string& key) {
  if (!v.is_number()) config_error(key + " must be a number");
  return v.get<double>();
}

std::optional<double> get_optional(const json& v, const std::string& key) {
  if (v.is_null()) return std::nullopt;
  return get_number(v, key);
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

Grading parse_grading(const std::string& s) {
  if (s == "uniform") return Grading::uniform;
  if (s == "graded") return Grading::graded;
  config_error("grading must be uniform or graded, got " + s);
}

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  config_error("format must be csv or json, got " + s);
}

ShootingMode parse_mode(const std::string& s) {
  if (s == "fixed_current") return ShootingMode::fixed_current;
  if (s == "space_charge_limited") return ShootingMode::space_charge_limited;
  config_error("shoot.mode must be fixed_current or space_charge_limited, got " + s);
}

std::string get_string(const json& v, const std::string& key) {
  if (!v.is_string()) config_error(key + " must be a string");
  return v.get<std::string>();
}

}  // namespace

std::string to_string(Subcommand s) {
  switch (s) {
    case Subcommand::solve: return "solve";
    case Subcommand::shoot: return "shoot";
    case Subcommand::verify_barriers: return "verify-barriers";
    case Subcommand::sweep: return "sweep";
    case Subcommand::report: return "report";
  }
  return "solve";
}

std::optional<Subcommand> parse_subcommand(const std::string& name) {
  for (auto s : {Subcommand::solve, Subcommand::shoot, Subcommand::verify_barriers,
                 Subcommand::sweep, Subcommand::report}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

RunConfig parse_config(const std::string& text, RunConfig cfg) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    config_error(std::string("config is not valid JSON: ") + e.what());
  }
  if (root.is_object() && root.contains("config")) root = root["config"];
  reject_unknown(root, "config",
                 {"subcommand", "params", "mesh", "barriers", "sweep", "shoot", "output"});

  if (root.contains("subcommand")) {
    const auto s = parse_subcommand(get_string(root["subcommand"], "subcommand"));
    if (!s) config_error("unknown subcommand " + root["subcommand"].dump());
    cfg.subcommand = *s;
  }
  if (root.contains("params")) {
    const json& p = root["params"];
    reject_unknown(p, "params",
                   {"j_x", "j_x_max", "phi_L", "a_L", "epsilon", "tol_residual", "tol_iter"});
    if (p.contains("j_x")) cfg.params.j_x = get_number(p["j_x"], "params.j_x");
    if (p.contains("j_x_max")) cfg.j_x_max = get_optional(p["j_x_max"], "params.j_x_max");
    if (p.contains("phi_L")) cfg.params.phi_L = get_number(p["phi_L"], "params.phi_L");
    if (p.contains("a_L")) cfg.params.a_L = get_number(p["a_L"], "params.a_L");
    if (p.contains("epsilon")) cfg.params.epsilon = get_number(p["epsilon"], "params.epsilon");
    if (p.contains("tol_residual")) {
      cfg.params.tol_residual = get_number(p["tol_residual"], "params.tol_residual");
    }
    if (p.contains("tol_iter")) cfg.params.tol_iter = get_number(p["tol_iter"], "params.tol_iter");
  }
  if (root.contains("mesh")) {
    const json& m = root["mesh"];
    reject_unknown(m, "mesh", {"nodes", "grading", "exponent"});
    if (m.contains("nodes")) {
      if (!m["nodes"].is_number_unsigned()) config_error("mesh.nodes must be a positive integer");
      cfg.mesh.nodes = m["nodes"].get<std::size_t>();
    }
    if (m.contains("grading")) cfg.mesh.grading = parse_grading(get_string(m["grading"], "grading"));
    if (m.contains("exponent")) cfg.mesh.exponent = get_number(m["exponent"], "mesh.exponent");
  }
  if (root.contains("barriers")) {
    const json& b = root["barriers"];
    reject_unknown(b, "barriers", {"delta", "alpha", "beta"});
    if (b.contains("delta")) cfg.barriers.delta = get_optional(b["delta"], "barriers.delta");
    if (b.contains("alpha")) cfg.barriers.alpha = get_optional(b["alpha"], "barriers.alpha");
    if (b.contains("beta")) cfg.barriers.beta = get_optional(b["beta"], "barriers.beta");
  }
  if (root.contains("sweep")) {
    const json& s = root["sweep"];
    reject_unknown(s, "sweep", {"j_min", "j_max", "steps"});
    if (s.contains("j_min")) cfg.sweep.j_min = get_optional(s["j_min"], "sweep.j_min");
    if (s.contains("j_max")) cfg.sweep.j_max = get_optional(s["j_max"], "sweep.j_max");
    if (s.contains("steps")) {
      if (!s["steps"].is_number_integer()) config_error("sweep.steps must be an integer");
      cfg.sweep.steps = s["steps"].get<int>();
    }
  }
  if (root.contains("shoot")) {
    const json& s = root["shoot"];
    reject_unknown(s, "shoot", {"mode", "beta", "guess", "eta"});
    if (s.contains("mode")) cfg.shoot.mode = parse_mode(get_string(s["mode"], "shoot.mode"));
    if (s.contains("beta")) cfg.shoot.beta = get_optional(s["beta"], "shoot.beta");
    if (s.contains("guess")) cfg.shoot.guess = get_optional(s["guess"], "shoot.guess");
    if (s.contains("eta")) cfg.shoot.eta = get_number(s["eta"], "shoot.eta");
  }
  if (root.contains("output")) {
    const json& o = root["output"];
    reject_unknown(o, "output", {"path", "format"});
    if (o.contains("path")) cfg.output.path = get_string(o["path"], "output.path");
    if (o.contains("format")) cfg.output.format = parse_format(get_string(o["format"], "format"));
  }
  return cfg;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  const std::string tag = "# config=";
  if (text.rfind(tag, 0) == 0) {
    const auto end = text.find('\n');
    text = text.substr(tag.size(), end == std::string::npos ? std::string::npos : end - tag.size());
  }
  return parse_config(text, std::move(base));
}

RunConfig resolve(RunConfig cfg) {
  DiodeParams& p = cfg.params;
  p.j_x_max = cfg.j_x_max ? *cfg.j_x_max : std::max(current_ceiling(p.phi_L), p.j_x);
  cfg.j_x_max = p.j_x_max;
  try {
    p.validate();
  } catch (const Error& e) {
    config_error(std::string("params: ") + e.what());
  }
  if (cfg.mesh.nodes < kMinMeshNodes) config_error("mesh.nodes must be at least 33");
  if (!(cfg.mesh.exponent >= 1.0)) config_error("mesh.exponent must be >= 1");
  if (cfg.sweep.steps < 1) config_error("sweep.steps must be >= 1");
  if (!(cfg.shoot.eta > 0.0 && cfg.shoot.eta <= 0.1)) config_error("shoot.eta must lie in (0, 0.1]");
  for (const auto& [name, v] : {std::pair{"barriers.delta", cfg.barriers.delta},
                                std::pair{"barriers.alpha", cfg.barriers.alpha},
                                std::pair{"barriers.beta", cfg.barriers.beta}}) {
    if (v && !(*v > 0.0)) config_error(std::string(name) + " must be > 0");
  }

  const double ceiling = current_ceiling(p.phi_L);
  if (!cfg.sweep.j_max) cfg.sweep.j_max = ceiling;
  if (!cfg.sweep.j_min) cfg.sweep.j_min = *cfg.sweep.j_max / cfg.sweep.steps;
  if (!(*cfg.sweep.j_min > 0.0) || *cfg.sweep.j_max < *cfg.sweep.j_min) {
    config_error("sweep range must satisfy 0 < j_min <= j_max");
  }
  if (!cfg.shoot.beta) cfg.shoot.beta = p.a_L;
  if (!cfg.shoot.guess) {
    cfg.shoot.guess = cfg.shoot.mode == ShootingMode::fixed_current ? std::max(p.phi_L, 1e-3)
                                                                    : std::max(p.j_x, 1e-3);
  }
  return cfg;
}

std::string config_json(const RunConfig& cfg) {
  json j;
  j["subcommand"] = to_string(cfg.subcommand);
  json p;
  p["j_x"] = cfg.params.j_x;
  p["j_x_max"] = optional_json(cfg.j_x_max);
  p["phi_L"] = cfg.params.phi_L;
  p["a_L"] = cfg.params.a_L;
  p["epsilon"] = cfg.params.epsilon;
  p["tol_residual"] = cfg.params.tol_residual;
  p["tol_iter"] = cfg.params.tol_iter;
  j["params"] = std::move(p);
  json m;
  m["nodes"] = cfg.mesh.nodes;
  m["grading"] = std::string(minsul::to_string(cfg.mesh.grading));
  m["exponent"] = cfg.mesh.exponent;
  j["mesh"] = std::move(m);
  json b;
  b["delta"] = optional_json(cfg.barriers.delta);
  b["alpha"] = optional_json(cfg.barriers.alpha);
  b["beta"] = optional_json(cfg.barriers.beta);
  j["barriers"] = std::move(b);
  json s;
  s["j_min"] = optional_json(cfg.sweep.j_min);
  s["j_max"] = optional_json(cfg.sweep.j_max);
  s["steps"] = cfg.sweep.steps;
  j["sweep"] = std::move(s);
  json sh;
  sh["mode"] = std::string(minsul::to_string(cfg.shoot.mode));
  sh["beta"] = optional_json(cfg.shoot.beta);
  sh["guess"] = optional_json(cfg.shoot.guess);
  sh["eta"] = cfg.shoot.eta;
  j["shoot"] = std::move(sh);
  json o;
  o["path"] = cfg.output.path;
  o["format"] = cfg.output.format == Format::json ? "json" : "csv";
  j["output"] = std::move(o);
  return j.dump();
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out) {
  CLI::App app{"Solver suite for the noninsulated diode boundary value problem"};
  app.name("minsul");
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<double> jx;
  std::optional<double> phi_l;
  std::optional<double> a_l;
  std::optional<std::size_t> nodes;
  std::optional<std::string> grading;
  std::optional<std::string> out_path;
  std::optional<std::string> format;
  app.add_option("--config", config_path, "JSON config file (or an artifact embedding one)");
  app.add_option("--jx", jx, "current density j_x");
  app.add_option("--phi-l", phi_l, "anode potential phi_L");
  app.add_option("--a-l", a_l, "anode magnetic potential a_L");
  app.add_option("--nodes", nodes, "mesh node count (>= 33)");
  app.add_option("--grading", grading, "mesh grading")->check(CLI::IsMember({"uniform", "graded"}));
  app.add_option("--out", out_path, "output path, - for stdout");
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}));

  std::vector<std::pair<CLI::App*, Subcommand>> subs;
  subs.emplace_back(app.add_subcommand("solve", "solve the coupled system in the barrier box"),
                    Subcommand::solve);
  subs.emplace_back(app.add_subcommand("shoot", "two-parameter shooting from the cathode"),
                    Subcommand::shoot);
  subs.emplace_back(app.add_subcommand("verify-barriers", "check the barrier inequalities"),
                    Subcommand::verify_barriers);
  subs.emplace_back(app.add_subcommand("sweep", "continuation in j_x"), Subcommand::sweep);
  subs.emplace_back(app.add_subcommand("report", "anode bounds and regime"), Subcommand::report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    config_error(e.what());
  }

  RunConfig cfg;
  if (!config_path.empty()) cfg = load_config(config_path);
  for (const auto& [sub, kind] : subs) {
    if (sub->parsed()) cfg.subcommand = kind;
  }
  if (jx) cfg.params.j_x = *jx;
  if (phi_l) cfg.params.phi_L = *phi_l;
  if (a_l) cfg.params.a_L = *a_l;
  if (nodes) cfg.mesh.nodes = *nodes;
  if (grading) cfg.mesh.grading = parse_grading(*grading);
  if (out_path) {
    cfg.output.path = *out_path;
    if (!format && out_path->size() > 5 && out_path->substr(out_path->size() - 5) == ".json") {
      cfg.output.format = Format::json;
    }
  }
  if (format) cfg.output.format = parse_format(*format);
  return cfg;
}

int run(const RunConfig& raw, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig cfg = resolve(raw);
    const std::string conf = config_json(cfg);
    const DiodeParams& p = cfg.params;
    const bool as_json = cfg.output.format == Format::json;
    const MeshPtr mesh = Mesh::make(cfg.mesh.nodes, cfg.mesh.grading, cfg.mesh.exponent);

    std::string text;
    switch (cfg.subcommand) {
      case Subcommand::solve: {
        const BarrierBox box =
            make_system_box(p, cfg.barriers.alpha, cfg.barriers.beta, cfg.barriers.delta);
        const SolutionPair sol = solve_system(p, box, mesh);
        text = as_json ? solution_json(sol, conf) : solution_csv(sol, conf);
        break;
      }
      case Subcommand::shoot: {
        SystemShootOptions so;
        so.mode = cfg.shoot.mode;
        so.eta = cfg.shoot.eta;
        const SystemShootResult r = shoot_system(p, *cfg.shoot.beta, *cfg.shoot.guess, mesh, so);
        text = as_json ? shoot_json(r, conf) : trajectory_csv(r.trajectory, conf);
        break;
      }
      case Subcommand::verify_barriers: {
        const BarrierBox box =
            make_system_box(p, cfg.barriers.alpha, cfg.barriers.beta, cfg.barriers.delta);
        const BoxVerification v = verify_box(box, p, *mesh);
        const double delta = std::get<PowerLaw>(box.phi_lower.form()).delta;
        const AnodeBounds bounds = anode_bounds(p, box.phi_upper.value(1.0), delta);
        std::optional<HypothesisReport> hyp;
        try {
          hyp = check_hypotheses(HypothesisCheckConfig{}, p, box);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::QuadratureFailure) throw;
        }
        text = as_json ? verification_json(v, bounds, hyp ? &*hyp : nullptr, conf)
                       : verification_csv(v, conf);
        break;
      }
      case Subcommand::sweep: {
        SweepOptions so;
        so.alpha = cfg.barriers.alpha;
        so.beta = cfg.barriers.beta;
        const SweepTable t =
            sweep_jx(p, *cfg.sweep.j_min, *cfg.sweep.j_max, cfg.sweep.steps, mesh, so);
        text = as_json ? sweep_json(t, conf) : sweep_csv(t, conf);
        break;
      }
      case Subcommand::report: {
        const BarrierBox box =
            make_system_box(p, cfg.barriers.alpha, cfg.barriers.beta, cfg.barriers.delta);
        const RegimeReport r = classify(p, box);
        text = as_json ? regime_json(r, conf) : regime_csv(r, conf);
        break;
      }
    }
    if (cfg.output.path == "-") {
      out << text;
    } else {
      write_text(cfg.output.path, text);
    }
    return 0;
  } catch (const Error& e) {
    err << error_json(e.code(), e.what());
    return exit_status(e.code());
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::optional<RunConfig> cfg;
  try {
    cfg = parse_args(argc, argv, out);
  } catch (const Error& e) {
    err << error_json(e.code(), e.what());
    return exit_status(e.code());
  }
  if (!cfg) return 0;
  return run(*cfg, out, err);
}

}  // namespace minsul::cli
