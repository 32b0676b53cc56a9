#include "minsul/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace minsul {

namespace {

using json = nlohmann::ordered_json;

json number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

json parse_config(std::string_view config_json) {
  if (config_json.empty()) return nullptr;
  try {
    return json::parse(config_json);
  } catch (const json::exception& e) {
    fail(ErrorCode::ConfigError, std::string("embedded config is not valid JSON: ") + e.what());
  }
}

std::string finish_json(json body, std::string_view config_json) {
  json out;
  if (!config_json.empty()) out["config"] = parse_config(config_json);
  for (auto& [k, v] : body.items()) out[k] = std::move(v);
  return out.dump(2) + "\n";
}

void csv_preamble(std::ostringstream& os, std::string_view config_json) {
  if (config_json.empty()) return;
  os << "# config=" << parse_config(config_json).dump() << "\n";
}

json mesh_json(const Mesh& mesh) {
  json m;
  m["nodes"] = mesh.size();
  m["grading"] = std::string(to_string(mesh.grading()));
  m["exponent"] = mesh.exponent();
  return m;
}

json values_json(std::span<const double> v) {
  json a = json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

json bound_json(const BoundCheck& b) {
  json j;
  j["value"] = number(b.value);
  j["limit"] = number(b.limit);
  j["satisfied"] = b.satisfied;
  return j;
}

json barrier_json(const BarrierVerification& v) {
  json j;
  j["field"] = std::string(to_string(v.field));
  j["kind"] = std::string(to_string(v.kind));
  j["barrier"] = v.description;
  j["passed"] = v.passed();
  j["violations"] = v.violations;
  j["indeterminate"] = v.indeterminate;
  j["max_margin"] = number(v.max_margin);
  j["min_margin"] = number(v.min_margin);
  json nodes = json::array();
  for (const auto& n : v.nodes) {
    json e;
    e["x"] = n.x;
    e["barrier"] = number(n.barrier_value);
    e["second_derivative"] = number(n.second_derivative);
    e["frozen"] = number(n.frozen);
    e["rhs"] = number(n.rhs);
    e["margin"] = number(n.margin);
    e["discriminant"] = number(n.disc.value);
    e["status"] = std::string(to_string(n.status));
    nodes.push_back(std::move(e));
  }
  j["nodes"] = std::move(nodes);
  return j;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string profile_csv(const FieldProfile& profile, std::string_view config_json) {
  std::ostringstream os;
  csv_preamble(os, config_json);
  os << "x,value\n";
  for (std::size_t i = 0; i < profile.size(); ++i) {
    os << format_double(profile.mesh->x(i)) << ',' << format_double(profile.values[i]) << '\n';
  }
  return os.str();
}

std::string profile_json(const FieldProfile& profile, std::string_view config_json) {
  json j;
  j["field"] = std::string(to_string(profile.field));
  j["mesh"] = mesh_json(*profile.mesh);
  j["x"] = values_json(profile.mesh->nodes());
  j["values"] = values_json(profile.values);
  j["residual"] = number(profile.residual);
  return finish_json(std::move(j), config_json);
}

std::string solution_csv(const SolutionPair& sol, std::string_view config_json) {
  std::ostringstream os;
  csv_preamble(os, config_json);
  os << "x,phi,a\n";
  for (std::size_t i = 0; i < sol.phi.size(); ++i) {
    os << format_double(sol.phi.mesh->x(i)) << ',' << format_double(sol.phi.values[i]) << ','
       << format_double(sol.a.values[i]) << '\n';
  }
  return os.str();
}

std::string solution_json(const SolutionPair& sol, std::string_view config_json) {
  json j;
  j["mesh"] = mesh_json(*sol.phi.mesh);
  j["residual_phi"] = number(sol.residual_phi);
  j["residual_a"] = number(sol.residual_a);
  j["iterations"] = sol.iterations;
  j["phi_contained"] = sol.phi_contained;
  j["a_contained"] = sol.a_contained;
  j["clipped_nodes"] = sol.clipped_nodes;
  j["max_escape"] = number(sol.max_escape);
  j["x"] = values_json(sol.phi.mesh->nodes());
  j["phi"] = values_json(sol.phi.values);
  j["a"] = values_json(sol.a.values);
  return finish_json(std::move(j), config_json);
}

std::string trajectory_csv(const Trajectory& t, std::string_view config_json) {
  std::ostringstream os;
  csv_preamble(os, config_json);
  os << "x,phi,dphi,a,da,discriminant\n";
  for (std::size_t i = 0; i < t.x.size(); ++i) {
    os << format_double(t.x[i]) << ',' << format_double(t.phi[i]) << ','
       << format_double(t.dphi[i]) << ',' << format_double(t.a[i]) << ','
       << format_double(t.da[i]) << ',' << format_double(t.disc[i]) << '\n';
  }
  return os.str();
}

std::string shoot_json(const SystemShootResult& r, std::string_view config_json) {
  json j;
  j["beta"] = number(r.beta);
  j["j_x"] = number(r.j_x);
  j["phi_slope"] = number(r.slope);
  j["eta"] = number(r.eta);
  j["iterations"] = r.iterations;
  j["used_bisection"] = r.used_bisection;
  j["richardson_change"] = number(r.richardson_change);
  j["termination"] = std::string(to_string(r.trajectory.reason));
  j["steps"] = r.trajectory.steps;
  if (r.solution) {
    j["residual_phi"] = number(r.solution->residual_phi);
    j["residual_a"] = number(r.solution->residual_a);
    j["x"] = values_json(r.solution->phi.mesh->nodes());
    j["phi"] = values_json(r.solution->phi.values);
    j["a"] = values_json(r.solution->a.values);
  }
  return finish_json(std::move(j), config_json);
}

std::string verification_json(const BoxVerification& v, const AnodeBounds& bounds,
                              const HypothesisReport* hypotheses, std::string_view config_json) {
  json j;
  j["passed"] = v.passed();
  json box;
  box["ordered"] = v.box.ordered;
  box["boundary_ok"] = v.box.boundary_ok;
  box["messages"] = v.box.messages;
  j["box"] = std::move(box);
  json b;
  b["current"] = bound_json(bounds.current);
  b["magnetic_upper"] = bound_json(bounds.magnetic_upper);
  b["magnetic_current"] = bound_json(bounds.magnetic_current);
  b["anode_potential"] = bound_json(bounds.anode_potential);
  j["bounds"] = std::move(b);
  if (hypotheses) {
    json h;
    h["integral"] = number(hypotheses->integral);
    h["integral_finite"] = hypotheses->integral_finite;
    h["quadrature_panels"] = hypotheses->quadrature_panels;
    h["majorant_holds"] = hypotheses->majorant_holds;
    h["majorant_samples"] = hypotheses->majorant_samples;
    h["majorant_violations"] = hypotheses->majorant_violations;
    h["majorant_worst_ratio"] = number(hypotheses->majorant_worst_ratio);
    h["observed_monotonicity"] = std::string(to_string(hypotheses->observed));
    h["increasing_as_assumed"] = hypotheses->increasing_as_assumed;
    json samples = json::array();
    for (const auto& s : hypotheses->monotonicity) {
      samples.push_back(json{{"phi", s.phi}, {"dF_dphi", number(s.derivative)}});
    }
    h["monotonicity"] = std::move(samples);
    j["hypotheses"] = std::move(h);
  }
  json barriers;
  barriers["phi_lower"] = barrier_json(v.phi_lower);
  barriers["phi_upper"] = barrier_json(v.phi_upper);
  barriers["a_lower"] = barrier_json(v.a_lower);
  barriers["a_upper"] = barrier_json(v.a_upper);
  j["barriers"] = std::move(barriers);
  return finish_json(std::move(j), config_json);
}

std::string verification_csv(const BoxVerification& v, std::string_view config_json) {
  std::ostringstream os;
  csv_preamble(os, config_json);
  os << "field,kind,x,barrier,second_derivative,frozen,rhs,margin,status\n";
  for (const auto* b : {&v.phi_lower, &v.phi_upper, &v.a_lower, &v.a_upper}) {
    for (const auto& n : b->nodes) {
      os << to_string(b->field) << ',' << to_string(b->kind) << ',' << format_double(n.x) << ','
         << format_double(n.barrier_value) << ',' << format_double(n.second_derivative) << ','
         << format_double(n.frozen) << ',' << format_double(n.rhs) << ','
         << format_double(n.margin) << ',' << to_string(n.status) << '\n';
    }
  }
  return os.str();
}

std::string regime_json(const RegimeReport& r, std::string_view config_json) {
  json j;
  j["classification"] = std::string(to_string(r.classification));
  j["bound_17"] = bound_json(r.bound_17);
  j["bound_18"] = bound_json(r.bound_18);
  j["bound_23"] = bound_json(r.bound_23);
  j["bound_16"] = bound_json(r.bound_16);
  json prov;
  prov["delta"] = number(r.delta);
  prov["phi_upper_at_1"] = number(r.phi_upper_at_1);
  prov["phi_lower"] = r.phi_lower;
  prov["phi_upper"] = r.phi_upper;
  prov["probe_run"] = r.probe_run;
  prov["probe_termination"] =
      r.probe_reason ? json(std::string(to_string(*r.probe_reason))) : json(nullptr);
  prov["probe_error"] = r.probe_error;
  j["provenance"] = std::move(prov);
  return finish_json(std::move(j), config_json);
}

std::string regime_csv(const RegimeReport& r, std::string_view config_json) {
  std::ostringstream os;
  csv_preamble(os, config_json);
  os << "j_x,current_limit,bound_17,a_L,magnetic_limit,bound_18,current_half,bound_23,"
        "phi_L,delta_squared,bound_16,classification\n";
  auto yn = [](bool b) { return b ? "true" : "false"; };
  os << format_double(r.bound_17.value) << ',' << format_double(r.bound_17.limit) << ','
     << yn(r.bound_17.satisfied) << ',' << format_double(r.bound_18.value) << ','
     << format_double(r.bound_18.limit) << ',' << yn(r.bound_18.satisfied) << ','
     << format_double(r.bound_23.limit) << ',' << yn(r.bound_23.satisfied) << ','
     << format_double(r.bound_16.value) << ',' << format_double(r.bound_16.limit) << ','
     << yn(r.bound_16.satisfied) << ',' << to_string(r.classification) << '\n';
  return os.str();
}

std::string sweep_csv(const SweepTable& t, std::string_view config_json) {
  std::ostringstream os;
  csv_preamble(os, config_json);
  os << "j_x,phi_half,a_half,residual_phi,residual_a,iterations,converged,classification,error\n";
  for (const auto& r : t.rows) {
    std::string err = r.error;
    for (char& c : err) {
      if (c == ',' || c == '\n' || c == '"') c = ';';
    }
    os << format_double(r.j_x) << ',' << format_double(r.phi_half) << ','
       << format_double(r.a_half) << ',' << format_double(r.residual_phi) << ','
       << format_double(r.residual_a) << ',' << r.iterations << ','
       << (r.converged ? "true" : "false") << ',' << to_string(r.classification) << ',' << err
       << '\n';
  }
  return os.str();
}

std::string sweep_json(const SweepTable& t, std::string_view config_json) {
  json j;
  j["last_converged_jx"] = t.last_converged_jx ? json(*t.last_converged_jx) : json(nullptr);
  json rows = json::array();
  for (const auto& r : t.rows) {
    json e;
    e["j_x"] = number(r.j_x);
    e["phi_half"] = number(r.phi_half);
    e["a_half"] = number(r.a_half);
    e["residual_phi"] = number(r.residual_phi);
    e["residual_a"] = number(r.residual_a);
    e["iterations"] = r.iterations;
    e["converged"] = r.converged;
    e["classification"] = std::string(to_string(r.classification));
    e["error"] = r.error;
    rows.push_back(std::move(e));
  }
  j["rows"] = std::move(rows);
  return finish_json(std::move(j), config_json);
}

std::string error_json(ErrorCode code, std::string_view message) {
  json e;
  e["code"] = std::string(to_string(code));
  e["exit_status"] = exit_status(code);
  e["message"] = std::string(message);
  json j;
  j["error"] = std::move(e);
  return j.dump() + "\n";
}

void write_text(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot open " + path + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) fail(ErrorCode::IoError, "failed writing " + path);
}

}  // namespace minsul
