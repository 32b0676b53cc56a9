#include "minsul/system_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "minsul/errors.hpp"
#include "minsul/scalar_solver.hpp"

namespace minsul {

namespace {

double escape_from(const FieldProfile& prof, const Barrier& lower, const Barrier& upper) {
  double worst = 0.0;
  const auto x = prof.mesh->nodes();
  for (std::size_t i = 0; i < prof.size(); ++i) {
    worst = std::max(worst, lower.value(x[i]) - prof.values[i]);
    worst = std::max(worst, prof.values[i] - upper.value(x[i]));
  }
  return worst;
}

std::string box_message(const BoxCheck& check) {
  std::ostringstream os;
  os << "barrier box is not admissible";
  for (const auto& m : check.messages) os << "; " << m;
  return os.str();
}

}  // namespace

bool profile_within(const FieldProfile& profile, const Barrier& lower, const Barrier& upper) {
  const auto x = profile.mesh->nodes();
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const double v = profile.values[i];
    const double slack = 1e-10 * std::max(1.0, std::abs(v));
    if (v < lower.value(x[i]) - slack || v > upper.value(x[i]) + slack) return false;
  }
  return true;
}

CoupledResidual coupled_residual(const SolutionPair& sol, const DiodeParams& p) {
  require_same_mesh(sol.phi, sol.a);
  const Mesh& mesh = *sol.phi.mesh;
  CoupledResidual out;
  for (std::size_t i = 1; i + 1 < mesh.size(); ++i) {
    const double phi = sol.phi.values[i];
    const double a = sol.a.values[i];
    const RhsPoint f = rhs_F(p.j_x, phi, a, p.epsilon);
    const RhsPoint g = rhs_G(p.j_x, phi, a, p.epsilon);
    if (f.singular || g.singular) {
      ++out.singular_nodes;
      continue;
    }
    out.phi = std::max(out.phi, std::abs(second_difference(mesh, sol.phi.values, i) - f.value));
    out.a = std::max(out.a, std::abs(second_difference(mesh, sol.a.values, i) - g.value));
  }
  return out;
}

SolutionPair solve_system(const DiodeParams& p, const BarrierBox& box, const MeshPtr& mesh,
                          const SystemSolveOptions& options) {
  p.validate();
  if (!mesh || mesh->size() < kMinMeshNodes) {
    fail(ErrorCode::InvalidParameter, "system solver needs a mesh with at least 33 nodes");
  }
  const BoxCheck check = check_box(box, p, *mesh);
  if (!check.valid()) fail(ErrorCode::InadmissibleBox, box_message(check));

  std::vector<double> phi;
  std::vector<double> a;
  if (options.initial) {
    require_same_mesh(options.initial->phi, options.initial->a);
    if (!options.initial->phi.mesh->same_nodes(*mesh)) {
      fail(ErrorCode::MeshMismatch, "warm start lives on a different mesh");
    }
    phi = options.initial->phi.values;
    a = options.initial->a.values;
  } else {
    a.resize(mesh->size());
    for (std::size_t i = 0; i < mesh->size(); ++i) {
      a[i] = std::clamp(p.a_L * mesh->x(i), box.a_lower.value(mesh->x(i)),
                        box.a_upper.value(mesh->x(i)));
    }
  }

  SolutionPair sol;
  bool converged = false;
  for (int sweep = 1; sweep <= options.max_sweeps; ++sweep) {
    FieldProfile a_prof = make_profile(mesh, Field::a, a);
    ScalarSolveOptions phi_opts;
    if (!phi.empty()) phi_opts.initial = phi;
    ScalarSolveResult phi_res;
    ScalarSolveResult a_res;
    try {
      const ScalarProblem phi_prob = make_scalar_problem(ScalarCase::A2, a_prof, p,
                                                         box.phi_lower, box.phi_upper);
      phi_res = solve_scalar_fd(phi_prob, mesh, phi_opts);
      ScalarSolveOptions a_opts;
      a_opts.initial = a;
      const ScalarProblem a_prob = make_scalar_problem(ScalarCase::A4, phi_res.profile, p,
                                                       box.a_lower, box.a_upper);
      a_res = solve_scalar_fd(a_prob, mesh, a_opts);
    } catch (const Error& e) {
      if ((e.code() == ErrorCode::NewtonDivergence || e.code() == ErrorCode::NoSolution) &&
          sol.max_escape > options.box_violation) {
        fail(ErrorCode::BoxViolation,
             std::string("iterates pushed against the barrier box: ") + e.what());
      }
      throw;
    }
    sol.clipped_nodes += phi_res.clipped_nodes + a_res.clipped_nodes;
    sol.max_escape = std::max({sol.max_escape, phi_res.max_escape, a_res.max_escape});

    double change = 0.0;
    if (!phi.empty()) {
      for (std::size_t i = 0; i < mesh->size(); ++i) {
        change = std::max(change, std::abs(phi_res.profile.values[i] - phi[i]));
      }
    } else {
      change = std::numeric_limits<double>::infinity();
    }
    for (std::size_t i = 0; i < mesh->size(); ++i) {
      change = std::max(change, std::abs(a_res.profile.values[i] - a[i]));
    }
    phi = std::move(phi_res.profile.values);
    a = std::move(a_res.profile.values);
    sol.iterations = sweep;
    sol.last_change = change;
    if (change < p.tol_iter) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    std::ostringstream os;
    os << "alternating sweeps did not settle within " << options.max_sweeps
       << " sweeps (last change " << sol.last_change << ")";
    fail(ErrorCode::NoConvergence, os.str());
  }

  sol.phi = make_profile(mesh, Field::phi, std::move(phi));
  sol.a = make_profile(mesh, Field::a, std::move(a));
  const CoupledResidual r = coupled_residual(sol, p);
  sol.residual_phi = r.phi;
  sol.residual_a = r.a;
  sol.phi.residual = r.phi;
  sol.a.residual = r.a;
  sol.phi_contained = profile_within(sol.phi, box.phi_lower, box.phi_upper);
  sol.a_contained = profile_within(sol.a, box.a_lower, box.a_upper);
  if (escape_from(sol.phi, box.phi_lower, box.phi_upper) > options.box_violation ||
      escape_from(sol.a, box.a_lower, box.a_upper) > options.box_violation) {
    fail(ErrorCode::BoxViolation, "converged pair leaves the barrier box");
  }
  return sol;
}

}  // namespace minsul
