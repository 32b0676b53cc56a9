#pragma once

#include <string>
#include <string_view>

#include "minsul/barriers.hpp"
#include "minsul/errors.hpp"
#include "minsul/hypotheses.hpp"
#include "minsul/mesh.hpp"
#include "minsul/regime.hpp"
#include "minsul/shooting.hpp"
#include "minsul/system_solver.hpp"

namespace minsul {

// Every writer takes the resolved run configuration as compact JSON text (may be empty).
// CSV output starts with a "# config=<json>" comment line when a config is given, then a
// header row; numbers use 17 significant digits and lines end with LF. JSON output keeps
// keys in a fixed order and embeds the config under "config".

/// %.17g; "nan", "inf" and "-inf" for non-finite values.
std::string format_double(double v);

std::string profile_csv(const FieldProfile& profile, std::string_view config_json = {});
std::string profile_json(const FieldProfile& profile, std::string_view config_json = {});

/// Columns x, phi, a.
std::string solution_csv(const SolutionPair& sol, std::string_view config_json = {});
std::string solution_json(const SolutionPair& sol, std::string_view config_json = {});

/// Columns x, phi, dphi, a, da, discriminant.
std::string trajectory_csv(const Trajectory& t, std::string_view config_json = {});
std::string shoot_json(const SystemShootResult& r, std::string_view config_json = {});

std::string verification_json(const BoxVerification& v, const AnodeBounds& bounds,
                              const HypothesisReport* hypotheses = nullptr,
                              std::string_view config_json = {});
/// Columns field, kind, x, barrier, second_derivative, frozen, rhs, margin, status.
std::string verification_csv(const BoxVerification& v, std::string_view config_json = {});

std::string regime_json(const RegimeReport& r, std::string_view config_json = {});
/// One row: the bound values, limits, verdicts and the classification.
std::string regime_csv(const RegimeReport& r, std::string_view config_json = {});

/// Columns j_x, phi_half, a_half, residual_phi, residual_a, iterations, converged,
/// classification, error.
std::string sweep_csv(const SweepTable& t, std::string_view config_json = {});
std::string sweep_json(const SweepTable& t, std::string_view config_json = {});

/// {"error": {"code": ..., "exit_status": ..., "message": ...}}
std::string error_json(ErrorCode code, std::string_view message);

/// Writes the text to `path`; throws IoError on failure.
void write_text(const std::string& path, std::string_view text);

}  // namespace minsul
