#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

namespace minsul {

enum class Grading { uniform, graded };

std::string_view to_string(Grading g);

/// Strictly increasing abscissae on [0, 1] with x_0 = 0 and x_N = 1 exactly.
///
/// Graded meshes use x_i = (i/N)^p (default p = 3/2), which clusters nodes
/// toward the cathode where profiles behave like x^{4/3}. Meshes are shared
/// immutably between profiles; two profiles are comparable only when their
/// node arrays are identical.
class Mesh {
 public:
  static std::shared_ptr<const Mesh> uniform(std::size_t node_count);
  static std::shared_ptr<const Mesh> graded(std::size_t node_count, double exponent = 1.5);
  static std::shared_ptr<const Mesh> make(std::size_t node_count, Grading grading,
                                          double exponent = 1.5);
  /// Validates ordering and endpoints; throws InvalidParameter otherwise.
  static std::shared_ptr<const Mesh> from_nodes(std::vector<double> nodes);

  std::span<const double> nodes() const noexcept { return nodes_; }
  double x(std::size_t i) const noexcept { return nodes_[i]; }
  /// Spacing x_{i+1} - x_i.
  double h(std::size_t i) const noexcept { return nodes_[i + 1] - nodes_[i]; }
  std::size_t size() const noexcept { return nodes_.size(); }
  std::size_t interior_count() const noexcept { return nodes_.size() - 2; }
  Grading grading() const noexcept { return grading_; }
  double exponent() const noexcept { return exponent_; }

  bool same_nodes(const Mesh& other) const noexcept;

 private:
  Mesh(std::vector<double> nodes, Grading grading, double exponent)
      : nodes_(std::move(nodes)), grading_(grading), exponent_(exponent) {}

  std::vector<double> nodes_;
  Grading grading_;
  double exponent_;
};

using MeshPtr = std::shared_ptr<const Mesh>;

enum class Field { phi, a };

std::string_view to_string(Field f);

/// One scalar field sampled at every mesh node, boundary values included.
struct FieldProfile {
  MeshPtr mesh;
  Field field = Field::phi;
  std::vector<double> values;
  /// Sup-norm of the discretized equation this profile was computed for;
  /// NaN when the profile was not produced by a solver.
  double residual = std::numeric_limits<double>::quiet_NaN();

  std::size_t size() const noexcept { return values.size(); }
  double at_cathode() const { return values.front(); }
  double at_anode() const { return values.back(); }
  /// Piecewise-linear interpolation, x clamped to [0, 1].
  double interpolate(double x) const;
};

FieldProfile make_profile(MeshPtr mesh, Field field, std::vector<double> values);

/// Throws MeshMismatch unless both profiles live on identical nodes.
void require_same_mesh(const FieldProfile& lhs, const FieldProfile& rhs);

/// max_i |lhs_i - rhs_i|; throws MeshMismatch for different meshes.
double sup_distance(const FieldProfile& lhs, const FieldProfile& rhs);

double sup_norm(std::span<const double> values);

/// Samples a fine profile at the nodes of a coarser mesh by interpolation.
FieldProfile resample(const FieldProfile& profile, MeshPtr target);

}  // namespace minsul
