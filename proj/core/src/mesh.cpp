#include "minsul/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "minsul/errors.hpp"

namespace minsul {

std::string_view to_string(Grading g) {
  return g == Grading::uniform ? "uniform" : "graded";
}

std::string_view to_string(Field f) { return f == Field::phi ? "phi" : "a"; }

namespace {

void check_node_count(std::size_t node_count) {
  if (node_count < 3) {
    fail(ErrorCode::InvalidParameter,
         "mesh needs at least 3 nodes, got " + std::to_string(node_count));
  }
}

}  // namespace

std::shared_ptr<const Mesh> Mesh::uniform(std::size_t node_count) {
  check_node_count(node_count);
  const std::size_t n = node_count - 1;
  std::vector<double> nodes(node_count);
  for (std::size_t i = 0; i <= n; ++i) {
    nodes[i] = static_cast<double>(i) / static_cast<double>(n);
  }
  nodes.back() = 1.0;
  return std::shared_ptr<const Mesh>(new Mesh(std::move(nodes), Grading::uniform, 1.0));
}

std::shared_ptr<const Mesh> Mesh::graded(std::size_t node_count, double exponent) {
  check_node_count(node_count);
  if (!(exponent >= 1.0) || !std::isfinite(exponent)) {
    fail(ErrorCode::InvalidParameter, "mesh grading exponent must be >= 1");
  }
  const std::size_t n = node_count - 1;
  std::vector<double> nodes(node_count);
  for (std::size_t i = 0; i <= n; ++i) {
    nodes[i] = std::pow(static_cast<double>(i) / static_cast<double>(n), exponent);
  }
  nodes.front() = 0.0;
  nodes.back() = 1.0;
  return std::shared_ptr<const Mesh>(new Mesh(std::move(nodes), Grading::graded, exponent));
}

std::shared_ptr<const Mesh> Mesh::make(std::size_t node_count, Grading grading, double exponent) {
  return grading == Grading::uniform ? uniform(node_count) : graded(node_count, exponent);
}

std::shared_ptr<const Mesh> Mesh::from_nodes(std::vector<double> nodes) {
  check_node_count(nodes.size());
  if (nodes.front() != 0.0 || nodes.back() != 1.0) {
    fail(ErrorCode::InvalidParameter, "mesh endpoints must be exactly 0 and 1");
  }
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (!(nodes[i] > nodes[i - 1])) {
      fail(ErrorCode::InvalidParameter,
           "mesh nodes must be strictly increasing (index " + std::to_string(i) + ")");
    }
  }
  return std::shared_ptr<const Mesh>(new Mesh(std::move(nodes), Grading::graded, 0.0));
}

bool Mesh::same_nodes(const Mesh& other) const noexcept {
  return this == &other || nodes_ == other.nodes_;
}

double FieldProfile::interpolate(double x) const {
  const auto nodes = mesh->nodes();
  if (x <= 0.0) return values.front();
  if (x >= 1.0) return values.back();
  const auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
  const auto i = static_cast<std::size_t>(it - nodes.begin()) - 1;
  const double t = (x - nodes[i]) / (nodes[i + 1] - nodes[i]);
  return (1.0 - t) * values[i] + t * values[i + 1];
}

FieldProfile make_profile(MeshPtr mesh, Field field, std::vector<double> values) {
  if (!mesh || values.size() != mesh->size()) {
    fail(ErrorCode::InvalidParameter, "profile values do not match mesh size");
  }
  FieldProfile p;
  p.mesh = std::move(mesh);
  p.field = field;
  p.values = std::move(values);
  return p;
}

void require_same_mesh(const FieldProfile& lhs, const FieldProfile& rhs) {
  if (!lhs.mesh || !rhs.mesh || !lhs.mesh->same_nodes(*rhs.mesh)) {
    fail(ErrorCode::MeshMismatch, "profiles are defined on different meshes");
  }
}

double sup_distance(const FieldProfile& lhs, const FieldProfile& rhs) {
  require_same_mesh(lhs, rhs);
  double d = 0.0;
  for (std::size_t i = 0; i < lhs.values.size(); ++i) {
    d = std::max(d, std::abs(lhs.values[i] - rhs.values[i]));
  }
  return d;
}

double sup_norm(std::span<const double> values) {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

FieldProfile resample(const FieldProfile& profile, MeshPtr target) {
  std::vector<double> v(target->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = profile.interpolate(target->x(i));
  return make_profile(std::move(target), profile.field, std::move(v));
}

}  // namespace minsul
