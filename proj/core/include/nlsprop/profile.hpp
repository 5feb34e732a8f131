#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace nlsprop {

/// Strictly increasing nodes on [0, r_max] with nodes.front() == 0.
class Mesh {
 public:
  Mesh() = default;
  explicit Mesh(std::vector<double> nodes);

  static Mesh uniform(double r_max, std::size_t intervals);
  /// Nodes clustered toward the origin: r = r_max * (exp(a t) - 1)/(exp(a) - 1).
  static Mesh graded(double r_max, std::size_t intervals, double clustering);

  std::size_t size() const { return nodes_.size(); }
  std::size_t intervals() const { return nodes_.empty() ? 0 : nodes_.size() - 1; }
  double r_max() const { return nodes_.back(); }
  double operator[](std::size_t i) const { return nodes_[i]; }
  const std::vector<double>& nodes() const { return nodes_; }

  /// Index i of the interval [nodes[i], nodes[i+1]] containing r (clamped).
  std::size_t locate(double r) const;

 private:
  std::vector<double> nodes_;
};

/// Symmetry of a function about r = 0, used to mirror finite-difference
/// stencils at the origin instead of going one-sided.
enum class Parity { None, Even, Odd };

inline Parity opposite(Parity p) {
  return p == Parity::Even ? Parity::Odd : p == Parity::Odd ? Parity::Even : Parity::None;
}

/// Piecewise cubic Hermite function of one or more components. Values and
/// first derivatives are stored per node; evaluation between nodes uses the
/// Hermite cubic, so the interpolation order is 4.
class Profile {
 public:
  Profile() = default;
  Profile(Mesh mesh, std::size_t components, std::vector<double> values,
          std::vector<double> derivatives);

  /// Samples f and df on the mesh (single component).
  static Profile from_function(const Mesh& mesh, const std::function<double(double)>& f,
                               const std::function<double(double)>& df);
  /// Single component from nodal values only; derivatives from five-point
  /// finite differences on the (possibly nonuniform) mesh.
  static Profile from_values(const Mesh& mesh, std::vector<double> values,
                             Parity parity = Parity::None);

  static constexpr int order() { return 4; }

  const Mesh& mesh() const { return mesh_; }
  std::size_t components() const { return ncomp_; }
  std::size_t size() const { return mesh_.size(); }
  double r_max() const { return mesh_.r_max(); }
  const std::vector<double>& breakpoints() const { return mesh_.nodes(); }

  double node_value(std::size_t i, std::size_t c = 0) const { return values_[i * ncomp_ + c]; }
  double node_derivative(std::size_t i, std::size_t c = 0) const {
    return derivs_[i * ncomp_ + c];
  }

  double value(double r, std::size_t c = 0) const;
  double derivative(double r, std::size_t c = 0) const;
  double second_derivative(double r, std::size_t c = 0) const;
  double operator()(double r) const { return value(r, 0); }
  void evaluate(double r, std::span<double> out) const;

  /// Single-component view of component c.
  Profile component(std::size_t c) const;
  /// Second derivative at every node from five-point differentiation of the
  /// stored first derivatives. `parity` is the symmetry of the function
  /// itself; its derivative is mirrored with the opposite symmetry.
  std::vector<double> nodal_second_derivative(std::size_t c = 0,
                                              Parity parity = Parity::None) const;

  Profile scaled(double factor) const;
  double sup_norm(std::size_t c = 0) const;

 private:
  Mesh mesh_;
  std::size_t ncomp_ = 0;
  std::vector<double> values_;
  std::vector<double> derivs_;
};

/// Weights for the derivative of order `m` at x0 from nodes x (Fornberg).
std::vector<double> finite_difference_weights(double x0, std::span<const double> x, int m);

/// Sup-norm distance between two single-component functions sampled on the
/// nodes of `a` (b evaluated by interpolation).
double sup_distance(const Profile& a, const Profile& b, double r_limit = -1.0);

}  // namespace nlsprop
