#include "nlsprop/profile.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlsprop/errors.hpp"

namespace nlsprop {

Mesh::Mesh(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) throw Error(ErrorKind::InvalidArgument, "mesh needs at least 2 nodes");
  if (nodes_.front() != 0.0) throw Error(ErrorKind::InvalidArgument, "mesh must start at 0");
  for (std::size_t i = 1; i < nodes_.size(); ++i)
    if (!(nodes_[i] > nodes_[i - 1]))
      throw Error(ErrorKind::InvalidArgument, "mesh nodes must be strictly increasing");
}

Mesh Mesh::uniform(double r_max, std::size_t intervals) {
  std::vector<double> n(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i)
    n[i] = r_max * static_cast<double>(i) / static_cast<double>(intervals);
  n.back() = r_max;
  return Mesh(std::move(n));
}

Mesh Mesh::graded(double r_max, std::size_t intervals, double clustering) {
  if (clustering <= 0.0) return uniform(r_max, intervals);
  std::vector<double> n(intervals + 1);
  const double denom = std::expm1(clustering);
  for (std::size_t i = 0; i <= intervals; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(intervals);
    n[i] = r_max * std::expm1(clustering * t) / denom;
  }
  n.front() = 0.0;
  n.back() = r_max;
  return Mesh(std::move(n));
}

std::size_t Mesh::locate(double r) const {
  if (r <= nodes_.front()) return 0;
  if (r >= nodes_.back()) return nodes_.size() - 2;
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r);
  return static_cast<std::size_t>(it - nodes_.begin()) - 1;
}

Profile::Profile(Mesh mesh, std::size_t components, std::vector<double> values,
                 std::vector<double> derivatives)
    : mesh_(std::move(mesh)),
      ncomp_(components),
      values_(std::move(values)),
      derivs_(std::move(derivatives)) {
  if (values_.size() != mesh_.size() * ncomp_ || derivs_.size() != values_.size())
    throw Error(ErrorKind::InvalidArgument, "profile data does not match mesh size");
}

Profile Profile::from_function(const Mesh& mesh, const std::function<double(double)>& f,
                               const std::function<double(double)>& df) {
  std::vector<double> v(mesh.size()), d(mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    v[i] = f(mesh[i]);
    d[i] = df(mesh[i]);
  }
  return Profile(mesh, 1, std::move(v), std::move(d));
}

namespace {

// Five-point (or fewer, for tiny meshes) stencil around node i.
std::pair<std::size_t, std::size_t> stencil(std::size_t i, std::size_t n) {
  const std::size_t width = std::min<std::size_t>(5, n);
  std::size_t lo = i >= 2 ? i - 2 : 0;
  if (lo + width > n) lo = n - width;
  return {lo, width};
}

std::vector<double> differentiate_nodal(const Mesh& mesh, const std::vector<double>& v,
                                        std::size_t stride, std::size_t c, Parity parity) {
  const std::size_t n = mesh.size();
  std::vector<double> out(n);
  const auto& x = mesh.nodes();
  const double sign = parity == Parity::Odd ? -1.0 : 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (parity != Parity::None && i < 2 && n >= 3) {
      // Centered stencil with nodes reflected through the origin.
      double xs[5], vs[5];
      for (int j = -2; j <= 2; ++j) {
        const long k = static_cast<long>(i) + j;
        const std::size_t a = static_cast<std::size_t>(k < 0 ? -k : k);
        xs[j + 2] = k < 0 ? -x[a] : x[a];
        vs[j + 2] = (k < 0 ? sign : 1.0) * v[a * stride + c];
      }
      auto wts = finite_difference_weights(x[i], std::span<const double>(xs, 5), 1);
      double s = 0.0;
      for (std::size_t k = 0; k < 5; ++k) s += wts[k] * vs[k];
      out[i] = s;
      continue;
    }
    auto [lo, w] = stencil(i, n);
    auto wts = finite_difference_weights(x[i], std::span<const double>(x.data() + lo, w), 1);
    double s = 0.0;
    for (std::size_t k = 0; k < w; ++k) s += wts[k] * v[(lo + k) * stride + c];
    out[i] = s;
  }
  if (parity == Parity::Even && x[0] == 0.0) out[0] = 0.0;
  return out;
}

}  // namespace

Profile Profile::from_values(const Mesh& mesh, std::vector<double> values, Parity parity) {
  auto d = differentiate_nodal(mesh, values, 1, 0, parity);
  return Profile(mesh, 1, std::move(values), std::move(d));
}

double Profile::value(double r, std::size_t c) const {
  const std::size_t i = mesh_.locate(r);
  const double x0 = mesh_[i], h = mesh_[i + 1] - x0;
  const double t = (r - x0) / h;
  const double y0 = values_[i * ncomp_ + c], y1 = values_[(i + 1) * ncomp_ + c];
  const double d0 = derivs_[i * ncomp_ + c] * h, d1 = derivs_[(i + 1) * ncomp_ + c] * h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * d0 + (-2 * t3 + 3 * t2) * y1 +
         (t3 - t2) * d1;
}

double Profile::derivative(double r, std::size_t c) const {
  const std::size_t i = mesh_.locate(r);
  const double x0 = mesh_[i], h = mesh_[i + 1] - x0;
  const double t = (r - x0) / h;
  const double y0 = values_[i * ncomp_ + c], y1 = values_[(i + 1) * ncomp_ + c];
  const double d0 = derivs_[i * ncomp_ + c] * h, d1 = derivs_[(i + 1) * ncomp_ + c] * h;
  const double t2 = t * t;
  return ((6 * t2 - 6 * t) * y0 + (3 * t2 - 4 * t + 1) * d0 + (-6 * t2 + 6 * t) * y1 +
          (3 * t2 - 2 * t) * d1) /
         h;
}

double Profile::second_derivative(double r, std::size_t c) const {
  const std::size_t i = mesh_.locate(r);
  const double x0 = mesh_[i], h = mesh_[i + 1] - x0;
  const double t = (r - x0) / h;
  const double y0 = values_[i * ncomp_ + c], y1 = values_[(i + 1) * ncomp_ + c];
  const double d0 = derivs_[i * ncomp_ + c] * h, d1 = derivs_[(i + 1) * ncomp_ + c] * h;
  return ((12 * t - 6) * y0 + (6 * t - 4) * d0 + (-12 * t + 6) * y1 + (6 * t - 2) * d1) /
         (h * h);
}

void Profile::evaluate(double r, std::span<double> out) const {
  for (std::size_t c = 0; c < ncomp_; ++c) out[c] = value(r, c);
}

Profile Profile::component(std::size_t c) const {
  if (c >= ncomp_) throw Error(ErrorKind::InvalidArgument, "component out of range");
  std::vector<double> v(size()), d(size());
  for (std::size_t i = 0; i < size(); ++i) {
    v[i] = values_[i * ncomp_ + c];
    d[i] = derivs_[i * ncomp_ + c];
  }
  return Profile(mesh_, 1, std::move(v), std::move(d));
}

std::vector<double> Profile::nodal_second_derivative(std::size_t c, Parity parity) const {
  return differentiate_nodal(mesh_, derivs_, ncomp_, c, opposite(parity));
}

Profile Profile::scaled(double factor) const {
  auto v = values_;
  auto d = derivs_;
  for (auto& x : v) x *= factor;
  for (auto& x : d) x *= factor;
  return Profile(mesh_, ncomp_, std::move(v), std::move(d));
}

double Profile::sup_norm(std::size_t c) const {
  double m = 0.0;
  for (std::size_t i = 0; i < size(); ++i) m = std::max(m, std::abs(values_[i * ncomp_ + c]));
  return m;
}

std::vector<double> finite_difference_weights(double x0, std::span<const double> x, int m) {
  // Fornberg, "Generation of finite difference formulas on arbitrarily spaced grids".
  const int n = static_cast<int>(x.size()) - 1;
  std::vector<std::vector<double>> c(x.size(), std::vector<double>(m + 1, 0.0));
  double c1 = 1.0, c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) w[i] = c[i][m];
  return w;
}

double sup_distance(const Profile& a, const Profile& b, double r_limit) {
  double m = 0.0;
  const double lim = r_limit > 0 ? r_limit : std::min(a.r_max(), b.r_max());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double r = a.mesh()[i];
    if (r > lim) break;
    m = std::max(m, std::abs(a.node_value(i) - b.value(r)));
  }
  return m;
}

}  // namespace nlsprop
