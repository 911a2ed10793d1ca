#pragma once

#include <cstddef>
#include <vector>

#include "nceig/quadrature.hpp"

namespace nceig {

/// Partition a = x_0 < x_1 < ... < x_n = b of a compact interval.
/// Subintervals are indexed 0..n-1; subinterval q is [x_q, x_{q+1}].
class Partition {
 public:
  /// Accepts any strictly ascending list of finite breakpoints with at
  /// least one subinterval, so graded meshes are representable.
  /// Throws ConfigError otherwise.
  explicit Partition(std::vector<double> breakpoints);

  double a() const noexcept { return breakpoints_.front(); }
  double b() const noexcept { return breakpoints_.back(); }
  std::size_t size() const noexcept { return breakpoints_.size() - 1; }
  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  double left(std::size_t q) const { return breakpoints_[q]; }
  double right(std::size_t q) const { return breakpoints_[q + 1]; }
  double length(std::size_t q) const { return breakpoints_[q + 1] - breakpoints_[q]; }
  double midpoint(std::size_t q) const { return 0.5 * (breakpoints_[q] + breakpoints_[q + 1]); }
  double mesh_norm() const noexcept { return mesh_norm_; }

  // Subinterval owning x: [x_q, x_{q+1}) with the last one closed.
  // Points outside [a, b] clamp to the first or last subinterval.
  std::size_t locate(double x) const;

  // Affine map of [-1, 1] onto subinterval q and its inverse.
  double to_global(std::size_t q, double t) const {
    return 0.5 * (1.0 - t) * breakpoints_[q] + 0.5 * (1.0 + t) * breakpoints_[q + 1];
  }
  double to_reference(std::size_t q, double x) const {
    return (2.0 * x - breakpoints_[q] - breakpoints_[q + 1]) / length(q);
  }

 private:
  std::vector<double> breakpoints_;
  double mesh_norm_ = 0.0;
};

// x_j = a + j (b - a) / n. Requires a < b and n >= 2.
Partition uniform_partition(double a, double b, int n);

/// Identifies one global basis function. All indices are zero-based:
/// global = subinterval * r + local_node.
struct BasisIndex {
  std::size_t global = 0;
  std::size_t local_node = 0;
  std::size_t subinterval = 0;

  static BasisIndex from_global(std::size_t global, int r) {
    const auto rr = static_cast<std::size_t>(r);
    return {global, global % rr, global / rr};
  }
  static BasisIndex from_local(std::size_t local_node, std::size_t subinterval, int r) {
    return {subinterval * static_cast<std::size_t>(r) + local_node, local_node, subinterval};
  }

  friend bool operator==(const BasisIndex&, const BasisIndex&) = default;
};

inline std::size_t basis_size(const Partition& part, const GaussRule& rule) {
  return part.size() * static_cast<std::size_t>(rule.order);
}

// Gauss points f_q(tau_p) of every subinterval, ordered by global index.
std::vector<double> global_nodes(const Partition& part, const GaussRule& rule);

// Lagrange cardinal polynomial l_p on the rule's nodes (p zero-based).
// Throws ConfigError for p >= r.
double lagrange_eval(const GaussRule& rule, std::size_t p, double t);

// psi_i(x): l_p(f_q^{-1}(x)) on the owning subinterval, zero elsewhere.
double basis_eval(const Partition& part, const GaussRule& rule, const BasisIndex& i, double x);

// Exact integral of psi_i^2 over [a, b], equal to (h_q / 2) w_p.
double basis_l2_norm_sq(const Partition& part, const GaussRule& rule, const BasisIndex& i);

}  // namespace nceig
