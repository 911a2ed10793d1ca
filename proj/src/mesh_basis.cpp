#include "nceig/mesh_basis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "nceig/errors.hpp"

namespace nceig {

Partition::Partition(std::vector<double> breakpoints) : breakpoints_(std::move(breakpoints)) {
  if (breakpoints_.size() < 2) {
    throw ConfigError("a partition needs at least one subinterval");
  }
  for (std::size_t j = 0; j < breakpoints_.size(); ++j) {
    if (!std::isfinite(breakpoints_[j])) throw ConfigError("non-finite breakpoint");
    if (j > 0 && !(breakpoints_[j] > breakpoints_[j - 1])) {
      std::ostringstream msg;
      msg << "breakpoints must be strictly ascending (x_" << j - 1 << " = " << breakpoints_[j - 1]
          << ", x_" << j << " = " << breakpoints_[j] << ")";
      throw ConfigError(msg.str());
    }
  }
  for (std::size_t q = 0; q < size(); ++q) mesh_norm_ = std::max(mesh_norm_, length(q));
}

std::size_t Partition::locate(double x) const {
  if (x <= breakpoints_.front()) return 0;
  if (x >= breakpoints_.back()) return size() - 1;
  // First breakpoint strictly greater than x closes the owning subinterval.
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  return static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
}

Partition uniform_partition(double a, double b, int n) {
  if (!(a < b)) {
    std::ostringstream msg;
    msg << "invalid interval [" << a << ", " << b << "]: need a < b";
    throw ConfigError(msg.str());
  }
  if (n < 2) throw ConfigError("partition size n = " + std::to_string(n) + " must be at least 2");
  std::vector<double> x(static_cast<std::size_t>(n) + 1);
  const double step = (b - a) / n;
  for (int j = 0; j <= n; ++j) x[j] = a + j * step;
  x.back() = b;
  return Partition(std::move(x));
}

std::vector<double> global_nodes(const Partition& part, const GaussRule& rule) {
  std::vector<double> t;
  t.reserve(basis_size(part, rule));
  for (std::size_t q = 0; q < part.size(); ++q) {
    for (double tau : rule.nodes) t.push_back(part.to_global(q, tau));
  }
  return t;
}

double lagrange_eval(const GaussRule& rule, std::size_t p, double t) {
  const auto r = static_cast<std::size_t>(rule.order);
  if (p >= r) {
    throw ConfigError("local node index " + std::to_string(p) + " out of range for order " +
                      std::to_string(r));
  }
  double value = 1.0;
  for (std::size_t s = 0; s < r; ++s) {
    if (s == p) continue;
    value *= (t - rule.nodes[s]) / (rule.nodes[p] - rule.nodes[s]);
  }
  return value;
}

double basis_eval(const Partition& part, const GaussRule& rule, const BasisIndex& i, double x) {
  if (part.locate(x) != i.subinterval) return 0.0;
  return lagrange_eval(rule, i.local_node, part.to_reference(i.subinterval, x));
}

double basis_l2_norm_sq(const Partition& part, const GaussRule& rule, const BasisIndex& i) {
  return 0.5 * part.length(i.subinterval) * rule.weights[i.local_node];
}

}  // namespace nceig
