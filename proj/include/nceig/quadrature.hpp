#pragma once

#include <vector>

namespace nceig {

// Largest supported Gauss-Legendre order.
inline constexpr int max_gauss_order = 64;

struct LegendreValue {
  double value;
  double derivative;
};

// P_r(t) and P_r'(t) by the three-term recurrence.
LegendreValue legendre_eval(int r, double t);

/// r-point Gauss-Legendre rule on [-1, 1]. Nodes ascend strictly and are
/// mirrored exactly about zero; weights are positive and sum to 2.
struct GaussRule {
  int order = 0;
  std::vector<double> nodes;
  std::vector<double> weights;

  int size() const noexcept { return order; }
};

/// Returns the cached rule of order r, computing it on first use.
/// Nodes are the roots of P_r found by bracketed Newton iteration,
/// weights are 2 / ((1 - t^2) P_r'(t)^2). Safe to call concurrently.
/// Throws ConfigError when r is outside [1, max_gauss_order].
const GaussRule& gauss_rule(int r);

}  // namespace nceig
