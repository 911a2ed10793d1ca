#include "nceig/quadrature.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "nceig/errors.hpp"

namespace nceig {

LegendreValue legendre_eval(int r, double t) {
  if (r <= 0) return {1.0, 0.0};
  double prev = 1.0;  // P_{k-1}
  double cur = t;     // P_k
  double dprev = 0.0;
  double dcur = 1.0;
  for (int k = 1; k < r; ++k) {
    const double next = ((2.0 * k + 1.0) * t * cur - k * prev) / (k + 1.0);
    // P'_{k+1} = P'_{k-1} + (2k+1) P_k holds on all of [-1, 1], endpoints included.
    const double dnext = dprev + (2.0 * k + 1.0) * cur;
    prev = cur;
    cur = next;
    dprev = dcur;
    dcur = dnext;
  }
  return {cur, dcur};
}

namespace {

constexpr int max_newton_steps = 100;
constexpr double newton_residual_tol = 1e-15;

// k-th largest root (k = 1..r) of P_r. Zeros cos(theta_k) satisfy
// (k - 1/2) pi / (r + 1/2) < theta_k < k pi / (r + 1/2).
double legendre_root(int r, int k) {
  const double denom = r + 0.5;
  double lo = std::cos(k * std::numbers::pi / denom);
  double hi = std::cos((k - 0.5) * std::numbers::pi / denom);
  double t = std::cos((k - 0.25) * std::numbers::pi / denom);

  for (int step = 0; step < max_newton_steps; ++step) {
    const auto [p, dp] = legendre_eval(r, t);
    if (std::abs(p) < newton_residual_tol) break;
    // Shrink the bracket using the sign of P_r at the current iterate.
    const double p_lo = legendre_eval(r, lo).value;
    if ((p < 0) == (p_lo < 0)) {
      lo = t;
    } else {
      hi = t;
    }
    double next = t - p / dp;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == t) break;
    t = next;
  }
  return t;
}

GaussRule build_rule(int r) {
  GaussRule rule;
  rule.order = r;
  rule.nodes.assign(r, 0.0);
  rule.weights.assign(r, 0.0);
  const int half = (r + 1) / 2;
  for (int k = 1; k <= half; ++k) {
    const double t = (2 * k - 1 == r) ? 0.0 : legendre_root(r, k);
    const double dp = legendre_eval(r, t).derivative;
    const double w = 2.0 / ((1.0 - t * t) * dp * dp);
    // Root k counted from the right lands at index r - k ascending.
    rule.nodes[r - k] = t;
    rule.nodes[k - 1] = -t;
    rule.weights[r - k] = w;
    rule.weights[k - 1] = w;
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_rule(int r) {
  if (r < 1 || r > max_gauss_order) {
    throw ConfigError("Gauss order " + std::to_string(r) + " outside [1, " +
                      std::to_string(max_gauss_order) + "]");
  }
  static std::array<std::once_flag, max_gauss_order + 1> once;
  static std::array<GaussRule, max_gauss_order + 1> cache;
  std::call_once(once[r], [r] { cache[r] = build_rule(r); });
  return cache[r];
}

}  // namespace nceig
