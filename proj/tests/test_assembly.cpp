#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <string>

#include "nceig/assembly.hpp"
#include "nceig/errors.hpp"
#include "oracles.hpp"

using namespace nceig;

namespace {

// psi_i restricted to the closed subinterval q, from the product formula and
// written independently of the library.
double psi_on(const Partition& part, const GaussRule& rule, std::size_t q, std::size_t i,
              double x) {
  const std::size_t r = static_cast<std::size_t>(rule.order);
  if (i / r != q) return 0.0;
  const std::size_t p = i % r;
  const double lo = part.breakpoints()[q];
  const double hi = part.breakpoints()[q + 1];
  const double t = (2.0 * x - lo - hi) / (hi - lo);
  double v = 1.0;
  for (std::size_t s = 0; s < r; ++s) {
    if (s != p) v *= (t - rule.nodes[s]) / (rule.nodes[p] - rule.nodes[s]);
  }
  return v;
}

// a_ij = alpha * sum_p k(t_p, t_j) * int psi_i psi_p - m_i delta_ij, with the
// Gram integrals from 200-panel composite Simpson on each subinterval.
Matrix brute_force_matrix(const Kernel& k, double alpha, const Partition& part,
                          const GaussRule& rule) {
  const std::size_t size = part.size() * rule.order;
  std::vector<double> t;
  for (std::size_t q = 0; q < part.size(); ++q) {
    const double lo = part.breakpoints()[q];
    const double hi = part.breakpoints()[q + 1];
    for (double tau : rule.nodes) t.push_back(lo + 0.5 * (tau + 1.0) * (hi - lo));
  }
  Matrix gram(size, size);
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t p = 0; p < size; ++p) {
      double g = 0.0;
      for (std::size_t q = 0; q < part.size(); ++q) {
        g += oracle::simpson_integral(
            [&](double x) { return psi_on(part, rule, q, i, x) * psi_on(part, rule, q, p, x); },
            part.breakpoints()[q], part.breakpoints()[q + 1], 200);
      }
      gram(i, p) = g;
    }
  }
  Matrix a(size, size);
  for (std::size_t i = 0; i < size; ++i) {
    const std::size_t q = i / rule.order;
    const double mid = 0.5 * (part.breakpoints()[q] + part.breakpoints()[q + 1]);
    for (std::size_t j = 0; j < size; ++j) {
      double s = 0.0;
      for (std::size_t p = 0; p < size; ++p) s += k.raw(t[p], t[j]) * gram(i, p);
      a(i, j) = alpha * s - (i == j ? mid * mid : 0.0);
    }
  }
  return a;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  }
  return worst;
}

}  // namespace

TEST_CASE("multiplication coefficients") {
  CHECK(multiplication_coefficients(uniform_partition(0, 1, 2), gauss_rule(1)).values ==
        std::vector<double>{0.0625, 0.5625});
  CHECK(multiplication_coefficients(uniform_partition(-1, 1, 2), gauss_rule(2)).values ==
        std::vector<double>{0.25, 0.25, 0.25, 0.25});
  CHECK(multiplication_coefficients(uniform_partition(-2, 2, 4), gauss_rule(1)).values ==
        std::vector<double>{2.25, 0.25, 0.25, 2.25});
  const auto m = multiplication_coefficients(uniform_partition(-3, 1, 7), gauss_rule(3));
  for (std::size_t i = 0; i < m.values.size(); ++i) {
    CHECK(m.values[i] >= 0.0);
    CHECK(m.values[i] == m.values[i - i % 3]);
  }
}

TEST_CASE("constant kernel on two midpoints: hand-derived matrix") {
  for (const char* text : {"1", "1+0*x*u"}) {
    const auto a = assemble(Kernel::from_expression(text), 1.0, uniform_partition(0, 1, 2),
                            gauss_rule(1));
    REQUIRE(a.size() == 2);
    CHECK(std::abs(a(0, 0) - 0.4375) <= 1e-14);
    CHECK(std::abs(a(0, 1) - 0.5) <= 1e-14);
    CHECK(std::abs(a(1, 0) - 0.5) <= 1e-14);
    CHECK(std::abs(a(1, 1) + 0.0625) <= 1e-14);
  }
}

TEST_CASE("alpha = 0 leaves the multiplication part") {
  const auto part = uniform_partition(-2, 3, 5);
  const auto& rule = gauss_rule(2);
  const auto a = assemble(Kernel::cauchy(), 0.0, part, rule);
  const auto m = multiplication_coefficients(part, rule);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) CHECK(a(i, j) == (i == j ? -m.values[i] : 0.0));
}

TEST_CASE("symmetric kernels on uniform meshes give symmetric matrices for r <= 2") {
  for (int r : {1, 2}) {
    for (const auto& k : {Kernel::gaussian(), Kernel::cauchy()}) {
      const auto a = assemble(k, 1.0, uniform_partition(-2, 2, 13), gauss_rule(r));
      double worst = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(a(i, j) - a(j, i)));
      CHECK(worst <= 1e-15);
    }
  }
  // With r = 3 the Gauss weights differ, so the row scaling breaks symmetry.
  const auto a3 = assemble(Kernel::gaussian(), 1.0, uniform_partition(-2, 2, 4), gauss_rule(3));
  CHECK(std::abs(a3(0, 1) - a3(1, 0)) > 1e-3);
}

TEST_CASE("assembly matches the brute-force degenerate-kernel expansion") {
  const Kernel kernels[] = {Kernel::gaussian(), Kernel::cauchy(),
                            Kernel::from_expression("exp(x)*cos(u) + x*u^2")};
  for (const auto& k : kernels) {
    for (int n = 1; n <= 4; ++n) {
      for (int r = 1; r <= 2; ++r) {
        std::vector<double> x(n + 1);
        for (int j = 0; j <= n; ++j) x[j] = static_cast<double>(j) / n;
        const Partition part(x);
        const auto& rule = gauss_rule(r);
        const auto a = assemble(k, 1.7, part, rule);
        const Matrix oracle_a = brute_force_matrix(k, 1.7, part, rule);
        CAPTURE(k.source());
        CAPTURE(n);
        CAPTURE(r);
        CHECK(max_abs_diff(a.entries(), oracle_a) <= 1e-10);
      }
    }
  }
}

TEST_CASE("entries are reproducible from the stored metadata") {
  const auto a = assemble(Kernel::from_expression("exp(-abs(x-u))"), -0.75,
                          uniform_partition(-1.5, 2.5, 9), gauss_rule(3));
  const auto& rule = gauss_rule(a.order());
  const Kernel k = Kernel::from_spec(a.kernel_source());
  const auto t = global_nodes(a.partition(), rule);
  const auto m = multiplication_coefficients(a.partition(), rule);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double norm = basis_l2_norm_sq(a.partition(), rule, BasisIndex::from_global(i, 3));
    for (std::size_t j = 0; j < a.size(); ++j) {
      CHECK(a(i, j) == operator_entry(a.alpha(), k.raw(t[i], t[j]), norm, m.values[i], i == j));
    }
  }
}

TEST_CASE("assembly is deterministic and independent of thread count") {
  const auto part = uniform_partition(-4, 4, 60);
  const char* saved = std::getenv("NCEIG_THREADS");
  const std::string restore = saved ? saved : "";
  setenv("NCEIG_THREADS", "0", 1);
  const auto sequential = assemble(Kernel::cauchy(), 1.0, part, gauss_rule(2));
  setenv("NCEIG_THREADS", "7", 1);
  const auto threaded = assemble(Kernel::cauchy(), 1.0, part, gauss_rule(2));
  const auto again = assemble(Kernel::cauchy(), 1.0, part, gauss_rule(2));
  if (saved) setenv("NCEIG_THREADS", restore.c_str(), 1);
  else unsetenv("NCEIG_THREADS");
  CHECK(sequential.entries() == threaded.entries());
  CHECK(threaded.entries() == again.entries());
}

TEST_CASE("non-finite kernel values name the node pair") {
  try {
    assemble(Kernel::from_expression("1/(x-u)"), 1.0, uniform_partition(0, 1, 3), gauss_rule(1));
    FAIL("expected NonFiniteKernelError");
  } catch (const NonFiniteKernelError& e) {
    const std::string what = e.what();
    CHECK(what.find("node pair (0, 0)") != std::string::npos);
    CHECK(e.x() == e.u());
  }
}

TEST_CASE("degenerate kernel interpolates at the node grid") {
  const auto part = uniform_partition(-2, 2, 5);
  const auto& rule = gauss_rule(3);
  const auto t = global_nodes(part, rule);
  for (double x : t)
    for (double u : t)
      CHECK(degenerate_kernel_eval(Kernel::gaussian(), part, rule, x, u) ==
            doctest::Approx(Kernel::gaussian().raw(x, u)).epsilon(1e-13));
}

TEST_CASE("degenerate kernel sup error decays like h^r") {
  auto sup_error = [](int n, int r) {
    const auto part = uniform_partition(-2, 2, n);
    const auto& rule = gauss_rule(r);
    double worst = 0.0;
    for (int i = 0; i <= 100; ++i) {
      for (int j = 0; j <= 100; ++j) {
        const double x = -2.0 + 0.04 * i;
        const double u = -2.0 + 0.04 * j;
        worst = std::max(worst, std::abs(Kernel::gaussian().raw(x, u) -
                                         degenerate_kernel_eval(Kernel::gaussian(), part, rule, x, u)));
      }
    }
    return worst;
  };
  for (int r : {1, 2}) {
    const double expected = std::pow(2.0, -r);
    for (int n : {20, 40}) {
      const double ratio = sup_error(2 * n, r) / sup_error(n, r);
      CAPTURE(r);
      CAPTURE(n);
      CAPTURE(ratio);
      CHECK(ratio >= 0.7 * expected);
      CHECK(ratio <= 1.3 * expected);
    }
  }
}
