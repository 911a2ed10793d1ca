#include "nceig/assembly.hpp"

#include <sstream>

#include "nceig/errors.hpp"
#include "nceig/parallel.hpp"

namespace nceig {

MultiplicationCoefficients multiplication_coefficients(const Partition& part,
                                                       const GaussRule& rule) {
  MultiplicationCoefficients m;
  m.values.reserve(basis_size(part, rule));
  for (std::size_t q = 0; q < part.size(); ++q) {
    const double mid = part.midpoint(q);
    for (int p = 0; p < rule.order; ++p) m.values.push_back(mid * mid);
  }
  return m;
}

OperatorMatrix assemble(const Kernel& kernel, double alpha, const Partition& part,
                        const GaussRule& rule) {
  const std::size_t size = basis_size(part, rule);
  const std::vector<double> t = global_nodes(part, rule);
  const MultiplicationCoefficients m = multiplication_coefficients(part, rule);

  Matrix a(size, size);
  parallel_for(size, [&](std::size_t i) {
    const double norm_sq = basis_l2_norm_sq(part, rule, BasisIndex::from_global(i, rule.order));
    auto row = a.row(i);
    for (std::size_t j = 0; j < size; ++j) {
      double k = 0.0;
      try {
        k = eval_kernel(kernel, t[i], t[j]);
      } catch (const NonFiniteKernelError& e) {
        std::ostringstream msg;
        msg << e.what() << " [node pair (" << i << ", " << j << ")]";
        throw NonFiniteKernelError(e.x(), e.u(), msg.str());
      }
      row[j] = operator_entry(alpha, k, norm_sq, m.values[i], i == j);
    }
  });
  return OperatorMatrix(std::move(a), alpha, kernel.source(), part, rule.order);
}

double degenerate_kernel_eval(const Kernel& kernel, const Partition& part, const GaussRule& rule,
                              double x, double u) {
  const std::size_t qx = part.locate(x);
  const std::size_t qu = part.locate(u);
  const double tx = part.to_reference(qx, x);
  const double tu = part.to_reference(qu, u);
  const auto r = static_cast<std::size_t>(rule.order);
  double sum = 0.0;
  for (std::size_t p = 0; p < r; ++p) {
    const double lx = lagrange_eval(rule, p, tx);
    const double node_x = part.to_global(qx, rule.nodes[p]);
    for (std::size_t s = 0; s < r; ++s) {
      const double node_u = part.to_global(qu, rule.nodes[s]);
      sum += kernel.raw(node_x, node_u) * lx * lagrange_eval(rule, s, tu);
    }
  }
  return sum;
}

}  // namespace nceig
