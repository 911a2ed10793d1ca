#pragma once

#include <string>
#include <vector>

#include "nceig/kernel.hpp"
#include "nceig/matrix.hpp"
#include "nceig/mesh_basis.hpp"
#include "nceig/quadrature.hpp"

namespace nceig {

// m_i = (midpoint of the subinterval owning basis function i)^2, one entry
// per global basis index. The piecewise-constant approximation of x^2 is
// this list together with the partition.
struct MultiplicationCoefficients {
  std::vector<double> values;
};

MultiplicationCoefficients multiplication_coefficients(const Partition& part,
                                                       const GaussRule& rule);

/// Discrete operator of the degenerate kernel method:
///
///   a_ij = alpha * k(t_i, t_j) * |psi_i|^2 - m_i * delta_ij
///
/// where t are the global Gauss points and |psi_i|^2 = (h_q / 2) w_p is the
/// exact squared L2 norm of basis function i. The basis functions have
/// disjoint supports, so no quadrature is involved. Rows are scaled by
/// |psi_i|^2 and the matrix is not symmetrised.
class OperatorMatrix {
 public:
  OperatorMatrix(Matrix entries, double alpha, std::string kernel_source, Partition partition,
                 int order)
      : entries_(std::move(entries)),
        alpha_(alpha),
        kernel_source_(std::move(kernel_source)),
        partition_(std::move(partition)),
        order_(order) {}

  std::size_t size() const noexcept { return entries_.rows(); }
  const Matrix& entries() const noexcept { return entries_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }
  double alpha() const noexcept { return alpha_; }
  const std::string& kernel_source() const noexcept { return kernel_source_; }
  const Partition& partition() const noexcept { return partition_; }
  int order() const noexcept { return order_; }

 private:
  Matrix entries_;
  double alpha_;
  std::string kernel_source_;
  Partition partition_;
  int order_;
};

// Entry formula shared by assemble() and anyone re-deriving entries.
inline double operator_entry(double alpha, double kernel_value, double norm_sq, double m,
                             bool diagonal) {
  const double v = alpha * kernel_value * norm_sq;
  return diagonal ? v - m : v;
}

/// Rows are filled in parallel (see parallel_for); each entry is a closed
/// form so the result does not depend on scheduling. Throws
/// NonFiniteKernelError naming the node pair if k is not finite there.
OperatorMatrix assemble(const Kernel& kernel, double alpha, const Partition& part,
                        const GaussRule& rule);

// k_N(x, u) = sum_ij k(t_i, t_j) psi_i(x) psi_j(u). Only the r basis
// functions supported at x (and at u) contribute.
double degenerate_kernel_eval(const Kernel& kernel, const Partition& part, const GaussRule& rule,
                              double x, double u);

}  // namespace nceig
