#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "nceig/assembly.hpp"
#include "nceig/matrix.hpp"

namespace nceig {

/// All eigenvalues of a real square matrix, sorted by descending real part
/// (ties by ascending imaginary part). Complex eigenvalues come in exact
/// conjugate pairs.
struct Spectrum {
  std::vector<std::complex<double>> eigenvalues;
  std::size_t size = 0;
  std::size_t sweeps = 0;       // QR iterations over all deflations
  std::size_t deflations = 0;   // 1x1 and 2x2 blocks split off
};

/// Balancing, Householder reduction to Hessenberg form, then Francis
/// implicit double-shift QR. Exceptional shifts are applied after every 10
/// sweeps without a deflation. Deterministic for identical input.
///
/// Throws ConfigError for non-square, empty or non-finite input and
/// ConvergenceError when 30 * size sweeps are exhausted.
Spectrum eigenvalues(const Matrix& a);
Spectrum eigenvalues(const OperatorMatrix& a);

/// ||A v - lambda v||_2 / ||A||_F for the unit vector v produced by a few
/// inverse-iteration steps on A - lambda I. A shift that makes the
/// factorisation break down exactly is perturbed by 1e-13 ||A||_F.
double eigen_residual(const Matrix& a, std::complex<double> lambda);

}  // namespace nceig
