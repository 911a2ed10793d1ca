#include "nceig/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nceig/errors.hpp"

namespace nceig {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();
constexpr std::size_t sweeps_per_size = 30;
constexpr std::size_t exceptional_shift_period = 10;

// Diagonal similarity with powers of two so row and column norms are
// comparable. Exact in floating point; eigenvalues are unchanged.
void balance(Matrix& a) {
  constexpr double radix = 2.0;
  constexpr double sqrdx = radix * radix;
  const std::size_t n = a.rows();
  bool done = false;
  while (!done) {
    done = true;
    for (std::size_t i = 0; i < n; ++i) {
      double c = 0.0;
      double r = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        g = 1.0 / f;
        for (double& v : a.row(i)) v *= g;
        for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
      }
    }
  }
}

// Householder reduction to upper Hessenberg form; entries below the first
// subdiagonal are zeroed on exit.
void reduce_to_hessenberg(Matrix& h) {
  const std::size_t n = h.rows();
  if (n < 3) return;
  std::vector<double> ort(n, 0.0);
  std::vector<double> f(n, 0.0);
  for (std::size_t m = 1; m + 1 < n; ++m) {
    double scale = 0.0;
    for (std::size_t i = m; i < n; ++i) scale += std::abs(h(i, m - 1));
    if (scale == 0.0) continue;

    double sum = 0.0;
    for (std::size_t i = n; i-- > m;) {
      ort[i] = h(i, m - 1) / scale;
      sum += ort[i] * ort[i];
    }
    double g = std::sqrt(sum);
    if (ort[m] > 0) g = -g;
    sum -= ort[m] * g;
    ort[m] -= g;

    // H <- (I - u u^T / sum) H, accumulated row by row.
    std::fill(f.begin() + m, f.end(), 0.0);
    for (std::size_t i = m; i < n; ++i) {
      const double oi = ort[i];
      const auto row = h.row(i);
      for (std::size_t j = m; j < n; ++j) f[j] += oi * row[j];
    }
    for (std::size_t i = m; i < n; ++i) {
      const double oi = ort[i] / sum;
      auto row = h.row(i);
      for (std::size_t j = m; j < n; ++j) row[j] -= oi * f[j];
    }
    // H <- H (I - u u^T / sum).
    for (std::size_t i = 0; i < n; ++i) {
      auto row = h.row(i);
      double d = 0.0;
      for (std::size_t j = m; j < n; ++j) d += ort[j] * row[j];
      d /= sum;
      for (std::size_t j = m; j < n; ++j) row[j] -= d * ort[j];
    }
    ort[m] *= scale;
    h(m, m - 1) = scale * g;
    for (std::size_t i = m + 1; i < n; ++i) h(i, m - 1) = 0.0;
  }
}

// Francis double-shift QR on an upper Hessenberg matrix (eigenvalues only).
void hessenberg_qr(Matrix& h, Spectrum& out) {
  const std::size_t n = h.rows();
  std::vector<double> wr(n, 0.0);
  std::vector<double> wi(n, 0.0);

  double anorm = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = (i > 0 ? i - 1 : 0); j < n; ++j) anorm += std::abs(h(i, j));

  const std::size_t max_sweeps = sweeps_per_size * n;
  std::ptrdiff_t nn = static_cast<std::ptrdiff_t>(n) - 1;
  std::size_t stalled = 0;
  double shift_acc = 0.0;

  while (nn >= 0) {
    std::ptrdiff_t l = nn;
    for (; l >= 1; --l) {
      double s = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
      if (s == 0.0) s = anorm;
      if (std::abs(h(l, l - 1)) <= eps * s) {
        h(l, l - 1) = 0.0;
        break;
      }
    }

    double x = h(nn, nn);
    if (l == nn) {
      wr[nn] = x + shift_acc;
      wi[nn] = 0.0;
      --nn;
      stalled = 0;
      ++out.deflations;
      continue;
    }
    double y = h(nn - 1, nn - 1);
    double w = h(nn, nn - 1) * h(nn - 1, nn);
    if (l == nn - 1) {
      const double p = 0.5 * (y - x);
      const double q = p * p + w;
      double z = std::sqrt(std::abs(q));
      x += shift_acc;
      if (q >= 0.0) {
        z = p + std::copysign(z, p);
        wr[nn - 1] = wr[nn] = x + z;
        if (z != 0.0) wr[nn] = x - w / z;
        wi[nn - 1] = wi[nn] = 0.0;
      } else {
        wr[nn - 1] = wr[nn] = x + p;
        wi[nn - 1] = z;
        wi[nn] = -z;
      }
      nn -= 2;
      stalled = 0;
      ++out.deflations;
      continue;
    }

    if (out.sweeps >= max_sweeps) {
      std::ostringstream msg;
      msg << "QR iteration did not converge after " << out.sweeps << " sweeps; "
          << (n - static_cast<std::size_t>(nn) - 1) << " of " << n << " eigenvalues deflated";
      throw ConvergenceError(msg.str(), out.sweeps, n - static_cast<std::size_t>(nn) - 1);
    }
    if (stalled > 0 && stalled % exceptional_shift_period == 0) {
      shift_acc += x;
      for (std::ptrdiff_t i = 0; i <= nn; ++i) h(i, i) -= x;
      const double s = std::abs(h(nn, nn - 1)) + std::abs(h(nn - 1, nn - 2));
      x = y = 0.75 * s;
      w = -0.4375 * s * s;
    }
    ++stalled;
    ++out.sweeps;

    // Find two consecutive small subdiagonal elements.
    double p = 0.0;
    double q = 0.0;
    double r = 0.0;
    double z = 0.0;
    std::ptrdiff_t m = nn - 2;
    for (; m >= l; --m) {
      z = h(m, m);
      r = x - z;
      const double s0 = y - z;
      p = (r * s0 - w) / h(m + 1, m) + h(m, m + 1);
      q = h(m + 1, m + 1) - z - r - s0;
      r = h(m + 2, m + 1);
      const double s = std::abs(p) + std::abs(q) + std::abs(r);
      p /= s;
      q /= s;
      r /= s;
      if (m == l) break;
      const double u = std::abs(h(m, m - 1)) * (std::abs(q) + std::abs(r));
      const double v = std::abs(p) * (std::abs(h(m - 1, m - 1)) + std::abs(z) +
                                      std::abs(h(m + 1, m + 1)));
      if (u <= eps * v) break;
    }
    for (std::ptrdiff_t i = m + 2; i <= nn; ++i) {
      h(i, i - 2) = 0.0;
      if (i != m + 2) h(i, i - 3) = 0.0;
    }

    // Double QR step on rows l..nn and columns m..nn.
    for (std::ptrdiff_t k = m; k <= nn - 1; ++k) {
      const bool notlast = k != nn - 1;
      if (k != m) {
        p = h(k, k - 1);
        q = h(k + 1, k - 1);
        r = notlast ? h(k + 2, k - 1) : 0.0;
        x = std::abs(p) + std::abs(q) + std::abs(r);
        if (x == 0.0) continue;
        p /= x;
        q /= x;
        r /= x;
      }
      const double s = std::copysign(std::sqrt(p * p + q * q + r * r), p);
      if (s == 0.0) continue;
      if (k == m) {
        if (l != m) h(k, k - 1) = -h(k, k - 1);
      } else {
        h(k, k - 1) = -s * x;
      }
      p += s;
      x = p / s;
      y = q / s;
      z = r / s;
      q /= p;
      r /= p;
      {
        auto row0 = h.row(k);
        auto row1 = h.row(k + 1);
        for (std::ptrdiff_t j = k; j <= nn; ++j) {
          double pp = row0[j] + q * row1[j];
          if (notlast) {
            auto row2 = h.row(k + 2);
            pp += r * row2[j];
            row2[j] -= pp * z;
          }
          row1[j] -= pp * y;
          row0[j] -= pp * x;
        }
      }
      const std::ptrdiff_t last = std::min(nn, k + 3);
      for (std::ptrdiff_t i = l; i <= last; ++i) {
        double pp = x * h(i, k) + y * h(i, k + 1);
        if (notlast) {
          pp += z * h(i, k + 2);
          h(i, k + 2) -= pp * r;
        }
        h(i, k + 1) -= pp * q;
        h(i, k) -= pp;
      }
    }
  }

  out.eigenvalues.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.eigenvalues[i] = {wr[i], wi[i]};
}

}  // namespace

Spectrum eigenvalues(const Matrix& a) {
  if (!a.square() || a.rows() == 0) {
    throw ConfigError("eigenvalues need a non-empty square matrix");
  }
  for (double v : a.data()) {
    if (!std::isfinite(v)) throw ConfigError("matrix has non-finite entries");
  }
  Spectrum out;
  out.size = a.rows();
  Matrix h = a;
  balance(h);
  reduce_to_hessenberg(h);
  hessenberg_qr(h, out);
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(),
            [](std::complex<double> lhs, std::complex<double> rhs) {
              if (lhs.real() != rhs.real()) return lhs.real() > rhs.real();
              return lhs.imag() < rhs.imag();
            });
  return out;
}

Spectrum eigenvalues(const OperatorMatrix& a) { return eigenvalues(a.entries()); }

namespace {

using cplx = std::complex<double>;

// LU with partial pivoting in place; returns false on an exactly zero pivot.
bool lu_factor(std::vector<cplx>& lu, std::vector<std::size_t>& piv, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t best = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(lu[i * n + k]) > std::abs(lu[best * n + k])) best = i;
    }
    piv[k] = best;
    if (lu[best * n + k] == cplx(0.0)) return false;
    if (best != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu[k * n + j], lu[best * n + j]);
    }
    const cplx pivot = lu[k * n + k];
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx factor = lu[i * n + k] / pivot;
      lu[i * n + k] = factor;
      if (factor == cplx(0.0)) continue;
      for (std::size_t j = k + 1; j < n; ++j) lu[i * n + j] -= factor * lu[k * n + j];
    }
  }
  return true;
}

void lu_solve(const std::vector<cplx>& lu, const std::vector<std::size_t>& piv, std::size_t n,
              std::vector<cplx>& b) {
  for (std::size_t k = 0; k < n; ++k) std::swap(b[k], b[piv[k]]);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) b[i] -= lu[i * n + j] * b[j];
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = i + 1; j < n; ++j) b[i] -= lu[i * n + j] * b[j];
    b[i] /= lu[i * n + i];
  }
}

double norm2(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const cplx& z : v) s += std::norm(z);
  return std::sqrt(s);
}

}  // namespace

double eigen_residual(const Matrix& a, std::complex<double> lambda) {
  const std::size_t n = a.rows();
  const double anorm = frobenius_norm(a);
  const double scale = anorm > 0.0 ? anorm : 1.0;

  std::vector<cplx> lu(n * n);
  std::vector<std::size_t> piv(n);
  cplx shift = lambda;
  for (int attempt = 0;; ++attempt) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) lu[i * n + j] = a(i, j) - (i == j ? shift : cplx(0.0));
    if (lu_factor(lu, piv, n)) break;
    if (attempt >= 8) break;
    shift += 1e-13 * scale;
  }

  // Deterministic start vector with no special alignment.
  std::vector<cplx> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.5 * std::sin(1.0 + 2.0 * static_cast<double>(i));
  double nv = norm2(v);
  for (cplx& z : v) z /= nv;

  for (int step = 0; step < 3; ++step) {
    std::vector<cplx> w = v;
    lu_solve(lu, piv, n, w);
    const double nw = norm2(w);
    if (!std::isfinite(nw) || nw == 0.0) break;
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / nw;
  }

  double res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cplx acc = -lambda * v[i];
    for (std::size_t j = 0; j < n; ++j) acc += a(i, j) * v[j];
    res += std::norm(acc);
  }
  return std::sqrt(res) / scale;
}

}  // namespace nceig
