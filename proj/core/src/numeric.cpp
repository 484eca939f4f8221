#include "fmwave/numeric.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>

namespace fmwave {

void TridiagonalSolver::factor(std::span<const double> lower, std::span<const double> diag,
                               std::span<const double> upper) {
  const std::size_t n = diag.size();
  if (lower.size() != n || upper.size() != n) throw Error("tridiagonal: band size mismatch");
  cprime_.resize(n);
  inv_piv_.resize(n);
  lower_.assign(lower.begin(), lower.end());
  double piv = diag[0];
  if (piv == 0.0) throw Error("tridiagonal: zero pivot");
  inv_piv_[0] = 1.0 / piv;
  cprime_[0] = upper[0] * inv_piv_[0];
  for (std::size_t i = 1; i < n; ++i) {
    piv = diag[i] - lower[i] * cprime_[i - 1];
    if (piv == 0.0) throw Error("tridiagonal: zero pivot");
    inv_piv_[i] = 1.0 / piv;
    cprime_[i] = upper[i] * inv_piv_[i];
  }
}

void TridiagonalSolver::solve(std::span<double> rhs) const {
  const std::size_t n = inv_piv_.size();
  if (rhs.size() != n) throw Error("tridiagonal: rhs size mismatch");
  rhs[0] *= inv_piv_[0];
  for (std::size_t i = 1; i < n; ++i) rhs[i] = (rhs[i] - lower_[i] * rhs[i - 1]) * inv_piv_[i];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= cprime_[i] * rhs[i + 1];
}

EigenRange symmetric_eigen_range(std::vector<double> a, int k) {
  if (k <= 0 || static_cast<int>(a.size()) != k * k) throw Error("eigen: bad matrix size");
  // Cyclic Jacobi sweeps; k is tiny so convergence is immediate.
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < k; ++p)
      for (int q = p + 1; q < k; ++q) off += std::abs(a[p * k + q]);
    if (off < 1e-15) break;
    for (int p = 0; p < k; ++p) {
      for (int q = p + 1; q < k; ++q) {
        double apq = a[p * k + q];
        if (std::abs(apq) < 1e-300) continue;
        double theta = 0.5 * (a[q * k + q] - a[p * k + p]) / apq;
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double cth = 1.0 / std::sqrt(t * t + 1.0);
        double sth = t * cth;
        for (int i = 0; i < k; ++i) {
          double aip = a[i * k + p], aiq = a[i * k + q];
          a[i * k + p] = cth * aip - sth * aiq;
          a[i * k + q] = sth * aip + cth * aiq;
        }
        for (int i = 0; i < k; ++i) {
          double api = a[p * k + i], aqi = a[q * k + i];
          a[p * k + i] = cth * api - sth * aqi;
          a[q * k + i] = sth * api + cth * aqi;
        }
      }
    }
  }
  double lo = a[0], hi = a[0];
  for (int i = 1; i < k; ++i) {
    lo = std::min(lo, a[i * k + i]);
    hi = std::max(hi, a[i * k + i]);
  }
  return {lo, hi};
}

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw Error("least squares: need at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw Error("least squares: degenerate abscissae");
  return sxy / sxx;
}

std::string fnv1a64_hex(std::span<const unsigned char> bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace fmwave
