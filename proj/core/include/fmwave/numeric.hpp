#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fmwave {

/// Error type thrown by all modules.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Compensated (Kahan) accumulator. Keeps long weighted sums deterministic
/// to a few ulps regardless of term count.
class KahanSum {
 public:
  void add(double x) {
    double y = x - comp_;
    double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline double dist2(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

/// Tridiagonal solver (Thomas algorithm) with a reusable factorization.
/// lower[0] and upper[n-1] are ignored.
class TridiagonalSolver {
 public:
  void factor(std::span<const double> lower, std::span<const double> diag,
              std::span<const double> upper);
  /// Overwrites rhs with the solution. Requires factor() first.
  void solve(std::span<double> rhs) const;

 private:
  std::vector<double> cprime_;   // modified upper diagonal
  std::vector<double> inv_piv_;  // reciprocal pivots
  std::vector<double> lower_;
};

/// Largest and smallest eigenvalue of a small symmetric matrix (row-major k*k),
/// via cyclic Jacobi. Intended for state dimensions k <= 8.
struct EigenRange {
  double min;
  double max;
};
EigenRange symmetric_eigen_range(std::vector<double> a, int k);

/// Least-squares slope of y against x.
double least_squares_slope(std::span<const double> x, std::span<const double> y);

/// FNV-1a 64-bit hash of a byte buffer, as fixed-width hex.
std::string fnv1a64_hex(std::span<const unsigned char> bytes);

}  // namespace fmwave
