#pragma once

#include <cstddef>
#include <ostream>
#include <vector>

#include "sparse_triangle/core.hpp"

namespace sparse_triangle {

/// sign(y_i) * max(|y_i| - sigma, 0), the proximal map of sigma * ||.||_1.
DenseVector soft_threshold(const DenseVector& y, double sigma);

/// ||soft_threshold(y, sigma)||_1 for sigma in [0, ||y||_inf], y != 0.
double phi(const DenseVector& y, double sigma);

/// Right derivative of phi at sigma: minus the number of entries with |y_i| > sigma.
long long phi_right_derivative(const DenseVector& y, double sigma);

/// Exact piecewise-linear form of sigma -> ||S_sigma(y)||_1.
///
/// Breakpoints are 0 and the distinct nonzero magnitudes of y, strictly increasing, so the
/// last breakpoint is sigma_max = ||y||_inf. Segment k spans [breakpoints[k],
/// breakpoints[k+1]] with slope segment_slopes[k] = -#{i : |y_i| > breakpoints[k]}. Tied
/// magnitudes share one breakpoint, at which the slope jumps by their multiplicity.
class PhiCurve {
 public:
  explicit PhiCurve(const DenseVector& y);

  double sigma_max() const { return breakpoints_.back(); }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<long long>& segment_slopes() const { return slopes_; }
  const std::vector<double>& values_at_breakpoints() const { return values_; }

  /// Evaluates the curve at sigma in [0, sigma_max].
  double operator()(double sigma) const;

 private:
  std::vector<double> breakpoints_;
  std::vector<long long> slopes_;
  std::vector<double> values_;
};

inline PhiCurve phi_curve(const DenseVector& y) { return PhiCurve(y); }

struct StaircasePoint {
  double sigma = 0.0;
  std::size_t support_count = 0;
};

/// ||S_sigma(y)||_0 sampled at `grid` evenly spaced sigma in [0, sigma_max], ends included.
std::vector<StaircasePoint> support_staircase(const DenseVector& y, std::size_t grid);

void write_staircase_csv(std::ostream& out, const std::vector<StaircasePoint>& points);
/// Columns sigma,phi,slope; the last row carries slope 0 at sigma_max.
void write_phi_curve_csv(std::ostream& out, const PhiCurve& curve);

}  // namespace sparse_triangle
