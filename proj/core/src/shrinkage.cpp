#include "sparse_triangle/shrinkage.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sparse_triangle/csv.hpp"

namespace sparse_triangle {
namespace {

void require_nonzero(const DenseVector& y, const char* what) {
  if (y.is_zero()) throw std::invalid_argument(std::string(what) + ": y must be nonzero");
}

void require_sigma_in_range(const DenseVector& y, double sigma, const char* what) {
  if (!(sigma >= 0.0 && sigma <= norm_linf(y))) {
    throw std::domain_error(std::string(what) + ": sigma must lie in [0, ||y||_inf]");
  }
}

}  // namespace

DenseVector soft_threshold(const DenseVector& y, double sigma) {
  if (!(sigma >= 0.0)) throw std::domain_error("soft_threshold: sigma must be >= 0");
  const auto& v = y.values();
  Eigen::VectorXd out = v.array().sign() * (v.array().abs() - sigma).max(0.0);
  return DenseVector(std::move(out));
}

double phi(const DenseVector& y, double sigma) {
  require_nonzero(y, "phi");
  require_sigma_in_range(y, sigma, "phi");
  return (y.values().array().abs() - sigma).max(0.0).sum();
}

long long phi_right_derivative(const DenseVector& y, double sigma) {
  require_nonzero(y, "phi_right_derivative");
  require_sigma_in_range(y, sigma, "phi_right_derivative");
  return -static_cast<long long>((y.values().array().abs() - sigma > 0.0).count());
}

PhiCurve::PhiCurve(const DenseVector& y) {
  require_nonzero(y, "phi_curve");
  std::vector<double> magnitudes;
  magnitudes.reserve(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != 0.0) magnitudes.push_back(std::abs(y[i]));
  }
  std::sort(magnitudes.begin(), magnitudes.end());

  breakpoints_.push_back(0.0);
  for (double m : magnitudes) {
    if (m > breakpoints_.back()) breakpoints_.push_back(m);
  }

  // phi(sigma) = (sum of magnitudes above sigma) - (their count) * sigma, from suffix sums.
  const std::size_t count = magnitudes.size();
  std::vector<double> suffix(count + 1, 0.0);
  for (std::size_t i = count; i-- > 0;) suffix[i] = suffix[i + 1] + magnitudes[i];

  values_.reserve(breakpoints_.size());
  slopes_.reserve(breakpoints_.size() - 1);
  for (std::size_t k = 0; k < breakpoints_.size(); ++k) {
    const double sigma = breakpoints_[k];
    const auto first_above = static_cast<std::size_t>(
        std::upper_bound(magnitudes.begin(), magnitudes.end(), sigma) - magnitudes.begin());
    const std::size_t active = count - first_above;
    values_.push_back(suffix[first_above] - static_cast<double>(active) * sigma);
    if (k + 1 < breakpoints_.size()) slopes_.push_back(-static_cast<long long>(active));
  }
}

double PhiCurve::operator()(double sigma) const {
  if (!(sigma >= 0.0 && sigma <= sigma_max())) {
    throw std::domain_error("PhiCurve: sigma must lie in [0, sigma_max]");
  }
  // Segment k is the last breakpoint <= sigma, capped to the final segment.
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), sigma);
  auto k = static_cast<std::size_t>(std::distance(breakpoints_.begin(), it)) - 1;
  if (k + 1 >= breakpoints_.size()) return values_.back();
  return values_[k] + static_cast<double>(slopes_[k]) * (sigma - breakpoints_[k]);
}

std::vector<StaircasePoint> support_staircase(const DenseVector& y, std::size_t grid) {
  if (grid < 2) throw std::invalid_argument("support_staircase: grid must be >= 2");
  require_nonzero(y, "support_staircase");
  const double sigma_max = norm_linf(y);
  const auto magnitudes = y.values().array().abs().eval();
  std::vector<StaircasePoint> points;
  points.reserve(grid);
  for (std::size_t j = 0; j < grid; ++j) {
    const double sigma = j + 1 == grid
                             ? sigma_max
                             : sigma_max * static_cast<double>(j) / static_cast<double>(grid - 1);
    points.push_back({sigma, static_cast<std::size_t>((magnitudes > sigma).count())});
  }
  return points;
}

void write_staircase_csv(std::ostream& out, const std::vector<StaircasePoint>& points) {
  csv::Writer w(out);
  w.header({"sigma", "support_count"});
  for (const auto& p : points) {
    w.field(p.sigma).field(p.support_count);
    w.end_row();
  }
}

void write_phi_curve_csv(std::ostream& out, const PhiCurve& curve) {
  csv::Writer w(out);
  w.header({"sigma", "phi", "slope"});
  const auto& bp = curve.breakpoints();
  for (std::size_t k = 0; k < bp.size(); ++k) {
    const long long slope = k < curve.segment_slopes().size() ? curve.segment_slopes()[k] : 0;
    w.field(bp[k]).field(curve.values_at_breakpoints()[k]).field(slope);
    w.end_row();
  }
}

}  // namespace sparse_triangle
