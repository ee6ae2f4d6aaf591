#include "sparse_triangle/triangle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sparse_triangle/csv.hpp"

namespace sparse_triangle {
namespace {

constexpr double kQuadTol = 1e-14;
constexpr unsigned kQuadDepth = 10;

template <class F>
double integrate(F f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, kQuadDepth,
                                                                        kQuadTol);
}

void require_s(double s, const char* what) {
  if (!(s >= 1.0) || !std::isfinite(s)) {
    throw std::domain_error(std::string(what) + ": s must be a finite real >= 1");
  }
}

}  // namespace

TriangleTrig trig_from_norms(double l0, double l1, double linf) {
  const double ratio = l1 / linf;
  const double denom = std::sqrt((1.0 + 1.0 / (l0 * l0)) * (1.0 + ratio * ratio));
  return {(1.0 - ratio / l0) / denom, (ratio + 1.0 / l0) / denom,
          (1.0 - ratio / l0) / (ratio + 1.0 / l0)};
}

TriangleTrig trig_from_ratio(double s, double t) {
  const double denom = std::sqrt((1.0 + s * s) * (1.0 + t * t));
  return {(s - t) / denom, (1.0 + s * t) / denom, (s - t) / (1.0 + s * t)};
}

TriangleMetrics triangle_metrics(const DenseVector& y, double zero_tol) {
  if (zero_tol < 0.0) throw std::invalid_argument("triangle_metrics: zero_tol must be >= 0");
  const auto magnitudes = y.values().array().abs().eval();
  const auto kept = (magnitudes > zero_tol).eval();
  const auto s = static_cast<std::size_t>(kept.count());
  if (s == 0) throw std::invalid_argument("triangle_metrics: y must be nonzero");

  const double l1 = kept.select(magnitudes, 0.0).sum();
  const double linf = magnitudes.maxCoeff();
  const double s_real = static_cast<double>(s);
  double t = std::clamp(l1 / linf, 1.0, s_real);
  if (s_real - t <= zero_tol) t = s_real;

  TriangleMetrics m;
  m.s = s;
  m.t = t;
  m.side_ab = std::sqrt(l1 * l1 + (l1 / s_real) * (l1 / s_real));
  m.side_ac = std::sqrt(l1 * l1 + linf * linf);
  m.side_bc = std::max(0.0, linf - l1 / s_real);
  const auto trig = trig_from_ratio(s_real, t);
  m.sin_beta = trig.sin_beta;
  m.cos_beta = trig.cos_beta;
  m.tan_beta = trig.tan_beta;
  return m;
}

double sparsity_from_angle(double tan_beta, double t) {
  const double denom = 1.0 - tan_beta * t;
  if (!(denom > 0.0)) {
    throw std::domain_error("sparsity_from_angle: requires 1 - tan_beta * t > 0");
  }
  return (tan_beta + t) / denom;
}

double beta_arith_quadrature(double s) {
  require_s(s, "beta_arith_quadrature");
  if (s == 1.0) return 0.0;
  const double integral = integrate([s](double t) { return (s - t) / (1.0 + s * t); }, 1.0, s);
  return integral / (s - 1.0);
}

double beta_arith(double s) {
  require_s(s, "beta_arith");
  if (s == 1.0) return 0.0;
  // The closed form cancels to O((s-1)^2) near s = 1.
  if (s < 1.01) return beta_arith_quadrature(s);
  const double s2 = s * s;
  const double numer = (s2 + 1.0) * std::log((1.0 + s2) / (1.0 + s)) - s * (s - 1.0);
  return numer / (s2 * (s - 1.0));
}

double beta_geom(double s) {
  require_s(s, "beta_geom");
  if (s == 1.0) return 0.0;
  // With u = s - t the integrand is ln(u) - ln(1 + s t). The singular ln(u) part over
  // (0, s - 1] integrates exactly; only the smooth part goes to quadrature.
  const double width = s - 1.0;
  const double singular_part = width * std::log(width) - width;
  const double smooth_part = integrate([s](double t) { return std::log1p(s * t); }, 1.0, s);
  return std::exp((singular_part - smooth_part) / width);
}

std::vector<SparseMetricRow> sparse_metric_table(double s_from, double s_to, std::size_t steps) {
  if (!(s_from >= 1.0 && s_from <= s_to)) {
    throw std::domain_error("sparse_metric_table: requires 1 <= s_from <= s_to");
  }
  if (steps < 1) throw std::invalid_argument("sparse_metric_table: steps must be >= 1");
  std::vector<SparseMetricRow> rows;
  rows.reserve(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    double s = s_from;
    if (steps > 1) {
      s = k + 1 == steps ? s_to
                         : s_from + (s_to - s_from) * static_cast<double>(k) /
                                        static_cast<double>(steps - 1);
    }
    rows.push_back({s, beta_arith(s), beta_geom(s)});
  }
  return rows;
}

void write_sparse_metric_csv(std::ostream& out, const std::vector<SparseMetricRow>& rows) {
  csv::Writer w(out);
  w.header({"s", "beta_arith", "beta_geom"});
  for (const auto& r : rows) {
    w.field(r.s).field(r.beta_arith).field(r.beta_geom);
    w.end_row();
  }
}

}  // namespace sparse_triangle
