#pragma once

#include <cstddef>
#include <ostream>
#include <vector>

#include "sparse_triangle/core.hpp"

namespace sparse_triangle {

struct TriangleTrig {
  double sin_beta = 0.0;
  double cos_beta = 0.0;
  double tan_beta = 0.0;
};

/// Triangle with vertices A = (0, ||y||_1), B = (||y||_1 / s, 0), C = (||y||_inf, 0)
/// and the angle beta at A. s counts entries above zero_tol; t = ||y||_1 / ||y||_inf.
struct TriangleMetrics {
  std::size_t s = 0;
  double t = 0.0;
  double side_ab = 0.0;
  double side_ac = 0.0;
  double side_bc = 0.0;
  double sin_beta = 0.0;
  double cos_beta = 0.0;
  double tan_beta = 0.0;
};

/// Norms are taken over the entries that survive zero_tol, and t is kept in [1, s]
/// (it is snapped to s when s - t <= zero_tol, giving the degenerate triangle B = C).
TriangleMetrics triangle_metrics(const DenseVector& y, double zero_tol = kDefaultZeroTol);

/// Angle trigonometry written in the three norms directly.
TriangleTrig trig_from_norms(double l0, double l1, double linf);
/// The same quantities written in (s, t).
TriangleTrig trig_from_ratio(double s, double t);

/// Inverts tan(beta) = (s - t) / (1 + s t) for s. Requires 1 - tan_beta * t > 0.
double sparsity_from_angle(double tan_beta, double t);

/// Integral average of (s - t) / (1 + s t) over t in [1, s]; 0 at s = 1.
double beta_arith(double s);
/// beta_arith by adaptive Gauss-Kronrod quadrature of the defining integral.
double beta_arith_quadrature(double s);

/// exp of the integral average of ln((s - t) / (1 + s t)) over t in [1, s]; 0 at s = 1.
double beta_geom(double s);

struct SparseMetricRow {
  double s = 1.0;
  double beta_arith = 0.0;
  double beta_geom = 0.0;
};

/// `steps` evenly spaced rows from s_from to s_to inclusive.
std::vector<SparseMetricRow> sparse_metric_table(double s_from, double s_to, std::size_t steps);

void write_sparse_metric_csv(std::ostream& out, const std::vector<SparseMetricRow>& rows);

}  // namespace sparse_triangle
