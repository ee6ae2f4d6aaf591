#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string_view>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "sparse_triangle/core.hpp"

namespace sparse_triangle {

/// Settings for the equality-constrained  min ||x||_1 + (rho/2)||x - v||^2  s.t. Ax = b.
struct InnerConfig {
  double penalty = 1.0;        // initial ADMM splitting penalty
  bool adaptive_penalty = true;
  std::size_t max_iter = 20000;
  double feas_tol = 1e-8;      // relative to max(1, ||b||_2)
  double kkt_tol = 1e-6;       // sup-norm stationarity bound
  double zero_tol = kDefaultZeroTol;
};

/// Feasibility and stationarity evidence for a candidate inner solution.
struct KktCertificate {
  double feasibility = 0.0;    // ||Ax - b||_2
  double stationarity = 0.0;   // ||g + rho (x - v) + A^T nu||_inf for the best admissible g
  Eigen::VectorXd multiplier;  // nu

  bool passes(const InnerConfig& cfg, double b_norm) const;
};

struct InnerSolution {
  DenseVector x;
  KktCertificate certificate;
  std::size_t iterations = 0;
};

class NotConverged : public std::runtime_error {
 public:
  NotConverged(const std::string& what, InnerSolution best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const InnerSolution& best() const { return best_; }

 private:
  InnerSolution best_;
};

/// The affine set {x : Ax = b} with A A^T factored once.
class AffineConstraint {
 public:
  /// Throws std::invalid_argument when A lacks full row rank.
  AffineConstraint(const SensingMatrix& a, const DenseVector& b);

  const Eigen::MatrixXd& matrix() const { return a_; }
  const Eigen::VectorXd& rhs() const { return b_; }
  double rhs_norm() const { return b_norm_; }

  /// Euclidean projection onto the affine set.
  Eigen::VectorXd project(const Eigen::VectorXd& w) const;
  /// Solves (A A^T) y = r.
  Eigen::VectorXd solve_gram(const Eigen::VectorXd& r) const;

 private:
  Eigen::MatrixXd a_;
  Eigen::VectorXd b_;
  Eigen::LLT<Eigen::MatrixXd> gram_;
  double b_norm_ = 0.0;
};

/// Builds a KKT certificate for x. The multiplier is the least-squares fit of the
/// stationarity residual; `subgradient_hint` seeds the off-support subgradient entries.
KktCertificate certify_inner_solution(const AffineConstraint& constraint, const DenseVector& v,
                                      double rho, const DenseVector& x, double zero_tol,
                                      const Eigen::VectorXd* subgradient_hint = nullptr);

/// ADMM state carried between related solves.
struct InnerWarmStart {
  Eigen::VectorXd z;
  Eigen::VectorXd dual;  // unscaled: penalty * u
};

/// Minimizes ||x||_1 + (rho/2)||x - v||^2 subject to Ax = b. The returned x carries a
/// certificate passing cfg; otherwise NotConverged is thrown with the best iterate.
InnerSolution inner_solve(const AffineConstraint& constraint, const DenseVector& v, double rho,
                          const InnerConfig& cfg, InnerWarmStart* warm = nullptr);
InnerSolution inner_solve(const SensingMatrix& a, const DenseVector& b, const DenseVector& v,
                          double rho, const InnerConfig& cfg = {});

/// The element sign(x_j) e_j of the l_inf subdifferential, j the lowest index with
/// |x_j| >= ||x||_inf - zero_tol.
DenseVector linf_subgradient(const DenseVector& x, double zero_tol = kDefaultZeroTol);

/// (beta_s + t) / (1 - beta_s t) with t = ||x||_1 / ||x||_inf.
double dinkelbach_alpha(const DenseVector& x, double beta_s);

/// ||recovered - truth||_2 / ||truth||_2.
double relative_error(const DenseVector& recovered, const DenseVector& truth);

enum class RatioMethod { l1_over_linf, l1_over_l2 };

std::string_view to_string(RatioMethod method);
/// Accepts "l1-over-linf" and "l1-over-l2".
std::optional<RatioMethod> parse_ratio_method(std::string_view text);

struct DcaConfig {
  double rho = 0.5;
  double gamma0 = 3.0;
  std::size_t max_outer = 50;
  double outer_tol = 1e-6;
  InnerConfig inner;
  std::optional<DenseVector> x0;  // all-ones when empty

  void validate() const;
};

enum class SolveStatus { converged, max_iterations };

struct TraceRow {
  std::size_t k = 0;
  double gamma = 0.0;
  double objective = 0.0;
  std::optional<double> rel_err;
  double kkt_residual = 0.0;
  double feasibility = 0.0;
};

struct SolveTrace {
  RatioMethod method = RatioMethod::l1_over_linf;
  std::vector<TraceRow> rows;
  DenseVector x = DenseVector::zeros(1);
  SolveStatus status = SolveStatus::max_iterations;

  std::size_t outer_iterations() const { return rows.size(); }
};

/// Raised when an inner solve fails mid-run; carries the trace so far and the best
/// iterate of the failed inner solve.
class DcaNotConverged : public std::runtime_error {
 public:
  DcaNotConverged(const std::string& what, SolveTrace partial, InnerSolution best)
      : std::runtime_error(what), partial_(std::move(partial)), best_(std::move(best)) {}
  const SolveTrace& partial() const { return partial_; }
  const InnerSolution& best() const { return best_; }

 private:
  SolveTrace partial_;
  InnerSolution best_;
};

/// DCA with quadratic augmentation for  min ||x||_1 / ||x||_inf  s.t. Ax = b.
SolveTrace dca_l1_over_linf(const ProblemInstance& problem, const DcaConfig& cfg = {});
/// The same scheme for  min ||x||_1 / ||x||_2  s.t. Ax = b.
SolveTrace dca_l1_over_l2(const ProblemInstance& problem, const DcaConfig& cfg = {});
SolveTrace dca_solve(const ProblemInstance& problem, RatioMethod method,
                     const DcaConfig& cfg = {});

void write_trace_csv(std::ostream& out, const SolveTrace& trace);

}  // namespace sparse_triangle
