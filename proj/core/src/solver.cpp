#include "sparse_triangle/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sparse_triangle/csv.hpp"

namespace sparse_triangle {
namespace {

Eigen::VectorXd soft(const Eigen::VectorXd& w, double sigma) {
  return w.array().sign() * (w.array().abs() - sigma).max(0.0);
}

// How far a certificate is from passing; <= 1 means it passes.
double violation(const KktCertificate& c, const InnerConfig& cfg, double b_norm) {
  return std::max(c.feasibility / (cfg.feas_tol * std::max(1.0, b_norm)),
                  c.stationarity / cfg.kkt_tol);
}

// Restores Ax = b while keeping the support of z: the minimum-norm correction on the
// support columns, or the full affine projection when the support cannot reach b.
std::vector<Eigen::VectorXd> polish_candidates(const AffineConstraint& constraint,
                                               const Eigen::VectorXd& z, double zero_tol) {
  const auto& a = constraint.matrix();
  const Eigen::VectorXd residual = constraint.rhs() - a * z;
  std::vector<Eigen::VectorXd> out;

  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (std::abs(z[i]) > zero_tol) support.push_back(i);
  }
  if (!support.empty() && support.size() < static_cast<std::size_t>(z.size())) {
    Eigen::MatrixXd a_s(a.rows(), static_cast<Eigen::Index>(support.size()));
    for (std::size_t k = 0; k < support.size(); ++k) {
      a_s.col(static_cast<Eigen::Index>(k)) = a.col(support[k]);
    }
    const Eigen::VectorXd delta = a_s.completeOrthogonalDecomposition().solve(residual);
    Eigen::VectorXd x = z;
    for (std::size_t k = 0; k < support.size(); ++k) {
      x[support[k]] += delta[static_cast<Eigen::Index>(k)];
    }
    out.push_back(std::move(x));
  } else if (support.empty()) {
    out.push_back(Eigen::VectorXd::Zero(z.size()));
  }
  out.push_back(z + a.transpose() * constraint.solve_gram(residual));
  return out;
}

// Dual of the inner problem in nu: D(nu) = sum psi(w_i) + (rho/2)(||v||^2 - ||w||^2) - nu^T b
// with w = v - A^T nu / rho and psi the Huber function, whose maximizer gives
// x = soft(w, 1/rho). Semismooth Newton with a regularized generalized Hessian
// (1/rho) A_J A_J^T, J = {|w_i| > 1/rho}, and Armijo backtracking.
struct DualPoint {
  Eigen::VectorXd nu;
  Eigen::VectorXd w;
  Eigen::VectorXd x;
  Eigen::VectorXd grad;  // A x - b
  double value = 0.0;
};

DualPoint dual_point(const AffineConstraint& constraint, const Eigen::VectorXd& v, double rho,
                     Eigen::VectorXd nu) {
  const auto& a = constraint.matrix();
  DualPoint p;
  p.w = v - a.transpose() * nu / rho;
  p.x = soft(p.w, 1.0 / rho);
  p.grad = a * p.x - constraint.rhs();
  const Eigen::ArrayXd aw = p.w.array().abs();
  const Eigen::ArrayXd huber =
      (aw > 1.0 / rho).select(aw - 0.5 / rho, 0.5 * rho * aw.square());
  p.value = huber.sum() + 0.5 * rho * (v.squaredNorm() - p.w.squaredNorm()) -
            nu.dot(constraint.rhs());
  p.nu = std::move(nu);
  return p;
}

DualPoint newton_refine(const AffineConstraint& constraint, const Eigen::VectorXd& v,
                              double rho, Eigen::VectorXd nu, double grad_target,
                              int max_steps = 200) {
  const auto& a = constraint.matrix();
  DualPoint p = dual_point(constraint, v, rho, std::move(nu));
  for (int step = 0; step < max_steps; ++step) {
    const double gnorm = p.grad.norm();
    if (gnorm <= grad_target) break;

    std::vector<Eigen::Index> active;
    for (Eigen::Index i = 0; i < p.w.size(); ++i) {
      if (std::abs(p.w[i]) > 1.0 / rho) active.push_back(i);
    }
    Eigen::MatrixXd a_j(a.rows(), static_cast<Eigen::Index>(active.size()));
    for (std::size_t k = 0; k < active.size(); ++k) {
      a_j.col(static_cast<Eigen::Index>(k)) = a.col(active[k]);
    }
    Eigen::MatrixXd hess = a_j * a_j.transpose() / rho;
    const double scale = std::max(1.0, hess.diagonal().maxCoeff());
    hess.diagonal().array() += std::clamp(gnorm, 1e-13 * scale, 1e-3 * scale);
    const Eigen::VectorXd dir = hess.llt().solve(p.grad);
    const double slope = p.grad.dot(dir);
    if (!(slope > 0.0)) break;

    double t = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 40; ++ls, t *= 0.5) {
      DualPoint trial = dual_point(constraint, v, rho, p.nu + t * dir);
      // Near the optimum D is flat to rounding; a drop in ||grad|| is accepted as progress.
      if (trial.value >= p.value + 1e-4 * t * slope || trial.grad.norm() < 0.5 * gnorm) {
        p = std::move(trial);
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  return p;
}

struct Pull {
  RatioMethod method;
  double ratio(const DenseVector& x) const {
    return method == RatioMethod::l1_over_linf ? norm_l1(x) / norm_linf(x)
                                               : norm_l1(x) / norm_l2(x);
  }
  double ratio_upper(std::size_t n) const {
    return method == RatioMethod::l1_over_linf ? static_cast<double>(n)
                                               : std::sqrt(static_cast<double>(n));
  }
  Eigen::VectorXd direction(const DenseVector& x, double zero_tol) const {
    if (method == RatioMethod::l1_over_linf) return linf_subgradient(x, zero_tol).values();
    return x.values() / norm_l2(x);
  }
};

}  // namespace

bool KktCertificate::passes(const InnerConfig& cfg, double b_norm) const {
  return feasibility <= cfg.feas_tol * std::max(1.0, b_norm) && stationarity <= cfg.kkt_tol;
}

AffineConstraint::AffineConstraint(const SensingMatrix& a, const DenseVector& b)
    : a_(a.values()), b_(b.values()), b_norm_(b.values().norm()) {
  if (b.size() != a.rows()) {
    throw std::invalid_argument("AffineConstraint: b must have one entry per row of A");
  }
  gram_.compute(a_ * a_.transpose());
  if (gram_.info() != Eigen::Success) {
    throw std::invalid_argument("AffineConstraint: A must have full row rank");
  }
  // LLT succeeds on numerically singular Gram matrices; reject those explicitly.
  const Eigen::VectorXd diag = gram_.matrixLLT().diagonal();
  if (diag.minCoeff() <= 1e-12 * std::max(1.0, diag.maxCoeff())) {
    throw std::invalid_argument("AffineConstraint: A must have full row rank");
  }
}

Eigen::VectorXd AffineConstraint::solve_gram(const Eigen::VectorXd& r) const {
  return gram_.solve(r);
}

Eigen::VectorXd AffineConstraint::project(const Eigen::VectorXd& w) const {
  return w - a_.transpose() * gram_.solve(a_ * w - b_);
}

KktCertificate certify_inner_solution(const AffineConstraint& constraint, const DenseVector& v,
                                      double rho, const DenseVector& x, double zero_tol,
                                      const Eigen::VectorXd* subgradient_hint) {
  const auto& a = constraint.matrix();
  const Eigen::Index n = a.cols();
  if (static_cast<Eigen::Index>(x.size()) != n || static_cast<Eigen::Index>(v.size()) != n) {
    throw std::invalid_argument("certify_inner_solution: dimension mismatch");
  }
  const Eigen::VectorXd& xv = x.values();
  const Eigen::VectorXd pull = rho * (xv - v.values());
  const auto on_support = (xv.array().abs() > zero_tol).eval();

  Eigen::VectorXd g = subgradient_hint ? subgradient_hint->cwiseMax(-1.0).cwiseMin(1.0).eval()
                                       : Eigen::VectorXd::Zero(n).eval();
  g = on_support.select(xv.array().sign(), g.array()).matrix();

  KktCertificate best;
  best.feasibility = (a * xv - constraint.rhs()).norm();
  best.stationarity = std::numeric_limits<double>::infinity();
  // Alternate the multiplier fit with the best admissible off-support subgradient.
  for (int round = 0; round < 4; ++round) {
    Eigen::VectorXd nu = -constraint.solve_gram(a * (g + pull));
    const Eigen::VectorXd q = pull + a.transpose() * nu;
    const Eigen::ArrayXd off = (q.array().abs() - 1.0).max(0.0);
    const Eigen::ArrayXd on = (xv.array().sign() + q.array()).abs();
    const double stationarity = on_support.select(on, off).maxCoeff();
    if (stationarity < best.stationarity) {
      best.stationarity = stationarity;
      best.multiplier = std::move(nu);
    }
    g = on_support.select(xv.array().sign(), (-q).array().max(-1.0).min(1.0)).matrix();
  }
  return best;
}

InnerSolution inner_solve(const AffineConstraint& constraint, const DenseVector& v, double rho,
                          const InnerConfig& cfg, InnerWarmStart* warm) {
  if (!(rho > 0.0)) throw std::invalid_argument("inner_solve: rho must be positive");
  if (!(cfg.penalty > 0.0) || cfg.max_iter < 1 || !(cfg.feas_tol > 0.0) ||
      !(cfg.kkt_tol > 0.0)) {
    throw std::invalid_argument("inner_solve: InnerConfig entries must be positive");
  }
  const Eigen::Index n = constraint.matrix().cols();
  if (static_cast<Eigen::Index>(v.size()) != n) {
    throw std::invalid_argument("inner_solve: v must have one entry per column of A");
  }

  double mu = cfg.penalty;
  const double b_norm = constraint.rhs_norm();
  const Eigen::VectorXd& vv = v.values();
  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  if (warm && warm->z.size() == n && warm->dual.size() == n) {
    z = warm->z;
    u = warm->dual / mu;
  }

  std::optional<InnerSolution> best;
  double best_violation = std::numeric_limits<double>::infinity();
  auto consider = [&](Eigen::VectorXd candidate, const Eigen::VectorXd& hint,
                      std::size_t iterations) {
    DenseVector x(std::move(candidate));
    KktCertificate cert = certify_inner_solution(constraint, v, rho, x, cfg.zero_tol, &hint);
    const double score = violation(cert, cfg, b_norm);
    if (score < best_violation) {
      best_violation = score;
      best = InnerSolution{std::move(x), std::move(cert), iterations};
    }
    return score <= 1.0;
  };

  // Cheap ADMM residuals gate the more expensive polish-and-certify step.
  const double gate = 0.1 * cfg.kkt_tol;
  Eigen::VectorXd x(n), z_prev(n);
  std::size_t next_check = 1;
  for (std::size_t it = 1; it <= cfg.max_iter; ++it) {
    const Eigen::VectorXd w = (rho * vv + mu * (z - u)) / (rho + mu);
    x = constraint.project(w);
    z_prev = z;
    z = soft(x + u, 1.0 / mu);
    u += x - z;

    const double primal = (x - z).lpNorm<Eigen::Infinity>();
    const double dual = mu * (z - z_prev).lpNorm<Eigen::Infinity>();
    // Residual balancing; frozen after a while so the fixed-penalty convergence theory applies.
    if (cfg.adaptive_penalty && it % 10 == 0 && it <= cfg.max_iter / 2) {
      if (primal > 10.0 * dual) {
        mu *= 2.0;
        u /= 2.0;
      } else if (dual > 10.0 * primal) {
        mu /= 2.0;
        u *= 2.0;
      }
    }
    const bool stalled = it % 500 == 0;
    if ((primal <= gate && dual <= gate && it >= next_check) || stalled || it == cfg.max_iter) {
      next_check = it + 25;
      bool done = false;
      const Eigen::VectorXd admm_subgradient = mu * u;
      for (auto& candidate : polish_candidates(constraint, z, cfg.zero_tol)) {
        if (consider(std::move(candidate), admm_subgradient, it)) {
          done = true;
          break;
        }
      }
      if (!done && best) {
        DualPoint refined = newton_refine(constraint, vv, rho, best->certificate.multiplier,
                                          0.1 * cfg.feas_tol * std::max(1.0, b_norm));
        // x = soft(w, 1/rho) makes rho (w - x) an exact subgradient at x.
        const Eigen::VectorXd exact_subgradient = rho * (refined.w - refined.x);
        done = consider(std::move(refined.x), exact_subgradient, it);
      }
      if (done) {
        // One more Newton pass from the certified multiplier usually lands at rounding level.
        DualPoint refined = newton_refine(constraint, vv, rho, best->certificate.multiplier,
                                          1e-4 * cfg.feas_tol * std::max(1.0, b_norm));
        const Eigen::VectorXd exact_subgradient = rho * (refined.w - refined.x);
        consider(std::move(refined.x), exact_subgradient, it);
        if (warm) *warm = {z, mu * u};
        return std::move(*best);
      }
    }
  }
  if (warm) *warm = {z, mu * u};
  throw NotConverged("inner_solve: no certified solution after " + std::to_string(cfg.max_iter) +
                         " iterations",
                     std::move(*best));
}

InnerSolution inner_solve(const SensingMatrix& a, const DenseVector& b, const DenseVector& v,
                          double rho, const InnerConfig& cfg) {
  return inner_solve(AffineConstraint(a, b), v, rho, cfg);
}

DenseVector linf_subgradient(const DenseVector& x, double zero_tol) {
  if (x.is_zero()) throw std::invalid_argument("linf_subgradient: x must be nonzero");
  const auto& values = x.values();
  const double top = values.lpNorm<Eigen::Infinity>();
  Eigen::VectorXd xi = Eigen::VectorXd::Zero(values.size());
  for (Eigen::Index j = 0; j < values.size(); ++j) {
    if (std::abs(values[j]) >= top - zero_tol) {
      xi[j] = values[j] > 0.0 ? 1.0 : -1.0;
      break;
    }
  }
  return DenseVector(std::move(xi));
}

double dinkelbach_alpha(const DenseVector& x, double beta_s) {
  if (x.is_zero()) throw std::invalid_argument("dinkelbach_alpha: x must be nonzero");
  if (!(beta_s >= 0.0)) throw std::domain_error("dinkelbach_alpha: beta_s must be >= 0");
  const double t = norm_l1(x) / norm_linf(x);
  const double denom = 1.0 - beta_s * t;
  if (!(denom > 0.0)) {
    throw std::domain_error("dinkelbach_alpha: requires ||x||_1 / ||x||_inf < 1 / beta_s");
  }
  return (beta_s + t) / denom;
}

double relative_error(const DenseVector& recovered, const DenseVector& truth) {
  if (recovered.size() != truth.size()) {
    throw std::invalid_argument("relative_error: length mismatch");
  }
  const double scale = truth.values().norm();
  if (scale == 0.0) throw std::invalid_argument("relative_error: truth must be nonzero");
  return (recovered.values() - truth.values()).norm() / scale;
}

std::string_view to_string(RatioMethod method) {
  return method == RatioMethod::l1_over_linf ? "l1-over-linf" : "l1-over-l2";
}

std::optional<RatioMethod> parse_ratio_method(std::string_view text) {
  if (text == "l1-over-linf") return RatioMethod::l1_over_linf;
  if (text == "l1-over-l2") return RatioMethod::l1_over_l2;
  return std::nullopt;
}

void DcaConfig::validate() const {
  if (!(rho > 0.0)) throw std::invalid_argument("DcaConfig: rho must be positive");
  if (!(gamma0 >= 1.0)) throw std::invalid_argument("DcaConfig: gamma0 must be >= 1");
  if (max_outer < 1) throw std::invalid_argument("DcaConfig: max_outer must be >= 1");
  if (!(outer_tol > 0.0)) throw std::invalid_argument("DcaConfig: outer_tol must be positive");
}

SolveTrace dca_solve(const ProblemInstance& problem, RatioMethod method, const DcaConfig& cfg) {
  cfg.validate();
  if (problem.b.is_zero()) throw std::invalid_argument("dca_solve: b must be nonzero");
  const std::size_t n = problem.matrix.cols();
  if (cfg.x0 && cfg.x0->size() != n) {
    throw std::invalid_argument("dca_solve: x0 must have one entry per column of A");
  }

  const Pull pull{method};
  const AffineConstraint constraint(problem.matrix, problem.b);
  InnerWarmStart warm;

  SolveTrace trace;
  trace.method = method;
  DenseVector x = cfg.x0 ? *cfg.x0 : DenseVector::ones(n);
  double gamma = std::clamp(cfg.gamma0, 1.0, pull.ratio_upper(n));

  for (std::size_t k = 1; k <= cfg.max_outer; ++k) {
    const Eigen::VectorXd center =
        x.values() + (gamma / cfg.rho) * pull.direction(x, cfg.inner.zero_tol);
    InnerSolution solved = [&] {
      try {
        return inner_solve(constraint, DenseVector(center), cfg.rho, cfg.inner, &warm);
      } catch (const NotConverged& e) {
        trace.x = e.best().x;
        throw DcaNotConverged(std::string("dca_solve: outer iteration ") + std::to_string(k) +
                                  ": " + e.what(),
                              trace, e.best());
      }
    }();

    DenseVector next = std::move(solved.x);
    if (next.is_zero()) throw std::logic_error("dca_solve: inner solve returned x = 0");
    const double step =
        (next.values() - x.values()).norm() / std::max(1.0, x.values().norm());
    const double objective = pull.ratio(next);
    gamma = std::clamp(objective, 1.0, pull.ratio_upper(n));

    TraceRow row;
    row.k = k;
    row.gamma = gamma;
    row.objective = objective;
    if (problem.truth) row.rel_err = relative_error(next, *problem.truth);
    row.kkt_residual = solved.certificate.stationarity;
    row.feasibility = solved.certificate.feasibility;
    trace.rows.push_back(row);

    x = std::move(next);
    if (step <= cfg.outer_tol) {
      trace.status = SolveStatus::converged;
      break;
    }
  }
  trace.x = std::move(x);
  return trace;
}

SolveTrace dca_l1_over_linf(const ProblemInstance& problem, const DcaConfig& cfg) {
  return dca_solve(problem, RatioMethod::l1_over_linf, cfg);
}

SolveTrace dca_l1_over_l2(const ProblemInstance& problem, const DcaConfig& cfg) {
  return dca_solve(problem, RatioMethod::l1_over_l2, cfg);
}

void write_trace_csv(std::ostream& out, const SolveTrace& trace) {
  csv::Writer w(out);
  w.header({"k", "gamma", "objective", "rel_err", "kkt_residual", "feasibility"});
  for (const auto& r : trace.rows) {
    w.field(r.k).field(r.gamma).field(r.objective);
    if (r.rel_err) {
      w.field(*r.rel_err);
    } else {
      w.field(std::string_view{});
    }
    w.field(r.kkt_residual).field(r.feasibility);
    w.end_row();
  }
}

}  // namespace sparse_triangle
