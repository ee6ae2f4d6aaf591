#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace sparse_triangle {

/// Default threshold below which a computed entry counts as zero.
inline constexpr double kDefaultZeroTol = 1e-10;

/// Real n-vector, n >= 1, finite entries only.
class DenseVector {
 public:
  explicit DenseVector(Eigen::VectorXd values);
  explicit DenseVector(std::span<const double> values);
  DenseVector(std::initializer_list<double> values);

  static DenseVector zeros(std::size_t n);
  static DenseVector ones(std::size_t n);

  std::size_t size() const { return static_cast<std::size_t>(values_.size()); }
  double operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }
  const Eigen::VectorXd& values() const { return values_; }
  std::vector<double> to_std() const;

  bool is_zero() const { return values_.cwiseAbs().maxCoeff() == 0.0; }

  friend bool operator==(const DenseVector& a, const DenseVector& b) {
    return a.values_.size() == b.values_.size() && a.values_ == b.values_;
  }

 private:
  Eigen::VectorXd values_;
};

struct Norms {
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
};

/// Number of entries with |x_i| > zero_tol.
std::size_t norm_l0(const DenseVector& x, double zero_tol = kDefaultZeroTol);
Norms norms(const DenseVector& x);

double norm_l1(const DenseVector& x);
double norm_l2(const DenseVector& x);
double norm_linf(const DenseVector& x);

/// Dense m x n matrix with finite entries.
class SensingMatrix {
 public:
  explicit SensingMatrix(Eigen::MatrixXd values);

  static SensingMatrix identity(std::size_t n);

  std::size_t rows() const { return static_cast<std::size_t>(values_.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(values_.cols()); }
  const Eigen::MatrixXd& values() const { return values_; }

 private:
  Eigen::MatrixXd values_;
};

DenseVector matvec(const SensingMatrix& a, const DenseVector& x);

enum class SignalDistribution { standard_gaussian };

struct SparseSignalSpec {
  std::size_t n = 0;
  std::size_t s = 0;
  std::uint64_t seed = 0;
  SignalDistribution distribution = SignalDistribution::standard_gaussian;
};

struct ProblemInstance {
  SensingMatrix matrix;
  DenseVector b;
  std::optional<DenseVector> truth;
};

/// Draws an exactly s-sparse signal whose support is uniform over [0, n).
DenseVector generate_sparse_signal(const SparseSignalSpec& spec);

/// Gaussian sensing matrix from matrix_seed, s-sparse truth from spec.seed, b = A * truth.
ProblemInstance generate_problem(const SparseSignalSpec& spec, std::size_t m,
                                 std::uint64_t matrix_seed);

/// Checks ||A * truth - b||_2 <= 1e-10 * max(1, ||b||_2). Instances without truth pass.
bool is_consistent(const ProblemInstance& problem);

/// SplitMix64 finalizer, used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream = 0);

}  // namespace sparse_triangle
