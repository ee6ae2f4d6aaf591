#include "sparse_triangle/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace sparse_triangle {
namespace {

void require_finite(const Eigen::Ref<const Eigen::MatrixXd>& values, const char* what) {
  if (!values.allFinite()) {
    throw std::invalid_argument(std::string(what) + ": entries must be finite");
  }
}

}  // namespace

DenseVector::DenseVector(Eigen::VectorXd values) : values_(std::move(values)) {
  if (values_.size() < 1) throw std::invalid_argument("DenseVector: dimension must be >= 1");
  require_finite(values_, "DenseVector");
}

DenseVector::DenseVector(std::span<const double> values)
    : DenseVector(Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(
          values.data(), static_cast<Eigen::Index>(values.size())))) {}

DenseVector::DenseVector(std::initializer_list<double> values)
    : DenseVector(std::span<const double>(values.begin(), values.size())) {}

DenseVector DenseVector::zeros(std::size_t n) {
  return DenseVector(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n)));
}

DenseVector DenseVector::ones(std::size_t n) {
  return DenseVector(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n)));
}

std::vector<double> DenseVector::to_std() const {
  return {values_.data(), values_.data() + values_.size()};
}

std::size_t norm_l0(const DenseVector& x, double zero_tol) {
  if (zero_tol < 0.0) throw std::invalid_argument("norm_l0: zero_tol must be >= 0");
  return static_cast<std::size_t>((x.values().array().abs() > zero_tol).count());
}

double norm_l1(const DenseVector& x) { return x.values().lpNorm<1>(); }
double norm_l2(const DenseVector& x) { return x.values().norm(); }
double norm_linf(const DenseVector& x) { return x.values().lpNorm<Eigen::Infinity>(); }

Norms norms(const DenseVector& x) { return {norm_l1(x), norm_l2(x), norm_linf(x)}; }

SensingMatrix::SensingMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
  if (values_.rows() < 1 || values_.cols() < 1) {
    throw std::invalid_argument("SensingMatrix: shape must be at least 1x1");
  }
  require_finite(values_, "SensingMatrix");
}

SensingMatrix SensingMatrix::identity(std::size_t n) {
  const auto k = static_cast<Eigen::Index>(n);
  return SensingMatrix(Eigen::MatrixXd::Identity(k, k));
}

DenseVector matvec(const SensingMatrix& a, const DenseVector& x) {
  if (x.size() != a.cols()) {
    throw std::invalid_argument("matvec: expected vector of length " + std::to_string(a.cols()) +
                                ", got " + std::to_string(x.size()));
  }
  return DenseVector(Eigen::VectorXd(a.values() * x.values()));
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

DenseVector generate_sparse_signal(const SparseSignalSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("generate_sparse_signal: n must be >= 1");
  if (spec.s < 1 || spec.s > spec.n) {
    throw std::invalid_argument("generate_sparse_signal: sparsity must satisfy 1 <= s <= n");
  }
  std::mt19937_64 rng(spec.seed);
  std::vector<std::size_t> index(spec.n);
  std::iota(index.begin(), index.end(), std::size_t{0});
  std::shuffle(index.begin(), index.end(), rng);

  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(spec.n));
  for (std::size_t k = 0; k < spec.s; ++k) {
    double value = 0.0;
    // A Gaussian draw of exactly 0 would break the sparsity contract.
    while (value == 0.0) value = gauss(rng);
    x[static_cast<Eigen::Index>(index[k])] = value;
  }
  return DenseVector(std::move(x));
}

ProblemInstance generate_problem(const SparseSignalSpec& spec, std::size_t m,
                                 std::uint64_t matrix_seed) {
  if (m < 1) throw std::invalid_argument("generate_problem: m must be >= 1");
  DenseVector truth = generate_sparse_signal(spec);

  std::mt19937_64 rng(matrix_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(spec.n));
  // Row-major fill order keeps the stream layout independent of Eigen's storage order.
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = gauss(rng);
  }
  SensingMatrix matrix(std::move(a));
  DenseVector b = matvec(matrix, truth);
  return ProblemInstance{std::move(matrix), std::move(b), std::move(truth)};
}

bool is_consistent(const ProblemInstance& problem) {
  if (problem.b.size() != problem.matrix.rows()) return false;
  if (!problem.truth) return true;
  if (problem.truth->size() != problem.matrix.cols()) return false;
  const double residual =
      (problem.matrix.values() * problem.truth->values() - problem.b.values()).norm();
  return residual <= 1e-10 * std::max(1.0, problem.b.values().norm());
}

}  // namespace sparse_triangle
