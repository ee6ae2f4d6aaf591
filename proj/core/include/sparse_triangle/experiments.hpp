#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <vector>

#include "sparse_triangle/solver.hpp"

namespace sparse_triangle {

struct MonteCarloSpec {
  std::size_t n = 300;
  std::vector<std::size_t> s_values;
  std::size_t trials = 1000;
  std::uint64_t seed = 42;

  void validate() const;
};

struct MonteCarloRow {
  std::size_t s = 0;
  double mean_tan_beta = 0.0;
  double mean_t = 0.0;
  std::size_t trials = 0;
  double stderr_tan_beta = 0.0;
  /// Samples outside 0 <= tan(beta) <= 1/t or 1 <= t <= s.
  std::size_t range_violations = 0;
};

/// Average tan(beta) over `trials` Gaussian s-sparse signals per s. Trial j of sparsity s
/// uses seed mix_seed(mix_seed(seed, s), j), so a run with more trials extends a shorter one.
std::vector<MonteCarloRow> montecarlo_tanbeta(const MonteCarloSpec& spec, std::size_t threads = 0);

void write_montecarlo_csv(std::ostream& out, const std::vector<MonteCarloRow>& rows);

struct RecoverySpec {
  std::size_t n = 250;
  std::size_t m = 100;
  std::size_t s = 10;
  std::vector<std::uint64_t> seeds;
  RatioMethod method = RatioMethod::l1_over_linf;
  DcaConfig cfg;
  double success_threshold = 1e-3;
  bool keep_traces = false;
};

struct RecoveryRow {
  std::uint64_t seed = 0;
  RatioMethod method = RatioMethod::l1_over_linf;
  double rel_err = 0.0;
  std::size_t outer_iters = 0;
  bool success = false;
  double wall_time_s = 0.0;
  bool solver_failed = false;
  double max_gamma = 0.0;
  double min_gamma = 0.0;
};

struct RecoveryReport {
  std::vector<RecoveryRow> rows;  // in the order of RecoverySpec::seeds
  std::vector<SolveTrace> traces; // parallel to rows when keep_traces is set
  double success_rate = 0.0;

  bool any_solver_failure() const;
};

/// The instance for a seed: signal from `seed`, matrix from mix_seed(seed, 1).
ProblemInstance recovery_instance(std::size_t n, std::size_t m, std::size_t s, std::uint64_t seed);

RecoveryReport recovery_benchmark(const RecoverySpec& spec, std::size_t threads = 0);

/// wall_time_s is written as 0 unless include_timing is set, which keeps output reproducible.
void write_recovery_csv(std::ostream& out, const RecoveryReport& report, bool include_timing);

struct SweepSpec {
  std::size_t n = 250;
  std::size_t m = 100;
  std::vector<std::size_t> s_values;
  std::size_t trials_per_s = 10;
  RatioMethod method = RatioMethod::l1_over_linf;
  DcaConfig cfg;
  double success_threshold = 1e-3;
  std::uint64_t seed = 1;
};

struct SweepRow {
  std::size_t s = 0;
  double success_rate = 0.0;
  std::size_t trials = 0;
};

std::vector<SweepRow> success_rate_sweep(const SweepSpec& spec, std::size_t threads = 0);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace sparse_triangle
