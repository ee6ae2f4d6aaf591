#include "sparse_triangle/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "sparse_triangle/csv.hpp"
#include "sparse_triangle/parallel.hpp"
#include "sparse_triangle/triangle.hpp"

namespace sparse_triangle {

void MonteCarloSpec::validate() const {
  if (n < 1) throw std::invalid_argument("MonteCarloSpec: n must be >= 1");
  if (trials < 1) throw std::invalid_argument("MonteCarloSpec: trials must be >= 1");
  if (!std::is_sorted(s_values.begin(), s_values.end())) {
    throw std::invalid_argument("MonteCarloSpec: s_values must be ascending");
  }
  for (auto s : s_values) {
    if (s < 1 || s > n) throw std::invalid_argument("MonteCarloSpec: each s must be in [1, n]");
  }
}

std::vector<MonteCarloRow> montecarlo_tanbeta(const MonteCarloSpec& spec, std::size_t threads) {
  spec.validate();
  std::vector<MonteCarloRow> rows(spec.s_values.size());
  parallel_for(
      rows.size(),
      [&](std::size_t idx) {
        const std::size_t s = spec.s_values[idx];
        const std::uint64_t stream = mix_seed(spec.seed, s);
        const auto s_real = static_cast<double>(s);
        double sum_tan = 0.0, sum_tan_sq = 0.0, sum_t = 0.0;
        std::size_t violations = 0;
        for (std::size_t j = 0; j < spec.trials; ++j) {
          const auto y = generate_sparse_signal({spec.n, s, mix_seed(stream, j)});
          const auto m = triangle_metrics(y, 0.0);
          if (!(m.tan_beta >= 0.0 && m.tan_beta <= 1.0 / m.t && m.t >= 1.0 && m.t <= s_real)) {
            ++violations;
          }
          sum_tan += m.tan_beta;
          sum_tan_sq += m.tan_beta * m.tan_beta;
          sum_t += m.t;
        }
        const auto count = static_cast<double>(spec.trials);
        MonteCarloRow row;
        row.s = s;
        row.trials = spec.trials;
        row.mean_tan_beta = sum_tan / count;
        row.mean_t = sum_t / count;
        if (spec.trials > 1) {
          const double var =
              std::max(0.0, (sum_tan_sq - count * row.mean_tan_beta * row.mean_tan_beta) /
                                (count - 1.0));
          row.stderr_tan_beta = std::sqrt(var / count);
        }
        row.range_violations = violations;
        rows[idx] = row;
      },
      threads);
  return rows;
}

void write_montecarlo_csv(std::ostream& out, const std::vector<MonteCarloRow>& rows) {
  csv::Writer w(out);
  w.header({"s", "mean_tan_beta", "mean_t", "trials"});
  for (const auto& r : rows) {
    w.field(r.s).field(r.mean_tan_beta).field(r.mean_t).field(r.trials);
    w.end_row();
  }
}

bool RecoveryReport::any_solver_failure() const {
  return std::any_of(rows.begin(), rows.end(), [](const auto& r) { return r.solver_failed; });
}

ProblemInstance recovery_instance(std::size_t n, std::size_t m, std::size_t s,
                                  std::uint64_t seed) {
  return generate_problem({n, s, seed}, m, mix_seed(seed, 1));
}

RecoveryReport recovery_benchmark(const RecoverySpec& spec, std::size_t threads) {
  if (spec.s < 1 || spec.s > spec.n) {
    throw std::invalid_argument("recovery_benchmark: requires 1 <= s <= n");
  }
  if (spec.m < 1 || spec.m > spec.n) {
    throw std::invalid_argument("recovery_benchmark: requires 1 <= m <= n");
  }
  spec.cfg.validate();

  RecoveryReport report;
  report.rows.resize(spec.seeds.size());
  if (spec.keep_traces) report.traces.resize(spec.seeds.size());

  parallel_for(
      spec.seeds.size(),
      [&](std::size_t idx) {
        const std::uint64_t seed = spec.seeds[idx];
        const auto problem = recovery_instance(spec.n, spec.m, spec.s, seed);
        RecoveryRow row;
        row.seed = seed;
        row.method = spec.method;

        SolveTrace trace;
        const auto start = std::chrono::steady_clock::now();
        try {
          trace = dca_solve(problem, spec.method, spec.cfg);
          row.rel_err = relative_error(trace.x, *problem.truth);
          row.outer_iters = trace.outer_iterations();
        } catch (const DcaNotConverged& e) {
          trace = e.partial();
          trace.x = e.best().x;
          row.rel_err = relative_error(e.best().x, *problem.truth);
          row.outer_iters = e.partial().outer_iterations() + 1;
          row.solver_failed = true;
        }
        row.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        row.success = !row.solver_failed && row.rel_err <= spec.success_threshold;
        if (!trace.rows.empty()) {
          auto [lo, hi] = std::minmax_element(
              trace.rows.begin(), trace.rows.end(),
              [](const TraceRow& a, const TraceRow& b) { return a.gamma < b.gamma; });
          row.min_gamma = lo->gamma;
          row.max_gamma = hi->gamma;
        }
        report.rows[idx] = row;
        if (spec.keep_traces) report.traces[idx] = std::move(trace);
      },
      threads);

  if (!report.rows.empty()) {
    const auto hits = std::count_if(report.rows.begin(), report.rows.end(),
                                    [](const auto& r) { return r.success; });
    report.success_rate = static_cast<double>(hits) / static_cast<double>(report.rows.size());
  }
  return report;
}

void write_recovery_csv(std::ostream& out, const RecoveryReport& report, bool include_timing) {
  csv::Writer w(out);
  w.header({"seed", "method", "rel_err", "outer_iters", "success", "wall_time_s"});
  for (const auto& r : report.rows) {
    w.field(static_cast<unsigned long long>(r.seed))
        .field(to_string(r.method))
        .field(r.rel_err)
        .field(r.outer_iters)
        .field(r.success ? std::string_view("1") : std::string_view("0"))
        .field(include_timing ? r.wall_time_s : 0.0);
    w.end_row();
  }
}

std::vector<SweepRow> success_rate_sweep(const SweepSpec& spec, std::size_t threads) {
  if (!std::is_sorted(spec.s_values.begin(), spec.s_values.end())) {
    throw std::invalid_argument("success_rate_sweep: s_values must be ascending");
  }
  if (spec.trials_per_s < 1) {
    throw std::invalid_argument("success_rate_sweep: trials_per_s must be >= 1");
  }
  std::vector<SweepRow> rows;
  rows.reserve(spec.s_values.size());
  for (auto s : spec.s_values) {
    RecoverySpec rec;
    rec.n = spec.n;
    rec.m = spec.m;
    rec.s = s;
    rec.method = spec.method;
    rec.cfg = spec.cfg;
    rec.success_threshold = spec.success_threshold;
    const std::uint64_t stream = mix_seed(spec.seed, s);
    for (std::size_t j = 0; j < spec.trials_per_s; ++j) rec.seeds.push_back(mix_seed(stream, j));
    const auto report = recovery_benchmark(rec, threads);
    rows.push_back({s, report.success_rate, spec.trials_per_s});
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  csv::Writer w(out);
  w.header({"s", "success_rate", "trials"});
  for (const auto& r : rows) {
    w.field(r.s).field(r.success_rate).field(r.trials);
    w.end_row();
  }
}

}  // namespace sparse_triangle
