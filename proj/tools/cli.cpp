#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "sparse_triangle/sparse_triangle.hpp"

namespace sparse_triangle::cli {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_doubles(std::string_view text) {
  std::vector<double> values;
  std::size_t pos = 0;
  auto is_sep = [](char c) { return c == ',' || c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
  while (pos < text.size()) {
    while (pos < text.size() && is_sep(text[pos])) ++pos;
    if (pos >= text.size()) break;
    std::size_t end = pos;
    while (end < text.size() && !is_sep(text[end])) ++end;
    double value = 0.0;
    const auto token = text.substr(pos, end - pos);
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
      throw UsageError("not a number: '" + std::string(token) + "'");
    }
    values.push_back(value);
    pos = end;
  }
  return values;
}

// Inline comma-separated floats, or @path to read them from a file.
DenseVector parse_vector(const std::string& text) {
  std::string body = text;
  if (!text.empty() && text.front() == '@') {
    std::ifstream in(text.substr(1));
    if (!in) throw UsageError("cannot read vector file '" + text.substr(1) + "'");
    body.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  auto values = parse_doubles(body);
  if (values.empty()) throw UsageError("vector must have at least one entry");
  try {
    return DenseVector(std::span<const double>(values));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  for (double v : parse_doubles(text)) {
    if (v < 1 || v != static_cast<double>(static_cast<std::size_t>(v))) {
      throw UsageError("expected positive integers in list, got '" + text + "'");
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw UsageError("list must not be empty");
  return out;
}

RatioMethod method_from(const std::string& text) {
  auto m = parse_ratio_method(text);
  if (!m) throw UsageError("unknown method '" + text + "'");
  return *m;
}

// Writes to --output when given, otherwise to the provided stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw UsageError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : fallback_; }

 private:
  std::ofstream file_;
  std::ostream& fallback_;
};

struct DcaFlags {
  double rho = 0.5;
  double gamma0 = 3.0;
  std::size_t max_outer = 50;
  double outer_tol = 1e-6;
  std::size_t inner_max_iter = InnerConfig{}.max_iter;
  double kkt_tol = InnerConfig{}.kkt_tol;

  void add_to(CLI::App& app) {
    app.add_option("--rho", rho, "Quadratic augmentation weight")->capture_default_str();
    app.add_option("--gamma0", gamma0, "Initial ratio parameter")->capture_default_str();
    app.add_option("--max-outer", max_outer, "Outer iteration cap")->capture_default_str();
    app.add_option("--outer-tol", outer_tol, "Relative step stopping tolerance")
        ->capture_default_str();
    app.add_option("--inner-max-iter", inner_max_iter, "Iteration cap of each inner solve")
        ->capture_default_str();
    app.add_option("--kkt-tol", kkt_tol, "Stationarity bound of the inner certificate")
        ->capture_default_str();
  }
  DcaConfig config() const {
    DcaConfig cfg;
    cfg.rho = rho;
    cfg.gamma0 = gamma0;
    cfg.max_outer = max_outer;
    cfg.outer_tol = outer_tol;
    cfg.inner.max_iter = inner_max_iter;
    cfg.inner.kkt_tol = kkt_tol;
    return cfg;
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Soft-thresholding geometry, sparse metrics and ratio-minimization recovery"};
  app.name("sparse_triangle");
  app.require_subcommand(1);

  std::string output_path;
  auto add_output = [&output_path](CLI::App* sub) {
    sub->add_option("-o,--output", output_path, "Write the result here instead of stdout");
  };

  std::function<int()> action;

  // phi
  auto* phi_cmd = app.add_subcommand("phi", "Breakpoints of phi(sigma) and the support staircase");
  std::string phi_vector;
  std::size_t phi_grid = 11;
  phi_cmd->add_option("--vector", phi_vector, "Comma-separated floats or @file")->required();
  phi_cmd->add_option("--grid", phi_grid, "Staircase grid size (>= 2)")
      ->capture_default_str()
      ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()));
  add_output(phi_cmd);
  phi_cmd->callback([&] {
    action = [&] {
      const auto y = parse_vector(phi_vector);
      if (y.is_zero()) throw UsageError("vector must be nonzero");
      Sink sink(output_path, out);
      write_phi_curve_csv(sink.stream(), phi_curve(y));
      sink.stream() << '\n';
      write_staircase_csv(sink.stream(), support_staircase(y, phi_grid));
      return kExitOk;
    };
  });

  // triangle
  auto* tri_cmd = app.add_subcommand("triangle", "Side lengths and angle of the norm triangle");
  std::string tri_vector;
  double tri_zero_tol = kDefaultZeroTol;
  tri_cmd->add_option("--vector", tri_vector, "Comma-separated floats or @file")->required();
  tri_cmd->add_option("--zero-tol", tri_zero_tol, "Entries at or below this count as zero")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  add_output(tri_cmd);
  tri_cmd->callback([&] {
    action = [&] {
      const auto y = parse_vector(tri_vector);
      if (norm_l0(y, tri_zero_tol) == 0) throw UsageError("vector must be nonzero");
      const auto m = triangle_metrics(y, tri_zero_tol);
      Sink sink(output_path, out);
      auto f = [](double v) { return csv::format_double(v); };
      sink.stream() << "s=" << m.s << " t=" << f(m.t) << " side_ab=" << f(m.side_ab)
                    << " side_ac=" << f(m.side_ac) << " side_bc=" << f(m.side_bc)
                    << " sin_beta=" << f(m.sin_beta) << " cos_beta=" << f(m.cos_beta)
                    << " tan_beta=" << f(m.tan_beta) << '\n';
      return kExitOk;
    };
  });

  // means
  auto* means_cmd = app.add_subcommand("means", "Arithmetic and geometric sparse-metric means");
  double means_s_min = 1.0, means_s_max = 100.0;
  std::size_t means_steps = 100;
  means_cmd->add_option("--s-min", means_s_min, "First sparsity")->capture_default_str();
  means_cmd->add_option("--s-max", means_s_max, "Last sparsity")->capture_default_str();
  means_cmd->add_option("--steps", means_steps, "Number of rows")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  add_output(means_cmd);
  means_cmd->callback([&] {
    action = [&] {
      if (!(means_s_min >= 1.0 && means_s_min <= means_s_max)) {
        throw UsageError("requires 1 <= s-min <= s-max");
      }
      const auto rows = sparse_metric_table(means_s_min, means_s_max, means_steps);
      Sink sink(output_path, out);
      write_sparse_metric_csv(sink.stream(), rows);
      return kExitOk;
    };
  });

  // recover
  auto* rec_cmd = app.add_subcommand("recover", "Recover seeded sparse signals by DCA");
  RecoverySpec rec;
  std::string rec_method = "l1-over-linf";
  std::uint64_t rec_seed = 1;
  std::size_t rec_seed_count = 1;
  std::string rec_trace = "recover_trace.csv";
  bool rec_no_trace = false;
  bool rec_timing = false;
  DcaFlags rec_dca;
  rec_cmd->add_option("--n", rec.n, "Signal dimension")->capture_default_str();
  rec_cmd->add_option("--m", rec.m, "Number of measurements")->capture_default_str();
  rec_cmd->add_option("--s", rec.s, "Sparsity")->capture_default_str();
  rec_cmd->add_option("--method", rec_method, "Ratio objective")
      ->capture_default_str()
      ->check(CLI::IsMember({"l1-over-linf", "l1-over-l2"}));
  rec_cmd->add_option("--seed", rec_seed, "First instance seed")->capture_default_str();
  rec_cmd->add_option("--seeds", rec_seed_count, "Number of consecutive seeds")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  rec_cmd->add_option("--threshold", rec.success_threshold, "Success threshold on RelErr")
      ->capture_default_str();
  rec_cmd->add_option("--trace", rec_trace, "Per-iteration trace of the first seed")
      ->capture_default_str();
  rec_cmd->add_flag("--no-trace", rec_no_trace, "Do not write the trace file");
  rec_cmd->add_flag("--timing", rec_timing, "Record wall-clock time (output no longer reproducible)");
  rec_dca.add_to(*rec_cmd);
  add_output(rec_cmd);
  rec_cmd->callback([&] {
    action = [&] {
      rec.method = method_from(rec_method);
      rec.cfg = rec_dca.config();
      rec.keep_traces = !rec_no_trace;
      for (std::size_t k = 0; k < rec_seed_count; ++k) rec.seeds.push_back(rec_seed + k);
      const auto report = recovery_benchmark(rec);
      Sink sink(output_path, out);
      write_recovery_csv(sink.stream(), report, rec_timing);
      if (!rec_no_trace && !report.traces.empty()) {
        std::ofstream trace_out(rec_trace, std::ios::binary);
        if (!trace_out) throw UsageError("cannot open trace file '" + rec_trace + "'");
        write_trace_csv(trace_out, report.traces.front());
      }
      if (report.any_solver_failure()) {
        err << "sparse_triangle: inner solver did not converge for at least one seed\n";
        return kExitSolverFailure;
      }
      return kExitOk;
    };
  });

  // montecarlo
  auto* mc_cmd = app.add_subcommand("montecarlo", "Monte Carlo average of tan(beta) per sparsity");
  MonteCarloSpec mc;
  std::size_t mc_s_min = 1, mc_s_max = 100;
  mc_cmd->add_option("--n", mc.n, "Signal dimension")->capture_default_str();
  mc_cmd->add_option("--s-min", mc_s_min, "First sparsity")->capture_default_str();
  mc_cmd->add_option("--s-max", mc_s_max, "Last sparsity")->capture_default_str();
  mc_cmd->add_option("--trials", mc.trials, "Signals per sparsity")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  mc_cmd->add_option("--seed", mc.seed, "Base seed")->capture_default_str();
  add_output(mc_cmd);
  mc_cmd->callback([&] {
    action = [&] {
      if (!(mc_s_min >= 1 && mc_s_min <= mc_s_max && mc_s_max <= mc.n)) {
        throw UsageError("requires 1 <= s-min <= s-max <= n");
      }
      for (auto s = mc_s_min; s <= mc_s_max; ++s) mc.s_values.push_back(s);
      const auto rows = montecarlo_tanbeta(mc);
      Sink sink(output_path, out);
      write_montecarlo_csv(sink.stream(), rows);
      return kExitOk;
    };
  });

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Empirical recovery rate per sparsity");
  SweepSpec sweep;
  std::string sweep_s_list;
  std::string sweep_method = "l1-over-linf";
  DcaFlags sweep_dca;
  sweep_cmd->add_option("--n", sweep.n, "Signal dimension")->capture_default_str();
  sweep_cmd->add_option("--m", sweep.m, "Number of measurements")->capture_default_str();
  sweep_cmd->add_option("--s-list", sweep_s_list, "Ascending comma-separated sparsities")
      ->required();
  sweep_cmd->add_option("--trials", sweep.trials_per_s, "Trials per sparsity")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--method", sweep_method, "Ratio objective")
      ->capture_default_str()
      ->check(CLI::IsMember({"l1-over-linf", "l1-over-l2"}));
  sweep_cmd->add_option("--seed", sweep.seed, "Base seed")->capture_default_str();
  sweep_cmd->add_option("--threshold", sweep.success_threshold, "Success threshold on RelErr")
      ->capture_default_str();
  sweep_dca.add_to(*sweep_cmd);
  add_output(sweep_cmd);
  sweep_cmd->callback([&] {
    action = [&] {
      sweep.s_values = parse_size_list(sweep_s_list);
      if (!std::is_sorted(sweep.s_values.begin(), sweep.s_values.end())) {
        throw UsageError("--s-list must be ascending");
      }
      if (sweep.s_values.back() > sweep.n || sweep.m > sweep.n) {
        throw UsageError("requires s <= n and m <= n");
      }
      sweep.method = method_from(sweep_method);
      sweep.cfg = sweep_dca.config();
      const auto rows = success_rate_sweep(sweep);
      Sink sink(output_path, out);
      write_sweep_csv(sink.stream(), rows);
      return kExitOk;
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "sparse_triangle: " << e.what() << "\n\n";
    const auto selected = app.get_subcommands();
    err << (selected.empty() ? app.help() : selected.front()->help());
    return kExitUsage;
  }

  if (!action) {
    err << app.help();
    return kExitUsage;
  }
  try {
    return action();
  } catch (const UsageError& e) {
    err << "sparse_triangle: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "sparse_triangle: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "sparse_triangle: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NotConverged& e) {
    err << "sparse_triangle: " << e.what() << '\n';
    return kExitSolverFailure;
  } catch (const DcaNotConverged& e) {
    err << "sparse_triangle: " << e.what() << '\n';
    return kExitSolverFailure;
  }
}

}  // namespace sparse_triangle::cli
