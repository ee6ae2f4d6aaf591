// Acceptance checks. Prints one PASS/FAIL line per criterion and exits nonzero on any failure.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "oracles.hpp"
#include "sparse_triangle/sparse_triangle.hpp"

namespace st = sparse_triangle;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, double limit_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome result;
  try {
    result = body();
  } catch (const std::exception& e) {
    result = {false, std::string("exception: ") + e.what()};
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = elapsed < limit_s;
  const bool pass = result.ok && in_time;
  if (!pass) ++failures;
  std::printf("%s [%d] %s: %s (%.3f s, limit %.0f s%s)\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              result.detail.c_str(), elapsed, limit_s, in_time ? "" : ", too slow");
  std::fflush(stdout);
}

std::string num(double v) { return st::csv::format_double(v); }

st::SensingMatrix gaussian_matrix(std::mt19937_64& rng, std::size_t m, std::size_t n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = g(rng);
  return st::SensingMatrix(std::move(a));
}

st::DenseVector gaussian_vector(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (auto& x : v) x = g(rng);
  return st::DenseVector(std::move(v));
}

// phi in extended precision, straight from the definition.
long double phi_extended(const std::vector<double>& y, long double sigma) {
  long double sum = 0.0L;
  for (double v : y) sum += std::max(std::fabs(static_cast<long double>(v)) - sigma, 0.0L);
  return sum;
}

std::size_t count_local_maxima(const std::vector<double>& f) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const bool left = i == 0 || f[i] > f[i - 1];
    const bool right = i + 1 == f.size() || f[i] > f[i + 1];
    if (left && right) ++count;
  }
  return count;
}

Outcome check_means() {
  const double a = st::beta_arith(100.0);
  const double g = st::beta_geom(100.0);
  const bool ok = std::abs(a - 0.036422) <= 1e-5 && std::abs(g - 0.0094456) <= 1e-5;
  return {ok, "beta_arith(100)=" + num(a) + " beta_geom(100)=" + num(g)};
}

Outcome check_closed_form() {
  double worst = 0.0;
  for (double s : {1.5, 2.0, 5.0, 10.0, 50.0, 100.0}) {
    worst = std::max(worst, std::abs(st::beta_arith(s) - st::beta_arith_quadrature(s)));
  }
  return {worst <= 1e-10, "max |closed form - quadrature| = " + num(worst)};
}

Outcome check_phi_properties() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t bad_ends = 0, bad_convex = 0, bad_monotone = 0, bad_count = 0, bad_fd = 0, fd_checked = 0;
  double worst_fd = 0.0;
  const double eps = 1e-9;
  for (int trial = 0; trial < 200; ++trial) {
    const auto raw = oracle::random_nonzero_vector(rng, 1 + rng() % 100);
    const st::DenseVector y(raw);
    const double smax = st::norm_linf(y);
    if (std::abs(st::phi(y, 0.0) - st::norm_l1(y)) > 1e-12 || std::abs(st::phi(y, smax)) > 1e-12) ++bad_ends;

    std::vector<double> mags;
    for (double v : raw) if (v != 0.0) mags.push_back(std::abs(v));
    for (int j = 0; j < 50; ++j) {
      std::array<double, 3> s3{smax * unit(rng), smax * unit(rng), smax * unit(rng)};
      std::sort(s3.begin(), s3.end());
      const double f1 = st::phi(y, s3[0]), f2 = st::phi(y, s3[1]), f3 = st::phi(y, s3[2]);
      const double lambda = (s3[2] - s3[1]) / (s3[2] - s3[0]);
      if (f2 > lambda * f1 + (1.0 - lambda) * f3 + 1e-12 * std::max(1.0, f1)) ++bad_convex;
      if (!(f1 > f2 && f2 > f3)) ++bad_monotone;

      for (double sigma : s3) {
        const long long expected =
            -static_cast<long long>(st::norm_l0(st::soft_threshold(y, sigma), 0.0));
        if (st::phi_right_derivative(y, sigma) != expected) ++bad_count;
        const bool straddles = std::any_of(mags.begin(), mags.end(),
                                           [&](double m) { return m >= sigma && m <= sigma + eps; });
        if (straddles || sigma + eps > smax) continue;
        const long double fd =
            (phi_extended(raw, sigma + static_cast<long double>(eps)) - phi_extended(raw, sigma)) /
            static_cast<long double>(eps);
        const double diff = std::abs(static_cast<double>(fd) -
                                     static_cast<double>(st::phi_right_derivative(y, sigma)));
        worst_fd = std::max(worst_fd, diff);
        ++fd_checked;
        if (diff > 1e-6) ++bad_fd;
      }
    }
  }
  const bool ok = bad_ends + bad_convex + bad_monotone + bad_count + bad_fd == 0;
  return {ok, "endpoint/convexity/monotonicity/derivative/fd failures " + std::to_string(bad_ends) +
                  "/" + std::to_string(bad_convex) + "/" + std::to_string(bad_monotone) + "/" +
                  std::to_string(bad_count) + "/" + std::to_string(bad_fd) + ", max fd error " +
                  num(worst_fd) + " over " + std::to_string(fd_checked) + " points"};
}

Outcome check_sandwich() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t violations = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const st::DenseVector y(oracle::random_nonzero_vector(rng, 1 + rng() % 100));
    const auto nrm = st::norms(y);
    for (int j = 0; j < 50; ++j) {
      double sigma = 0.0;
      while (sigma == 0.0) sigma = nrm.linf * unit(rng);
      const double q = (nrm.l1 - st::phi(y, sigma)) / sigma;
      const double lo = nrm.l1 / nrm.linf, hi = static_cast<double>(st::norm_l0(y));
      worst = std::max({worst, lo - q, q - hi});
      if (q < lo - 1e-10 || q > hi + 1e-10) ++violations;
    }
  }
  return {violations == 0,
          std::to_string(violations) + " violations in 10000 checks, max overshoot " + num(worst)};
}

Outcome check_triangle() {
  std::mt19937_64 rng(99);
  double worst_trig = 0.0, worst_pyth = 0.0, worst_round = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const st::DenseVector y(oracle::random_nonzero_vector(rng, 1 + rng() % 200));
    const auto m = st::triangle_metrics(y);
    const auto nrm = st::norms(y);
    const auto by_norms =
        st::trig_from_norms(static_cast<double>(st::norm_l0(y)), nrm.l1, nrm.linf);
    const auto by_ratio = st::trig_from_ratio(static_cast<double>(st::norm_l0(y)), nrm.l1 / nrm.linf);
    worst_trig = std::max({worst_trig, std::abs(by_norms.sin_beta - by_ratio.sin_beta),
                           std::abs(by_norms.cos_beta - by_ratio.cos_beta),
                           std::abs(by_norms.tan_beta - by_ratio.tan_beta)});
    worst_pyth = std::max({worst_pyth,
                           std::abs(by_norms.sin_beta * by_norms.sin_beta +
                                    by_norms.cos_beta * by_norms.cos_beta - 1.0),
                           std::abs(m.sin_beta * m.sin_beta + m.cos_beta * m.cos_beta - 1.0)});
    const double s = static_cast<double>(m.s);
    const double s_back = st::sparsity_from_angle(m.tan_beta, m.t);
    worst_round = std::max(worst_round, std::abs(s_back - s) / s);
  }
  const bool ok = worst_trig <= 1e-12 && worst_pyth <= 1e-12 && worst_round <= 1e-9;
  return {ok, "trig " + num(worst_trig) + ", pythagorean " + num(worst_pyth) + ", round-trip " +
                  num(worst_round)};
}

Outcome check_inner_solver() {
  std::mt19937_64 rng(606);
  double worst_gap = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto A = gaussian_matrix(rng, 3, 6);
    const auto b = gaussian_vector(rng, 3);
    const auto v = gaussian_vector(rng, 6, 2.0);
    const double rho = 0.5;
    const auto sol = st::inner_solve(A, b, v, rho);
    const Eigen::VectorXd ref =
        oracle::dual_gradient_oracle(A.values(), b.values(), v.values(), rho, 1'000'000);
    worst_gap = std::max(worst_gap, std::abs(oracle::inner_objective(sol.x.values(), v.values(), rho) -
                                             oracle::inner_objective(ref, v.values(), rho)));
  }
  std::size_t kkt_fail = 0;
  double worst_feas = 0.0, worst_stat = 0.0;
  const st::InnerConfig cfg;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 5 + rng() % 246;
    const std::size_t m = 1 + rng() % std::max<std::size_t>(1, (n * 3) / 5);
    const auto A = gaussian_matrix(rng, m, n);
    const auto b = gaussian_vector(rng, m);
    const auto v = gaussian_vector(rng, n, 3.0);
    const double rho = std::uniform_real_distribution<double>(0.1, 2.0)(rng);
    try {
      const auto sol = st::inner_solve(A, b, v, rho, cfg);
      const double scale = std::max(1.0, b.values().norm());
      worst_feas = std::max(worst_feas, sol.certificate.feasibility / scale);
      worst_stat = std::max(worst_stat, sol.certificate.stationarity);
      if (!sol.certificate.passes(cfg, b.values().norm())) ++kkt_fail;
    } catch (const st::NotConverged&) {
      ++kkt_fail;
    }
  }
  const bool ok = worst_gap <= 1e-6 && kkt_fail == 0;
  return {ok, "max objective gap " + num(worst_gap) + "; KKT failures " + std::to_string(kkt_fail) +
                  "/100, max rel feasibility " + num(worst_feas) + ", max stationarity " +
                  num(worst_stat)};
}

Outcome check_recovery() {
  std::string detail;
  bool ok = true;
  for (auto method : {st::RatioMethod::l1_over_linf, st::RatioMethod::l1_over_l2}) {
    st::RecoverySpec spec;
    spec.n = 250;
    spec.m = 100;
    spec.s = 10;
    spec.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    spec.method = method;
    const auto report = st::recovery_benchmark(spec);
    std::size_t good = 0;
    double gmin = 1e300, gmax = 0.0, worst_err = 0.0;
    for (const auto& row : report.rows) {
      if (row.success && row.outer_iters <= 50 && !row.solver_failed) ++good;
      gmin = std::min(gmin, row.min_gamma);
      gmax = std::max(gmax, row.max_gamma);
      worst_err = std::max(worst_err, row.rel_err);
    }
    const bool method_ok = good >= 8 && gmin >= 1.0 && gmax <= 250.0;
    ok = ok && method_ok;
    if (!detail.empty()) detail += "; ";
    detail += std::string(st::to_string(method)) + " " + std::to_string(good) + "/10 seeds, gamma in [" +
              num(gmin) + ", " + num(gmax) + "], max RelErr " + num(worst_err);
  }
  return {ok, detail};
}

Outcome check_montecarlo() {
  st::MonteCarloSpec spec;
  spec.n = 300;
  spec.s_values.resize(100);
  std::iota(spec.s_values.begin(), spec.s_values.end(), std::size_t{1});
  spec.trials = 1000;
  spec.seed = 42;
  const auto rows = st::montecarlo_tanbeta(spec);
  std::size_t violations = 0;
  for (const auto& r : rows) violations += r.range_violations;
  const bool s1_zero = rows.front().mean_tan_beta == 0.0;

  std::vector<double> arith, geom, mc;
  for (std::size_t s = 1; s <= 100; ++s) {
    arith.push_back(st::beta_arith(static_cast<double>(s)));
    geom.push_back(st::beta_geom(static_cast<double>(s)));
  }
  for (const auto& r : rows) mc.push_back(r.mean_tan_beta);
  const auto peaks_a = count_local_maxima(arith);
  const auto peaks_g = count_local_maxima(geom);
  const auto argmax = [](const std::vector<double>& f) {
    return static_cast<std::size_t>(std::max_element(f.begin(), f.end()) - f.begin()) + 1;
  };
  const bool ok = violations == 0 && s1_zero && peaks_a == 1 && peaks_g == 1;
  return {ok, "range violations " + std::to_string(violations) + ", s=1 mean " + num(rows.front().mean_tan_beta) +
                  ", local maxima beta_arith " + std::to_string(peaks_a) + " (s=" +
                  std::to_string(argmax(arith)) + ") beta_geom " + std::to_string(peaks_g) + " (s=" +
                  std::to_string(argmax(geom)) + "), sampled mean peaks at s=" +
                  std::to_string(argmax(mc))};
}

Outcome check_cli_determinism() {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "sparse_triangle_acceptance";
  fs::create_directories(dir);
  const auto trace = (dir / "trace.csv").string();
  const std::vector<std::vector<std::string>> commands{
      {"phi", "--vector", "3,-1,2,0.5,-2", "--grid", "11"},
      {"triangle", "--vector", "2,1,1,-0.25"},
      {"means", "--s-min", "1", "--s-max", "100", "--steps", "100"},
      {"recover", "--n", "250", "--m", "100", "--s", "10", "--seeds", "3", "--trace", trace},
      {"recover", "--method", "l1-over-l2", "--seeds", "3", "--trace", trace},
      {"montecarlo", "--n", "300", "--s-min", "1", "--s-max", "30", "--trials", "200"},
      {"sweep", "--n", "100", "--m", "40", "--s-list", "2,6,12", "--trials", "3"},
  };
  std::size_t mismatches = 0;
  std::string which;
  auto slurp = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  for (const auto& args : commands) {
    std::array<std::string, 2> outs, traces;
    std::array<int, 2> codes{};
    for (int rep = 0; rep < 2; ++rep) {
      std::ostringstream out, err;
      codes[rep] = st::cli::run(args, out, err);
      outs[rep] = out.str();
      traces[rep] = args.front() == "recover" ? slurp(trace) : "";
    }
    if (outs[0] != outs[1] || traces[0] != traces[1] || codes[0] != codes[1] || codes[0] != 0 ||
        outs[0].empty()) {
      ++mismatches;
      which += " " + args.front();
    }
  }
  fs::remove_all(dir);
  return {mismatches == 0, std::to_string(commands.size()) + " subcommand runs, " +
                               std::to_string(mismatches) + " differing" + which};
}

}  // namespace

int main() {
  criterion(1, "sparse-metric means at s=100", 1, check_means);
  criterion(2, "closed form vs quadrature", 1, check_closed_form);
  criterion(3, "phi endpoint, convexity, monotonicity and derivative", 5, check_phi_properties);
  criterion(4, "norm-ratio sandwich", 5, check_sandwich);
  criterion(5, "triangle identities and sparsity round-trip", 2, check_triangle);
  criterion(6, "inner solver oracle and KKT certificates", 120, check_inner_solver);
  criterion(7, "DCA recovery at n=250 m=100 s=10", 600, check_recovery);
  criterion(8, "Monte Carlo tan(beta) at n=300", 300, check_montecarlo);
  criterion(9, "CLI determinism", 600, check_cli_determinism);
  std::printf("%s: %d of 9 criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
