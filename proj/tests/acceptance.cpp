// SPDX-License-Identifier: Apache-2.0
//! \file tests/acceptance.cpp
//! End-to-end acceptance run: one PASS/FAIL line per criterion, exit status 1
//! if any criterion fails. Usage: tetpd_acceptance [--count N] [--seed S]

#include "tetpd/tetpd.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <random>
#include <string>

using namespace tetpd;

namespace {

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
  std::printf("[%s] %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  failures += ok ? 0 : 1;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Tetrahedron random_configuration(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  Tetrahedron t;
  for (auto& v : t.vertices) v = Point3(u(rng), u(rng), u(rng));
  return t;
}

void metric_correctness(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst_quad = 0.0, worst_translation = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const auto q0 = random_configuration(rng);
    const auto q1 = random_configuration(rng);
    const double closed = object_norm(q0, q1);
    worst_quad = std::max(worst_quad, std::abs(closed - object_norm_quadrature(q0, q1)) / closed);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    const Vector3 t(u(rng), u(rng), u(rng));
    worst_translation = std::max(worst_translation, std::abs(object_norm(q0, q0.translated(t)) - t.squaredNorm()));
  }
  report(worst_quad <= 1e-10 && worst_translation <= 1e-12, "metric correctness",
         fmt("10000 configurations, max quadrature rel gap %.2e (<= 1e-10), max translation-law gap %.2e (<= 1e-12)",
             worst_quad, worst_translation));
}

void rigid_soundness(const std::vector<BenchSolves>& solves) {
  int sep_fail = 0, inside_fail = 0, sample_fail = 0;
  for (std::size_t i = 0; i < solves.size(); ++i) {
    const auto& [a, b] = solves[i].pair;
    const auto& r = solves[i].rigid;
    sep_fail += intersects(a, b.translated(1.01 * r.value * r.direction)) ? 1 : 0;
    inside_fail += intersects(a, b.translated(0.99 * r.value * r.direction)) ? 0 : 1;
    sample_fail += oracle::sampled_direction_lower_bound(a, b, 200, i) < r.value - 1e-9 ? 1 : 0;
  }
  report(sep_fail + inside_fail + sample_fail == 0, "rigid PD soundness",
         fmt("%zu pairs, 1.01*PD not separating: %d, 0.99*PD separating: %d, sampled direction below PD: %d",
             solves.size(), sep_fail, inside_fail, sample_fail));
}

double case1_violation(const PddResult& r, const TetPair& p) {
  return build_case1(r.best, p.a, p.b).max_violation(flatten(r.b_deformed));
}

double case2_violation(const PddResult& r, const TetPair& p) {
  Eigen::VectorXd x(case2::kUnknowns);
  x << flatten(r.a_deformed), flatten(r.b_deformed), r.plane_offset;
  return build_case2(r.best, p.a, p.b).max_violation(x);
}

void separation(const std::vector<BenchSolves>& solves) {
  std::size_t total = 0, passed = 0;
  double worst = 0.0;
  auto check = [&](const PddResult& r, double violation) {
    ++total;
    worst = std::max(worst, violation);
    if (oracle::verify_separation(r.a_deformed, r.b_deformed, 1e-7) && violation <= 1e-7) ++passed;
  };
  for (const auto& s : solves) {
    check(s.stat_def, case1_violation(s.stat_def, s.pair));
    check(s.def_def, case2_violation(s.def_def, s.pair));
    for (const auto& r : s.accel) check(r, case2_violation(r, s.pair));
  }
  report(passed == total, "separation guarantee",
         fmt("%zu/%zu solves separated (stat-def, def-def, accel), max constraint violation %.2e (<= 1e-7)",
             passed, total, worst));
}

void upper_bound_chain(const std::vector<BenchRecord>& records) {
  int bad = 0;
  double worst = 0.0;
  for (const auto& r : records) {
    const double excess = std::max(r.pdd_def_def - r.pdd_stat_def, r.pdd_stat_def - r.pd_rigid);
    worst = std::max(worst, excess);
    bad += excess > 1e-9 ? 1 : 0;
  }
  report(bad == 0, "upper-bound chain",
         fmt("def-def <= stat-def <= rigid on %zu pairs, violations %d, max excess %.2e (tolerance 1e-9)",
             records.size(), bad, worst));
}

void ratio_reproduction(const BenchSummary& s) {
  const auto& dd = s.def_def.ratio_pct;
  const auto& sd = s.stat_def.ratio_pct;
  const bool ok = dd.mean >= 22.94 && dd.mean <= 32.94 && sd.mean >= 33.59 && sd.mean <= 53.59 && dd.mean < 33.4;
  report(ok, "ratio reproduction",
         fmt("def-def %.2f%% (std %.2f) in [22.94, 32.94] and < 33.4; stat-def %.2f%% (std %.2f) in [33.59, 53.59]",
             dd.mean, dd.std, sd.mean, sd.std));
}

void acceleration_quality(const BenchSummary& s) {
  const auto& k1 = s.accel.front();
  const bool ok = k1.mean_relative_error_pct <= 5.0 && s.coincidence_rate_pct >= 42.33 &&
                  s.coincidence_rate_pct <= 62.33 && s.top6_coverage_pct >= 85.0;
  report(ok, "acceleration quality",
         fmt("k=1 mean relative error %.2f%% (<= 5, max %.1f%%, exact on %.1f%% of pairs); "
             "coincidence %.2f%% in [42.33, 62.33]; top-6 coverage %.2f%% (>= 85)",
             k1.mean_relative_error_pct, k1.max_relative_error_pct, k1.exact_rate_pct,
             s.coincidence_rate_pct, s.top6_coverage_pct));
}

void acceleration_speed(const BenchSummary& s) {
  const auto& k1 = s.accel.front();
  const double ratio = k1.mode.total_time_us / s.def_def.total_time_us;
  report(ratio <= 0.1, "acceleration speed",
         fmt("accel k=1 %.3f ms/pair vs def-def %.3f ms/pair, ratio %.4f (<= 0.1), speedup %.1fx",
             k1.mode.mean_time_us / 1000.0, s.def_def.mean_time_us / 1000.0, ratio, 1.0 / ratio));
}

void qp_contract(const BenchSummary& s, std::uint64_t seed) {
  int disagree = 0, unconverged = 0;
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    const auto pair = generate_pair(seed ^ 0x9d5eULL, i);
    const auto cs = enumerate_candidates(pair.a, pair.b);
    const auto& c = cs[i % cs.size()];
    const auto p = case2_problem(build_case2(c, pair.a, pair.b), pair.a, pair.b);
    const auto sol = qp::solve(p);
    const auto ref = oracle::projected_gradient_reference(p);
    if (!ref.converged || sol.status != qp::Status::optimal) {
      ++unconverged;
      continue;
    }
    const double gap = std::abs(sol.objective - ref.value) / std::abs(ref.value);
    worst = std::max(worst, gap);
    disagree += gap > 1e-6 ? 1 : 0;
  }
  const bool ok = s.max_kkt_residual <= 1e-9 && disagree == 0 && unconverged == 0;
  report(ok, "QP contract",
         fmt("max KKT residual over all optimal solves %.2e (<= 1e-9); 100 systems vs projected gradient: "
             "max rel gap %.2e (<= 1e-6), disagreements %d, unconverged %d",
             s.max_kkt_residual, worst, disagree, unconverged));
}

void analytic_spot_checks() {
  const Tetrahedron a{{Point3(0, 0, 0), Point3(1, 0, 0), Point3(0, 1, 0), Point3(0, 0, 1)}};
  const Tetrahedron b = a.translated(Vector3(0.25, 0.25, 0.25));
  const double c = 0.25 / std::sqrt(3.0);
  const double sd = pdd_static_deformable(a, b).value;
  const double dd = pdd_deformable_deformable(a, b).value;
  const double sd_ref = c / 4.0;
  const double dd_ref = std::sqrt(2.625 / 49.0) * c;
  const bool ok = std::abs(sd - sd_ref) <= 1e-6 && std::abs(dd - dd_ref) <= 1e-6;
  report(ok, "analytic spot checks",
         fmt("stat-def %.8f vs c/4 = %.8f; def-def %.8f vs sqrt(2.625/49)*c = %.8f (tolerance 1e-6)", sd, sd_ref,
             dd, dd_ref));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tetpd acceptance run"};
  std::size_t count = 1000;
  std::uint64_t seed = 42;
  app.add_option("--count", count, "Number of random intersecting pairs")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Run seed");
  CLI11_PARSE(app, argc, argv);

  BenchOptions opt;
  opt.count = count;
  opt.seed = seed;
  opt.k_list = {1};
  opt.keep_solves = true;
  const auto run = run_bench(opt);
  std::printf("acceptance run: %zu pairs, seed %llu\n", count, static_cast<unsigned long long>(seed));

  metric_correctness(seed);
  rigid_soundness(run.solves);
  separation(run.solves);
  upper_bound_chain(run.records);
  ratio_reproduction(run.summary);
  acceleration_quality(run.summary);
  acceleration_speed(run.summary);
  qp_contract(run.summary, seed);
  analytic_spot_checks();

  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
