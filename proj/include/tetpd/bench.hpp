// SPDX-License-Identifier: Apache-2.0
//! \file tetpd/bench.hpp
//! Randomized experiment: N intersecting pairs through every mode, with
//! aggregate ratio statistics and CSV output.
#pragma once

#include "tetpd/io.hpp"
#include "tetpd/solver.hpp"

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

namespace tetpd {

/// Seed of pair `pair_id` in a run seeded with `seed` (splitmix64 mix).
inline std::uint64_t pair_seed(std::uint64_t seed, std::uint64_t pair_id) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (pair_id + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline TetPair generate_pair(std::uint64_t seed, std::uint64_t pair_id,
                             const GenerationOptions& opt = {}) {
  std::mt19937_64 rng(pair_seed(seed, pair_id));
  return random_intersecting_pair(rng, opt);
}

struct AccelEntry {
  int k = 1;
  double value = 0.0;
  double ratio_pct = 0.0;
  double time_us = 0.0;
  int winner_group = -1;
};

struct BenchRecord {
  std::size_t pair_id = 0;
  std::uint64_t seed = 0;
  double pd_rigid = 0.0;
  double pdd_stat_def = 0.0;
  double pdd_def_def = 0.0;
  double ratio_stat_def_pct = 0.0;
  double ratio_def_def_pct = 0.0;
  std::vector<AccelEntry> accel;  // one per requested k, in request order
  ContactKind winner_kind_def_def = ContactKind::FV;
  int winner_group_stat_def = -1;
  int winner_group_def_def = -1;
  int rigid_group = -1;
  // 0-based position of the def/def winner's feature pair in the rigid ranking.
  int winner_rigid_rank = -1;
  bool rigid_dir_coincides = false;
  double t_rigid_us = 0.0;
  double t_stat_def_us = 0.0;
  double t_def_def_us = 0.0;
  double max_kkt_residual = 0.0;

  const AccelEntry* accel_for(int k) const {
    for (const auto& e : accel)
      if (e.k == k) return &e;
    return nullptr;
  }
};

/// Full solver outputs for one pair, kept only on request.
struct BenchSolves {
  TetPair pair;
  RigidPdResult rigid;
  PddResult stat_def;
  PddResult def_def;
  std::vector<PddResult> accel;
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // population
};

inline MeanStd mean_std(const std::vector<double>& v) {
  MeanStd out;
  if (v.empty()) return out;
  double sum = 0.0;
  for (double x : v) sum += x;
  out.mean = sum / static_cast<double>(v.size());
  double sq = 0.0;
  for (double x : v) sq += (x - out.mean) * (x - out.mean);
  out.std = std::sqrt(sq / static_cast<double>(v.size()));
  return out;
}

struct ModeSummary {
  MeanStd ratio_pct;
  double mean_time_us = 0.0;
  double total_time_us = 0.0;
};

struct AccelSummary {
  int k = 1;
  ModeSummary mode;
  double mean_relative_error_pct = 0.0;  // mean of (accel - full) / full
  double max_relative_error_pct = 0.0;
  double exact_rate_pct = 0.0;           // pairs with accel == full within 1e-9
};

struct BenchSummary {
  std::size_t count = 0;
  std::uint64_t seed = 0;
  ModeSummary stat_def;
  ModeSummary def_def;
  std::vector<AccelSummary> accel;
  double mean_rigid_time_us = 0.0;
  double coincidence_rate_pct = 0.0;
  double top6_coverage_pct = 0.0;
  double max_kkt_residual = 0.0;
};

/// Percentage of records whose def/def winning direction is among the first
/// k rigid-ranked directions.
inline double top_k_coverage(const std::vector<BenchRecord>& records, int k = 6) {
  if (records.empty()) return 0.0;
  std::size_t hit = 0;
  for (const auto& r : records)
    if (r.winner_rigid_rank >= 0 && r.winner_rigid_rank < k) ++hit;
  return 100.0 * static_cast<double>(hit) / static_cast<double>(records.size());
}

struct BenchOptions {
  std::size_t count = 1000;
  std::uint64_t seed = 42;
  std::vector<int> k_list{1};
  GenerationOptions generation;
  // 0 = TETPD_THREADS if set, else hardware concurrency.
  unsigned threads = 0;
  bool keep_solves = false;
};

struct BenchRun {
  std::vector<BenchRecord> records;
  BenchSummary summary;
  std::vector<BenchSolves> solves;  // filled when keep_solves
};

inline unsigned worker_count(unsigned requested, std::size_t jobs) {
  unsigned n = requested;
  if (n == 0) {
    if (const char* env = std::getenv("TETPD_THREADS")) n = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    n = n == 0 ? hw : std::min(n, hw);
  }
  return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(n, jobs)));
}

namespace detail {

template <class Fn>
double time_us(Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::micro>(t1 - t0).count();
}

inline int rank_of(const RigidPdResult& rigid, int group) {
  for (std::size_t i = 0; i < rigid.ranked.size(); ++i)
    if (rigid.ranked[i].group == group) return static_cast<int>(i);
  return -1;
}

inline BenchRecord bench_one(std::size_t pair_id, const BenchOptions& opt, BenchSolves* keep) {
  BenchRecord rec;
  rec.pair_id = pair_id;
  rec.seed = pair_seed(opt.seed, pair_id);
  const TetPair pair = generate_pair(opt.seed, pair_id, opt.generation);
  const auto& [a, b] = pair;

  RigidPdResult rigid;
  PddResult sd, dd;
  rec.t_rigid_us = time_us([&] { rigid = rigid_pd(a, b); });
  rec.t_stat_def_us = time_us([&] { sd = pdd_static_deformable(a, b); });
  rec.t_def_def_us = time_us([&] { dd = pdd_deformable_deformable(a, b); });

  rec.pd_rigid = rigid.value;
  rec.rigid_group = rigid.ranked.front().group;
  rec.pdd_stat_def = sd.value;
  rec.pdd_def_def = dd.value;
  rec.ratio_stat_def_pct = 100.0 * sd.value / rigid.value;
  rec.ratio_def_def_pct = 100.0 * dd.value / rigid.value;
  rec.winner_kind_def_def = dd.best.kind;
  rec.winner_group_stat_def = sd.best.group;
  rec.winner_group_def_def = dd.best.group;
  rec.winner_rigid_rank = rank_of(rigid, dd.best.group);
  rec.rigid_dir_coincides = rec.winner_rigid_rank == 0;
  rec.max_kkt_residual = std::max(sd.max_kkt_residual, dd.max_kkt_residual);

  std::vector<PddResult> accel;
  for (int k : opt.k_list) {
    AccelEntry e;
    e.k = k;
    PddResult r;
    e.time_us = time_us([&] { r = pdd_accelerated(a, b, k); });
    e.value = r.value;
    e.ratio_pct = 100.0 * r.value / rigid.value;
    e.winner_group = r.best.group;
    rec.max_kkt_residual = std::max(rec.max_kkt_residual, r.max_kkt_residual);
    rec.accel.push_back(e);
    if (keep) accel.push_back(std::move(r));
  }
  if (keep) *keep = BenchSolves{pair, std::move(rigid), std::move(sd), std::move(dd), std::move(accel)};
  return rec;
}

}  // namespace detail

inline BenchSummary summarize(const std::vector<BenchRecord>& records, std::uint64_t seed,
                              const std::vector<int>& k_list) {
  BenchSummary s;
  s.count = records.size();
  s.seed = seed;
  if (records.empty()) return s;
  const double n = static_cast<double>(records.size());

  std::vector<double> rs, rd;
  double t_rigid = 0.0;
  std::size_t coincide = 0;
  for (const auto& r : records) {
    rs.push_back(r.ratio_stat_def_pct);
    rd.push_back(r.ratio_def_def_pct);
    s.stat_def.total_time_us += r.t_stat_def_us;
    s.def_def.total_time_us += r.t_def_def_us;
    t_rigid += r.t_rigid_us;
    coincide += r.rigid_dir_coincides ? 1 : 0;
    s.max_kkt_residual = std::max(s.max_kkt_residual, r.max_kkt_residual);
  }
  s.stat_def.ratio_pct = mean_std(rs);
  s.def_def.ratio_pct = mean_std(rd);
  s.stat_def.mean_time_us = s.stat_def.total_time_us / n;
  s.def_def.mean_time_us = s.def_def.total_time_us / n;
  s.mean_rigid_time_us = t_rigid / n;
  s.coincidence_rate_pct = 100.0 * static_cast<double>(coincide) / n;
  s.top6_coverage_pct = top_k_coverage(records, 6);

  for (int k : k_list) {
    AccelSummary as;
    as.k = k;
    std::vector<double> ratios;
    double err = 0.0;
    std::size_t exact = 0;
    for (const auto& r : records) {
      const AccelEntry* e = r.accel_for(k);
      if (!e) continue;
      ratios.push_back(e->ratio_pct);
      as.mode.total_time_us += e->time_us;
      const double rel = (e->value - r.pdd_def_def) / r.pdd_def_def;
      err += rel;
      as.max_relative_error_pct = std::max(as.max_relative_error_pct, 100.0 * rel);
      if (std::abs(e->value - r.pdd_def_def) <= 1e-9) ++exact;
    }
    if (!ratios.empty()) {
      const double m = static_cast<double>(ratios.size());
      as.mode.ratio_pct = mean_std(ratios);
      as.mode.mean_time_us = as.mode.total_time_us / m;
      as.mean_relative_error_pct = 100.0 * err / m;
      as.exact_rate_pct = 100.0 * static_cast<double>(exact) / m;
    }
    s.accel.push_back(as);
  }
  return s;
}

/// Runs the experiment. Pairs are processed by a worker pool; records are
/// stored by pair_id so the output is independent of completion order.
inline BenchRun run_bench(const BenchOptions& opt) {
  if (opt.count < 1) throw std::invalid_argument("run_bench: count must be >= 1");
  if (opt.k_list.empty()) throw std::invalid_argument("run_bench: k_list must not be empty");
  for (int k : opt.k_list)
    if (k < 1) throw std::invalid_argument("run_bench: k must be >= 1");

  BenchRun run;
  run.records.resize(opt.count);
  if (opt.keep_solves) run.solves.resize(opt.count);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < opt.count; i = next++) {
      try {
        run.records[i] = detail::bench_one(i, opt, opt.keep_solves ? &run.solves[i] : nullptr);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned workers = worker_count(opt.threads, opt.count);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  run.summary = summarize(run.records, opt.seed, opt.k_list);
  return run;
}

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

inline constexpr const char* kBenchCsvHeader =
    "pair_id,seed,pd_rigid,pdd_stat_def,pdd_def_def,pdd_accel_k1,"
    "ratio_stat_def_pct,ratio_def_def_pct,ratio_accel_pct,winner_kind_def_def,"
    "rigid_dir_coincides,t_stat_def_us,t_def_def_us,t_accel_us";

/// Writes the records as CSV. Two leading '#' lines document the timing
/// scope and the standard-deviation convention used by the summary.
inline void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << "# times: wall-clock microseconds for the whole per-pair pipeline of each mode "
         "(all candidate QPs; accel includes the rigid ranking)\n";
  out << "# summary statistics use the population standard deviation (divide by N)\n";
  out << kBenchCsvHeader << '\n';
  out << std::setprecision(17);
  for (const auto& r : records) {
    const AccelEntry* k1 = r.accel_for(1);
    out << r.pair_id << ',' << r.seed << ',' << r.pd_rigid << ',' << r.pdd_stat_def << ','
        << r.pdd_def_def << ',' << (k1 ? k1->value : std::nan("")) << ',' << r.ratio_stat_def_pct
        << ',' << r.ratio_def_def_pct << ',' << (k1 ? k1->ratio_pct : std::nan("")) << ','
        << to_string(r.winner_kind_def_def) << ',' << (r.rigid_dir_coincides ? 1 : 0) << ','
        << r.t_stat_def_us << ',' << r.t_def_def_us << ',' << (k1 ? k1->time_us : std::nan(""))
        << '\n';
  }
}

inline json to_json(const MeanStd& m) { return json{{"mean", m.mean}, {"std", m.std}}; }

inline json to_json(const ModeSummary& m) {
  return json{{"ratio_pct", to_json(m.ratio_pct)},
              {"mean_time_us", m.mean_time_us},
              {"total_time_us", m.total_time_us}};
}

inline json to_json(const BenchSummary& s) {
  json accel = json::array();
  for (const auto& a : s.accel) {
    json j = to_json(a.mode);
    j["k"] = a.k;
    j["mean_relative_error_pct"] = a.mean_relative_error_pct;
    j["max_relative_error_pct"] = a.max_relative_error_pct;
    j["exact_rate_pct"] = a.exact_rate_pct;
    accel.push_back(std::move(j));
  }
  return json{{"count", s.count},
              {"seed", s.seed},
              {"std_convention", "population"},
              {"stat_def", to_json(s.stat_def)},
              {"def_def", to_json(s.def_def)},
              {"accel", std::move(accel)},
              {"mean_rigid_time_us", s.mean_rigid_time_us},
              {"coincidence_rate_pct", s.coincidence_rate_pct},
              {"top6_coverage_pct", s.top6_coverage_pct},
              {"max_kkt_residual", s.max_kkt_residual}};
}

}  // namespace tetpd
