// SPDX-License-Identifier: Apache-2.0
//! \file tools/tetpd.cpp
//! Command-line front end: gen, rigid, solve, bench, check.

#include "tetpd/tetpd.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

namespace fs = std::filesystem;
using namespace tetpd;

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  out << std::setprecision(17);
  return out;
}

json vec_json(const Vector3& v) { return json::array({v.x(), v.y(), v.z()}); }

int cmd_gen(std::size_t count, std::uint64_t seed, const std::string& out) {
  std::vector<TetPair> pairs;
  pairs.reserve(count);
  for (std::size_t i = 0; i < count; ++i) pairs.push_back(generate_pair(seed, i));
  write_pairs(out, pairs);
  std::printf("wrote %zu intersecting pairs to %s\n", count, out.c_str());
  return 0;
}

int cmd_rigid(const std::string& pairs_path, const std::string& out_path) {
  const auto pairs = read_pairs(pairs_path);
  auto out = open_out(out_path);
  out << "pair_id,pd_rigid,dir_x,dir_y,dir_z,group,error\n";
  int errors = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    try {
      const auto r = rigid_pd(pairs[i].a, pairs[i].b);
      out << i << ',' << r.value << ',' << r.direction.x() << ',' << r.direction.y() << ','
          << r.direction.z() << ',' << r.ranked.front().group << ",\n";
    } catch (const std::invalid_argument& e) {
      ++errors;
      out << i << ",,,,,," << (dynamic_cast<const NotIntersecting*>(&e) ? "NotIntersecting" : "DegenerateTetrahedron")
          << '\n';
    }
  }
  std::printf("rigid PD for %zu pairs, %d errors -> %s\n", pairs.size(), errors, out_path.c_str());
  return errors == 0 ? 0 : 1;
}

int cmd_solve(const std::string& mode_name, int k, const std::string& pairs_path, const std::string& out_path) {
  const auto pairs = read_pairs(pairs_path);
  auto out = open_out(out_path);
  out << "pair_id,mode,k,pdd,objective,winner_kind,winner_group,plane_offset,error\n";
  json sidecar = json::array();
  int errors = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [a, b] = pairs[i];
    try {
      PddResult r;
      if (mode_name == "stat-def") r = pdd_static_deformable(a, b);
      else if (mode_name == "def-def") r = pdd_deformable_deformable(a, b);
      else r = pdd_accelerated(a, b, k);
      out << i << ',' << mode_name << ',' << (r.mode == Mode::accelerated ? k : 0) << ',' << r.value << ','
          << r.objective << ',' << to_string(r.best.kind) << ',' << r.best.group << ',' << r.plane_offset << ",\n";
      sidecar.push_back(json{{"pair_id", i},
                             {"direction", vec_json(r.best.direction)},
                             {"plane_offset", r.plane_offset},
                             {"a", to_json(r.a_deformed)},
                             {"b", to_json(r.b_deformed)}});
    } catch (const NotIntersecting&) {
      ++errors;
      out << i << ',' << mode_name << ",,,,,,,NotIntersecting\n";
      sidecar.push_back(json{{"pair_id", i}, {"error", "NotIntersecting"}});
    } catch (const DegenerateTetrahedron&) {
      ++errors;
      out << i << ',' << mode_name << ",,,,,,,DegenerateTetrahedron\n";
      sidecar.push_back(json{{"pair_id", i}, {"error", "DegenerateTetrahedron"}});
    }
  }
  const std::string sidecar_path = out_path + ".json";
  open_out(sidecar_path) << sidecar.dump(1) << '\n';
  std::printf("%s on %zu pairs, %d errors -> %s (+ %s)\n", mode_name.c_str(), pairs.size(), errors,
              out_path.c_str(), sidecar_path.c_str());
  return errors == 0 ? 0 : 1;
}

int cmd_bench(std::size_t count, std::uint64_t seed, const std::string& out_dir, std::vector<int> ks,
              unsigned threads) {
  if (std::find(ks.begin(), ks.end(), 1) == ks.end()) ks.insert(ks.begin(), 1);
  BenchOptions opt;
  opt.count = count;
  opt.seed = seed;
  opt.k_list = ks;
  opt.threads = threads;
  const auto run = run_bench(opt);

  fs::create_directories(out_dir);
  const auto csv_path = (fs::path(out_dir) / "bench.csv").string();
  const auto json_path = (fs::path(out_dir) / "summary.json").string();
  {
    auto csv = open_out(csv_path);
    write_bench_csv(csv, run.records);
  }
  open_out(json_path) << to_json(run.summary).dump(2) << '\n';

  const auto& s = run.summary;
  std::printf("%zu pairs, seed %llu\n", s.count, static_cast<unsigned long long>(s.seed));
  std::printf("  %-10s ratio %6.2f%% (std %5.2f)  %9.3f ms/pair\n", "stat-def", s.stat_def.ratio_pct.mean,
              s.stat_def.ratio_pct.std, s.stat_def.mean_time_us / 1000.0);
  std::printf("  %-10s ratio %6.2f%% (std %5.2f)  %9.3f ms/pair\n", "def-def", s.def_def.ratio_pct.mean,
              s.def_def.ratio_pct.std, s.def_def.mean_time_us / 1000.0);
  for (const auto& a : s.accel)
    std::printf("  accel k=%-2d ratio %6.2f%% (std %5.2f)  %9.3f ms/pair  mean rel. error %.2f%%\n", a.k,
                a.mode.ratio_pct.mean, a.mode.ratio_pct.std, a.mode.mean_time_us / 1000.0,
                a.mean_relative_error_pct);
  std::printf("  rigid direction coincidence %.2f%%, top-6 coverage %.2f%%\n", s.coincidence_rate_pct,
              s.top6_coverage_pct);
  std::printf("wrote %s and %s\n", csv_path.c_str(), json_path.c_str());
  return 0;
}

int cmd_check(const std::string& pairs_path) {
  const auto pairs = read_pairs(pairs_path);
  struct Tally {
    const char* name;
    int pass = 0, fail = 0;
    void add(bool ok) { (ok ? pass : fail)++; }
  };
  Tally inter{"intersecting"}, rigid{"rigid translation"}, sampled{"sampled lower bound"},
      separated{"separation"}, chain{"upper-bound chain"};
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [a, b] = pairs[i];
    bool ok = false;
    try {
      ok = intersects(a, b);
    } catch (const DegenerateTetrahedron&) {
    }
    inter.add(ok);
    if (!ok) continue;
    const auto r = rigid_pd(a, b);
    rigid.add(!intersects(a, b.translated(1.01 * r.value * r.direction)) &&
              intersects(a, b.translated(0.99 * r.value * r.direction)));
    sampled.add(oracle::sampled_direction_lower_bound(a, b, 200, i) >= r.value - 1e-9);
    const auto sd = pdd_static_deformable(a, b);
    const auto dd = pdd_deformable_deformable(a, b);
    const auto ac = pdd_accelerated(a, b, 1);
    for (const auto* res : {&sd, &dd, &ac}) separated.add(oracle::verify_separation(res->a_deformed, res->b_deformed));
    chain.add(dd.value <= sd.value + 1e-9 && sd.value <= r.value + 1e-9 && dd.value <= ac.value + 1e-9);
  }
  int failed = 0;
  std::printf("%zu pairs\n", pairs.size());
  for (const auto& t : {inter, rigid, sampled, separated, chain}) {
    std::printf("  %-20s pass %5d  fail %5d\n", t.name, t.pass, t.fail);
    failed += t.fail;
  }
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Penetration depth between deformable tetrahedra"};
  app.require_subcommand(1);

  std::size_t count = 10;
  std::uint64_t seed = 1;
  std::string out, pairs_path, out_dir = "bench_out", mode = "def-def";
  int k = 1;
  std::vector<int> ks{1};
  unsigned threads = 0;

  auto* gen = app.add_subcommand("gen", "Write random intersecting pairs as JSON");
  gen->add_option("--count", count, "Number of pairs")->required()->check(CLI::PositiveNumber);
  gen->add_option("--seed", seed, "Seed")->required();
  gen->add_option("--out", out, "Output JSON path")->required();

  auto* rigid = app.add_subcommand("rigid", "Rigid penetration depth per pair");
  rigid->add_option("--pairs", pairs_path, "Pairs JSON")->required()->check(CLI::ExistingFile);
  rigid->add_option("--out", out, "Output CSV path")->required();

  auto* solve = app.add_subcommand("solve", "Deformable penetration depth per pair");
  solve->add_option("--mode", mode, "Solve mode")->check(CLI::IsMember({"stat-def", "def-def", "accel"}));
  solve->add_option("--k", k, "Directions kept in accel mode")->check(CLI::PositiveNumber);
  solve->add_option("--pairs", pairs_path, "Pairs JSON")->required()->check(CLI::ExistingFile);
  solve->add_option("--out", out, "Output CSV path; deformed shapes go to <out>.json")->required();

  auto* bench = app.add_subcommand("bench", "Run the randomized experiment");
  bench->add_option("--count", count, "Number of pairs")->check(CLI::PositiveNumber);
  bench->add_option("--seed", seed, "Seed");
  bench->add_option("--out-dir", out_dir, "Directory for bench.csv and summary.json");
  bench->add_option("--k", ks, "Accelerated k values (k=1 always included)")->check(CLI::PositiveNumber);
  bench->add_option("--threads", threads, "Worker threads (default: TETPD_THREADS or all cores)");

  auto* check = app.add_subcommand("check", "Run the oracle verifications on a pairs file");
  check->add_option("--pairs", pairs_path, "Pairs JSON")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_gen(count, seed, out);
    if (*rigid) return cmd_rigid(pairs_path, out);
    if (*solve) return cmd_solve(mode, k, pairs_path, out);
    if (*bench) return cmd_bench(count, seed, out_dir, ks, threads);
    if (*check) return cmd_check(pairs_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
