#pragma once

#include <atomic>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "grpiso/constructors.hpp"
#include "grpiso/group_table.hpp"
#include "grpiso/iso_engine.hpp"

namespace grpiso {

struct BenchPair {
  std::string name_a, name_b;
  GroupTable a, b;
};

struct BenchRow {
  std::string name_a, name_b;
  int n = 0;
  std::string method;
  int rep = 0;
  bool isomorphic = false;
  long long choices = 0;
  long long canonizations = 0;
  double millis = 0;
};

inline std::vector<int> random_permutation(int n, std::mt19937_64& rng) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

inline std::vector<BenchPair> bench_corpus(const std::string& name, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<BenchPair> pairs;
  auto shuffled_pair = [&](const std::string& label, const GroupTable& g) {
    pairs.push_back({label, label + "-relabeled", g,
                     relabel_group(g, random_permutation(g.n, rng))});
  };
  if (name == "none") return pairs;
  if (name == "pow2") {
    for (int k = 1; k <= 6; ++k) {
      GroupTable g = cyclic_group(2);
      for (int i = 1; i < k; ++i) g = direct_product(g, cyclic_group(2));
      shuffled_pair("Z2^" + std::to_string(k), g);
    }
    return pairs;
  }
  if (name == "tight") {
    shuffled_pair("tight64", tight_family(64));
    return pairs;
  }
  if (name == "heisenberg") {
    shuffled_pair("heis27", heisenberg_group(3));
    return pairs;
  }
  if (name == "mixed") {
    shuffled_pair("Z12", cyclic_group(12));
    shuffled_pair("D4", dihedral_group(4));
    shuffled_pair("S3", symmetric_group(3, false));
    pairs.push_back({"D4", "Q8", dihedral_group(4), quaternion8()});
    pairs.push_back({"Z12", "Z2xZ6", cyclic_group(12),
                     direct_product(cyclic_group(2), cyclic_group(6))});
    return pairs;
  }
  throw BadParameters("unknown bench corpus '" + name + "'");
}

inline std::vector<BenchRow> run_bench(const std::vector<BenchPair>& pairs,
                                       const std::vector<std::string>& methods, int reps,
                                       int jobs, const IsoOptions& base_opts = {}) {
  struct Task {
    int pair, method, rep;
  };
  std::vector<Task> tasks;
  for (size_t p = 0; p < pairs.size(); ++p)
    for (size_t m = 0; m < methods.size(); ++m)
      for (int r = 0; r < reps; ++r) tasks.push_back({(int)p, (int)m, r});
  std::vector<BenchRow> rows(tasks.size());

  std::atomic<size_t> next{0};
  auto worker = [&]() {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= tasks.size()) break;
      const Task& t = tasks[i];
      const BenchPair& bp = pairs[t.pair];
      IsoOptions opts = base_opts;
      opts.want_witness = false;
      IsoVerdict v = decide_iso(bp.a, bp.b, iso_method_from_string(methods[t.method]), opts);
      BenchRow row;
      row.name_a = bp.name_a;
      row.name_b = bp.name_b;
      row.n = bp.a.n;
      row.method = methods[t.method];
      row.rep = t.rep;
      row.isomorphic = v.isomorphic;
      row.choices = v.stats.choices;
      row.canonizations = v.stats.canonizations;
      row.millis = v.stats.millis;
      rows[i] = std::move(row);
    }
  };
  jobs = std::max(1, jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return rows;
}

inline std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string out = "name_a,name_b,n,method,rep,isomorphic,choices,canonizations,millis\n";
  char buf[64];
  for (const auto& r : rows) {
    out += r.name_a + "," + r.name_b + "," + std::to_string(r.n) + "," + r.method + "," +
           std::to_string(r.rep) + "," + (r.isomorphic ? "1" : "0") + "," +
           std::to_string(r.choices) + "," + std::to_string(r.canonizations) + ",";
    snprintf(buf, sizeof buf, "%.3f", r.millis);
    out += buf;
    out += "\n";
  }
  return out;
}

}  // namespace grpiso
