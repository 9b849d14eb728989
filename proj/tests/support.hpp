#pragma once

// Shared test fixtures and independent oracles. Oracles here deliberately
// avoid the library's own algorithm paths: brute-force bijections, generator
// image enumeration, conjugacy-class based normal subgroup listing, and a
// color-respecting graph isomorphism counter.

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "grpiso/bench.hpp"
#include "grpiso/comp_series.hpp"
#include "grpiso/constructors.hpp"
#include "grpiso/gen_order.hpp"
#include "grpiso/group_table.hpp"
#include "grpiso/structure.hpp"
#include "grpiso/subgroup.hpp"

namespace testsupport {

using namespace grpiso;

// ---- small constructors ----

inline GroupTable zn(int n) { return cyclic_group(n); }

inline GroupTable zz(std::vector<int> factors) {
  GroupTable g = cyclic_group(factors.at(0));
  for (size_t i = 1; i < factors.size(); ++i) g = direct_product(g, cyclic_group(factors[i]));
  return g;
}

inline GroupTable s3_from_permutations() {
  // independent S_3 model: permutations of {0,1,2} composed directly
  std::vector<std::array<int, 3>> perms;
  std::array<int, 3> p{0, 1, 2};
  std::sort(p.begin(), p.end());
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  std::vector<int> t(36);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      std::array<int, 3> c;
      for (int i = 0; i < 3; ++i) c[i] = perms[a][perms[b][i]];
      int idx = static_cast<int>(std::find(perms.begin(), perms.end(), c) - perms.begin());
      t[a * 6 + b] = idx;
    }
  return make_group(6, t);
}

// ---- isomorphism oracles ----

// All isomorphisms G -> H via images of one fixed generating tuple; each
// isomorphism corresponds to exactly one image tuple.
inline std::vector<std::vector<int>> all_isomorphisms(const GroupTable& g,
                                                      const GroupTable& h) {
  std::vector<std::vector<int>> out;
  if (g.n != h.n) return out;
  std::vector<int> gens = first_minimal_generating_tuple(g);
  const int s = static_cast<int>(gens.size());
  std::vector<int> tuple;
  std::function<void()> rec = [&]() {
    if (static_cast<int>(tuple.size()) == s) {
      std::vector<std::pair<int, int>> pairs;
      for (int i = 0; i < s; ++i) pairs.emplace_back(gens[i], tuple[i]);
      if (auto phi = extend_to_isomorphism(g, h, pairs)) out.push_back(std::move(*phi));
      return;
    }
    for (int v = 0; v < h.n; ++v) {
      bool dup = false;
      for (int u : tuple)
        if (u == v) dup = true;
      if (dup) continue;
      tuple.push_back(v);
      rec();
      tuple.pop_back();
    }
  };
  rec();
  return out;
}

inline bool oracle_isomorphic(const GroupTable& g, const GroupTable& h) {
  if (g.n != h.n) return false;
  std::vector<int> gens = first_minimal_generating_tuple(g);
  const int s = static_cast<int>(gens.size());
  bool found = false;
  std::vector<int> tuple;
  std::function<void()> rec = [&]() {
    if (found) return;
    if (static_cast<int>(tuple.size()) == s) {
      std::vector<std::pair<int, int>> pairs;
      for (int i = 0; i < s; ++i) pairs.emplace_back(gens[i], tuple[i]);
      if (extend_to_isomorphism(g, h, pairs)) found = true;
      return;
    }
    for (int v = 0; v < h.n && !found; ++v) {
      bool dup = false;
      for (int u : tuple)
        if (u == v) dup = true;
      if (dup) continue;
      tuple.push_back(v);
      rec();
      tuple.pop_back();
    }
  };
  rec();
  return found;
}

// Exhaustive all-bijections check, usable up to order ~8.
inline bool bijection_oracle_isomorphic(const GroupTable& g, const GroupTable& h) {
  if (g.n != h.n) return false;
  std::vector<int> phi(g.n);
  for (int i = 0; i < g.n; ++i) phi[i] = i;
  do {
    bool ok = true;
    for (int x = 0; x < g.n && ok; ++x)
      for (int y = 0; y < g.n && ok; ++y)
        if (phi[g.mul(x, y)] != h.mul(phi[x], phi[y])) ok = false;
    if (ok) return true;
  } while (std::next_permutation(phi.begin(), phi.end()));
  return false;
}

// |Iso(S, S')|: isomorphisms respecting both chains.
inline long long count_series_isomorphisms(const LabeledSeries& s, const LabeledSeries& t) {
  if (s.chain.size() != t.chain.size()) return 0;
  long long cnt = 0;
  for (const auto& phi : all_isomorphisms(*s.parent, *t.parent)) {
    bool ok = true;
    for (size_t i = 0; i < s.chain.size() && ok; ++i) {
      if (s.chain[i].size() != t.chain[i].size()) ok = false;
      for (int x : s.chain[i].elements())
        if (!t.chain[i].contains(phi[x])) {
          ok = false;
          break;
        }
    }
    if (ok) ++cnt;
  }
  return cnt;
}

inline bool series_isomorphic(const LabeledSeries& s, const LabeledSeries& t) {
  return count_series_isomorphisms(s, t) > 0;
}

// ---- normal subgroup oracle ----

inline std::vector<std::vector<int>> conjugacy_classes(const GroupTable& g) {
  std::vector<std::vector<int>> classes;
  std::vector<char> seen(g.n, 0);
  for (int x = 0; x < g.n; ++x) {
    if (seen[x]) continue;
    std::vector<int> cls;
    for (int t = 0; t < g.n; ++t) {
      int c = g.conj(x, t);
      if (!seen[c]) {
        seen[c] = 1;
        cls.push_back(c);
      }
    }
    std::sort(cls.begin(), cls.end());
    classes.push_back(std::move(cls));
  }
  return classes;
}

// Every normal subgroup, as closures of conjugacy-class unions.
inline std::vector<ElementSet> all_normal_subgroups(const GroupTable& g) {
  auto classes = conjugacy_classes(g);
  std::vector<int> nontrivial;  // indices of classes other than {identity}
  for (size_t i = 0; i < classes.size(); ++i)
    if (!(classes[i].size() == 1 && classes[i][0] == g.identity))
      nontrivial.push_back(static_cast<int>(i));
  std::vector<ElementSet> out;
  auto push_unique = [&](ElementSet s) {
    for (const auto& o : out)
      if (o == s) return;
    out.push_back(std::move(s));
  };
  const int k = static_cast<int>(nontrivial.size());
  for (long long mask = 0; mask < (1LL << k); ++mask) {
    std::vector<int> seeds;
    for (int i = 0; i < k; ++i)
      if (mask & (1LL << i))
        for (int x : classes[nontrivial[i]]) seeds.push_back(x);
    push_unique(subgroup_closure(g, seeds).members);
  }
  return out;
}

// Every subgroup, by closing each known subgroup with one more element until
// no new subgroup appears. Usable for small n.
inline std::vector<ElementSet> all_subgroups(const GroupTable& g) {
  std::vector<ElementSet> out;
  std::vector<std::vector<int>> gens_of;
  out.push_back(subgroup_closure(g, {}).members);
  gens_of.push_back({});
  for (size_t i = 0; i < out.size(); ++i) {
    for (int x = 0; x < g.n; ++x) {
      if (out[i].contains(x)) continue;
      std::vector<int> gens = gens_of[i];
      gens.push_back(x);
      ElementSet h = subgroup_closure(g, gens).members;
      bool dup = false;
      for (const auto& o : out)
        if (o == h) { dup = true; break; }
      if (!dup) {
        out.push_back(std::move(h));
        gens_of.push_back(std::move(gens));
      }
    }
  }
  return out;
}

// ---- graph isomorphism counting oracle ----

// Counts color-respecting isomorphisms by backtracking over a BFS order of
// the first graph; independent of the canonical labeling engine.
inline long long count_colored_graph_isomorphisms(const ColoredGraph& a,
                                                  const ColoredGraph& b,
                                                  long long node_budget = 50'000'000) {
  if (a.n != b.n || a.edges.size() != b.edges.size()) return 0;
  {
    std::vector<int> ca = a.colors, cb = b.colors;
    std::sort(ca.begin(), ca.end());
    std::sort(cb.begin(), cb.end());
    if (ca != cb) return 0;
  }
  const int n = a.n;
  std::unordered_set<long long> bedges;
  for (auto [u, v] : b.edges) {
    bedges.insert(static_cast<long long>(u) * n + v);
    bedges.insert(static_cast<long long>(v) * n + u);
  }
  // BFS order of a (graph is connected for all corpus graphs)
  std::vector<int> order;
  std::vector<char> vis(n, 0);
  order.push_back(0);
  vis[0] = 1;
  for (size_t qi = 0; qi < order.size(); ++qi)
    for (const int* p = a.nbr_begin(order[qi]); p != a.nbr_end(order[qi]); ++p)
      if (!vis[*p]) {
        vis[*p] = 1;
        order.push_back(*p);
      }
  if (static_cast<int>(order.size()) != n) return -1;  // disconnected; unsupported

  std::vector<int> map(n, -1), used(n, 0);
  long long count = 0, visited = 0;
  std::function<void(int)> rec = [&](int idx) {
    if (++visited > node_budget) throw Error("graph iso oracle budget exceeded");
    if (idx == n) {
      ++count;
      return;
    }
    int v = order[idx];
    for (int w = 0; w < n; ++w) {
      if (used[w] || b.colors[w] != a.colors[v] || b.degree(w) != a.degree(v)) continue;
      // preserving all edges with equal edge counts implies reflection, so
      // checking mapped neighbors suffices
      bool ok = true;
      for (const int* p = a.nbr_begin(v); p != a.nbr_end(v) && ok; ++p)
        if (map[*p] >= 0 && !bedges.count(static_cast<long long>(map[*p]) * n + w)) ok = false;
      if (!ok) continue;
      used[w] = 1;
      map[v] = w;
      rec(idx + 1);
      used[w] = 0;
      map[v] = -1;
    }
  };
  rec(0);
  return count;
}

// ---- corpus ----

struct NamedGroup {
  std::string name;
  GroupTable table;
};

inline std::vector<std::vector<int>> partitions_of(int e) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int, int)> rec = [&](int left, int maxpart) {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    for (int p = std::min(left, maxpart); p >= 1; --p) {
      cur.push_back(p);
      rec(left - p, p);
      cur.pop_back();
    }
  };
  rec(e, e);
  return out;
}

// All abelian groups of order n, one per isomorphism type, as lists of cyclic
// factors (prime-power decomposition).
inline std::vector<NamedGroup> abelian_types(int n) {
  auto fact = factorize(n);
  std::vector<std::vector<std::vector<int>>> per_prime;  // prime -> type -> factor list
  for (auto [p, e] : fact) {
    std::vector<std::vector<int>> types;
    for (const auto& part : partitions_of(e)) {
      std::vector<int> factors;
      for (int x : part) {
        int q = 1;
        for (int i = 0; i < x; ++i) q *= p;
        factors.push_back(q);
      }
      types.push_back(factors);
    }
    per_prime.push_back(std::move(types));
  }
  std::vector<NamedGroup> out;
  std::vector<int> pick(per_prime.size(), 0);
  while (true) {
    std::vector<int> factors;
    for (size_t i = 0; i < per_prime.size(); ++i)
      for (int f : per_prime[i][pick[i]]) factors.push_back(f);
    if (factors.empty()) factors.push_back(1);
    std::string name = "Z";
    for (size_t i = 0; i < factors.size(); ++i)
      name += (i ? "x" : "") + std::to_string(factors[i]);
    out.push_back({name, zz(factors)});
    int pos = static_cast<int>(per_prime.size()) - 1;
    while (pos >= 0 && pick[pos] + 1 == static_cast<int>(per_prime[pos].size())) {
      pick[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++pick[pos];
  }
  return out;
}

// The acceptance corpus: every abelian type of order <= 16, the named
// nonabelian groups, plus seeded random relabelings.
inline std::vector<NamedGroup> acceptance_corpus(int relabelings = 20, uint64_t seed = 2024) {
  std::vector<NamedGroup> corpus;
  for (int n = 2; n <= 16; ++n)
    for (auto& g : abelian_types(n)) corpus.push_back(std::move(g));
  corpus.push_back({"D4", dihedral_group(4)});
  corpus.push_back({"Q8", quaternion8()});
  corpus.push_back({"D6", dihedral_group(6)});
  corpus.push_back({"Z3:Z4", semidirect_pq(3, 4, 2)});
  corpus.push_back({"S3", symmetric_group(3, false)});
  corpus.push_back({"Z7:Z3", semidirect_pq(7, 3, 2)});
  std::mt19937_64 rng(seed);
  const size_t base = corpus.size();
  for (int i = 0; i < relabelings; ++i) {
    const NamedGroup& src = corpus[rng() % base];
    corpus.push_back({src.name + "#" + std::to_string(i),
                      relabel_group(src.table, random_permutation(src.table.n, rng))});
  }
  return corpus;
}

inline ColoredGraph relabel_graph(const ColoredGraph& g, const std::vector<int>& perm) {
  ColoredGraph h(g.n);
  for (int v = 0; v < g.n; ++v) h.colors[perm[v]] = g.colors[v];
  for (auto [u, v] : g.edges) h.add_edge(perm[u], perm[v]);
  h.finalize();
  return h;
}

}  // namespace testsupport
