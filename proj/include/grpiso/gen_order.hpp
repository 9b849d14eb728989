#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "grpiso/errors.hpp"
#include "grpiso/group_table.hpp"
#include "grpiso/subgroup.hpp"

namespace grpiso {

// Total order on G induced by an ordered generating vector g: shorter minimal
// word first, ties broken by the lexicographically least minimal word over
// g_1 < g_2 < ... The minimal word is found greedily, first letter first,
// via reachability checks on the Cayley graph.
struct GenOrder {
  std::vector<int> generators;
  std::vector<int> rank;     // element id -> position, bijective onto [0, n)
  std::vector<int> by_rank;  // position -> element id
};

inline GenOrder cayley_order(const GroupTable& g, const std::vector<int>& gens) {
  const int n = g.n;
  std::vector<int> dist(n, -1);
  std::vector<int> queue;
  dist[g.identity] = 0;
  queue.push_back(g.identity);
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    int u = queue[qi];
    for (int s : gens) {
      int v = g.mul(u, s);
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  for (int x = 0; x < n; ++x)
    if (dist[x] < 0) throw NotGenerating("elements do not generate the group");

  // greedy first-letter-first minimal word for each element
  const int k = static_cast<int>(gens.size());
  std::vector<std::vector<int>> word(n);
  for (int x = 0; x < n; ++x) {
    int u = g.identity, r = dist[x];
    auto& w = word[x];
    w.reserve(r);
    while (r > 0) {
      for (int i = 0; i < k; ++i) {
        int v = g.mul(u, gens[i]);
        if (dist[g.mul(g.inv(v), x)] == r - 1) {
          w.push_back(i);
          u = v;
          --r;
          break;
        }
      }
    }
  }

  GenOrder ord;
  ord.generators = gens;
  ord.by_rank.resize(n);
  for (int x = 0; x < n; ++x) ord.by_rank[x] = x;
  std::sort(ord.by_rank.begin(), ord.by_rank.end(), [&](int a, int b) {
    if (word[a].size() != word[b].size()) return word[a].size() < word[b].size();
    if (word[a] != word[b]) return word[a] < word[b];
    return a < b;  // unreachable for distinct elements: minimal words are unique keys
  });
  ord.rank.resize(n);
  for (int r = 0; r < n; ++r) ord.rank[ord.by_rank[r]] = r;
  return ord;
}

// Unique homomorphic extension of g_i -> h_i if it exists, is well defined and
// bijective; empty otherwise. Closes word images by BFS, then checks the full
// multiplication table.
inline std::optional<std::vector<int>> extend_to_isomorphism(
    const GroupTable& g, const GroupTable& h,
    const std::vector<std::pair<int, int>>& pairs) {
  if (g.n != h.n) return std::nullopt;
  const int n = g.n;
  std::vector<int> phi(n, -1);
  phi[g.identity] = h.identity;
  for (auto [a, b] : pairs) {
    if (phi[a] >= 0 && phi[a] != b) return std::nullopt;
    phi[a] = b;
  }
  std::vector<int> queue;
  queue.push_back(g.identity);
  for (auto [a, b] : pairs)
    if (a != g.identity) queue.push_back(a);
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    int u = queue[qi];
    for (auto [a, b] : pairs) {
      int v = g.mul(u, a);
      int w = h.mul(phi[u], b);
      if (phi[v] < 0) {
        phi[v] = w;
        queue.push_back(v);
      } else if (phi[v] != w) {
        return std::nullopt;
      }
    }
  }
  for (int x = 0; x < n; ++x)
    if (phi[x] < 0) return std::nullopt;  // pairs did not generate g
  std::vector<char> hit(n, 0);
  for (int x = 0; x < n; ++x) {
    if (hit[phi[x]]) return std::nullopt;
    hit[phi[x]] = 1;
  }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (phi[g.mul(x, y)] != h.mul(phi[x], phi[y])) return std::nullopt;
  return phi;
}

// First minimal-size ordered generating tuple in id-lexicographic order,
// elements distinct. Size 0 for the trivial group.
inline std::vector<int> first_minimal_generating_tuple(const GroupTable& g) {
  if (g.n == 1) return {};
  std::vector<int> tuple;
  for (int size = 1; size <= g.n; ++size) {
    tuple.assign(size, 0);
    std::vector<int> idx(size, -1);
    // odometer over distinct tuples in lexicographic order
    int pos = 0;
    while (pos >= 0) {
      if (pos == size) {
        if (subgroup_closure(g, tuple).size() == g.n) return tuple;
        --pos;
        continue;
      }
      int start = idx[pos] + 1;
      bool placed = false;
      for (int v = start; v < g.n; ++v) {
        bool dup = false;
        for (int q = 0; q < pos; ++q)
          if (tuple[q] == v) { dup = true; break; }
        if (dup) continue;
        idx[pos] = v;
        tuple[pos] = v;
        placed = true;
        break;
      }
      if (!placed) {
        idx[pos] = -1;
        --pos;
      } else {
        ++pos;
        if (pos < size) idx[pos] = -1;
      }
    }
  }
  throw NotGenerating("no generating tuple found");  // unreachable
}

}  // namespace grpiso
