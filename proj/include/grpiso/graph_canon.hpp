#pragma once

#include <openssl/evp.h>

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <deque>
#include <functional>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "grpiso/colored_graph.hpp"
#include "grpiso/errors.hpp"

namespace grpiso {

// Canonical byte encoding plus the relabeling that produced it. Applying the
// labeling to the input graph and serializing reproduces the encoding.
struct CanonicalGraphForm {
  std::string encoding;
  std::vector<int> labeling;  // original node id -> canonical id
};

struct CanonStats {
  long long calls = 0;
  long long expansions = 0;
  long long leaves = 0;
  long long automorphisms = 0;
};

struct CanonOptions {
  long long budget = 400'000'000;  // node-expansion / refinement work units
  CanonStats* stats = nullptr;
};

// Coarsest stable refinement of the input coloring: two nodes share a refined
// color iff they have the same input color and the same multiset of neighbor
// refined colors, iterated to a fixpoint. Color ids are numbered by
// (old color, sorted signature).
inline std::vector<int> refine_colors(const ColoredGraph& g) {
  std::vector<int> c = g.colors;
  int classes = -1;
  while (true) {
    std::vector<std::pair<std::vector<int>, int>> sig(g.n);
    for (int v = 0; v < g.n; ++v) {
      std::vector<int> s;
      s.reserve(g.degree(v) + 1);
      s.push_back(c[v]);
      for (const int* p = g.nbr_begin(v); p != g.nbr_end(v); ++p) s.push_back(c[*p]);
      std::sort(s.begin() + 1, s.end());
      sig[v] = {std::move(s), v};
    }
    auto sorted = sig;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> next(g.n);
    int id = -1;
    const std::vector<int>* prev = nullptr;
    for (auto& [s, v] : sorted) {
      if (!prev || *prev != s) { ++id; prev = &s; }
      next[v] = id;
    }
    if (id + 1 == classes) return next;
    classes = id + 1;
    c = std::move(next);
  }
}

namespace canon_detail {

// Ordered partition in the usual position-array representation. Classes are
// addressed by their start position; class order is position order.
struct Partition {
  std::vector<int> perm;   // position -> node
  std::vector<int> pos;    // node -> position
  std::vector<int> cls;    // node -> class start
  std::vector<int> csize;  // class start -> size (valid at starts only)
  int nonsingleton = 0;

  void init(const ColoredGraph& g) {
    const int n = g.n;
    perm.resize(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::sort(perm.begin(), perm.end(), [&](int a, int b) {
      if (g.colors[a] != g.colors[b]) return g.colors[a] < g.colors[b];
      return a < b;
    });
    pos.resize(n);
    cls.resize(n);
    csize.assign(n, 0);
    nonsingleton = 0;
    int start = 0;
    for (int i = 0; i < n; ++i) {
      pos[perm[i]] = i;
      if (i > 0 && g.colors[perm[i]] != g.colors[perm[i - 1]]) start = i;
      cls[perm[i]] = start;
    }
    for (int i = n - 1; i >= 0; --i) csize[cls[perm[i]]]++;
    for (int s = 0; s < n; s += csize[s])
      if (csize[s] > 1) ++nonsingleton;
  }

  bool discrete() const { return nonsingleton == 0; }
};

struct Refiner {
  const ColoredGraph* g = nullptr;
  std::vector<int> counts;       // scratch, zero outside refine()
  std::vector<char> cls_marked;  // scratch keyed by class start
  std::deque<int> queue;
  std::vector<char> in_queue;    // keyed by class start

  long long budget = 0;
  long long used = 0;

  void init(const ColoredGraph& graph, long long work_budget) {
    g = &graph;
    counts.assign(graph.n, 0);
    cls_marked.assign(graph.n, 0);
    in_queue.assign(graph.n, 0);
    budget = work_budget;
    used = 0;
  }

  void push(int s) {
    if (!in_queue[s]) {
      in_queue[s] = 1;
      queue.push_back(s);
    }
  }

  // Equitable refinement with respect to the queued splitter classes. Splits
  // order sub-classes by ascending edge count into the splitter; all derived
  // quantities are isomorphism-invariant, so the resulting class order is too.
  void refine(Partition& p) {
    std::vector<int> touched_nodes;
    std::vector<int> touched_cls;
    std::vector<std::pair<int, int>> scratch;
    while (!queue.empty()) {
      int s = queue.front();
      queue.pop_front();
      in_queue[s] = 0;
      int ssize = p.csize[s];
      used += ssize;
      touched_nodes.clear();
      touched_cls.clear();
      for (int i = s; i < s + ssize; ++i) {
        int u = p.perm[i];
        used += g->degree(u);
        for (const int* q = g->nbr_begin(u); q != g->nbr_end(u); ++q) {
          int v = *q;
          if (counts[v] == 0) touched_nodes.push_back(v);
          counts[v]++;
        }
      }
      if (used > budget) {
        for (int v : touched_nodes) counts[v] = 0;
        throw ResourceLimit("canonization work budget exceeded");
      }
      for (int v : touched_nodes) {
        int a = p.cls[v];
        if (!cls_marked[a]) {
          cls_marked[a] = 1;
          touched_cls.push_back(a);
        }
      }
      // class starts are partition-invariant; fixing the processing order on
      // them keeps the whole refinement trace relabeling-invariant
      std::sort(touched_cls.begin(), touched_cls.end());
      for (int a : touched_cls) {
        cls_marked[a] = 0;
        int asize = p.csize[a];
        if (asize == 1) continue;
        scratch.clear();
        scratch.reserve(asize);
        bool uniform = true;
        int first = counts[p.perm[a]];
        for (int i = a; i < a + asize; ++i) {
          int u = p.perm[i];
          scratch.emplace_back(counts[u], u);
          if (counts[u] != first) uniform = false;
        }
        if (uniform) continue;
        std::stable_sort(scratch.begin(), scratch.end(),
                         [](const auto& x, const auto& y) { return x.first < y.first; });
        --p.nonsingleton;
        int run_start = a;
        for (int i = 0; i < asize; ++i) {
          int u = scratch[i].second;
          p.perm[a + i] = u;
          p.pos[u] = a + i;
          if (i > 0 && scratch[i].first != scratch[i - 1].first) run_start = a + i;
          p.cls[u] = run_start;
        }
        int i = 0;
        while (i < asize) {
          int st = p.cls[p.perm[a + i]];
          int len = 1;
          while (i + len < asize && p.cls[p.perm[a + i + len]] == st) ++len;
          p.csize[st] = len;
          if (len > 1) ++p.nonsingleton;
          push(st);
          i += len;
        }
      }
      for (int v : touched_nodes) counts[v] = 0;
    }
  }

  // Splits {v} out of its class, placing the singleton first, and queues both
  // parts as splitters.
  void individualize(Partition& p, int v) {
    int a = p.cls[v];
    int asize = p.csize[a];
    int pv = p.pos[v];
    int other = p.perm[a];
    p.perm[a] = v;
    p.perm[pv] = other;
    p.pos[v] = a;
    p.pos[other] = pv;
    p.csize[a] = 1;
    p.cls[v] = a;
    int rest = a + 1;
    p.csize[rest] = asize - 1;
    for (int i = rest; i < a + asize; ++i) p.cls[p.perm[i]] = rest;
    if (asize - 1 == 1) --p.nonsingleton;
    push(a);
    push(rest);
  }
};

inline void put_u32(std::string& out, uint32_t v) {
  out.push_back(static_cast<char>(v >> 24));
  out.push_back(static_cast<char>(v >> 16));
  out.push_back(static_cast<char>(v >> 8));
  out.push_back(static_cast<char>(v));
}

inline void put_u64(std::string& out, uint64_t v) {
  for (int s = 56; s >= 0; s -= 8) out.push_back(static_cast<char>(v >> s));
}

// Serialization under a discrete partition: 8-byte big-endian node count, the
// input colors in canonical order, then the sorted canonical edge list, all
// big-endian fixed width.
inline std::string encode_labeled(const ColoredGraph& g, const std::vector<int>& pos,
                                  std::vector<std::pair<int, int>>& edge_scratch,
                                  std::vector<int>& bucket_scratch) {
  std::string out;
  out.reserve(8 + 4ull * g.n + 8ull * g.edges.size());
  put_u64(out, static_cast<uint64_t>(g.n));
  std::vector<int> perm(g.n);
  for (int v = 0; v < g.n; ++v) perm[pos[v]] = v;
  for (int i = 0; i < g.n; ++i) put_u32(out, static_cast<uint32_t>(g.colors[perm[i]]));

  edge_scratch.clear();
  edge_scratch.reserve(g.edges.size());
  for (auto [u, v] : g.edges) {
    int a = pos[u], b = pos[v];
    if (a > b) std::swap(a, b);
    edge_scratch.emplace_back(a, b);
  }
  // two-pass counting sort: by second key, then stably by first
  const int n = g.n;
  std::vector<std::pair<int, int>> tmp(edge_scratch.size());
  bucket_scratch.assign(n + 1, 0);
  for (auto& e : edge_scratch) bucket_scratch[e.second + 1]++;
  for (int i = 0; i < n; ++i) bucket_scratch[i + 1] += bucket_scratch[i];
  for (auto& e : edge_scratch) tmp[bucket_scratch[e.second]++] = e;
  bucket_scratch.assign(n + 1, 0);
  for (auto& e : tmp) bucket_scratch[e.first + 1]++;
  for (int i = 0; i < n; ++i) bucket_scratch[i + 1] += bucket_scratch[i];
  for (auto& e : tmp) edge_scratch[bucket_scratch[e.first]++] = e;

  for (auto [a, b] : edge_scratch) {
    put_u32(out, static_cast<uint32_t>(a));
    put_u32(out, static_cast<uint32_t>(b));
  }
  return out;
}

struct EdgeSet {
  std::unordered_set<uint64_t> set;
  int n = 0;
  void init(const ColoredGraph& g) {
    n = g.n;
    set.reserve(g.edges.size() * 2);
    for (auto [u, v] : g.edges) set.insert(static_cast<uint64_t>(u) * n + v);
  }
  bool has(int u, int v) const {
    if (u > v) std::swap(u, v);
    return set.count(static_cast<uint64_t>(u) * n + v) != 0;
  }
};

struct Searcher {
  const ColoredGraph* g;
  CanonOptions opts;
  Refiner ref;
  EdgeSet edge_set;

  std::string best_cert;
  std::vector<int> best_pos;
  bool have_best = false;
  std::string first_cert;
  std::vector<int> first_pos;
  bool have_first = false;

  std::vector<std::vector<int>> auts;  // verified automorphisms
  std::vector<int> prefix;             // individualized nodes, root to current

  std::vector<std::pair<int, int>> edge_scratch;
  std::vector<int> bucket_scratch;
  CanonStats stats;

  static constexpr size_t kMaxAuts = 64;

  bool verify_automorphism(const std::vector<int>& sigma) {
    for (int v = 0; v < g->n; ++v)
      if (g->colors[sigma[v]] != g->colors[v]) return false;
    for (auto [u, v] : g->edges)
      if (!edge_set.has(sigma[u], sigma[v])) return false;
    return true;
  }

  void harvest(const std::vector<int>& leaf_pos, const std::string& cert,
               const std::string& anchor_cert, const std::vector<int>& anchor_pos) {
    if (auts.size() >= kMaxAuts || cert != anchor_cert) return;
    std::vector<int> anchor_perm(g->n);
    for (int v = 0; v < g->n; ++v) anchor_perm[anchor_pos[v]] = v;
    std::vector<int> sigma(g->n);
    bool ident = true;
    for (int v = 0; v < g->n; ++v) {
      sigma[v] = anchor_perm[leaf_pos[v]];
      if (sigma[v] != v) ident = false;
    }
    if (ident || !verify_automorphism(sigma)) return;
    auts.push_back(std::move(sigma));
    stats.automorphisms++;
  }

  void leaf(const Partition& p) {
    stats.leaves++;
    std::string cert = encode_labeled(*g, p.pos, edge_scratch, bucket_scratch);
    if (!have_first) {
      have_first = true;
      first_cert = cert;
      first_pos = p.pos;
    } else {
      harvest(p.pos, cert, first_cert, first_pos);
      if (have_best && best_cert != first_cert) harvest(p.pos, cert, best_cert, best_pos);
    }
    if (!have_best || cert < best_cert) {
      have_best = true;
      best_cert = std::move(cert);
      best_pos = p.pos;
    }
  }

  int target_cell(const Partition& p) const {
    int bs = -1, bsize = 1;
    for (int s = 0; s < g->n; s += p.csize[s]) {
      if (p.csize[s] > bsize) {
        bsize = p.csize[s];
        bs = s;
      }
    }
    return bs;
  }

  void rec(Partition& p) {
    if (p.discrete()) {
      leaf(p);
      return;
    }
    int cell = target_cell(p);
    std::vector<int> cand(p.perm.begin() + cell, p.perm.begin() + cell + p.csize[cell]);
    std::sort(cand.begin(), cand.end());

    // orbit pruning under automorphisms that fix the current prefix pointwise
    std::vector<const std::vector<int>*> fixers;
    for (const auto& a : auts) {
      bool fixes = true;
      for (int x : prefix)
        if (a[x] != x) { fixes = false; break; }
      if (fixes) fixers.push_back(&a);
    }
    std::map<int, int> uf;
    for (int v : cand) uf[v] = v;
    std::function<int(int)> find = [&](int x) {
      while (uf[x] != x) x = uf[x] = uf[uf[x]];
      return x;
    };
    if (!fixers.empty()) {
      bool changed = true;
      while (changed) {
        changed = false;
        for (const auto* a : fixers)
          for (int v : cand) {
            int w = (*a)[v];
            if (!uf.count(w)) continue;  // automorphism leaves the cell setwise invariant; guard anyway
            int rv = find(v), rw = find(w);
            if (rv != rw) {
              uf[std::max(rv, rw)] = std::min(rv, rw);
              changed = true;
            }
          }
      }
    }

    std::unordered_set<int> tried;
    for (int v : cand) {
      int r = find(v);
      if (tried.count(r)) continue;
      tried.insert(r);

      stats.expansions++;
      if (stats.expansions > opts.budget / 1024)
        throw ResourceLimit("canonization expansion budget exceeded");

      Partition next = p;
      ref.individualize(next, v);
      ref.refine(next);
      prefix.push_back(v);
      rec(next);
      prefix.pop_back();
    }
  }

  CanonicalGraphForm run(const ColoredGraph& graph) {
    g = &graph;
    edge_set.init(graph);
    ref.init(graph, opts.budget);
    Partition p;
    p.init(graph);
    for (int s = 0; s < graph.n; s += p.csize[s]) ref.push(s);
    ref.refine(p);
    rec(p);
    if (opts.stats) {
      opts.stats->expansions += stats.expansions;
      opts.stats->leaves += stats.leaves;
      opts.stats->automorphisms += stats.automorphisms;
    }
    CanonicalGraphForm form;
    form.encoding = std::move(best_cert);
    form.labeling = std::move(best_pos);
    return form;
  }
};

}  // namespace canon_detail

// Canonical form via individualization-refinement with backtracking: refine;
// if discrete, emit; otherwise branch on every member of the first largest
// non-singleton class (node id order) and keep the lexicographically least
// encoding. Automorphisms discovered from equal leaf certificates prune
// branches within the same orbit; this never changes the minimum.
inline CanonicalGraphForm canonical_form(const ColoredGraph& g,
                                         const CanonOptions& opts = {}) {
  if (opts.stats) opts.stats->calls++;
  if (g.n == 0) {
    CanonicalGraphForm f;
    canon_detail::put_u64(f.encoding, 0);
    return f;
  }
  canon_detail::Searcher s;
  s.opts = opts;
  return s.run(g);
}

// True iff the canonical encodings agree; cheap histogram rejects first.
inline bool isomorphic(const ColoredGraph& a, const ColoredGraph& b,
                       const CanonOptions& opts = {}) {
  if (a.n != b.n || a.edges.size() != b.edges.size()) return false;
  {
    std::vector<int> ca = a.colors, cb = b.colors;
    std::sort(ca.begin(), ca.end());
    std::sort(cb.begin(), cb.end());
    if (ca != cb) return false;
    std::vector<std::pair<int, int>> da(a.n), db(b.n);
    for (int v = 0; v < a.n; ++v) da[v] = {a.colors[v], a.degree(v)};
    for (int v = 0; v < b.n; ++v) db[v] = {b.colors[v], b.degree(v)};
    std::sort(da.begin(), da.end());
    std::sort(db.begin(), db.end());
    if (da != db) return false;
  }
  return canonical_form(a, opts).encoding == canonical_form(b, opts).encoding;
}

// SHA-256 hex digest of an encoding.
inline std::string hex_digest(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

}  // namespace grpiso
