#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "grpiso/comp_series.hpp"
#include "grpiso/errors.hpp"
#include "grpiso/gen_order.hpp"
#include "grpiso/graph_canon.hpp"
#include "grpiso/graph_encoding.hpp"
#include "grpiso/group_table.hpp"
#include "grpiso/structure.hpp"
#include "grpiso/subgroup.hpp"

namespace grpiso {

// Canonical form of a composition series: a relabeled multiplication table
// over [1, n] plus the images of every chain subgroup.
struct CanSeries {
  std::vector<std::vector<int>> m;        // 1-based entries
  std::vector<std::vector<int>> images;   // psi(G_0), ..., psi(G_m), ascending

  bool operator==(const CanSeries& o) const { return m == o.m && images == o.images; }
};

struct CanHall {
  std::vector<std::vector<int>> m;
  std::vector<std::vector<int>> sylow_images;                 // psi[P_i], descending primes
  std::vector<std::vector<std::vector<int>>> series_images;   // psi[P_ij], j = 0..m_i

  bool operator==(const CanHall& o) const {
    return m == o.m && sylow_images == o.sylow_images && series_images == o.series_images;
  }
};

struct CanGroup {
  std::vector<std::vector<int>> m;

  bool operator==(const CanGroup& o) const { return m == o.m; }
  bool operator<(const CanGroup& o) const { return m < o.m; }
};

namespace decode_detail {

struct ParsedGraph {
  int n = 0;
  std::vector<int> colors;
  std::vector<std::pair<int, int>> edges;
  std::vector<int> adj_off, adj_dat;

  const int* nbr_begin(int v) const { return adj_dat.data() + adj_off[v]; }
  const int* nbr_end(int v) const { return adj_dat.data() + adj_off[v + 1]; }
};

inline uint32_t get_u32(const std::string& s, size_t off) {
  return (static_cast<uint32_t>(static_cast<unsigned char>(s[off])) << 24) |
         (static_cast<uint32_t>(static_cast<unsigned char>(s[off + 1])) << 16) |
         (static_cast<uint32_t>(static_cast<unsigned char>(s[off + 2])) << 8) |
         static_cast<uint32_t>(static_cast<unsigned char>(s[off + 3]));
}

inline ParsedGraph parse_encoding(const std::string& enc) {
  if (enc.size() < 8) throw MalformedCanonGraph("encoding too short");
  uint64_t n = 0;
  for (int i = 0; i < 8; ++i) n = (n << 8) | static_cast<unsigned char>(enc[i]);
  ParsedGraph g;
  g.n = static_cast<int>(n);
  size_t off = 8;
  if (enc.size() < off + 4ull * n) throw MalformedCanonGraph("truncated color section");
  g.colors.resize(g.n);
  for (int v = 0; v < g.n; ++v, off += 4) g.colors[v] = static_cast<int>(get_u32(enc, off));
  if ((enc.size() - off) % 8 != 0) throw MalformedCanonGraph("truncated edge section");
  size_t m = (enc.size() - off) / 8;
  g.edges.reserve(m);
  for (size_t i = 0; i < m; ++i, off += 8)
    g.edges.emplace_back(static_cast<int>(get_u32(enc, off)),
                         static_cast<int>(get_u32(enc, off + 4)));
  g.adj_off.assign(g.n + 1, 0);
  for (auto [u, v] : g.edges) {
    if (u < 0 || v < 0 || u >= g.n || v >= g.n) throw MalformedCanonGraph("edge out of range");
    ++g.adj_off[u + 1];
    ++g.adj_off[v + 1];
  }
  for (int i = 0; i < g.n; ++i) g.adj_off[i + 1] += g.adj_off[i];
  g.adj_dat.assign(g.edges.size() * 2, 0);
  std::vector<int> fill(g.adj_off.begin(), g.adj_off.end() - 1);
  for (auto [u, v] : g.edges) {
    g.adj_dat[fill[u]++] = v;
    g.adj_dat[fill[v]++] = u;
  }
  for (int v = 0; v < g.n; ++v)
    std::sort(g.adj_dat.begin() + g.adj_off[v], g.adj_dat.begin() + g.adj_off[v + 1]);
  return g;
}

}  // namespace decode_detail

// Multiplication table and node maps recovered from the canonical form of a
// cone graph. Ranks are the BFS discovery order of the element-level nodes.
struct DecodedGroup {
  int n = 0;
  std::vector<std::vector<int>> m;   // 1-based table, m[a][b] with a, b in [0, n)
  std::vector<int> node_of_rank;     // rank -> canonical node id
  std::vector<int> rank_of_node;     // canonical node id -> rank, -1 elsewhere
  std::vector<int> level;            // BFS level per canonical node
  std::vector<int> parent;           // unique previous-level neighbor
  std::vector<int> bfs_order;        // discovery order
  int root = -1;
  int element_depth = 0;
  GroupTable table;                  // 0-based copy of m
  int identity_rank = -1;
};

// Core decoding shared by the series and Hall paths: locate the root, rank
// elements by BFS, and read the products off the multiplication gadgets via
// the unique left-then-right paths.
inline DecodedGroup decode_group(const decode_detail::ParsedGraph& g, int n,
                                 int element_depth) {
  DecodedGroup d;
  d.n = n;
  d.element_depth = element_depth;

  for (int v = 0; v < g.n; ++v)
    if (g.colors[v] == kColorRoot) {
      if (d.root >= 0) throw MalformedCanonGraph("multiple root-colored nodes");
      d.root = v;
    }
  if (d.root < 0) throw MalformedCanonGraph("no root-colored node");

  d.level.assign(g.n, -1);
  d.bfs_order.reserve(g.n);
  d.level[d.root] = 0;
  d.bfs_order.push_back(d.root);
  for (size_t qi = 0; qi < d.bfs_order.size(); ++qi) {
    int u = d.bfs_order[qi];
    for (const int* p = g.nbr_begin(u); p != g.nbr_end(u); ++p)
      if (d.level[*p] < 0) {
        d.level[*p] = d.level[u] + 1;
        d.bfs_order.push_back(*p);
      }
  }
  if (static_cast<int>(d.bfs_order.size()) != g.n)
    throw MalformedCanonGraph("graph is not connected");

  d.parent.assign(g.n, -1);
  for (int v = 0; v < g.n; ++v) {
    if (v == d.root) continue;
    int cnt = 0;
    for (const int* p = g.nbr_begin(v); p != g.nbr_end(v); ++p)
      if (d.level[*p] == d.level[v] - 1) {
        d.parent[v] = *p;
        ++cnt;
      }
    if (cnt != 1) throw MalformedCanonGraph("node without unique tree parent");
  }

  d.rank_of_node.assign(g.n, -1);
  for (int v : d.bfs_order)
    if (d.level[v] == element_depth) {
      d.rank_of_node[v] = static_cast<int>(d.node_of_rank.size());
      d.node_of_rank.push_back(v);
    }
  if (static_cast<int>(d.node_of_rank.size()) != n)
    throw MalformedCanonGraph("element level has wrong cardinality");

  auto ascend = [&](int v, int steps) {
    for (int i = 0; i < steps; ++i) v = d.parent[v];
    return v;
  };
  auto gadget_child = [&](int leaf, int color) {
    int found = -1;
    for (const int* p = g.nbr_begin(leaf); p != g.nbr_end(leaf); ++p)
      if (d.level[*p] == d.level[leaf] + 1 && g.colors[*p] == color) {
        if (found >= 0) throw MalformedCanonGraph("duplicate gadget child");
        found = *p;
      }
    if (found < 0) throw MalformedCanonGraph("missing gadget child");
    return found;
  };
  auto cross_of = [&](int v, int color, int exclude) {
    int found = -1;
    for (const int* p = g.nbr_begin(v); p != g.nbr_end(v); ++p)
      if (*p != exclude && d.level[*p] == d.level[v] && g.colors[*p] == color) {
        if (found >= 0) throw MalformedCanonGraph("ambiguous cross edge");
        found = *p;
      }
    if (found < 0) throw MalformedCanonGraph("missing cross edge");
    return found;
  };

  d.m.assign(n, std::vector<int>(n, 0));
  int pairs = 0;
  for (int w = 0; w < g.n; ++w) {
    if (d.level[w] != 2 * element_depth) continue;
    if (g.colors[w] == kColorLeft || g.colors[w] == kColorRight || g.colors[w] == kColorEqual)
      continue;  // only possible when element_depth == 0; excluded upstream
    int x = ascend(w, element_depth);
    int left = gadget_child(w, kColorLeft);
    int right = cross_of(left, kColorRight, -1);
    int y = ascend(d.parent[right], element_depth);
    int eq = cross_of(right, kColorEqual, left);
    int z = ascend(d.parent[eq], element_depth);
    int rx = d.rank_of_node[x], ry = d.rank_of_node[y], rz = d.rank_of_node[z];
    if (rx < 0 || ry < 0 || rz < 0) throw MalformedCanonGraph("gadget path misses elements");
    if (d.m[rx][ry] != 0) throw MalformedCanonGraph("duplicate product entry");
    d.m[rx][ry] = rz + 1;
    ++pairs;
  }
  if (pairs != n * n) throw MalformedCanonGraph("incomplete multiplication table");

  std::vector<int> flat(static_cast<size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) flat[static_cast<size_t>(a) * n + b] = d.m[a][b] - 1;
  try {
    d.table = make_group(n, std::move(flat));
  } catch (const NotAGroup& e) {
    throw MalformedCanonGraph(std::string("decoded table is not a group: ") + e.what());
  }
  d.identity_rank = d.table.identity;
  return d;
}

// ---- series route ----

struct SeriesCanon {
  CanSeries can;
  std::string inv;          // canonical graph encoding, the comparison key
  std::vector<int> psi;     // original element id -> 1-based canonical label
};

inline CanSeries decode_series_form(const std::string& encoding, int n, int m,
                                    DecodedGroup* out = nullptr) {
  auto g = decode_detail::parse_encoding(encoding);
  DecodedGroup d = decode_group(g, n, m);
  int id_node = d.node_of_rank[d.identity_rank];
  CanSeries cs;
  cs.m = d.m;
  // chain images: descendants per identity-path ancestor, one level at a time
  std::vector<int> path(m + 1);
  {
    int v = id_node;
    for (int j = m; j >= 0; --j) {
      path[j] = v;
      v = (j > 0) ? d.parent[v] : v;
    }
  }
  cs.images.assign(m + 1, {});
  for (int r = 0; r < n; ++r) {
    int v = d.node_of_rank[r];
    for (int j = m; j >= 0; --j) {
      if (v == path[j]) cs.images[m - j].push_back(r + 1);
      v = (j > 0) ? d.parent[v] : v;
    }
  }
  for (auto& img : cs.images) std::sort(img.begin(), img.end());
  for (int i = 0; i <= m; ++i)
    if (cs.images[i].empty()) throw MalformedCanonGraph("empty chain image");
  if (out) *out = std::move(d);
  return cs;
}

inline SeriesCanon can_series_full(const LabeledSeries& s, const CanonOptions& opts = {}) {
  const GroupTable& g = *s.parent;
  SeriesCanon out;
  if (g.n == 1) {
    out.can.m = {{1}};
    out.can.images = {{1}};
    out.inv.clear();
    out.psi = {1};
    return out;
  }
  XGraph x = build_X(s);
  CanonicalGraphForm cf = canonical_form(x.graph, opts);
  DecodedGroup d;
  out.can = decode_series_form(cf.encoding, g.n, s.length(), &d);
  out.inv = std::move(cf.encoding);
  out.psi.resize(g.n);
  for (int e = 0; e < g.n; ++e)
    out.psi[e] = d.rank_of_node[cf.labeling[x.element_leaf[e]]] + 1;
  return out;
}

inline CanSeries can_series(const LabeledSeries& s, const CanonOptions& opts = {}) {
  return can_series_full(s, opts).can;
}

// ---- Hall route ----

struct HallMeta {
  int n = 0;
  std::vector<int> primes;  // descending
  std::vector<int> exps;
  int kappa = 0;
  int b_depth = 0;
  int element_depth = 0;

  static HallMeta from(const SylowBasis& basis, int n, double alpha) {
    HallMeta m;
    m.n = n;
    m.primes = basis.primes;
    m.exps = basis.exponents;
    m.kappa = kappa_for(basis, alpha);
    long long u = 1;
    for (int i = 0; i < m.kappa; ++i)
      for (int e = 0; e < m.exps[i]; ++e) u *= m.primes[i];
    m.b_depth = 0;
    while ((1LL << m.b_depth) < u) ++m.b_depth;
    m.element_depth = m.b_depth;
    for (int i = m.kappa; i < static_cast<int>(m.primes.size()); ++i)
      m.element_depth += m.exps[i];
    return m;
  }
};

struct HallCanon {
  CanHall can;
  std::string inv;
  std::vector<int> psi;  // original element id -> 1-based canonical label
};

inline CanHall decode_hall_form(const std::string& encoding, const HallMeta& meta,
                                DecodedGroup* out = nullptr) {
  auto g = decode_detail::parse_encoding(encoding);
  DecodedGroup d = decode_group(g, meta.n, meta.element_depth);
  const int l = static_cast<int>(meta.primes.size());
  const int n = meta.n;

  CanHall ch;
  ch.m = d.m;
  ch.sylow_images.assign(l, {});
  ch.series_images.assign(l, {});

  int id_node = d.node_of_rank[d.identity_rank];
  std::vector<int> path(meta.element_depth + 1);
  {
    int v = id_node;
    for (int j = meta.element_depth; j >= 0; --j) {
      path[j] = v;
      if (j > 0) v = d.parent[v];
    }
  }

  // small-prime members: walk internal then not-identity colored paths away
  // from the root, starting at the identity-path node for P_ij
  for (int i = meta.kappa; i < l; ++i) {
    int depth_tree_root = meta.b_depth;
    for (int t = meta.kappa; t < i; ++t) depth_tree_root += meta.exps[t];
    const int ei = meta.exps[i];
    ch.series_images[i].assign(ei + 1, {});
    ch.series_images[i][0] = {d.identity_rank + 1};
    for (int j = 1; j <= ei; ++j) {
      int start = path[depth_tree_root + ei - j];
      std::vector<int> members = {d.identity_rank + 1};
      // phase 0: internal-colored descent; phase 1: not-identity descent
      std::vector<std::pair<int, int>> stack{{start, 0}};
      while (!stack.empty()) {
        auto [v, phase] = stack.back();
        stack.pop_back();
        if (d.level[v] == meta.element_depth) {
          if (phase == 1) members.push_back(d.rank_of_node[v] + 1);
          continue;
        }
        for (const int* p = g.nbr_begin(v); p != g.nbr_end(v); ++p) {
          if (d.level[*p] != d.level[v] + 1) continue;
          int c = g.colors[*p];
          if (c == kColorNotIdentity)
            stack.push_back({*p, 1});
          else if (c == kColorInternal && phase == 0)
            stack.push_back({*p, 0});
        }
      }
      std::sort(members.begin(), members.end());
      members.erase(std::unique(members.begin(), members.end()), members.end());
      long long want = 1;
      for (int e = 0; e < j; ++e) want *= meta.primes[i];
      if (static_cast<long long>(members.size()) != want)
        throw MalformedCanonGraph("recovered subgroup has wrong order");
      ch.series_images[i][j] = std::move(members);
    }
    ch.sylow_images[i] = ch.series_images[i][ei];
  }

  // large-prime members: locate the generators through the leaf position
  // colors, then close in the decoded table
  int slot = 0;
  for (int i = 0; i < meta.kappa; ++i) {
    const int ei = meta.exps[i];
    std::vector<int> gens;  // 0-based ranks
    ch.series_images[i].assign(ei + 1, {});
    ch.series_images[i][0] = {d.identity_rank + 1};
    for (int j = 1; j <= ei; ++j) {
      int want_color = kColorLeafPosBase + (1 + slot);
      ++slot;
      int bleaf = -1;
      for (int v = 0; v < g.n; ++v)
        if (d.level[v] == meta.b_depth && g.colors[v] == want_color) {
          if (bleaf >= 0) throw MalformedCanonGraph("duplicate position color");
          bleaf = v;
        }
      if (bleaf < 0) throw MalformedCanonGraph("missing position color");
      int v = bleaf;
      while (d.level[v] != meta.element_depth) {
        int next = -1;
        for (const int* p = g.nbr_begin(v); p != g.nbr_end(v); ++p)
          if (d.level[*p] == d.level[v] + 1 && g.colors[*p] == kColorNotIdentity) {
            if (next >= 0) throw MalformedCanonGraph("ambiguous generator path");
            next = *p;
          }
        if (next < 0) throw MalformedCanonGraph("generator path breaks off");
        v = next;
      }
      gens.push_back(d.rank_of_node[v]);
      SubgroupSet sub = subgroup_closure(d.table, gens);
      long long want = 1;
      for (int e = 0; e < j; ++e) want *= meta.primes[i];
      if (sub.size() != want)
        throw MalformedCanonGraph("generator closure has wrong order");
      auto members = sub.elements();
      for (int& x : members) ++x;
      ch.series_images[i][j] = std::move(members);
    }
    ch.sylow_images[i] = ch.series_images[i][ei];
  }

  (void)n;
  if (out) *out = std::move(d);
  return ch;
}

// ---- padding ----

struct PaddedHall {
  std::shared_ptr<GroupTable> padded_group;
  HallSeries series;          // over *padded_group
  int q = 0;
  bool q_outside_window = false;
  std::vector<int> embed;     // original id -> padded id
};

inline bool is_prime(int v) {
  if (v < 2) return false;
  for (int d = 2; d * d <= v; ++d)
    if (v % d == 0) return false;
  return true;
}

// Forms Z_q x G for the smallest prime q in [ceil(2a), 4a], widening upward
// when the window is empty, and extends the basis and series by 1 < Z_q.
inline PaddedHall pad_with_Zq(const HallSeries& hs, double alpha) {
  const GroupTable& g = *hs.parent;
  int q = static_cast<int>(std::ceil(2 * alpha));
  if (q < 2) q = 2;
  while (!is_prime(q)) ++q;
  bool outside = q > 4 * alpha;

  PaddedHall out;
  out.q = q;
  out.q_outside_window = outside;
  const int n = g.n;
  const int pn = q * n;
  std::vector<int> t(static_cast<size_t>(pn) * pn);
  auto id = [&](int a, int x) { return a * n + x; };
  for (int a = 0; a < q; ++a)
    for (int x = 0; x < n; ++x)
      for (int b = 0; b < q; ++b)
        for (int y = 0; y < n; ++y)
          t[static_cast<size_t>(id(a, x)) * pn + id(b, y)] = id((a + b) % q, g.mul(x, y));
  out.padded_group = std::make_shared<GroupTable>(
      make_group(pn, std::move(t), ValidationOptions{false, 64}));
  out.embed.resize(n);
  for (int x = 0; x < n; ++x) out.embed[x] = id(0, x);

  const GroupTable& pg = *out.padded_group;
  HallSeries& ps = out.series;
  ps.parent = &pg;
  ps.basis.primes.push_back(q);
  ps.basis.exponents.push_back(1);
  ElementSet zq(pn);
  for (int a = 0; a < q; ++a) zq.insert(id(a, g.identity));
  ps.basis.subgroups.push_back(SubgroupSet{&pg, zq});
  for (int i = 0; i < hs.basis.num_primes(); ++i) {
    ps.basis.primes.push_back(hs.basis.primes[i]);
    ps.basis.exponents.push_back(hs.basis.exponents[i]);
    ElementSet m(pn);
    for (int x : hs.basis.subgroups[i].elements()) m.insert(out.embed[x]);
    ps.basis.subgroups.push_back(SubgroupSet{&pg, m});
  }

  // component for Z_q
  {
    HallComponent c;
    c.sub = std::make_shared<SubgroupTable>(restrict_to_subgroup(pg, zq));
    c.series_local = composition_series(c.sub->table);
    for (const auto& entry : c.series_local.chain) {
      ElementSet e(pn);
      for (int x : entry.elements()) e.insert(c.sub->to_parent[x]);
      c.chain_parent.push_back(std::move(e));
    }
    ps.comps.push_back(std::move(c));
  }
  // embedded original components, chains carried over
  for (int i = 0; i < hs.basis.num_primes(); ++i) {
    HallComponent c;
    ElementSet pm(pn);
    for (int x : hs.basis.subgroups[i].elements()) pm.insert(out.embed[x]);
    c.sub = std::make_shared<SubgroupTable>(restrict_to_subgroup(pg, pm));
    LabeledSeries local;
    local.parent = &c.sub->table;
    for (size_t j = 0; j < hs.comps[i].chain_parent.size(); ++j) {
      ElementSet e(c.sub->table.n);
      for (int x : hs.comps[i].chain_parent[j].elements())
        e.insert(c.sub->from_parent[out.embed[x]]);
      local.chain.push_back(SubgroupSet{&c.sub->table, std::move(e)});
      local.socle_flags.push_back(hs.comps[i].series_local.socle_flags[j]);
    }
    c.series_local = std::move(local);
    for (const auto& entry : hs.comps[i].chain_parent) {
      ElementSet e(pn);
      for (int x : entry.elements()) e.insert(out.embed[x]);
      c.chain_parent.push_back(std::move(e));
    }
    ps.comps.push_back(std::move(c));
  }
  return out;
}

// ---- Hall canonical form ----

inline HallCanon can_hall_full(const HallSeries& hs, const CanonOptions& opts = {}) {
  const GroupTable& g = *hs.parent;
  HallCanon out;
  if (g.n == 1) {
    out.can.m = {{1}};
    out.psi = {1};
    return out;
  }
  double alpha = alpha_for_order(g.n);

  const HallSeries* work = &hs;
  std::optional<PaddedHall> pad;
  if (hs.basis.primes[0] < alpha) {
    pad = pad_with_Zq(hs, alpha);
    work = &pad->series;
    alpha = alpha_for_order(work->parent->n);
    if (work->basis.primes[0] < alpha)
      throw AlphaTooLarge("padding prime below recomputed alpha");
  }
  const GroupTable& wg = *work->parent;
  HallMeta meta = HallMeta::from(work->basis, wg.n, alpha);

  // min over the generator-vector choices; for the padding factor a single
  // representative suffices, since scaling Z_q is an automorphism fixing
  // everything else
  std::string best;
  std::vector<int> best_labeling;
  std::vector<int> element_leaf;
  bool have = false;
  enumerate_genvectors(
      *work, alpha,
      [&](const GenVector& gv) -> bool {
        XGraph x = build_X_hall(*work, gv);
        CanonicalGraphForm cf = canonical_form(x.graph, opts);
        if (!have || cf.encoding < best) {
          have = true;
          best = std::move(cf.encoding);
          best_labeling = std::move(cf.labeling);
          element_leaf = x.element_leaf;
        }
        return true;
      },
      pad.has_value(), 0);
  if (!have) throw Error("no generator vector enumerated");

  DecodedGroup dec;
  CanHall padded_can = decode_hall_form(best, meta, &dec);
  std::vector<int> psi_w(wg.n);
  for (int e = 0; e < wg.n; ++e)
    psi_w[e] = dec.rank_of_node[best_labeling[element_leaf[e]]] + 1;

  if (!pad) {
    out.can = std::move(padded_can);
    out.inv = std::move(best);
    out.psi = std::move(psi_w);
    return out;
  }

  // unpad: restrict to the embedded copy of G and renumber ascending
  const int n = g.n;
  std::vector<int> labels;  // 1-based padded labels of embedded G
  labels.reserve(n);
  for (int x = 0; x < n; ++x) labels.push_back(psi_w[pad->embed[x]]);
  std::vector<int> sorted_labels = labels;
  std::sort(sorted_labels.begin(), sorted_labels.end());
  std::vector<int> rho(wg.n + 1, 0);  // padded label -> 1-based new label
  for (int i = 0; i < n; ++i) rho[sorted_labels[i]] = i + 1;

  out.can.m.assign(n, std::vector<int>(n, 0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      int pa = sorted_labels[a], pb = sorted_labels[b];
      int pc = padded_can.m[pa - 1][pb - 1];
      if (rho[pc] == 0) throw MalformedCanonGraph("embedded copy not closed");
      out.can.m[a][b] = rho[pc];
    }
  const int l = hs.basis.num_primes();
  out.can.sylow_images.assign(l, {});
  out.can.series_images.assign(l, {});
  for (int i = 0; i < l; ++i) {
    for (int v : padded_can.sylow_images[i + 1]) out.can.sylow_images[i].push_back(rho[v]);
    std::sort(out.can.sylow_images[i].begin(), out.can.sylow_images[i].end());
    for (const auto& img : padded_can.series_images[i + 1]) {
      std::vector<int> mapped;
      for (int v : img) mapped.push_back(rho[v]);
      std::sort(mapped.begin(), mapped.end());
      out.can.series_images[i].push_back(std::move(mapped));
    }
  }
  out.inv = std::move(best);
  out.psi.resize(n);
  for (int x = 0; x < n; ++x) out.psi[x] = rho[labels[x]];
  return out;
}

inline CanHall can_hall(const HallSeries& hs, const CanonOptions& opts = {}) {
  return can_hall_full(hs, opts).can;
}

// ---- generator-enumeration canonical forms ----

// Rows and columns reordered by the generator-induced total order; entries
// are the 1-based positions.
inline std::vector<std::vector<int>> genenum_table(const GroupTable& g,
                                                   const std::vector<int>& gens) {
  GenOrder ord = cayley_order(g, gens);
  std::vector<std::vector<int>> m(g.n, std::vector<int>(g.n));
  for (int a = 0; a < g.n; ++a)
    for (int b = 0; b < g.n; ++b)
      m[ord.rank[a]][ord.rank[b]] = ord.rank[g.mul(a, b)] + 1;
  return m;
}

// Lexicographically least reordered table over all ordered generating sets of
// size at most ceil(log_p n), p the smallest prime divisor.
inline CanGroup can_group_genenum(const GroupTable& g) {
  if (g.n == 1) return CanGroup{{{1}}};
  int p = smallest_prime_divisor(g.n);
  int l = static_cast<int>(std::ceil(std::log2(static_cast<double>(g.n)) /
                                     std::log2(static_cast<double>(p)) - 1e-9));
  if (l < 1) l = 1;
  CanGroup best;
  bool have = false;
  std::vector<int> tuple;
  std::function<void(int)> rec = [&](int size) {
    if (static_cast<int>(tuple.size()) == size) {
      if (subgroup_closure(g, tuple).size() != g.n) return;
      CanGroup cand{genenum_table(g, tuple)};
      if (!have || cand < best) {
        best = std::move(cand);
        have = true;
      }
      return;
    }
    for (int v = 0; v < g.n; ++v) {
      bool dup = false;
      for (int u : tuple)
        if (u == v) { dup = true; break; }
      if (dup) continue;
      tuple.push_back(v);
      rec(size);
      tuple.pop_back();
    }
  };
  for (int size = 1; size <= l; ++size) rec(size);
  if (!have) throw NotGenerating("no generating set within the size bound");
  return best;
}

// ---- group canonical forms through series enumeration ----

struct GroupCanonOptions {
  CanonOptions canon;
};

// p-group route: least canonical series form over all socle-decomposition
// choices. Solvable route: least Hall canonical form over all Sylow bases and
// per-member choices.
inline CanGroup can_group_series(const GroupTable& g, const GroupCanonOptions& opts = {}) {
  if (g.n == 1) return CanGroup{{{1}}};
  Classification cls = classify(g);
  if (cls.is_p_group) {
    std::string best_inv;
    CanGroup best;
    bool have = false;
    enumerate_series(g, [&](const ChoiceSeq&, const LabeledSeries& s) -> bool {
      SeriesCanon sc = can_series_full(s, opts.canon);
      if (!have || sc.inv < best_inv) {
        have = true;
        best_inv = std::move(sc.inv);
        best = CanGroup{std::move(sc.can.m)};
      }
      return true;
    });
    if (!have) throw Error("no series enumerated");
    return best;
  }
  if (!cls.is_solvable)
    throw NotApplicable("series canonical form requires a p-group or solvable group");
  SylowBasis basis = sylow_basis(g);
  std::string best_inv;
  CanGroup best;
  bool have = false;
  for (const SylowBasis& b : all_sylow_bases(g, basis)) {
    enumerate_hall_series(g, b, [&](const HallSeries& hs) -> bool {
      HallCanon hc = can_hall_full(hs, opts.canon);
      if (!have || hc.inv < best_inv) {
        have = true;
        best_inv = std::move(hc.inv);
        best = CanGroup{std::move(hc.can.m)};
      }
      return true;
    });
  }
  if (!have) throw Error("no Hall series enumerated");
  return best;
}

}  // namespace grpiso
