#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "grpiso/colored_graph.hpp"
#include "grpiso/comp_series.hpp"
#include "grpiso/errors.hpp"
#include "grpiso/gen_order.hpp"
#include "grpiso/group_table.hpp"
#include "grpiso/structure.hpp"
#include "grpiso/subgroup.hpp"

namespace grpiso {

// Rooted tree with uniform leaf depth; the shared skeleton of the cone-graph
// constructions. Node 0 is the root.
struct EncTree {
  int nodes = 0;
  std::vector<int> parent;             // -1 at root
  std::vector<int> color;              // node colors (internal unless stated)
  std::vector<char> coset_has_identity;
  std::vector<int> leaf_of_element;    // group element id -> leaf node
  int depth = 0;
};

// Coset tree T(S): nodes are the cosets of every chain subgroup, with an edge
// between nested cosets of consecutive levels. Root is the whole group,
// leaves are singletons identified with elements.
inline EncTree build_T(const LabeledSeries& s) {
  const GroupTable& g = *s.parent;
  const int m = s.length();
  EncTree t;
  t.depth = m;
  t.leaf_of_element.assign(g.n, -1);

  // level tau holds cosets of chain[m - tau]; each coset is keyed by its
  // minimum member
  std::vector<int> node_of_min(g.n, -1);
  std::vector<int> cur_level;  // node ids
  std::vector<int> node_min;   // node id -> coset min

  t.nodes = 1;
  t.parent.push_back(-1);
  t.color.push_back(kColorInternal);
  t.coset_has_identity.push_back(1);
  node_min.push_back(0);
  cur_level.push_back(0);
  if (m == 0) {
    t.leaf_of_element[g.identity] = 0;
    return t;
  }

  std::vector<int> coset_min(g.n);
  for (int tau = 1; tau <= m; ++tau) {
    const ElementSet& h = s.chain[m - tau].members;
    auto helems = h.elements();
    std::fill(coset_min.begin(), coset_min.end(), -1);
    for (int x = 0; x < g.n; ++x) {
      if (coset_min[x] >= 0) continue;
      int mn = g.n;
      for (int k : helems) mn = std::min(mn, g.mul(x, k));
      for (int k : helems) coset_min[g.mul(x, k)] = mn;
    }
    std::vector<int> next_level;
    std::fill(node_of_min.begin(), node_of_min.end(), -1);
    for (int pnode : cur_level) {
      // children: distinct sub-coset minima inside the parent coset, ascending
      int pmin = node_min[pnode];
      const ElementSet& hp = s.chain[m - tau + 1].members;
      std::vector<int> mins;
      for (int k : hp.elements()) {
        int y = g.mul(pmin, k);
        if (std::find(mins.begin(), mins.end(), coset_min[y]) == mins.end())
          mins.push_back(coset_min[y]);
      }
      std::sort(mins.begin(), mins.end());
      for (int mn : mins) {
        int id = t.nodes++;
        t.parent.push_back(pnode);
        t.color.push_back(kColorInternal);
        t.coset_has_identity.push_back(coset_min[g.identity] == mn ? 1 : 0);
        node_min.push_back(mn);
        node_of_min[mn] = id;
        next_level.push_back(id);
      }
    }
    cur_level = std::move(next_level);
  }
  for (int node : cur_level) t.leaf_of_element[node_min[node]] = node;
  return t;
}

// Depth-uniform pruned complete binary tree with k labeled leaf slots. The
// structure depends only on k; node 0 is the root, BFS numbering.
inline EncTree build_B(int k) {
  if (k < 1) throw BadParameters("binary tree needs at least one leaf");
  int d = 0;
  while ((1 << d) < k) ++d;
  EncTree t;
  t.depth = d;
  t.leaf_of_element.assign(k, -1);
  // heap index h at depth level "lev" covers leaf slots [off*2^(d-lev), ...)
  std::vector<int> id_of_heap(static_cast<size_t>(1) << (d + 1), -1);
  t.nodes = 0;
  for (int lev = 0; lev <= d; ++lev) {
    int width = d - lev;
    for (int off = 0; off < (1 << lev); ++off) {
      long long lo = static_cast<long long>(off) << width;
      if (lo >= k) continue;  // prune: no surviving leaf below
      int heap = (1 << lev) - 1 + off;
      int id = t.nodes++;
      id_of_heap[heap] = id;
      t.parent.push_back(lev == 0 ? -1 : id_of_heap[(heap - 1) / 2]);
      t.color.push_back(kColorInternal);
      t.coset_has_identity.push_back(0);
      if (lev == d) t.leaf_of_element[lo] = id;
    }
  }
  return t;
}

// Vector of coset representatives generating the composition factors of the
// large-prime basis members.
struct GenVector {
  double alpha = 0;
  int kappa = 0;                       // count of large primes (1-based count)
  std::vector<std::vector<int>> reps;  // reps[i][j]: parent id of g_{i+1, j+1}

  std::vector<int> flat() const {
    std::vector<int> out;
    for (const auto& r : reps) out.insert(out.end(), r.begin(), r.end());
    return out;
  }
};

inline double alpha_for_order(long long n) {
  if (n <= 4) return 2.5;  // the ratio degenerates below 5; fixed small-n convention
  double l = std::log2(static_cast<double>(n));
  return l / std::log2(l);
}

inline int kappa_for(const SylowBasis& b, double alpha) {
  int k = 0;
  while (k < b.num_primes() && b.primes[k] >= alpha) ++k;
  return k;
}

// Every choice of factor-generating coset representatives for the large-prime
// members, streamed in ascending element-id order per slot.
inline void enumerate_genvectors(const HallSeries& hs, double alpha,
                                 const std::function<bool(const GenVector&)>& visit,
                                 bool fix_first_slot_component = false,
                                 int fixed_component = -1) {
  if (hs.basis.num_primes() == 0) throw BadParameters("trivial group has no Hall tree");
  if (hs.basis.primes[0] < alpha)
    throw AlphaTooLarge("largest prime is below alpha; pad first");
  int kappa = kappa_for(hs.basis, alpha);

  struct Slot {
    int comp, j;
    std::vector<int> options;
  };
  std::vector<Slot> slots;
  for (int i = 0; i < kappa; ++i) {
    const auto& chain = hs.comps[i].chain_parent;
    for (size_t j = 0; j + 1 < chain.size(); ++j) {
      Slot s;
      s.comp = i;
      s.j = static_cast<int>(j);
      for (int x : chain[j + 1].elements())
        if (!chain[j].contains(x)) s.options.push_back(x);
      // prime-order factors: every coset outside the subgroup generates
      if (fix_first_slot_component && i == fixed_component)
        s.options.resize(1);
      slots.push_back(std::move(s));
    }
  }

  GenVector gv;
  gv.alpha = alpha;
  gv.kappa = kappa;
  gv.reps.assign(kappa, {});
  for (auto& s : slots) gv.reps[s.comp].push_back(-1);

  std::function<bool(size_t)> rec = [&](size_t si) -> bool {
    if (si == slots.size()) return visit(gv);
    for (int opt : slots[si].options) {
      gv.reps[slots[si].comp][slots[si].j] = opt;
      if (!rec(si + 1)) return false;
    }
    return true;
  };
  rec(0);
}

// Tree for a Hall composition series with fixed generators: a binary tree over
// the generator-ordered elements of the large-prime product, with the small
// prime coset trees glued below every leaf.
inline EncTree build_T_hall(const HallSeries& hs, const GenVector& gv) {
  const GroupTable& g = *hs.parent;
  const int l = hs.basis.num_primes();
  if (l == 0) throw BadParameters("trivial group has no Hall tree");
  if (hs.basis.primes[0] < gv.alpha)
    throw AlphaTooLarge("largest prime is below alpha; pad first");
  const int kappa = kappa_for(hs.basis, gv.alpha);

  // U = P_1 ... P_kappa and the order induced by the flattened generators
  ElementSet u(g.n);
  u.insert(g.identity);
  for (int i = 0; i < kappa; ++i) u = product_set(g, u, hs.basis.subgroups[i].members);
  SubgroupTable usub = restrict_to_subgroup(g, u);
  std::vector<int> gens_local;
  for (int x : gv.flat()) gens_local.push_back(usub.from_parent[x]);
  GenOrder ord = cayley_order(usub.table, gens_local);

  // unique-factorization prefix data: nontrivial coordinate counts over U
  std::vector<int> nontriv(g.n, -1);
  nontriv[g.identity] = 0;
  {
    ElementSet cur(g.n);
    cur.insert(g.identity);
    for (int i = 0; i < kappa; ++i) {
      ElementSet next(g.n);
      std::vector<int> nn(g.n, -1);
      for (int v : cur.elements())
        for (int x : hs.basis.subgroups[i].elements()) {
          int w = g.mul(v, x);
          next.insert(w);
          nn[w] = nontriv[v] + (x == g.identity ? 0 : 1);
        }
      for (int w : next.elements()) nontriv[w] = nn[w];
      cur = std::move(next);
    }
  }

  EncTree b = build_B(u.size());
  EncTree t;
  t.nodes = b.nodes;
  t.parent = b.parent;
  t.color = b.color;
  t.coset_has_identity.assign(b.nodes, 0);
  t.leaf_of_element.assign(g.n, -1);
  t.depth = b.depth;

  // leaf slots follow the generator order; color by position
  struct Pending {
    int node;
    int elem;  // parent-group element the leaf stands for so far
  };
  std::vector<Pending> leaves;
  for (int r = 0; r < usub.table.n; ++r) {
    int node = b.leaf_of_element[r];
    t.color[node] = kColorLeafPosBase + r;
    leaves.push_back({node, usub.to_parent[ord.by_rank[r]]});
  }

  // glue coset trees of the small-prime members below every current leaf
  for (int i = kappa; i < l; ++i) {
    const EncTree sub_t = build_T(hs.comps[i].series_local);
    const auto& to_parent = hs.comps[i].sub->to_parent;
    std::vector<Pending> next_leaves;
    for (const auto& leaf : leaves) {
      int c = nontriv[leaf.elem];
      std::vector<int> id_map(sub_t.nodes, -1);
      id_map[0] = leaf.node;
      for (int tn = 1; tn < sub_t.nodes; ++tn) {
        int id = t.nodes++;
        id_map[tn] = id;
        t.parent.push_back(id_map[sub_t.parent[tn]]);
        bool has_id = sub_t.coset_has_identity[tn];
        t.color.push_back(c + (has_id ? 0 : 1) == 1 ? kColorNotIdentity : kColorInternal);
        t.coset_has_identity.push_back(0);
      }
      for (int x_loc = 0; x_loc < static_cast<int>(to_parent.size()); ++x_loc) {
        int ln = sub_t.leaf_of_element[x_loc];
        int w = g.mul(leaf.elem, to_parent[x_loc]);
        int wc = c + (to_parent[x_loc] == g.identity ? 0 : 1);
        next_leaves.push_back({id_map[ln], w});
        nontriv[w] = wc;
      }
    }
    t.depth += sub_t.depth;
    leaves = std::move(next_leaves);
  }

  for (const auto& leaf : leaves) {
    if (t.leaf_of_element[leaf.elem] != -1) throw Error("element reached twice in Hall tree");
    t.leaf_of_element[leaf.elem] = leaf.node;
  }
  for (int x = 0; x < g.n; ++x)
    if (t.leaf_of_element[x] < 0) throw Error("element missing from Hall tree");
  return t;
}

// Cone graph shared by X(S) and X(S, g): one tree copy per element glued at
// the element leaves, plus a left/right/equal multiplication gadget per pair.
struct XGraph {
  ColoredGraph graph;
  std::vector<int> element_leaf;  // element -> leaf node of the base tree copy
  int element_depth = 0;
  int tree_nodes = 0;
};

inline XGraph build_X_from_tree(const GroupTable& g, const EncTree& t) {
  const int n = g.n;
  const int tn = t.nodes;
  const long long copies = static_cast<long long>(n) * (tn - 1);
  const long long gadget_base = tn + copies;
  const long long total = gadget_base + 3LL * n * n;

  XGraph x;
  x.graph = ColoredGraph(static_cast<int>(total));
  x.element_depth = t.depth;
  x.tree_nodes = tn;
  x.element_leaf.assign(n, -1);

  auto copy_id = [&](int elem, int tnode) -> int {
    // the copy root is identified with the element leaf of the base tree
    if (tnode == 0) return t.leaf_of_element[elem];
    return static_cast<int>(tn + static_cast<long long>(elem) * (tn - 1) + (tnode - 1));
  };
  auto gadget = [&](int a, int b, int role) -> int {
    return static_cast<int>(gadget_base + 3LL * (static_cast<long long>(a) * n + b) + role);
  };

  ColoredGraph& gr = x.graph;
  for (int node = 0; node < tn; ++node) gr.colors[node] = t.color[node];
  gr.colors[0] = kColorRoot;
  for (int e = 0; e < n; ++e) {
    x.element_leaf[e] = t.leaf_of_element[e];
    for (int node = 1; node < tn; ++node) gr.colors[copy_id(e, node)] = t.color[node];
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      gr.colors[gadget(a, b, 0)] = kColorLeft;
      gr.colors[gadget(a, b, 1)] = kColorRight;
      gr.colors[gadget(a, b, 2)] = kColorEqual;
    }

  gr.edges.reserve(static_cast<size_t>(tn - 1) * (n + 1) + 5LL * n * n);
  for (int node = 1; node < tn; ++node) gr.add_edge(node, t.parent[node]);
  for (int e = 0; e < n; ++e)
    for (int node = 1; node < tn; ++node)
      gr.add_edge(copy_id(e, node), copy_id(e, t.parent[node]));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      int leaf = copy_id(a, t.leaf_of_element[b]);
      gr.add_edge(leaf, gadget(a, b, 0));
      gr.add_edge(leaf, gadget(a, b, 1));
      gr.add_edge(leaf, gadget(a, b, 2));
    }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      int z = g.mul(a, b);
      gr.add_edge(gadget(a, b, 0), gadget(b, a, 1));  // y_left^(x) -- x_right^(y)
      gr.add_edge(gadget(b, a, 1), gadget(z, b, 2));  // x_right^(y) -- y_equal^(z)
    }
  gr.finalize();
  return x;
}

inline XGraph build_X(const LabeledSeries& s) {
  return build_X_from_tree(*s.parent, build_T(s));
}

inline XGraph build_X_hall(const HallSeries& hs, const GenVector& gv) {
  return build_X_from_tree(*hs.parent, build_T_hall(hs, gv));
}

}  // namespace grpiso
