#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "grpiso/errors.hpp"
#include "grpiso/group_table.hpp"

namespace grpiso {

// Dense membership set over element ids [0, n).
struct ElementSet {
  int universe = 0;
  std::vector<uint64_t> words;
  int count = 0;

  ElementSet() = default;
  explicit ElementSet(int n) : universe(n), words((n + 63) / 64, 0) {}

  static ElementSet of(int n, const std::vector<int>& elems) {
    ElementSet s(n);
    for (int e : elems) s.insert(e);
    return s;
  }

  bool contains(int x) const { return (words[x >> 6] >> (x & 63)) & 1; }

  bool insert(int x) {
    uint64_t& w = words[x >> 6];
    uint64_t bit = 1ULL << (x & 63);
    if (w & bit) return false;
    w |= bit;
    ++count;
    return true;
  }

  int size() const { return count; }

  std::vector<int> elements() const {
    std::vector<int> out;
    out.reserve(count);
    for (int x = 0; x < universe; ++x)
      if (contains(x)) out.push_back(x);
    return out;
  }

  bool operator==(const ElementSet& o) const {
    return universe == o.universe && words == o.words;
  }

  bool is_subset_of(const ElementSet& o) const {
    for (size_t i = 0; i < words.size(); ++i)
      if (words[i] & ~o.words[i]) return false;
    return true;
  }

  ElementSet intersect(const ElementSet& o) const {
    ElementSet r(universe);
    r.count = 0;
    for (size_t i = 0; i < words.size(); ++i) {
      r.words[i] = words[i] & o.words[i];
      r.count += __builtin_popcountll(r.words[i]);
    }
    return r;
  }

  // lexicographic order on the ascending member lists
  bool lex_less(const ElementSet& o) const {
    auto a = elements(), b = o.elements();
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }
};

struct SubgroupSet {
  const GroupTable* parent = nullptr;
  ElementSet members;

  int size() const { return members.size(); }
  bool contains(int x) const { return members.contains(x); }
  std::vector<int> elements() const { return members.elements(); }
};

// Smallest subgroup containing the seeds. BFS over right products by the
// seeds; inverses come along automatically in a finite group.
inline SubgroupSet subgroup_closure(const GroupTable& g, const std::vector<int>& seeds) {
  ElementSet set(g.n);
  std::vector<int> queue;
  set.insert(g.identity);
  queue.push_back(g.identity);
  for (int s : seeds)
    if (set.insert(s)) queue.push_back(s);
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    int u = queue[qi];
    for (int s : seeds) {
      int v = g.mul(u, s);
      if (set.insert(v)) queue.push_back(v);
    }
  }
  if (g.n % set.size() != 0)
    throw Error("closure size does not divide group order");  // cannot happen for a valid group
  return SubgroupSet{&g, std::move(set)};
}

// Normal closure <seeds^G>: close the set of all conjugates.
inline SubgroupSet normal_closure(const GroupTable& g, const std::vector<int>& seeds) {
  std::vector<int> conj;
  ElementSet seen(g.n);
  for (int s : seeds)
    for (int x = 0; x < g.n; ++x) {
      int c = g.conj(s, x);
      if (seen.insert(c)) conj.push_back(c);
    }
  return subgroup_closure(g, conj);
}

inline bool is_normal(const GroupTable& g, const ElementSet& h) {
  for (int x : h.elements())
    for (int t = 0; t < g.n; ++t)
      if (!h.contains(g.conj(x, t))) return false;
  return true;
}

inline bool is_normal(const SubgroupSet& h) { return is_normal(*h.parent, h.members); }

// {a*b : a in A, b in B}; not necessarily a subgroup.
inline ElementSet product_set(const GroupTable& g, const ElementSet& a, const ElementSet& b) {
  ElementSet r(g.n);
  auto be = b.elements();
  for (int x : a.elements())
    for (int y : be) r.insert(g.mul(x, y));
  return r;
}

inline bool is_closed_under_product(const GroupTable& g, const ElementSet& s) {
  auto e = s.elements();
  for (int x : e)
    for (int y : e)
      if (!s.contains(g.mul(x, y))) return false;
  return true;
}

struct QuotientView {
  GroupTable quotient;
  std::vector<int> projection;       // parent id -> coset id
  std::vector<int> representatives;  // coset id -> minimum member id
};

// Quotient by a normal subgroup. Coset ids are assigned by ascending minimum
// member; the representative of each coset is that minimum.
inline QuotientView quotient(const GroupTable& g, const ElementSet& nrm) {
  if (!nrm.contains(g.identity) || g.n % nrm.size() != 0)
    throw NotNormal("not a subgroup");
  if (!is_normal(g, nrm)) throw NotNormal("subgroup is not normal");

  std::vector<int> nelems = nrm.elements();
  std::vector<int> coset_min(g.n, -1);
  std::vector<int> mins;
  for (int x = 0; x < g.n; ++x) {
    if (coset_min[x] >= 0) continue;
    int m = g.n;
    std::vector<int> members;
    members.reserve(nelems.size());
    for (int k : nelems) {
      int y = g.mul(x, k);
      members.push_back(y);
      m = std::min(m, y);
    }
    for (int y : members) coset_min[y] = m;
    mins.push_back(m);
  }
  std::sort(mins.begin(), mins.end());

  int q = static_cast<int>(mins.size());
  std::vector<int> id_of_min(g.n, -1);
  for (int i = 0; i < q; ++i) id_of_min[mins[i]] = i;

  QuotientView v;
  v.projection.resize(g.n);
  for (int x = 0; x < g.n; ++x) v.projection[x] = id_of_min[coset_min[x]];
  v.representatives = mins;

  std::vector<int> t(static_cast<size_t>(q) * q);
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b)
      t[static_cast<size_t>(a) * q + b] = v.projection[g.mul(mins[a], mins[b])];
  v.quotient = make_group(q, std::move(t));

  // well-definedness: projection must be a homomorphism
  for (int x = 0; x < g.n; ++x)
    for (int y = 0; y < g.n; ++y)
      if (v.quotient.mul(v.projection[x], v.projection[y]) != v.projection[g.mul(x, y)])
        throw NotNormal("projection is not a homomorphism");
  return v;
}

// {x in parent : projection(x) in K}
inline ElementSet preimage(const QuotientView& v, const ElementSet& k) {
  ElementSet r(static_cast<int>(v.projection.size()));
  for (int x = 0; x < static_cast<int>(v.projection.size()); ++x)
    if (k.contains(v.projection[x])) r.insert(x);
  return r;
}

// A subgroup viewed as a group in its own right, with id translations.
struct SubgroupTable {
  GroupTable table;
  std::vector<int> to_parent;    // sub id -> parent id
  std::vector<int> from_parent;  // parent id -> sub id, -1 outside
};

inline SubgroupTable restrict_to_subgroup(const GroupTable& g, const ElementSet& h) {
  SubgroupTable st;
  st.to_parent = h.elements();
  int m = static_cast<int>(st.to_parent.size());
  st.from_parent.assign(g.n, -1);
  for (int i = 0; i < m; ++i) st.from_parent[st.to_parent[i]] = i;
  std::vector<int> t(static_cast<size_t>(m) * m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      int p = g.mul(st.to_parent[a], st.to_parent[b]);
      int q = st.from_parent[p];
      if (q < 0) throw Error("set is not closed under product");
      t[static_cast<size_t>(a) * m + b] = q;
    }
  st.table = make_group(m, std::move(t));
  return st;
}

}  // namespace grpiso
