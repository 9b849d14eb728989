#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <vector>

#include "grpiso/errors.hpp"
#include "grpiso/group_table.hpp"
#include "grpiso/subgroup.hpp"

namespace grpiso {

inline std::vector<std::pair<int, int>> factorize(long long n) {
  std::vector<std::pair<int, int>> f;
  for (long long p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      int e = 0;
      while (n % p == 0) { n /= p; ++e; }
      f.emplace_back(static_cast<int>(p), e);
    }
  }
  if (n > 1) f.emplace_back(static_cast<int>(n), 1);
  return f;
}

inline int smallest_prime_divisor(long long n) {
  auto f = factorize(n);
  return f.empty() ? 0 : f.front().first;
}

// All distinct minimal normal subgroups: normal closures of nontrivial
// elements, keeping the inclusion-minimal distinct ones. Sorted by
// (size, lexicographic member list).
inline std::vector<SubgroupSet> minimal_normal_subgroups(const GroupTable& g) {
  std::vector<SubgroupSet> closures;
  for (int x = 0; x < g.n; ++x) {
    if (x == g.identity) continue;
    SubgroupSet c = normal_closure(g, {x});
    bool dup = false;
    for (const auto& o : closures)
      if (o.members == c.members) { dup = true; break; }
    if (!dup) closures.push_back(std::move(c));
  }
  std::vector<SubgroupSet> out;
  for (const auto& c : closures) {
    bool minimal = true;
    for (const auto& o : closures)
      if (!(o.members == c.members) && o.members.is_subset_of(c.members)) {
        minimal = false;
        break;
      }
    if (minimal) out.push_back(c);
  }
  std::sort(out.begin(), out.end(), [](const SubgroupSet& a, const SubgroupSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.members.lex_less(b.members);
  });
  return out;
}

// Subgroup generated by all minimal normal subgroups; characteristic.
inline SubgroupSet socle(const GroupTable& g) {
  std::vector<int> seeds;
  for (const auto& m : minimal_normal_subgroups(g))
    for (int x : m.elements()) seeds.push_back(x);
  SubgroupSet s = subgroup_closure(g, seeds);
  if (!is_normal(s)) throw Error("socle is not normal");  // impossible for a valid group
  return s;
}

inline bool is_simple(const GroupTable& g) {
  if (g.n == 1) throw TrivialGroup("simplicity is undefined for the trivial group");
  for (int x = 0; x < g.n; ++x) {
    if (x == g.identity) continue;
    if (normal_closure(g, {x}).size() != g.n) return false;
  }
  return true;
}

namespace detail {

inline bool is_power_of(long long v, int p) {
  while (v % p == 0) v /= p;
  return v == 1;
}

inline bool is_pi_number(long long v, const std::vector<int>& pi) {
  for (int p : pi)
    while (v % p == 0) v /= p;
  return v == 1;
}

}  // namespace detail

// Greedy Sylow p-subgroup: repeatedly adjoin the smallest p-power-order
// element outside the current p-subgroup that keeps the closure a p-group.
inline SubgroupSet sylow_subgroup(const GroupTable& g, int p) {
  if (p < 2 || g.n % p != 0) throw PrimeDoesNotDivide("p does not divide the group order");
  long long target = 1;
  {
    long long n = g.n;
    while (n % p == 0) { n /= p; target *= p; }
  }
  std::vector<int> gens;
  SubgroupSet cur = subgroup_closure(g, gens);
  while (cur.size() < target) {
    bool extended = false;
    for (int x = 0; x < g.n && !extended; ++x) {
      if (cur.contains(x)) continue;
      if (!detail::is_power_of(g.order_of(x), p)) continue;
      std::vector<int> cand = gens;
      cand.push_back(x);
      SubgroupSet next = subgroup_closure(g, cand);
      if (detail::is_power_of(next.size(), p)) {
        gens = std::move(cand);
        cur = std::move(next);
        extended = true;
      }
    }
    if (!extended) throw Error("no Sylow extension exists");  // contradicts Sylow theory
  }
  return cur;
}

// Greedy Hall pi-subgroup. Extension failure before full Hall order signals a
// non-solvable input.
inline SubgroupSet hall_subgroup(const GroupTable& g, const std::vector<int>& pi) {
  long long target = 1;
  for (int p : pi) {
    if (p < 2 || g.n % p != 0) throw PrimeDoesNotDivide("pi contains a non-divisor");
    long long n = g.n;
    while (n % p == 0) { n /= p; target *= p; }
  }
  std::vector<int> gens;
  SubgroupSet cur = subgroup_closure(g, gens);
  while (cur.size() < target) {
    bool extended = false;
    for (int x = 0; x < g.n && !extended; ++x) {
      if (cur.contains(x)) continue;
      if (!detail::is_pi_number(g.order_of(x), pi)) continue;
      std::vector<int> cand = gens;
      cand.push_back(x);
      SubgroupSet next = subgroup_closure(g, cand);
      if (detail::is_pi_number(next.size(), pi)) {
        gens = std::move(cand);
        cur = std::move(next);
        extended = true;
      }
    }
    if (!extended)
      throw NotSolvable("Hall extension stalled; group is not solvable");
  }
  return cur;
}

// One Sylow subgroup per prime, pairwise permutable. Primes are kept in
// descending order throughout.
struct SylowBasis {
  std::vector<int> primes;
  std::vector<int> exponents;
  std::vector<SubgroupSet> subgroups;

  int num_primes() const { return static_cast<int>(primes.size()); }
};

inline void verify_sylow_basis(const GroupTable& g, const SylowBasis& b) {
  long long prod_order = 1;
  for (int i = 0; i < b.num_primes(); ++i) {
    long long want = 1;
    for (int e = 0; e < b.exponents[i]; ++e) want *= b.primes[i];
    if (b.subgroups[i].size() != want)
      throw NotSolvable("Sylow basis member has wrong order");
    prod_order *= want;
  }
  if (prod_order != g.n) throw NotSolvable("Sylow basis does not cover the group order");
  for (int i = 0; i < b.num_primes(); ++i)
    for (int j = i + 1; j < b.num_primes(); ++j) {
      ElementSet ab = product_set(g, b.subgroups[i].members, b.subgroups[j].members);
      ElementSet ba = product_set(g, b.subgroups[j].members, b.subgroups[i].members);
      if (!(ab == ba)) throw NotSolvable("Sylow subgroups do not permute");
    }
  // product of all members, both directions, must exhaust the group
  for (int dir = 0; dir < 2; ++dir) {
    ElementSet acc(g.n);
    acc.insert(g.identity);
    for (int i = 0; i < b.num_primes(); ++i) {
      int idx = dir ? b.num_primes() - 1 - i : i;
      acc = product_set(g, acc, b.subgroups[idx].members);
    }
    if (acc.size() != g.n) throw NotSolvable("Sylow basis product does not exhaust the group");
  }
}

// Sylow basis via a Sylow system: Q_i = Hall subgroup avoiding p_i, then
// P_i is the intersection of the other Q_j.
inline SylowBasis sylow_basis(const GroupTable& g) {
  SylowBasis b;
  auto fact = factorize(g.n);
  std::sort(fact.begin(), fact.end(), [](auto a, auto c) { return a.first > c.first; });
  for (auto [p, e] : fact) {
    b.primes.push_back(p);
    b.exponents.push_back(e);
  }
  int l = b.num_primes();
  if (l == 0) return b;
  if (l == 1) {
    ElementSet all(g.n);
    for (int x = 0; x < g.n; ++x) all.insert(x);
    b.subgroups.push_back(SubgroupSet{&g, std::move(all)});
    return b;
  }
  std::vector<SubgroupSet> sys;
  for (int i = 0; i < l; ++i) {
    std::vector<int> pi;
    for (int j = 0; j < l; ++j)
      if (j != i) pi.push_back(b.primes[j]);
    sys.push_back(hall_subgroup(g, pi));
  }
  for (int i = 0; i < l; ++i) {
    ElementSet p(g.n);
    bool first = true;
    for (int j = 0; j < l; ++j) {
      if (j == i) continue;
      p = first ? sys[j].members : p.intersect(sys[j].members);
      first = false;
    }
    b.subgroups.push_back(SubgroupSet{&g, std::move(p)});
  }
  verify_sylow_basis(g, b);
  return b;
}

inline ElementSet conjugate_set(const GroupTable& g, const ElementSet& s, int t) {
  ElementSet r(g.n);
  for (int x : s.elements()) r.insert(g.conj(x, t));
  return r;
}

// Enumerates conjugate tuples of fixed Sylow subgroups until a pairwise
// permutable family appears; exhaustion certifies non-solvability.
inline SylowBasis sylow_basis_bruteforce(const GroupTable& g) {
  SylowBasis b;
  auto fact = factorize(g.n);
  std::sort(fact.begin(), fact.end(), [](auto a, auto c) { return a.first > c.first; });
  for (auto [p, e] : fact) {
    b.primes.push_back(p);
    b.exponents.push_back(e);
  }
  int l = b.num_primes();
  if (l == 0) return b;
  std::vector<SubgroupSet> fixed;
  for (int p : b.primes) fixed.push_back(sylow_subgroup(g, p));
  if (l == 1) {
    b.subgroups = std::move(fixed);
    return b;
  }

  std::vector<int> tup(l, 0);
  std::vector<ElementSet> conj(l, ElementSet(g.n));
  while (true) {
    for (int i = 0; i < l; ++i) conj[i] = conjugate_set(g, fixed[i].members, tup[i]);
    bool ok = true;
    for (int i = 0; i < l && ok; ++i)
      for (int j = i + 1; j < l && ok; ++j) {
        ElementSet ab = product_set(g, conj[i], conj[j]);
        ElementSet ba = product_set(g, conj[j], conj[i]);
        if (!(ab == ba)) ok = false;
      }
    if (ok) {
      for (auto& c : conj) b.subgroups.push_back(SubgroupSet{&g, std::move(c)});
      verify_sylow_basis(g, b);
      return b;
    }
    int pos = l - 1;
    while (pos >= 0 && tup[pos] == g.n - 1) { tup[pos] = 0; --pos; }
    if (pos < 0) throw NotSolvable("no Sylow basis exists");
    ++tup[pos];
  }
}

// All conjugates basis^t for t in G, deduplicated; at most n bases, first
// occurrence order.
inline std::vector<SylowBasis> all_sylow_bases(const GroupTable& g, const SylowBasis& basis) {
  std::vector<SylowBasis> out;
  for (int t = 0; t < g.n; ++t) {
    SylowBasis c = basis;
    c.subgroups.clear();
    for (const auto& p : basis.subgroups)
      c.subgroups.push_back(SubgroupSet{&g, conjugate_set(g, p.members, t)});
    bool dup = false;
    for (const auto& o : out) {
      bool same = true;
      for (int i = 0; i < basis.num_primes() && same; ++i)
        if (!(o.subgroups[i].members == c.subgroups[i].members)) same = false;
      if (same) { dup = true; break; }
    }
    if (!dup) out.push_back(std::move(c));
  }
  return out;
}

struct Classification {
  long long order = 0;
  bool is_p_group = false;
  int p = 0;  // meaningful when is_p_group
  bool is_nilpotent = false;
  bool is_solvable = false;
  std::vector<std::pair<int, int>> factorization;
};

inline Classification classify(const GroupTable& g) {
  Classification c;
  c.order = g.n;
  c.factorization = factorize(g.n);
  if (g.n == 1) {
    c.is_nilpotent = c.is_solvable = true;
    return c;
  }
  if (c.factorization.size() == 1) {
    c.is_p_group = true;
    c.p = c.factorization[0].first;
  }
  c.is_nilpotent = true;
  for (auto [p, e] : c.factorization)
    if (!is_normal(sylow_subgroup(g, p))) { c.is_nilpotent = false; break; }
  if (c.is_nilpotent) {
    c.is_solvable = true;
  } else {
    try {
      sylow_basis(g);
      c.is_solvable = true;
    } catch (const NotSolvable&) {
      c.is_solvable = false;
    }
  }
  return c;
}

}  // namespace grpiso
