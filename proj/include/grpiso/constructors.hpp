#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "grpiso/errors.hpp"
#include "grpiso/group_table.hpp"
#include "grpiso/structure.hpp"

namespace grpiso {

// Deterministic test/benchmark group constructors. Element numbering is fixed
// per kind:
//   cyclic n        residues 0..n-1
//   direct-product  mixed-radix tuples, last factor fastest
//   dihedral k      r^i s^j -> i + k*j   (order 2k)
//   quaternion8     1,-1,i,-i,j,-j,k,-k  -> 0..7
//   heisenberg p    unitriangular (a,b,c) -> a*p^2 + b*p + c
//   semidirect-pq   (a, b) in Z_p x Z_q -> a*q + b, action a -> t*a
//   sym k / alt k   permutations of {0..k-1} in lexicographic order,
//                   (sigma*tau)(x) = sigma(tau(x))
//   tight-family n  Z_2^k x Z_q x Z_d benchmark family
struct ConstructorSpec {
  std::string kind;
  std::vector<long long> params;
};

inline GroupTable cyclic_group(long long n) {
  if (n < 1 || n > 4096) throw BadParameters("cyclic order out of range");
  int m = static_cast<int>(n);
  std::vector<int> t(static_cast<size_t>(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) t[static_cast<size_t>(i) * m + j] = (i + j) % m;
  return make_group(m, std::move(t));
}

inline GroupTable direct_product(const GroupTable& a, const GroupTable& b) {
  long long n = static_cast<long long>(a.n) * b.n;
  if (n > 4096) throw BadParameters("direct product too large");
  int m = static_cast<int>(n);
  std::vector<int> t(static_cast<size_t>(m) * m);
  auto id = [&](int x, int y) { return x * b.n + y; };
  for (int x1 = 0; x1 < a.n; ++x1)
    for (int y1 = 0; y1 < b.n; ++y1)
      for (int x2 = 0; x2 < a.n; ++x2)
        for (int y2 = 0; y2 < b.n; ++y2)
          t[static_cast<size_t>(id(x1, y1)) * m + id(x2, y2)] =
              id(a.mul(x1, x2), b.mul(y1, y2));
  return make_group(m, std::move(t));
}

inline GroupTable dihedral_group(long long k) {
  if (k < 1 || k > 2048) throw BadParameters("dihedral parameter out of range");
  int kk = static_cast<int>(k);
  int m = 2 * kk;
  std::vector<int> t(static_cast<size_t>(m) * m);
  auto id = [&](int i, int j) { return i + kk * j; };
  for (int i1 = 0; i1 < kk; ++i1)
    for (int j1 = 0; j1 < 2; ++j1)
      for (int i2 = 0; i2 < kk; ++i2)
        for (int j2 = 0; j2 < 2; ++j2) {
          int i = j1 ? (i1 - i2 % kk + kk) % kk : (i1 + i2) % kk;
          t[static_cast<size_t>(id(i1, j1)) * m + id(i2, j2)] = id(i, j1 ^ j2);
        }
  return make_group(m, std::move(t));
}

inline GroupTable quaternion8() {
  // units (sign, axis): axis 0 = 1, 1 = i, 2 = j, 3 = k; id = axis*2 + (sign<0)
  auto mulq = [](int a, int b, int& sign) -> int {
    // returns axis of product, sets sign multiplier
    static const int axis[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    static const int sgn[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
    sign = sgn[a][b];
    return axis[a][b];
  };
  std::vector<int> t(64);
  for (int a = 0; a < 4; ++a)
    for (int sa = 0; sa < 2; ++sa)
      for (int b = 0; b < 4; ++b)
        for (int sb = 0; sb < 2; ++sb) {
          int sign;
          int ax = mulq(a, b, sign);
          int neg = (sa ^ sb) ^ (sign < 0 ? 1 : 0);
          t[static_cast<size_t>(a * 2 + sa) * 8 + (b * 2 + sb)] = ax * 2 + neg;
        }
  return make_group(8, std::move(t));
}

inline GroupTable heisenberg_group(long long p) {
  if (p < 2 || p > 13 || !is_prime(static_cast<int>(p)))
    throw BadParameters("heisenberg needs a small prime");
  int pp = static_cast<int>(p);
  int m = pp * pp * pp;
  std::vector<int> t(static_cast<size_t>(m) * m);
  auto id = [&](int a, int b, int c) { return (a * pp + b) * pp + c; };
  for (int a1 = 0; a1 < pp; ++a1)
    for (int b1 = 0; b1 < pp; ++b1)
      for (int c1 = 0; c1 < pp; ++c1)
        for (int a2 = 0; a2 < pp; ++a2)
          for (int b2 = 0; b2 < pp; ++b2)
            for (int c2 = 0; c2 < pp; ++c2)
              t[static_cast<size_t>(id(a1, b1, c1)) * m + id(a2, b2, c2)] =
                  id((a1 + a2) % pp, (b1 + b2) % pp, (c1 + c2 + a1 * b2) % pp);
  return make_group(m, std::move(t));
}

// Z_p x| Z_q with b acting as multiplication by t^b; requires t^q = 1 (mod p)
// and t != 1 so the product is nonabelian.
inline GroupTable semidirect_pq(long long p, long long q, long long t) {
  if (p < 2 || !is_prime(static_cast<int>(p))) throw BadParameters("p must be prime");
  if (q < 2 || p * q > 4096) throw BadParameters("q out of range");
  if (t <= 1 || t >= p) throw BadParameters("action exponent must satisfy 1 < t < p");
  long long tq = 1;
  for (long long i = 0; i < q; ++i) tq = (tq * t) % p;
  if (tq != 1) throw BadParameters("t^q != 1 (mod p); not a group action");
  int pp = static_cast<int>(p), qq = static_cast<int>(q);
  int m = pp * qq;
  std::vector<long long> tpow(qq);
  tpow[0] = 1;
  for (int i = 1; i < qq; ++i) tpow[i] = (tpow[i - 1] * t) % p;
  std::vector<int> tab(static_cast<size_t>(m) * m);
  auto id = [&](int a, int b) { return a * qq + b; };
  for (int a1 = 0; a1 < pp; ++a1)
    for (int b1 = 0; b1 < qq; ++b1)
      for (int a2 = 0; a2 < pp; ++a2)
        for (int b2 = 0; b2 < qq; ++b2) {
          int a = static_cast<int>((a1 + tpow[b1] * a2) % pp);
          tab[static_cast<size_t>(id(a1, b1)) * m + id(a2, b2)] = id(a, (b1 + b2) % qq);
        }
  return make_group(m, std::move(tab));
}

inline GroupTable symmetric_group(long long k, bool even_only) {
  if (k < 1 || k > 5) throw BadParameters("sym/alt parameter must be 1..5");
  int kk = static_cast<int>(k);
  std::vector<std::vector<int>> perms;
  std::vector<int> p(kk);
  std::iota(p.begin(), p.end(), 0);
  do {
    if (even_only) {
      int inv = 0;
      for (int i = 0; i < kk; ++i)
        for (int j = i + 1; j < kk; ++j)
          if (p[i] > p[j]) ++inv;
      if (inv % 2) continue;
    }
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  int m = static_cast<int>(perms.size());
  auto index_of = [&](const std::vector<int>& q) {
    return static_cast<int>(std::lower_bound(perms.begin(), perms.end(), q) - perms.begin());
  };
  std::vector<int> t(static_cast<size_t>(m) * m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      std::vector<int> q(kk);
      for (int i = 0; i < kk; ++i) q[i] = perms[a][perms[b][i]];
      t[static_cast<size_t>(a) * m + b] = index_of(q);
    }
  return make_group(m, std::move(t));
}

// Z_2^k x Z_q x Z_d with q the smallest prime in the window
// [(1/2) log n / log log n, log n / log log n), widened upward when empty.
inline GroupTable tight_family(long long n0) {
  if (n0 < 8 || n0 > 4096) throw BadParameters("tight-family order out of range");
  double logn = std::log2(static_cast<double>(n0));
  double loglog = std::log2(logn);
  double hi = logn / loglog, lo = hi / 2;
  int q = std::max(2, static_cast<int>(std::ceil(lo)));
  while (!is_prime(q)) ++q;
  // widen upward when the window contains no prime (q may land >= hi)
  double pk_target = static_cast<double>(n0) / logn;
  int k = std::max(1, static_cast<int>(std::floor(std::log2(pk_target))));
  long long d = std::max<long long>(1, llround(static_cast<double>(n0) / ((1LL << k) * q)));
  GroupTable g = cyclic_group(2);
  for (int i = 1; i < k; ++i) g = direct_product(g, cyclic_group(2));
  g = direct_product(g, cyclic_group(q));
  g = direct_product(g, cyclic_group(d));
  return g;
}

inline GroupTable construct(const ConstructorSpec& spec) {
  const auto& p = spec.params;
  auto need = [&](size_t k) {
    if (p.size() != k)
      throw BadParameters(spec.kind + " expects " + std::to_string(k) + " parameter(s)");
  };
  if (spec.kind == "cyclic") {
    need(1);
    return cyclic_group(p[0]);
  }
  if (spec.kind == "direct-product") {
    if (p.empty()) throw BadParameters("direct-product needs at least one factor");
    GroupTable g = cyclic_group(p[0]);
    for (size_t i = 1; i < p.size(); ++i) g = direct_product(g, cyclic_group(p[i]));
    return g;
  }
  if (spec.kind == "dihedral") {
    need(1);
    return dihedral_group(p[0]);
  }
  if (spec.kind == "quaternion8") {
    need(0);
    return quaternion8();
  }
  if (spec.kind == "heisenberg") {
    need(1);
    return heisenberg_group(p[0]);
  }
  if (spec.kind == "semidirect-pq") {
    need(3);
    return semidirect_pq(p[0], p[1], p[2]);
  }
  if (spec.kind == "sym") {
    need(1);
    return symmetric_group(p[0], false);
  }
  if (spec.kind == "alt") {
    need(1);
    return symmetric_group(p[0], true);
  }
  if (spec.kind == "tight-family") {
    need(1);
    return tight_family(p[0]);
  }
  throw BadParameters("unknown constructor kind '" + spec.kind + "'");
}

}  // namespace grpiso
