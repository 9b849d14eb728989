#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "grpiso/errors.hpp"

namespace grpiso {

// A finite group given by its full multiplication table. Element ids are
// 0-based internally; the .gtab interchange format is 1-based.
struct GroupTable {
  int n = 0;
  std::vector<int> table;  // row-major, table[x*n + y] = x*y
  int identity = -1;
  std::vector<int> inverses;

  int mul(int x, int y) const { return table[static_cast<size_t>(x) * n + y]; }
  int inv(int x) const { return inverses[x]; }

  int conj(int x, int g) const { return mul(mul(g, x), inv(g)); }  // x^g = g x g^-1

  int pow(int x, long long e) const {
    if (e < 0) { x = inv(x); e = -e; }
    int acc = identity;
    while (e > 0) {
      if (e & 1) acc = mul(acc, x);
      x = mul(x, x);
      e >>= 1;
    }
    return acc;
  }

  int order_of(int x) const {
    int y = x, k = 1;
    while (y != identity) { y = mul(y, x); ++k; }
    return k;
  }

  // sorted multiset of element orders, as (order, count) pairs
  std::vector<std::pair<int, int>> order_histogram() const {
    std::map<int, int> h;
    for (int x = 0; x < n; ++x) h[order_of(x)]++;
    return {h.begin(), h.end()};
  }
};

struct ValidationOptions {
  bool force_full_associativity = false;
  int full_check_cap = 256;       // full O(n^3) associativity check up to here
  uint64_t sample_seed = 0x5eedULL;
};

namespace detail {

inline void check_latin(const std::vector<int>& t, int n) {
  std::vector<char> seen(n);
  for (int r = 0; r < n; ++r) {
    std::fill(seen.begin(), seen.end(), 0);
    for (int c = 0; c < n; ++c) {
      int v = t[static_cast<size_t>(r) * n + c];
      if (v < 0 || v >= n)
        throw NotAGroup("entry out of range at row " + std::to_string(r + 1) +
                       ", column " + std::to_string(c + 1));
      if (seen[v])
        throw NotAGroup("row " + std::to_string(r + 1) + " is not a permutation (value " +
                       std::to_string(v + 1) + " repeats)");
      seen[v] = 1;
    }
  }
  for (int c = 0; c < n; ++c) {
    std::fill(seen.begin(), seen.end(), 0);
    for (int r = 0; r < n; ++r) {
      int v = t[static_cast<size_t>(r) * n + c];
      if (seen[v])
        throw NotAGroup("column " + std::to_string(c + 1) + " is not a permutation (value " +
                       std::to_string(v + 1) + " repeats)");
      seen[v] = 1;
    }
  }
}

inline void check_assoc_triple(const GroupTable& g, int a, int b, int c) {
  int l = g.mul(g.mul(a, b), c);
  int r = g.mul(a, g.mul(b, c));
  if (l != r)
    throw NotAGroup("associativity fails at (" + std::to_string(a + 1) + "," +
                   std::to_string(b + 1) + "," + std::to_string(c + 1) + "): (ab)c=" +
                   std::to_string(l + 1) + " but a(bc)=" + std::to_string(r + 1));
}

}  // namespace detail

// Validates a 0-based table and builds the cached structure. Identity is
// auto-detected; it need not be element 0.
inline GroupTable make_group(int n, std::vector<int> table,
                             const ValidationOptions& opts = {}) {
  if (n <= 0) throw NotAGroup("group order must be positive");
  if (static_cast<long long>(table.size()) != static_cast<long long>(n) * n)
    throw NotAGroup("table size does not match order");
  detail::check_latin(table, n);

  GroupTable g;
  g.n = n;
  g.table = std::move(table);

  for (int e = 0; e < n; ++e) {
    bool ok = true;
    for (int x = 0; x < n && ok; ++x)
      if (g.table[static_cast<size_t>(e) * n + x] != x ||
          g.table[static_cast<size_t>(x) * n + e] != x)
        ok = false;
    if (ok) { g.identity = e; break; }
  }
  if (g.identity < 0) throw NotAGroup("no two-sided identity element");

  g.inverses.assign(n, -1);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y)
      if (g.mul(x, y) == g.identity) { g.inverses[x] = y; break; }
    int y = g.inverses[x];
    if (y < 0 || g.mul(y, x) != g.identity)
      throw NotAGroup("element " + std::to_string(x + 1) + " has no two-sided inverse");
  }

  if (n <= opts.full_check_cap || opts.force_full_associativity) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) detail::check_assoc_triple(g, a, b, c);
  } else {
    std::mt19937_64 rng(opts.sample_seed);
    std::uniform_int_distribution<int> d(0, n - 1);
    long long samples = 10LL * n * n;
    for (long long i = 0; i < samples; ++i)
      detail::check_assoc_triple(g, d(rng), d(rng), d(rng));
  }
  return g;
}

// .gtab format: optional '#' comment lines; first data line is n; then n lines
// of n whitespace-separated 1-based element ids, row i column j holding i*j.
inline GroupTable load_group(std::istream& in, const ValidationOptions& opts = {}) {
  std::vector<long long> tokens;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t i = line.find_first_not_of(" \t\r");
    if (i == std::string::npos) continue;
    if (line[i] == '#') continue;
    std::istringstream ls(line.substr(i));
    long long v;
    while (ls >> v) tokens.push_back(v);
    if (!ls.eof())
      throw ParseError("non-numeric token on line " + std::to_string(lineno));
  }
  if (tokens.empty()) throw ParseError("empty input");
  long long n = tokens[0];
  if (n <= 0 || n > 100000) throw ParseError("invalid group order " + std::to_string(n));
  if (static_cast<long long>(tokens.size()) != 1 + n * n)
    throw ParseError("expected " + std::to_string(n * n) + " table entries, found " +
                    std::to_string(tokens.size() - 1));
  std::vector<int> t(static_cast<size_t>(n) * n);
  for (long long k = 0; k < n * n; ++k) {
    long long v = tokens[1 + k];
    if (v < 1 || v > n)
      throw ParseError("table entry " + std::to_string(v) + " outside 1.." + std::to_string(n));
    t[k] = static_cast<int>(v - 1);
  }
  return make_group(static_cast<int>(n), std::move(t), opts);
}

inline GroupTable load_group_string(const std::string& text,
                                    const ValidationOptions& opts = {}) {
  std::istringstream in(text);
  return load_group(in, opts);
}

// Bit-exact writer: LF line endings, single-space separators, no trailing
// whitespace, no comments.
inline std::string write_gtab(const GroupTable& g) {
  std::string out = std::to_string(g.n);
  out.push_back('\n');
  for (int r = 0; r < g.n; ++r) {
    for (int c = 0; c < g.n; ++c) {
      if (c) out.push_back(' ');
      out += std::to_string(g.mul(r, c) + 1);
    }
    out.push_back('\n');
  }
  return out;
}

// Relabels a group by a permutation of element ids: new id of x is perm[x].
inline GroupTable relabel_group(const GroupTable& g, const std::vector<int>& perm) {
  std::vector<int> t(static_cast<size_t>(g.n) * g.n);
  for (int x = 0; x < g.n; ++x)
    for (int y = 0; y < g.n; ++y)
      t[static_cast<size_t>(perm[x]) * g.n + perm[y]] = perm[g.mul(x, y)];
  return make_group(g.n, std::move(t));
}

}  // namespace grpiso
