#pragma once

#include <chrono>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "grpiso/canonical_forms.hpp"
#include "grpiso/comp_series.hpp"
#include "grpiso/errors.hpp"
#include "grpiso/gen_order.hpp"
#include "grpiso/graph_canon.hpp"
#include "grpiso/graph_encoding.hpp"
#include "grpiso/group_table.hpp"
#include "grpiso/structure.hpp"

namespace grpiso {

struct IsoStats {
  long long choices = 0;        // candidates enumerated on the second group
  long long canonizations = 0;  // graph canonizations performed
  double millis = 0;
};

struct IsoVerdict {
  bool isomorphic = false;
  std::optional<std::vector<int>> witness;  // element id of G -> element id of H
  std::string method;
  IsoStats stats;
};

struct IsoOptions {
  bool prefilter = true;   // element-order-multiset reject in auto mode
  bool want_witness = true;
  long long samples = 0;   // randomized variant; 0 = default birthday bound
  uint64_t seed = 1;
  long long canon_budget = 400'000'000;
};

inline bool verify_isomorphism(const GroupTable& g, const GroupTable& h,
                               const std::vector<int>& phi) {
  if (g.n != h.n || static_cast<int>(phi.size()) != g.n) return false;
  std::vector<char> hit(h.n, 0);
  for (int x = 0; x < g.n; ++x) {
    if (phi[x] < 0 || phi[x] >= h.n || hit[phi[x]]) return false;
    hit[phi[x]] = 1;
  }
  for (int x = 0; x < g.n; ++x)
    for (int y = 0; y < g.n; ++y)
      if (phi[g.mul(x, y)] != h.mul(phi[x], phi[y])) return false;
  return true;
}

namespace iso_detail {

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

inline std::vector<int> element_orders_sorted(const GroupTable& g) {
  std::vector<int> o(g.n);
  for (int x = 0; x < g.n; ++x) o[x] = g.order_of(x);
  std::sort(o.begin(), o.end());
  return o;
}

inline std::vector<int> centralizer_sizes(const GroupTable& g) {
  std::vector<int> cz(g.n, 0);
  for (int x = 0; x < g.n; ++x)
    for (int y = 0; y < g.n; ++y)
      if (g.mul(x, y) == g.mul(y, x)) ++cz[x];
  return cz;
}

// Invariant key of a subgroup under any ambient isomorphism: order, member
// order histogram, and the multiset of ambient centralizer sizes.
inline std::vector<long long> subgroup_signature(const GroupTable& g,
                                                 const std::vector<int>& cz,
                                                 const ElementSet& s) {
  std::vector<long long> key{s.size()};
  std::map<int, int> hist;
  std::vector<int> czm;
  for (int x : s.elements()) {
    hist[g.order_of(x)]++;
    czm.push_back(cz[x]);
  }
  for (auto [o, c] : hist) {
    key.push_back(o);
    key.push_back(c);
  }
  key.push_back(-1);
  std::sort(czm.begin(), czm.end());
  for (int c : czm) key.push_back(c);
  return key;
}

using ChainSignature = std::vector<std::vector<long long>>;

inline ChainSignature series_signature(const GroupTable& g, const std::vector<int>& cz,
                                       const LabeledSeries& s) {
  ChainSignature sig;
  for (const auto& entry : s.chain) sig.push_back(subgroup_signature(g, cz, entry.members));
  return sig;
}

inline ChainSignature hall_signature(const GroupTable& g, const std::vector<int>& cz,
                                     const HallSeries& hs) {
  ChainSignature sig;
  for (int i = 0; i < hs.basis.num_primes(); ++i) {
    sig.push_back({hs.basis.primes[i], hs.basis.exponents[i]});
    for (const auto& entry : hs.comps[i].chain_parent)
      sig.push_back(subgroup_signature(g, cz, entry));
  }
  return sig;
}

// Enumerates all image tuples of size s over distinct elements of h, in
// id-lexicographic order. Returns true if the visitor stopped.
inline bool for_each_distinct_tuple(int n, int s,
                                    const std::function<bool(const std::vector<int>&)>& visit) {
  std::vector<int> tuple;
  std::function<bool(void)> rec = [&]() -> bool {
    if (static_cast<int>(tuple.size()) == s) return !visit(tuple);
    for (int v = 0; v < n; ++v) {
      bool dup = false;
      for (int u : tuple)
        if (u == v) { dup = true; break; }
      if (dup) continue;
      tuple.push_back(v);
      bool stop = rec();
      tuple.pop_back();
      if (stop) return true;
    }
    return false;
  };
  return rec();
}

}  // namespace iso_detail

// Generator-enumeration baseline: fix a minimal-size ordered generating tuple
// of G by brute force and try every image tuple in H.
inline IsoVerdict iso_genenum(const GroupTable& g, const GroupTable& h,
                              const IsoOptions& opts = {}) {
  iso_detail::Timer timer;
  IsoVerdict v;
  v.method = "genenum";
  if (g.n != h.n) {
    v.stats.millis = timer.ms();
    return v;
  }
  std::vector<int> gens = first_minimal_generating_tuple(g);
  const int s = static_cast<int>(gens.size());
  iso_detail::for_each_distinct_tuple(h.n, s, [&](const std::vector<int>& images) -> bool {
    v.stats.choices++;
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < s; ++i) pairs.emplace_back(gens[i], images[i]);
    auto phi = extend_to_isomorphism(g, h, pairs);
    if (phi) {
      v.isomorphic = true;
      if (opts.want_witness) v.witness = std::move(*phi);
      return false;
    }
    return true;
  });
  v.stats.millis = timer.ms();
  return v;
}

// p-group route: fix one composition series of G, enumerate the series of H
// over all socle-decomposition choices, and compare cone-graph canonical
// forms. Falls back to generator enumeration when p is large relative to n
// (series route iff p <= log_p n).
inline IsoVerdict iso_pgroup(const GroupTable& g, const GroupTable& h,
                             const IsoOptions& opts = {}) {
  auto fg = factorize(g.n), fh = factorize(h.n);
  if (fg.size() != 1 || fh.size() != 1) throw NotPGroup("inputs must be p-groups");
  if (fg[0].first != fh[0].first) throw NotPGroup("inputs are p-groups for different primes");
  const int p = fg[0].first;
  if (g.n != h.n) {
    IsoVerdict v;
    v.method = "pgroup-series";
    return v;
  }
  if (p * std::log(static_cast<double>(p)) > std::log(static_cast<double>(g.n)) + 1e-9)
    return iso_genenum(g, h, opts);

  iso_detail::Timer timer;
  IsoVerdict v;
  v.method = "pgroup-series";
  CanonStats cstats;
  CanonOptions copts{opts.canon_budget, &cstats};

  LabeledSeries sg = composition_series(g);
  XGraph xg = build_X(sg);
  CanonicalGraphForm cg = canonical_form(xg.graph, copts);
  auto czg = iso_detail::centralizer_sizes(g);
  auto czh = iso_detail::centralizer_sizes(h);
  auto sig_g = iso_detail::series_signature(g, czg, sg);

  enumerate_series(h, [&](const ChoiceSeq&, const LabeledSeries& sh) -> bool {
    v.stats.choices++;
    if (iso_detail::series_signature(h, czh, sh) != sig_g) return true;
    XGraph xh = build_X(sh);
    CanonicalGraphForm ch = canonical_form(xh.graph, copts);
    if (ch.encoding != cg.encoding) return true;
    v.isomorphic = true;
    if (opts.want_witness) {
      DecodedGroup dec;
      decode_series_form(cg.encoding, g.n, sg.length(), &dec);
      std::vector<int> rank_to_h(g.n, -1);
      for (int e = 0; e < h.n; ++e)
        rank_to_h[dec.rank_of_node[ch.labeling[xh.element_leaf[e]]]] = e;
      std::vector<int> phi(g.n);
      for (int e = 0; e < g.n; ++e)
        phi[e] = rank_to_h[dec.rank_of_node[cg.labeling[xg.element_leaf[e]]]];
      if (!verify_isomorphism(g, h, phi)) throw Error("series witness failed verification");
      for (size_t i = 0; i < sg.chain.size(); ++i) {
        for (int x : sg.chain[i].elements())
          if (!sh.chain[i].contains(phi[x])) throw Error("witness does not map the chain");
      }
      v.witness = std::move(phi);
    }
    return false;
  });
  v.stats.canonizations = cstats.calls;
  v.stats.millis = timer.ms();
  return v;
}

// Fixed-generator Hall composition-series isomorphism: check that the
// generator map extends over the large-prime product and respects its chains,
// then decide by cone-graph isomorphism.
inline bool iso_hall_fixed(const HallSeries& hsg, const GenVector& gvg,
                           const HallSeries& hsh, const GenVector& gvh,
                           const IsoOptions& opts = {}, IsoStats* stats = nullptr) {
  if (hsg.basis.primes != hsh.basis.primes || hsg.basis.exponents != hsh.basis.exponents ||
      gvg.kappa != gvh.kappa || gvg.alpha != gvh.alpha)
    throw SignatureMismatch("prime signatures or parameters differ");
  const GroupTable& g = *hsg.parent;
  const GroupTable& h = *hsh.parent;
  const int kappa = gvg.kappa;

  ElementSet ug(g.n), uh(h.n);
  ug.insert(g.identity);
  uh.insert(h.identity);
  for (int i = 0; i < kappa; ++i) {
    ug = product_set(g, ug, hsg.basis.subgroups[i].members);
    uh = product_set(h, uh, hsh.basis.subgroups[i].members);
  }
  SubgroupTable sg = restrict_to_subgroup(g, ug);
  SubgroupTable sh = restrict_to_subgroup(h, uh);
  auto fg = gvg.flat(), fh = gvh.flat();
  if (fg.size() != fh.size()) throw SignatureMismatch("generator vectors differ in shape");
  std::vector<std::pair<int, int>> pairs;
  for (size_t i = 0; i < fg.size(); ++i)
    pairs.emplace_back(sg.from_parent[fg[i]], sh.from_parent[fh[i]]);
  auto psi = extend_to_isomorphism(sg.table, sh.table, pairs);
  if (!psi) return false;
  for (int i = 0; i < kappa; ++i) {
    const auto& cg_chain = hsg.comps[i].chain_parent;
    const auto& ch_chain = hsh.comps[i].chain_parent;
    if (cg_chain.size() != ch_chain.size()) throw SignatureMismatch("chain lengths differ");
    for (size_t j = 0; j < cg_chain.size(); ++j)
      for (int x : cg_chain[j].elements()) {
        int im = sh.to_parent[(*psi)[sg.from_parent[x]]];
        if (!ch_chain[j].contains(im)) return false;
      }
  }
  CanonStats cstats;
  CanonOptions copts{opts.canon_budget, &cstats};
  XGraph xg = build_X_hall(hsg, gvg);
  XGraph xh = build_X_hall(hsh, gvh);
  bool iso = isomorphic(xg.graph, xh.graph, copts);
  if (stats) stats->canonizations += cstats.calls;
  return iso;
}

// Solvable route: fix a Sylow basis and Hall series for G, then compare its
// Hall canonical form against every Sylow basis of H combined with every
// socle-decomposition choice.
inline IsoVerdict iso_solvable(const GroupTable& g, const GroupTable& h,
                               const IsoOptions& opts = {}) {
  iso_detail::Timer timer;
  IsoVerdict v;
  v.method = "solvable-hall";
  if (g.n != h.n) {
    v.stats.millis = timer.ms();
    return v;
  }
  if (g.n == 1) {
    v.isomorphic = true;
    if (opts.want_witness) v.witness = std::vector<int>{0};
    v.stats.millis = timer.ms();
    return v;
  }
  CanonStats cstats;
  CanonOptions copts{opts.canon_budget, &cstats};

  SylowBasis bg = sylow_basis(g);  // throws NotSolvable when g is not solvable
  HallSeries hsg = default_hall_series(g, bg);
  HallCanon hcg = can_hall_full(hsg, copts);

  auto czg = iso_detail::centralizer_sizes(g);
  auto czh = iso_detail::centralizer_sizes(h);
  auto sig_g = iso_detail::hall_signature(g, czg, hsg);

  SylowBasis bh = sylow_basis(h);
  for (const SylowBasis& basis : all_sylow_bases(h, bh)) {
    bool stop = false;
    enumerate_hall_series(h, basis, [&](const HallSeries& hsh) -> bool {
      v.stats.choices++;
      if (iso_detail::hall_signature(h, czh, hsh) != sig_g) return true;
      HallCanon hch = can_hall_full(hsh, copts);
      if (hch.inv != hcg.inv || !(hch.can == hcg.can)) return true;
      v.isomorphic = true;
      if (opts.want_witness) {
        std::vector<int> label_to_h(h.n + 1, -1);
        for (int e = 0; e < h.n; ++e) label_to_h[hch.psi[e]] = e;
        std::vector<int> phi(g.n);
        for (int e = 0; e < g.n; ++e) phi[e] = label_to_h[hcg.psi[e]];
        if (!verify_isomorphism(g, h, phi)) throw Error("hall witness failed verification");
        v.witness = std::move(phi);
      }
      stop = true;
      return false;
    });
    if (stop) break;
  }
  v.stats.canonizations = cstats.calls;
  v.stats.millis = timer.ms();
  return v;
}

// Randomized collision variant, one-sided error: sample choice sequences (or
// generating tuples) uniformly for both groups, canonize, sort and merge.
inline IsoVerdict iso_randomized(const GroupTable& g, const GroupTable& h,
                                 const IsoOptions& opts = {}) {
  iso_detail::Timer timer;
  IsoVerdict v;
  v.method = "randomized";
  if (g.n != h.n) {
    v.stats.millis = timer.ms();
    return v;
  }
  CanonStats cstats;
  CanonOptions copts{opts.canon_budget, &cstats};
  std::mt19937_64 rng(opts.seed);

  auto fg = factorize(g.n);
  bool pgroups = fg.size() == 1 && factorize(h.n).size() == 1;

  std::vector<std::string> keys_g, keys_h;
  if (pgroups) {
    std::vector<ChoiceSeq> space_g, space_h;
    enumerate_series(g, [&](const ChoiceSeq& c, const LabeledSeries&) {
      space_g.push_back(c);
      return true;
    });
    enumerate_series(h, [&](const ChoiceSeq& c, const LabeledSeries&) {
      space_h.push_back(c);
      return true;
    });
    long long total = std::max(space_g.size(), space_h.size());
    long long samples = opts.samples > 0
                            ? opts.samples
                            : static_cast<long long>(
                                  std::ceil(2.0 * std::sqrt(static_cast<double>(total))));
    samples = std::max<long long>(samples, 1);
    v.stats.choices = 2 * samples;
    for (long long i = 0; i < samples; ++i) {
      const ChoiceSeq& cg = space_g[rng() % space_g.size()];
      LabeledSeries sg = composition_series(g, cg);
      keys_g.push_back(can_series_full(sg, copts).inv);
      const ChoiceSeq& ch = space_h[rng() % space_h.size()];
      LabeledSeries sh = composition_series(h, ch);
      keys_h.push_back(can_series_full(sh, copts).inv);
    }
  } else {
    int p = smallest_prime_divisor(g.n);
    int l = static_cast<int>(std::ceil(std::log2(static_cast<double>(g.n)) /
                                       std::log2(static_cast<double>(p)) - 1e-9));
    l = std::max(l, 1);
    double tuples = 1;
    for (int i = 0; i < l; ++i) tuples *= (g.n - i);
    long long samples =
        opts.samples > 0 ? opts.samples
                         : static_cast<long long>(std::ceil(2.0 * std::sqrt(tuples)));
    samples = std::max<long long>(samples, 1);
    v.stats.choices = 2 * samples;
    auto sample_side = [&](const GroupTable& grp, std::vector<std::string>& out) {
      std::uniform_int_distribution<int> d(0, grp.n - 1);
      long long got = 0;
      long long guard = 0;
      while (got < samples) {
        if (++guard > samples * 1000) throw Error("rejection sampling stalled");
        std::vector<int> tuple;
        while (static_cast<int>(tuple.size()) < l) {
          int x = d(rng);
          bool dup = false;
          for (int u : tuple)
            if (u == x) dup = true;
          if (!dup) tuple.push_back(x);
        }
        if (subgroup_closure(grp, tuple).size() != grp.n) continue;
        auto m = genenum_table(grp, tuple);
        std::string key;
        key.reserve(static_cast<size_t>(grp.n) * grp.n * 2);
        for (auto& row : m)
          for (int x : row) {
            key.push_back(static_cast<char>(x >> 8));
            key.push_back(static_cast<char>(x & 255));
          }
        out.push_back(std::move(key));
        ++got;
      }
    };
    sample_side(g, keys_g);
    sample_side(h, keys_h);
  }

  std::sort(keys_g.begin(), keys_g.end());
  std::sort(keys_h.begin(), keys_h.end());
  size_t i = 0, j = 0;
  while (i < keys_g.size() && j < keys_h.size()) {
    if (keys_g[i] == keys_h[j]) {
      v.isomorphic = true;
      break;
    }
    if (keys_g[i] < keys_h[j]) ++i;
    else ++j;
  }
  v.stats.canonizations = cstats.calls;
  v.stats.millis = timer.ms();
  return v;
}

enum class IsoMethod { Auto, GenEnum, PGroup, Solvable, Randomized };

inline IsoMethod iso_method_from_string(const std::string& s) {
  if (s == "auto") return IsoMethod::Auto;
  if (s == "genenum") return IsoMethod::GenEnum;
  if (s == "pgroup") return IsoMethod::PGroup;
  if (s == "solvable") return IsoMethod::Solvable;
  if (s == "randomized") return IsoMethod::Randomized;
  throw MethodNotApplicable("unknown method '" + s + "'");
}

// Dispatch: cheap invariant rejects, then route p-groups to the series
// reduction, solvable groups to the Hall reduction, everything else to
// generator enumeration.
inline IsoVerdict decide_iso(const GroupTable& g, const GroupTable& h,
                             IsoMethod method = IsoMethod::Auto,
                             const IsoOptions& opts = {}) {
  switch (method) {
    case IsoMethod::GenEnum: return iso_genenum(g, h, opts);
    case IsoMethod::PGroup: return iso_pgroup(g, h, opts);
    case IsoMethod::Solvable: return iso_solvable(g, h, opts);
    case IsoMethod::Randomized: return iso_randomized(g, h, opts);
    case IsoMethod::Auto: break;
  }
  iso_detail::Timer timer;
  if (g.n != h.n) {
    IsoVerdict v;
    v.method = "order-reject";
    v.stats.millis = timer.ms();
    return v;
  }
  if (opts.prefilter &&
      iso_detail::element_orders_sorted(g) != iso_detail::element_orders_sorted(h)) {
    IsoVerdict v;
    v.method = "prefilter-reject";
    v.stats.millis = timer.ms();
    return v;
  }
  Classification cg = classify(g);
  if (cg.is_p_group) return iso_pgroup(g, h, opts);
  Classification ch = classify(h);
  if (cg.is_solvable != ch.is_solvable) {
    IsoVerdict v;
    v.method = "structure-reject";
    v.stats.millis = timer.ms();
    return v;
  }
  if (cg.is_solvable) return iso_solvable(g, h, opts);
  return iso_genenum(g, h, opts);
}

}  // namespace grpiso
