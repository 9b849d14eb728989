#pragma once

#include <deque>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "grpiso/errors.hpp"
#include "grpiso/group_table.hpp"
#include "grpiso/structure.hpp"
#include "grpiso/subgroup.hpp"

namespace grpiso {

// Ascending subgroup chain 1 = G_0 < ... < G_m = G with socle labels on the
// subgroups that are socles or preimages of socles.
struct LabeledSeries {
  const GroupTable* parent = nullptr;
  std::vector<SubgroupSet> chain;
  std::vector<char> socle_flags;

  int length() const { return static_cast<int>(chain.size()) - 1; }
};

// Per-socle-level index lists selecting the candidate L at each iteration of
// the socle tower loop.
struct ChoiceSeq {
  std::vector<std::vector<int>> per_level;

  bool operator==(const ChoiceSeq& o) const { return per_level == o.per_level; }
};

// Simple members of minimal_normal_subgroups(G); callers use this on
// characteristically simple groups.
inline std::vector<SubgroupSet> simple_minimal_normal_subgroups(const GroupTable& g) {
  std::vector<SubgroupSet> out;
  for (auto& m : minimal_normal_subgroups(g)) {
    SubgroupTable st = restrict_to_subgroup(g, m.members);
    if (st.table.n >= 2 && is_simple(st.table)) out.push_back(std::move(m));
  }
  return out;
}

namespace detail {

// Candidate pool T of the socle tower loop: simple minimal normal subgroups
// collected from every minimal normal subgroup, mapped back to g's ids,
// deduplicated and sorted by member sets.
inline std::vector<ElementSet> socle_tower_candidates(const GroupTable& g) {
  std::vector<ElementSet> t;
  for (const auto& n : minimal_normal_subgroups(g)) {
    SubgroupTable st = restrict_to_subgroup(g, n.members);
    for (const auto& m : simple_minimal_normal_subgroups(st.table)) {
      ElementSet mapped(g.n);
      for (int x : m.elements()) mapped.insert(st.to_parent[x]);
      bool dup = false;
      for (const auto& o : t)
        if (o == mapped) { dup = true; break; }
      if (!dup) t.push_back(std::move(mapped));
    }
  }
  std::sort(t.begin(), t.end(),
            [](const ElementSet& a, const ElementSet& b) { return a.lex_less(b); });
  return t;
}

struct SeriesLevel {
  const GroupTable* group = nullptr;
  SubgroupSet soc;
  std::vector<ElementSet> initial_t;
  std::optional<QuotientView> view;  // quotient by soc when soc != group
};

// Quotient tower G, G/soc(G), ... down to a group equal to its own socle.
// The tower itself is choice-independent.
inline std::deque<SeriesLevel> build_series_levels(const GroupTable& g) {
  std::deque<SeriesLevel> levels;
  const GroupTable* cur = &g;
  while (true) {
    SeriesLevel lv;
    lv.group = cur;
    lv.soc = socle(*cur);
    lv.initial_t = socle_tower_candidates(*cur);
    bool full = lv.soc.size() == cur->n;
    if (!full) lv.view = quotient(*cur, lv.soc.members);
    levels.push_back(std::move(lv));
    if (full) break;
    cur = &levels.back().view->quotient;
  }
  return levels;
}

struct TowerState {
  ElementSet k;
  std::vector<ElementSet> t;
  std::vector<ElementSet> chain;  // inserted K values, ending at soc
};

inline TowerState tower_start(const SeriesLevel& lv) {
  TowerState s;
  s.k = ElementSet(lv.group->n);
  s.k.insert(lv.group->identity);
  s.t = lv.initial_t;
  return s;
}

// One iteration of the socle tower loop: K := K x L for the chosen candidate,
// then filter and deduplicate the pool by the products K x L'.
inline void tower_step(const GroupTable& g, TowerState& s, int idx) {
  if (idx < 0 || idx >= static_cast<int>(s.t.size()))
    throw ChoiceOutOfRange("choice index " + std::to_string(idx) + " out of range");
  const ElementSet& l = s.t[idx];
  if (s.k.intersect(l).size() != 1)
    throw NonMatchingChoice("chosen candidate meets the current product nontrivially");
  ElementSet p = product_set(g, s.k, l);
  if (static_cast<long long>(p.size()) !=
          static_cast<long long>(s.k.size()) * l.size() ||
      !is_closed_under_product(g, p))
    throw Error("socle tower product is not a direct product");
  s.k = std::move(p);
  s.chain.push_back(s.k);

  std::vector<ElementSet> kept;
  std::vector<ElementSet> products;
  for (auto& cand : s.t) {
    if (s.k.intersect(cand).size() != 1) continue;
    ElementSet prod = product_set(g, s.k, cand);
    bool dup = false;
    for (const auto& seen : products)
      if (seen == prod) { dup = true; break; }
    if (!dup) {
      products.push_back(std::move(prod));
      kept.push_back(cand);
    }
  }
  s.t = std::move(kept);
}

// Lifts level-chain entries to level-0 ids and assembles the labeled series.
inline LabeledSeries assemble_series(const GroupTable& g,
                                     const std::deque<SeriesLevel>& levels,
                                     const std::vector<std::vector<ElementSet>>& level_chains) {
  LabeledSeries s;
  s.parent = &g;
  ElementSet triv(g.n);
  triv.insert(g.identity);
  s.chain.push_back(SubgroupSet{&g, triv});
  s.socle_flags.push_back(0);
  for (size_t li = 0; li < levels.size(); ++li) {
    for (size_t j = 0; j < level_chains[li].size(); ++j) {
      ElementSet e = level_chains[li][j];
      for (int down = static_cast<int>(li) - 1; down >= 0; --down)
        e = preimage(*levels[down].view, e);
      s.chain.push_back(SubgroupSet{&g, std::move(e)});
      s.socle_flags.push_back(j + 1 == level_chains[li].size() ? 1 : 0);
    }
  }
  return s;
}

}  // namespace detail

// Composition series for the provided choice sequence (replayed exactly), or
// for the default first choice at every step.
inline LabeledSeries composition_series(const GroupTable& g,
                                        const ChoiceSeq* choices = nullptr) {
  if (g.n == 1) {
    LabeledSeries s;
    s.parent = &g;
    ElementSet triv(1);
    triv.insert(0);
    s.chain.push_back(SubgroupSet{&g, std::move(triv)});
    s.socle_flags.push_back(0);
    return s;
  }
  auto levels = detail::build_series_levels(g);
  if (choices && choices->per_level.size() != levels.size())
    throw ChoiceOutOfRange("choice sequence has wrong level count");
  std::vector<std::vector<ElementSet>> level_chains(levels.size());
  for (size_t li = 0; li < levels.size(); ++li) {
    detail::TowerState st = detail::tower_start(levels[li]);
    size_t step = 0;
    while (st.k.size() != levels[li].soc.size()) {
      int idx = 0;
      if (choices) {
        if (step >= choices->per_level[li].size())
          throw ChoiceOutOfRange("choice sequence too short for level " + std::to_string(li));
        idx = choices->per_level[li][step];
      }
      detail::tower_step(*levels[li].group, st, idx);
      ++step;
    }
    if (choices && step != choices->per_level[li].size())
      throw ChoiceOutOfRange("choice sequence too long for level " + std::to_string(li));
    level_chains[li] = std::move(st.chain);
  }
  return detail::assemble_series(g, levels, level_chains);
}

inline LabeledSeries composition_series(const GroupTable& g, const ChoiceSeq& choices) {
  return composition_series(g, &choices);
}

// Depth-first enumeration of every reachable choice sequence, in candidate
// order (candidate pools are sorted by member sets). The visitor returns
// false to stop early. The first yield is the default all-zero sequence.
inline void enumerate_series(
    const GroupTable& g,
    const std::function<bool(const ChoiceSeq&, const LabeledSeries&)>& visit) {
  if (g.n == 1) {
    LabeledSeries s = composition_series(g);
    visit(ChoiceSeq{}, s);
    return;
  }
  auto levels = detail::build_series_levels(g);
  const size_t nl = levels.size();
  ChoiceSeq seq;
  seq.per_level.resize(nl);
  std::vector<std::vector<ElementSet>> level_chains(nl);

  std::function<bool(size_t)> rec_level = [&](size_t li) -> bool {
    if (li == nl) {
      LabeledSeries s = detail::assemble_series(g, levels, level_chains);
      return visit(seq, s);
    }
    std::function<bool(detail::TowerState&)> rec_tower =
        [&](detail::TowerState& st) -> bool {
      if (st.k.size() == levels[li].soc.size()) {
        level_chains[li] = st.chain;
        return rec_level(li + 1);
      }
      const int options = static_cast<int>(st.t.size());
      for (int idx = 0; idx < options; ++idx) {
        detail::TowerState next = st;
        detail::tower_step(*levels[li].group, next, idx);
        seq.per_level[li].push_back(idx);
        bool keep = rec_tower(next);
        seq.per_level[li].pop_back();
        if (!keep) return false;
      }
      return true;
    };
    detail::TowerState st = detail::tower_start(levels[li]);
    return rec_tower(st);
  };
  rec_level(0);
}

// Per-level counts of distinct tower sequences; the total choice count is
// their product (levels are independent).
inline std::vector<long long> level_choice_counts(const GroupTable& g) {
  if (g.n == 1) return {};
  auto levels = detail::build_series_levels(g);
  std::vector<long long> counts;
  for (auto& lv : levels) {
    long long c = 0;
    std::function<void(detail::TowerState&)> rec = [&](detail::TowerState& st) {
      if (st.k.size() == lv.soc.size()) {
        ++c;
        return;
      }
      for (int idx = 0; idx < static_cast<int>(st.t.size()); ++idx) {
        detail::TowerState next = st;
        detail::tower_step(*lv.group, next, idx);
        rec(next);
      }
    };
    detail::TowerState st = detail::tower_start(lv);
    rec(st);
    counts.push_back(c);
  }
  return counts;
}

inline long long count_choices(const GroupTable& g) {
  long long total = 1;
  for (long long c : level_choice_counts(g)) {
    if (c != 0 && total > std::numeric_limits<long long>::max() / c)
      return std::numeric_limits<long long>::max();
    total *= c;
  }
  return total;
}

// ---- Hall composition series: a Sylow basis plus one series per member ----

struct HallComponent {
  std::shared_ptr<SubgroupTable> sub;     // P_i as a group
  LabeledSeries series_local;             // chain over sub->table ids
  std::vector<ElementSet> chain_parent;   // same chain over parent ids
};

struct HallSeries {
  const GroupTable* parent = nullptr;
  SylowBasis basis;                       // primes descending
  std::vector<HallComponent> comps;
};

namespace detail {

inline HallComponent make_hall_component(const GroupTable& g, const SubgroupSet& p,
                                         const LabeledSeries& local,
                                         std::shared_ptr<SubgroupTable> sub) {
  HallComponent c;
  c.sub = std::move(sub);
  c.series_local = local;
  for (const auto& entry : local.chain) {
    ElementSet e(g.n);
    for (int x : entry.elements()) e.insert(c.sub->to_parent[x]);
    c.chain_parent.push_back(std::move(e));
  }
  (void)p;
  return c;
}

}  // namespace detail

// Hall series with default composition-series choices for every basis member.
inline HallSeries default_hall_series(const GroupTable& g, const SylowBasis& basis) {
  HallSeries hs;
  hs.parent = &g;
  hs.basis = basis;
  for (const auto& p : basis.subgroups) {
    auto sub = std::make_shared<SubgroupTable>(restrict_to_subgroup(g, p.members));
    LabeledSeries local = composition_series(sub->table);
    hs.comps.push_back(detail::make_hall_component(g, p, local, sub));
  }
  return hs;
}

// Enumerates all per-member choice combinations for a fixed Sylow basis.
// The visitor returns false to stop early.
inline void enumerate_hall_series(
    const GroupTable& g, const SylowBasis& basis,
    const std::function<bool(const HallSeries&)>& visit) {
  const int l = basis.num_primes();
  HallSeries hs;
  hs.parent = &g;
  hs.basis = basis;
  hs.comps.resize(l);
  std::vector<std::shared_ptr<SubgroupTable>> subs;
  for (const auto& p : basis.subgroups)
    subs.push_back(std::make_shared<SubgroupTable>(restrict_to_subgroup(g, p.members)));

  std::function<bool(int)> rec = [&](int i) -> bool {
    if (i == l) return visit(hs);
    bool keep = true;
    enumerate_series(subs[i]->table,
                     [&](const ChoiceSeq&, const LabeledSeries& local) -> bool {
                       hs.comps[i] = detail::make_hall_component(
                           g, basis.subgroups[i], local, subs[i]);
                       keep = rec(i + 1);
                       return keep;
                     });
    return keep;
  };
  rec(0);
}

}  // namespace grpiso
