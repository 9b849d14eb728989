#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "grpiso/gen_order.hpp"
#include "grpiso/group_table.hpp"
#include "grpiso/subgroup.hpp"
#include "support.hpp"

using namespace grpiso;
using namespace testsupport;

TEST_CASE("gtab loading detects the unique group of order 2") {
  GroupTable g = load_group_string("2\n1 2\n2 1\n");
  REQUIRE(g.n == 2);
  REQUIRE(g.identity == 0);
  REQUIRE(g.mul(1, 1) == 0);
  REQUIRE(g.inv(1) == 1);
}

TEST_CASE("gtab loading rejects a non-Latin row with a witness") {
  REQUIRE_THROWS_AS(load_group_string("2\n1 2\n2 2\n"), NotAGroup);
  try {
    load_group_string("2\n1 2\n2 2\n");
  } catch (const NotAGroup& e) {
    REQUIRE(std::string(e.what()).find("permutation") != std::string::npos);
  }
}

TEST_CASE("gtab parser errors") {
  REQUIRE_THROWS_AS(load_group_string(""), ParseError);
  REQUIRE_THROWS_AS(load_group_string("2\n1 2\n2\n"), ParseError);
  REQUIRE_THROWS_AS(load_group_string("2\n1 3\n3 1\n"), ParseError);
  REQUIRE_THROWS_AS(load_group_string("x\n"), ParseError);
}

TEST_CASE("identity is auto-detected regardless of position") {
  // S_3 built from permutation composition; identity happens to be element 1
  GroupTable s3 = s3_from_permutations();
  REQUIRE(s3.n == 6);
  REQUIRE(s3.identity == 0);
  // relabel so the identity moves elsewhere
  GroupTable moved = relabel_group(s3, {5, 1, 2, 3, 4, 0});
  REQUIRE(moved.identity == 5);
  // round-trip through the writer and loader
  GroupTable back = load_group_string(write_gtab(moved));
  REQUIRE(back.identity == 5);
  REQUIRE(back.table == moved.table);
}

TEST_CASE("gtab writer is bit-exact") {
  GroupTable z2 = zn(2);
  REQUIRE(write_gtab(z2) == "2\n1 2\n2 1\n");
  // comments and blank lines are accepted on input
  GroupTable g = load_group_string("# comment\n\n2\n# another\n1 2\n2 1\n");
  REQUIRE(g.n == 2);
}

TEST_CASE("associativity failure reports a witness triple") {
  // order-3 Latin square with two-sided identity that is not associative:
  // rows: e fixed, and a*a = e, a*b = b is impossible in a Latin square, so
  // use the standard non-associative quasigroup on 5 points
  std::string text =
      "5\n"
      "1 2 3 4 5\n"
      "2 1 4 5 3\n"
      "3 5 1 2 4\n"
      "4 3 5 1 2\n"
      "5 4 2 3 1\n";
  REQUIRE_THROWS_AS(load_group_string(text), NotAGroup);
}

TEST_CASE("subgroup closure matches the spec examples") {
  GroupTable z6 = zn(6);
  auto h = subgroup_closure(z6, {3});
  REQUIRE(h.elements() == std::vector<int>{0, 3});
  auto triv = subgroup_closure(z6, {});
  REQUIRE(triv.elements() == std::vector<int>{0});
  GroupTable s3 = s3_from_permutations();
  // (12) and (123) generate S_3: find elements of order 2 and 3
  int t = -1, r = -1;
  for (int x = 0; x < 6; ++x) {
    if (s3.order_of(x) == 2 && t < 0) t = x;
    if (s3.order_of(x) == 3 && r < 0) r = x;
  }
  REQUIRE(subgroup_closure(s3, {t, r}).size() == 6);
}

TEST_CASE("subgroup closure is idempotent and monotone") {
  GroupTable d6 = dihedral_group(6);
  auto h1 = subgroup_closure(d6, {2});
  auto h2 = subgroup_closure(d6, h1.elements());
  REQUIRE(h1.members == h2.members);
  auto h3 = subgroup_closure(d6, {2, 3});
  REQUIRE(h1.members.is_subset_of(h3.members));
}

TEST_CASE("normal closure of a 3-cycle in S_3 is A_3") {
  GroupTable s3 = s3_from_permutations();
  int r = -1, t = -1;
  for (int x = 0; x < 6; ++x) {
    if (s3.order_of(x) == 3 && r < 0) r = x;
    if (s3.order_of(x) == 2 && t < 0) t = x;
  }
  auto a3 = normal_closure(s3, {r});
  REQUIRE(a3.size() == 3);
  REQUIRE(is_normal(a3));
  // transpositions generate all of S_3 under conjugation
  REQUIRE(normal_closure(s3, {t}).size() == 6);
  // abelian: normal closure equals plain closure
  GroupTable z12 = zn(12);
  REQUIRE(normal_closure(z12, {8}).members == subgroup_closure(z12, {8}).members);
}

TEST_CASE("is_normal distinguishes A_3 from a point stabilizer") {
  GroupTable s3 = s3_from_permutations();
  int r = -1, t = -1;
  for (int x = 0; x < 6; ++x) {
    if (s3.order_of(x) == 3 && r < 0) r = x;
    if (s3.order_of(x) == 2 && t < 0) t = x;
  }
  REQUIRE(is_normal(subgroup_closure(s3, {r})));
  REQUIRE_FALSE(is_normal(subgroup_closure(s3, {t})));
  GroupTable z8 = zn(8);
  REQUIRE(is_normal(subgroup_closure(z8, {2})));
}

TEST_CASE("quotients have deterministic coset numbering") {
  GroupTable z4 = zn(4);
  auto n = subgroup_closure(z4, {2});
  QuotientView v = quotient(z4, n.members);
  REQUIRE(v.quotient.n == 2);
  REQUIRE(v.representatives == std::vector<int>{0, 1});
  REQUIRE(v.projection == std::vector<int>{0, 1, 0, 1});

  GroupTable s3 = s3_from_permutations();
  int r = -1;
  for (int x = 0; x < 6; ++x)
    if (s3.order_of(x) == 3 && r < 0) r = x;
  QuotientView q = quotient(s3, subgroup_closure(s3, {r}).members);
  REQUIRE(q.quotient.n == 2);

  // quotient by the trivial subgroup is an identity relabeling
  QuotientView t = quotient(z4, subgroup_closure(z4, {}).members);
  REQUIRE(t.quotient.n == 4);
  for (int x = 0; x < 4; ++x) REQUIRE(t.projection[x] == x);

  int tr = -1;
  for (int x = 0; x < 6; ++x)
    if (s3.order_of(x) == 2 && tr < 0) tr = x;
  REQUIRE_THROWS_AS(quotient(s3, subgroup_closure(s3, {tr}).members), NotNormal);
}

TEST_CASE("preimage inverts projection exactly") {
  GroupTable z8 = zn(8);
  auto n = subgroup_closure(z8, {4});
  QuotientView v = quotient(z8, n.members);
  // order-2 subgroup of the quotient Z_4
  auto k = subgroup_closure(v.quotient, {v.projection[2]});
  auto pre = preimage(v, k.members);
  REQUIRE(pre.elements() == std::vector<int>{0, 2, 4, 6});
  // trivial and full cases
  auto triv = subgroup_closure(v.quotient, {});
  REQUIRE(preimage(v, triv.members) == n.members);
  ElementSet full(v.quotient.n);
  for (int x = 0; x < v.quotient.n; ++x) full.insert(x);
  REQUIRE(preimage(v, full).size() == 8);
}

TEST_CASE("quotient then preimage is the identity on subgroups, exhaustively") {
  for (const GroupTable& g : {zn(12), zn(24), dihedral_group(6), zz({2, 2, 2})}) {
    for (const ElementSet& n : all_normal_subgroups(g)) {
      QuotientView v = quotient(g, n);
      for (const ElementSet& k : all_subgroups(v.quotient)) {
        ElementSet pre = preimage(v, k);
        REQUIRE(static_cast<long long>(pre.size()) ==
                static_cast<long long>(k.size()) * n.size());
        // project back
        ElementSet back(v.quotient.n);
        for (int x : pre.elements()) back.insert(v.projection[x]);
        REQUIRE(back == k);
      }
    }
  }
}

TEST_CASE("product_set covers cosets and degenerate cases") {
  GroupTable s3 = s3_from_permutations();
  int r = -1, t = -1;
  for (int x = 0; x < 6; ++x) {
    if (s3.order_of(x) == 3 && r < 0) r = x;
    if (s3.order_of(x) == 2 && t < 0) t = x;
  }
  auto a3 = subgroup_closure(s3, {r});
  auto c2 = subgroup_closure(s3, {t});
  REQUIRE(product_set(s3, c2.members, a3.members).size() == 6);
  REQUIRE(product_set(s3, a3.members, a3.members) == a3.members);
  auto triv = subgroup_closure(s3, {});
  REQUIRE(product_set(s3, triv.members, a3.members) == a3.members);
}

TEST_CASE("cayley_order ranks by minimal words") {
  GroupTable z4 = zn(4);
  GenOrder o1 = cayley_order(z4, {1});
  REQUIRE(o1.rank == std::vector<int>{0, 1, 2, 3});
  GenOrder o3 = cayley_order(z4, {3});
  REQUIRE(o3.rank[0] == 0);
  REQUIRE(o3.rank[3] == 1);
  REQUIRE(o3.rank[2] == 2);
  REQUIRE(o3.rank[1] == 3);
  REQUIRE_THROWS_AS(cayley_order(z4, {2}), NotGenerating);
}

TEST_CASE("cayley_order BFS word-length oracle on Z_4 with generator 3") {
  // independent oracle: explicit word lengths 3 -> 1, 3+3=2 -> 2, 3+3+3=1 -> 3
  GroupTable z4 = zn(4);
  GenOrder o = cayley_order(z4, {3});
  std::vector<int> expect_rank{0, 3, 2, 1};
  REQUIRE(o.rank == expect_rank);
}

TEST_CASE("cayley_order is isomorphism-invariant on groups of order <= 16") {
  // Prop: rank_g(x) = rank_h(phi(x)) whenever phi(g_i) = h_i
  for (const GroupTable& g : {zn(8), zz({2, 4}), dihedral_group(4), s3_from_permutations()}) {
    std::vector<int> gens = first_minimal_generating_tuple(g);
    GenOrder og = cayley_order(g, gens);
    for (const auto& phi : all_isomorphisms(g, g)) {
      std::vector<int> hgens;
      for (int x : gens) hgens.push_back(phi[x]);
      GenOrder oh = cayley_order(g, hgens);
      for (int x = 0; x < g.n; ++x) REQUIRE(og.rank[x] == oh.rank[phi[x]]);
    }
  }
}

TEST_CASE("extend_to_isomorphism matches the spec examples") {
  GroupTable z4 = zn(4);
  auto phi = extend_to_isomorphism(z4, z4, {{1, 3}});
  REQUIRE(phi.has_value());
  REQUIRE((*phi)[1] == 3);
  REQUIRE((*phi)[2] == 2);

  GroupTable v4 = zz({2, 2});
  for (int y = 0; y < 4; ++y) REQUIRE_FALSE(extend_to_isomorphism(z4, v4, {{1, y}}).has_value());

  GroupTable s3 = s3_from_permutations();
  std::vector<int> gens = first_minimal_generating_tuple(s3);
  std::vector<std::pair<int, int>> idpairs;
  for (int x : gens) idpairs.emplace_back(x, x);
  auto id = extend_to_isomorphism(s3, s3, idpairs);
  REQUIRE(id.has_value());
  for (int x = 0; x < 6; ++x) REQUIRE((*id)[x] == x);
}

TEST_CASE("extend_to_isomorphism agrees with the all-bijections oracle up to order 8") {
  std::vector<GroupTable> groups = {zn(4),          zz({2, 2}),       zn(6),
                                    s3_from_permutations(), zn(8),    zz({2, 4}),
                                    zz({2, 2, 2}),  dihedral_group(4), quaternion8()};
  for (const auto& g : groups)
    for (const auto& h : groups) {
      if (g.n != h.n) continue;
      REQUIRE(oracle_isomorphic(g, h) == bijection_oracle_isomorphic(g, h));
    }
}

TEST_CASE("restrict_to_subgroup produces a consistent local table") {
  GroupTable d4 = dihedral_group(4);
  auto z = subgroup_closure(d4, {2});  // rotation subgroup element of order 2
  SubgroupTable st = restrict_to_subgroup(d4, z.members);
  REQUIRE(st.table.n == z.size());
  for (int a = 0; a < st.table.n; ++a)
    for (int b = 0; b < st.table.n; ++b)
      REQUIRE(st.to_parent[st.table.mul(a, b)] == d4.mul(st.to_parent[a], st.to_parent[b]));
}
