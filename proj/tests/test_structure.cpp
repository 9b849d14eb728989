#include <catch2/catch_amalgamated.hpp>

#include "grpiso/structure.hpp"
#include "support.hpp"

using namespace grpiso;
using namespace testsupport;

TEST_CASE("minimal normal subgroups of small groups") {
  GroupTable v4 = zz({2, 2});
  auto m = minimal_normal_subgroups(v4);
  REQUIRE(m.size() == 3);
  for (auto& s : m) REQUIRE(s.size() == 2);

  GroupTable s3 = s3_from_permutations();
  auto ms = minimal_normal_subgroups(s3);
  REQUIRE(ms.size() == 1);
  REQUIRE(ms[0].size() == 3);

  REQUIRE(minimal_normal_subgroups(zn(1)).empty());
}

TEST_CASE("minimal normal subgroups agree with the exhaustive oracle, n <= 24") {
  for (const GroupTable& g : {zn(12), zn(16), dihedral_group(6), dihedral_group(4),
                              quaternion8(), zz({2, 2, 2}), symmetric_group(4, false),
                              semidirect_pq(3, 4, 2)}) {
    auto normals = all_normal_subgroups(g);
    std::vector<ElementSet> expected;
    for (const auto& n : normals) {
      if (n.size() == 1) continue;
      bool minimal = true;
      for (const auto& o : normals)
        if (o.size() > 1 && !(o == n) && o.is_subset_of(n)) minimal = false;
      if (minimal) expected.push_back(n);
    }
    auto got = minimal_normal_subgroups(g);
    REQUIRE(got.size() == expected.size());
    for (const auto& e : expected) {
      bool found = false;
      for (const auto& s : got)
        if (s.members == e) found = true;
      REQUIRE(found);
    }
    // the counting bound (n - 1) / (p - 1)
    int p = smallest_prime_divisor(g.n);
    REQUIRE(static_cast<long long>(got.size()) <= (g.n - 1) / (p - 1));
    // every result is normal
    for (const auto& s : got) REQUIRE(is_normal(s));
  }
}

TEST_CASE("socle examples") {
  REQUIRE(socle(zn(4)).elements() == std::vector<int>{0, 2});
  REQUIRE(socle(zz({2, 2})).size() == 4);
  GroupTable s3 = s3_from_permutations();
  auto s = socle(s3);
  REQUIRE(s.size() == 3);
  REQUIRE(is_normal(s));
}

TEST_CASE("socle is characteristic on small groups") {
  for (const GroupTable& g : {zn(12), dihedral_group(4), zz({2, 4}), dihedral_group(6)}) {
    auto s = socle(g);
    for (const auto& phi : all_isomorphisms(g, g)) {
      for (int x : s.elements()) REQUIRE(s.contains(phi[x]));
    }
  }
}

TEST_CASE("simplicity test") {
  REQUIRE(is_simple(zn(5)));
  REQUIRE_FALSE(is_simple(zn(4)));
  REQUIRE_FALSE(is_simple(s3_from_permutations()));
  REQUIRE(is_simple(symmetric_group(5, true)));  // A_5
  REQUIRE_THROWS_AS(is_simple(zn(1)), TrivialGroup);
}

TEST_CASE("sylow subgroups by greedy extension") {
  GroupTable s3 = s3_from_permutations();
  auto p3 = sylow_subgroup(s3, 3);
  REQUIRE(p3.size() == 3);
  REQUIRE(is_normal(p3));

  GroupTable z12 = zn(12);
  REQUIRE(sylow_subgroup(z12, 2).elements() == std::vector<int>{0, 3, 6, 9});
  REQUIRE(sylow_subgroup(z12, 3).elements() == std::vector<int>{0, 4, 8});
  REQUIRE_THROWS_AS(sylow_subgroup(z12, 5), PrimeDoesNotDivide);

  GroupTable d4 = dihedral_group(4);
  REQUIRE(sylow_subgroup(d4, 2).size() == 8);  // a p-group is its own Sylow subgroup

  // maximality: no p-power element outside extends the subgroup to a p-group
  GroupTable s4 = symmetric_group(4, false);
  auto p2 = sylow_subgroup(s4, 2);
  REQUIRE(p2.size() == 8);
  for (int x = 0; x < s4.n; ++x) {
    if (p2.contains(x) || (s4.order_of(x) & (s4.order_of(x) - 1))) continue;
    auto gens = p2.elements();
    gens.push_back(x);
    int sz = subgroup_closure(s4, gens).size();
    REQUIRE((sz & (sz - 1)) != 0);  // never again a 2-power
  }
}

TEST_CASE("hall subgroups in solvable groups") {
  GroupTable z12 = zn(12);
  REQUIRE(hall_subgroup(z12, {2, 3}).size() == 12);
  REQUIRE(hall_subgroup(z12, {3}).elements() == std::vector<int>{0, 4, 8});
  GroupTable s4 = symmetric_group(4, false);
  auto h2 = hall_subgroup(s4, {2});
  REQUIRE(h2.size() == 8);
  REQUIRE(h2.members == sylow_subgroup(s4, 2).members);
  auto h23 = hall_subgroup(s4, {2, 3});
  REQUIRE(h23.size() == 24);
  REQUIRE_THROWS_AS(hall_subgroup(z12, {5}), PrimeDoesNotDivide);
}

TEST_CASE("hall subgroup reports non-solvable inputs") {
  GroupTable a5 = symmetric_group(5, true);
  REQUIRE_THROWS_AS(hall_subgroup(a5, {2, 5}), NotSolvable);
}

TEST_CASE("sylow basis via Sylow systems") {
  GroupTable z6 = zn(6);
  SylowBasis b = sylow_basis(z6);
  REQUIRE(b.primes == std::vector<int>{3, 2});
  REQUIRE(b.subgroups[0].elements() == std::vector<int>{0, 2, 4});
  REQUIRE(b.subgroups[1].elements() == std::vector<int>{0, 3});

  GroupTable s3 = s3_from_permutations();
  SylowBasis bs = sylow_basis(s3);
  REQUIRE(bs.subgroups[0].size() == 3);
  REQUIRE(bs.subgroups[1].size() == 2);
  REQUIRE(product_set(s3, bs.subgroups[0].members, bs.subgroups[1].members).size() == 6);

  GroupTable d4 = dihedral_group(4);
  SylowBasis bp = sylow_basis(d4);
  REQUIRE(bp.num_primes() == 1);
  REQUIRE(bp.subgroups[0].size() == 8);

  GroupTable s4 = symmetric_group(4, false);
  SylowBasis b4 = sylow_basis(s4);  // S_4 is solvable
  REQUIRE(b4.primes == std::vector<int>{3, 2});
  verify_sylow_basis(s4, b4);
}

TEST_CASE("brute-force sylow basis agrees up to conjugacy, n <= 24") {
  for (const GroupTable& g :
       {zn(6), s3_from_permutations(), zn(12), dihedral_group(6), symmetric_group(4, false),
        semidirect_pq(3, 4, 2)}) {
    SylowBasis a = sylow_basis(g);
    SylowBasis b = sylow_basis_bruteforce(g);
    REQUIRE(a.primes == b.primes);
    bool conjugate = false;
    for (int t = 0; t < g.n && !conjugate; ++t) {
      bool all = true;
      for (int i = 0; i < a.num_primes() && all; ++i)
        if (!(conjugate_set(g, a.subgroups[i].members, t) == b.subgroups[i].members))
          all = false;
      if (all) conjugate = true;
    }
    REQUIRE(conjugate);
  }
}

TEST_CASE("brute-force sylow basis certifies A_5 as non-solvable") {
  GroupTable a5 = symmetric_group(5, true);
  REQUIRE_THROWS_AS(sylow_basis_bruteforce(a5), NotSolvable);
}

TEST_CASE("all sylow bases: counts and the conjugacy bound") {
  GroupTable z6 = zn(6);
  REQUIRE(all_sylow_bases(z6, sylow_basis(z6)).size() == 1);

  GroupTable s3 = s3_from_permutations();
  auto bases = all_sylow_bases(s3, sylow_basis(s3));
  REQUIRE(bases.size() == 3);
  for (auto& b : bases) verify_sylow_basis(s3, b);

  for (const GroupTable& g : {zn(12), dihedral_group(6), symmetric_group(4, false)}) {
    auto all = all_sylow_bases(g, sylow_basis(g));
    REQUIRE(static_cast<int>(all.size()) <= g.n);
  }
}

TEST_CASE("products of Sylow basis subsets are Hall subgroups") {
  GroupTable s4 = symmetric_group(4, false);
  SylowBasis b = sylow_basis(s4);
  // every subset product is a subgroup of the right order
  for (int mask = 1; mask < (1 << b.num_primes()); ++mask) {
    ElementSet acc(s4.n);
    acc.insert(s4.identity);
    long long want = 1;
    for (int i = 0; i < b.num_primes(); ++i) {
      if (!(mask & (1 << i))) continue;
      acc = product_set(s4, acc, b.subgroups[i].members);
      for (int e = 0; e < b.exponents[i]; ++e) want *= b.primes[i];
    }
    REQUIRE(acc.size() == want);
    REQUIRE(is_closed_under_product(s4, acc));
  }
}

TEST_CASE("classification records") {
  Classification c8 = classify(zn(8));
  REQUIRE(c8.is_p_group);
  REQUIRE(c8.p == 2);
  REQUIRE(c8.is_nilpotent);
  REQUIRE(c8.is_solvable);

  Classification cs3 = classify(s3_from_permutations());
  REQUIRE_FALSE(cs3.is_p_group);
  REQUIRE_FALSE(cs3.is_nilpotent);
  REQUIRE(cs3.is_solvable);

  Classification ca5 = classify(symmetric_group(5, true));
  REQUIRE_FALSE(ca5.is_solvable);

  Classification c1 = classify(zn(1));
  REQUIRE(c1.is_solvable);
  REQUIRE(c1.is_nilpotent);
}
