#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "rubin/disjointness.hpp"
#include "rubin/exports.hpp"
#include "rubin/finite_group.hpp"

using namespace rubin;

TEST_CASE("S4 asymmetry") {
  FiniteGroup s4 = preset_group("S4");
  Perm t = Perm::from_cycles(4, {{0, 1}});
  Perm d = Perm::from_cycles(4, {{0, 1}, {2, 3}});
  CHECK(is_algebraically_disjoint(s4, t, d));
  CHECK_FALSE(is_algebraically_disjoint(s4, d, t));
}

TEST_CASE("self disjointness fails for non-central elements") {
  FiniteGroup s4 = preset_group("S4");
  Perm t = Perm::from_cycles(4, {{0, 1}});
  CHECK_FALSE(is_algebraically_disjoint(s4, t, t));
}

TEST_CASE("abelian groups: disjoint iff commuting") {
  for (const char* name : {"C5xC5", "C12"}) {
    FiniteGroup g = preset_group(name);
    CHECK(compute_disjointness_matrix(g).all_true());
  }
}

TEST_CASE("disjointness implies commuting") {
  for (const char* name : {"S3", "S4", "A4", "D4", "C5xC5"}) {
    FiniteGroup g = preset_group(name);
    DisjointnessMatrix m = compute_disjointness_matrix(g);
    for (uint32_t gi = 0; gi < m.order; ++gi)
      for (uint32_t fi = 0; fi < m.order; ++fi)
        if (m.at(gi, fi))
          CHECK(commutator(g.element(gi), g.element(fi)).is_identity());
  }
}

TEST_CASE("membership errors") {
  FiniteGroup s3 = preset_group("S3");
  CHECK_THROWS_AS(is_algebraically_disjoint(s3, Perm::identity(4), Perm::identity(4)), group_error);
  CHECK_THROWS_AS(compute_S(s3, Perm::identity(4)), group_error);
}

TEST_CASE("oracle equivalence on small groups") {
  for (const char* name : {"trivial", "C2", "C3", "S3", "D4", "Q8", "A4", "C12"}) {
    FiniteGroup g = preset_group(name);
    for (const Perm& a : g.elements())
      for (const Perm& b : g.elements())
        CHECK(is_algebraically_disjoint(g, a, b) ==
              oracle::naive_is_algebraically_disjoint(g, a, b));
  }
}

TEST_CASE("S_f basics") {
  FiniteGroup triv = preset_group("trivial");
  auto s = compute_S(triv, Perm::identity(1));
  REQUIRE(s.size() == 1);
  CHECK(triv.element(s[0]).is_identity());

  // Abelian: S_f = { x^12 : x in G }.
  FiniteGroup ab = preset_group("C5xC5");
  for (const Perm& f : ab.elements()) {
    auto s12 = compute_S(ab, f);
    std::vector<uint32_t> expect;
    for (const Perm& x : ab.elements()) expect.push_back(ab.index_of(x.power(12)));
    std::sort(expect.begin(), expect.end());
    expect.erase(std::unique(expect.begin(), expect.end()), expect.end());
    CHECK(s12 == expect);
  }
}

TEST_CASE("f lies in the centralizer of S_f, and S_f commutes with f") {
  for (const char* name : {"S3", "S4", "A4", "D4", "C5xC5", "C12"}) {
    FiniteGroup g = preset_group(name);
    for (const Perm& f : g.elements()) {
      auto s = compute_S(g, f);
      auto cz = g.centralizer_of_set(s);
      CHECK(std::find(cz.begin(), cz.end(), g.index_of(f)) != cz.end());
      for (uint32_t si : s) CHECK(commutator(g.element(si), f).is_identity());
    }
  }
}

TEST_CASE("rubin poset: abelian collapses to a single node") {
  for (const char* name : {"C5xC5", "C12", "trivial"}) {
    FiniteGroup g = preset_group(name);
    RubinPoset p = rubin_poset(g);
    REQUIRE(p.nodes.size() == 1);
    CHECK(p.nodes[0].elems.size() == g.order());
    CHECK(p.hasse.empty());
  }
}

TEST_CASE("rubin poset: S4 structure and well-formedness") {
  FiniteGroup s4 = preset_group("S4");
  RubinPoset p = rubin_poset(s4);

  // Every element order in S4 divides 12, so all 12th powers are trivial,
  // every S_f is {1}, and every centralizer node is the whole group.
  REQUIRE(p.nodes.size() == 1);
  CHECK(p.nodes[0].elems.size() == 24);
  CHECK(p.least_node().has_value());

  // Intersection-closed.
  for (const auto& a : p.nodes)
    for (const auto& b : p.nodes) {
      auto inter = detail::sorted_intersection(a.elems, b.elems);
      bool found = false;
      for (const auto& c : p.nodes)
        if (c.elems == inter) found = true;
      CHECK(found);
    }

  // Inclusion order matches independent recomputation, and is a partial order.
  for (uint32_t i = 0; i < p.nodes.size(); ++i)
    for (uint32_t j = 0; j < p.nodes.size(); ++j) {
      CHECK(p.leq(i, j) == oracle::naive_subset(p.nodes[i].elems, p.nodes[j].elems));
      if (i != j && p.leq(i, j) && p.leq(j, i)) CHECK(p.nodes[i].elems == p.nodes[j].elems);
      for (uint32_t k = 0; k < p.nodes.size(); ++k)
        if (p.leq(i, j) && p.leq(j, k)) CHECK(p.leq(i, k));
    }
}

TEST_CASE("rubin poset: parallel computation matches serial") {
  FiniteGroup s4 = preset_group("S4");
  RubinPoset serial = rubin_poset(s4);
  RubinPosetOptions opts;
  opts.threads = 2;
  RubinPoset parallel = rubin_poset(s4, opts);
  REQUIRE(serial.nodes.size() == parallel.nodes.size());
  for (size_t i = 0; i < serial.nodes.size(); ++i)
    CHECK(serial.nodes[i].elems == parallel.nodes[i].elems);
  CHECK(serial.hasse == parallel.hasse);
}

TEST_CASE("rubin poset: include-full-group flag") {
  FiniteGroup s4 = preset_group("S4");
  RubinPosetOptions opts;
  opts.include_full_group = true;
  RubinPoset p = rubin_poset(s4, opts);
  bool has_full = false;
  for (const auto& n : p.nodes)
    if (n.elems.size() == s4.order()) has_full = true;
  CHECK(has_full);
}

TEST_CASE("product check: S3 x S3 cross pairs mutually disjoint") {
  FiniteGroup s3 = preset_group("S3");
  ProductCheckReport r = product_disjointness_check(s3, s3);
  CHECK(r.factor1_centerless);
  CHECK(r.factor2_centerless);
  CHECK(r.pairs_checked == 25);
  CHECK(r.all_disjoint());
}

TEST_CASE("product check: same-factor non-commuting pair is not disjoint") {
  FiniteGroup s3 = preset_group("S3");
  FiniteGroup prod = FiniteGroup::direct_product(s3, s3);
  Perm x = FiniteGroup::embed_left(Perm::from_cycles(3, {{0, 1}}), 3);
  Perm y = FiniteGroup::embed_left(Perm::from_cycles(3, {{1, 2}}), 3);
  REQUIRE_FALSE(commutator(x, y).is_identity());
  CHECK_FALSE(is_algebraically_disjoint(prod, x, y));
}

TEST_CASE("trivial x trivial vacuously disjoint") {
  FiniteGroup t = preset_group("trivial");
  ProductCheckReport r = product_disjointness_check(t, t);
  CHECK(r.pairs_checked == 0);
  CHECK(r.all_disjoint());
}

TEST_CASE("matrix and poset JSON round trip") {
  FiniteGroup s3 = preset_group("S3");
  DisjointnessMatrix m = compute_disjointness_matrix(s3);
  ordered_json jm = matrix_to_json(s3, m);
  CHECK(jm["order"] == 6);
  CHECK(jm["disjoint"].size() == 6);

  RubinPoset p = rubin_poset(s3);
  ordered_json jp = poset_to_json(s3, p);
  RubinPoset back = poset_from_json(jp);
  REQUIRE(back.nodes.size() == p.nodes.size());
  for (size_t i = 0; i < p.nodes.size(); ++i) {
    CHECK(back.nodes[i].elems == p.nodes[i].elems);
    CHECK(back.nodes[i].witness == p.nodes[i].witness);
  }
  CHECK(back.hasse == p.hasse);

  std::string dot = poset_to_dot(s3, p);
  CHECK(dot.find("digraph") != std::string::npos);
}
