#include <catch2/catch_amalgamated.hpp>

#include "rubin/finite_group.hpp"

using namespace rubin;

TEST_CASE("generation orders") {
  CHECK(preset_group("S4").order() == 24);
  CHECK(preset_group("S3").order() == 6);
  CHECK(preset_group("A4").order() == 12);
  CHECK(preset_group("D4").order() == 8);
  CHECK(preset_group("C5xC5").order() == 25);
  CHECK(preset_group("C12").order() == 12);
  CHECK(preset_group("Q8").order() == 8);
  CHECK(FiniteGroup::generate(3, {}).order() == 1);
  CHECK(FiniteGroup::generate(5, {Perm::from_cycles(5, {{0, 1, 2, 3, 4}})}).order() == 5);
}

TEST_CASE("generation errors") {
  CHECK_THROWS_AS(FiniteGroup::generate(3, {Perm::identity(4)}), group_error);
  CHECK_THROWS_AS(
      FiniteGroup::generate(4, {Perm::from_cycles(4, {{0, 1}}), Perm::from_cycles(4, {{0, 1, 2, 3}})}, 10),
      group_error);
}

TEST_CASE("closure and determinism") {
  FiniteGroup g1 = preset_group("S4");
  FiniteGroup g2 = preset_group("S4");
  REQUIRE(g1.order() == g2.order());
  for (uint32_t i = 0; i < g1.order(); ++i) CHECK(g1.element(i) == g2.element(i));

  // Closed under products and inverses.
  for (uint32_t i = 0; i < g1.order(); ++i) {
    CHECK(g1.contains(g1.element(i).inverse()));
    for (uint32_t j = 0; j < g1.order(); ++j) CHECK(g1.contains(g1.element(i) * g1.element(j)));
  }
}

TEST_CASE("centralizers") {
  FiniteGroup s4 = preset_group("S4");
  CHECK(s4.centralizer(Perm::identity(4)).size() == 24);
  CHECK(s4.centralizer(Perm::from_cycles(4, {{0, 1}, {2, 3}})).size() == 8);

  FiniteGroup ab = preset_group("C5xC5");
  for (const Perm& g : ab.elements()) CHECK(ab.centralizer(g).size() == 25);

  CHECK_THROWS_AS(s4.centralizer(Perm::identity(3)), group_error);

  // Always contains g and the identity, and is closed under products.
  Perm g = Perm::from_cycles(4, {{0, 1, 2}});
  auto cz = s4.centralizer(g);
  CHECK(std::find(cz.begin(), cz.end(), s4.index_of(g)) != cz.end());
  CHECK(std::find(cz.begin(), cz.end(), s4.identity_index()) != cz.end());
  for (uint32_t a : cz)
    for (uint32_t b : cz) {
      uint32_t prod = s4.multiply(a, b);
      CHECK(std::find(cz.begin(), cz.end(), prod) != cz.end());
    }
}

TEST_CASE("centralizer of set") {
  FiniteGroup s3 = preset_group("S3");
  std::vector<uint32_t> all(s3.order());
  for (uint32_t i = 0; i < all.size(); ++i) all[i] = i;
  CHECK(s3.centralizer_of_set({}).size() == 6);
  CHECK(s3.centralizer_of_set({s3.identity_index()}).size() == 6);
  auto cz = s3.centralizer_of_set(all);
  REQUIRE(cz.size() == 1);
  CHECK(s3.element(cz[0]).is_identity());
}

TEST_CASE("conjugacy classes") {
  CHECK(FiniteGroup::generate(1, {}).conjugacy_classes().size() == 1);

  auto classes = preset_group("S3").conjugacy_classes();
  REQUIRE(classes.size() == 3);
  std::vector<size_t> sizes;
  for (const auto& c : classes) sizes.push_back(c.size());
  std::sort(sizes.begin(), sizes.end());
  CHECK(sizes == std::vector<size_t>{1, 2, 3});

  for (const auto& c : preset_group("C12").conjugacy_classes()) CHECK(c.size() == 1);

  // Classes ordered by minimal element and partition the group.
  auto s4c = preset_group("S4").conjugacy_classes();
  size_t total = 0;
  uint32_t prev_min = 0;
  for (size_t i = 0; i < s4c.size(); ++i) {
    total += s4c[i].size();
    if (i > 0) CHECK(s4c[i].front() > prev_min);
    prev_min = s4c[i].front();
  }
  CHECK(total == 24);
}

TEST_CASE("direct product") {
  FiniteGroup p = FiniteGroup::direct_product(preset_group("S3"), preset_group("S3"));
  CHECK(p.order() == 36);
  CHECK(p.degree() == 6);
}

TEST_CASE("abelian and center predicates") {
  CHECK(preset_group("C5xC5").is_abelian());
  CHECK_FALSE(preset_group("S4").is_abelian());
  CHECK(preset_group("S3").is_centerless());
  CHECK_FALSE(preset_group("Q8").is_centerless());
  CHECK(preset_group("Q8").center().size() == 2);
}
