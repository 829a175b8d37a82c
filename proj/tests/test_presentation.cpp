#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <set>

#include "fixtures.hpp"
#include "qenv/error.hpp"
#include "qenv/presentation.hpp"

using namespace qenv;

namespace {

Word word(std::initializer_list<int> signed_gens) {
  Word w;
  for (int v : signed_gens) w.push_back({std::uint32_t((v < 0 ? -v : v) - 1), v < 0 ? -1 : 1});
  return w;
}

// Orbits of h -> g h g^-1, by union-find over all triples.
std::size_t brute_class_count(const FiniteGroup& g) {
  const std::size_t n = g.order();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (Elem c = 0; c < n; ++c)
    for (Elem x = 0; x < n; ++x) parent[find(x)] = find(g.mul(g.mul(c, x), g.inv(c)));
  std::set<std::size_t> roots;
  for (std::size_t x = 0; x < n; ++x) roots.insert(find(x));
  return roots.size();
}

}  // namespace

TEST_CASE("free_reduce examples") {
  CHECK(free_reduce(word({1, -1})).empty());
  CHECK(free_reduce(word({1, 2, -2, 1})) == word({1, 1}));
  CHECK(free_reduce(word({1, 2, -3, -1})) == word({1, 2, -3, -1}));
  // Cascading cancellation.
  CHECK(free_reduce(word({1, 2, 3, -3, -2, -1, 4})) == word({4}));
  CHECK(free_reduce(word({})).empty());
}

TEST_CASE("free_reduce is idempotent and never lengthens") {
  std::uint32_t seed = 17;
  for (int trial = 0; trial < 200; ++trial) {
    Word w;
    const int len = trial % 12;
    for (int i = 0; i < len; ++i) {
      seed = seed * 1103515245u + 12345u;
      w.push_back({(seed >> 16) % 3, (seed >> 8) & 1 ? 1 : -1});
    }
    const Word r = free_reduce(w);
    CHECK(r.size() <= w.size());
    CHECK(free_reduce(r) == r);
    for (std::size_t i = 0; i + 1 < r.size(); ++i)
      CHECK_FALSE((r[i].gen == r[i + 1].gen && r[i].exp == -r[i + 1].exp));
  }
}

TEST_CASE("presentation storage drops empty and duplicate relators") {
  Presentation p(3);
  CHECK(p.add_relator(word({1, 2, -1})));
  CHECK_FALSE(p.add_relator(word({1, 2, -1})));
  CHECK_FALSE(p.add_relator(word({3, -3})));
  // Inverses are kept as distinct relators.
  CHECK(p.add_relator(inverse(word({1, 2, -1}))));
  CHECK(p.relators().size() == 2);
  CHECK(p.raw_relator_count() == 4);
  CHECK_THROWS_AS(p.add_relator(word({4})), std::invalid_argument);
}

TEST_CASE("envelope of the trivial group") {
  auto p = envelope_presentation(fixture_group("c1"));
  CHECK(p.generator_count() == 1);
  CHECK(p.relators().empty());
  CHECK(p.raw_relator_count() == 1);
  auto s = smith_normal_form(abelianized_relation_matrix(p), false);
  CHECK(s.nullity == 1);
}

TEST_CASE("envelope of an abelian group is the free abelian commutator presentation") {
  for (std::string name : {"c4", "c2xc2", "c2xc2xc2"}) {
    const auto g = fixture_group(name);
    const auto n = std::uint32_t(g.order());
    auto p = envelope_presentation(g);
    CHECK(p.generator_count() == n);
    std::set<Word> expected;
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = 0; j < n; ++j)
        if (i != j) expected.insert({{i, 1}, {j, 1}, {i, -1}, {j, -1}});
    CHECK(std::set<Word>(p.relators().begin(), p.relators().end()) == expected);
    CHECK(abelianized_relation_matrix(p).is_zero());
  }
}

TEST_CASE("envelope of g64_149") {
  const auto g = fixture_group("g64_149");
  auto p = envelope_presentation(g);
  CHECK(p.generator_count() == 64);
  CHECK(p.raw_relator_count() == 4096);
  // Row-major order: (1,1) reduces away, so (1,2) gives the first relator.
  REQUIRE(!p.relators().empty());
  CHECK(p.relators().front() == word({1, 2, -1, -2}));
}

TEST_CASE("abelianized_relation_matrix examples") {
  Presentation p(3);
  p.add_relator(word({1, 2, -1, -3}));
  p.add_relator(word({1, 2, -1, -2}));
  p.add_relator(word({1, 1, 2}));
  auto m = abelianized_relation_matrix(p);
  CHECK(m.to_dense() == std::vector<std::vector<Integer>>{{0, 1, -1}, {0, 0, 0}, {2, 1, 0}});
}

TEST_CASE("envelope of S3 has abelianization Z^3") {
  auto m = abelianized_relation_matrix(envelope_presentation(fixture_group("s3")));
  auto s = smith_normal_form(m, false);
  CHECK(s.nullity == 3);
  for (const auto& d : s.invariant_factors) CHECK(d == 1);
}

TEST_CASE("every fixture: envelope abelianization is free of rank c_G") {
  for (const auto& name : all_fixture_names()) {
    CAPTURE(name);
    const auto g = fixture_group(name);
    auto p = envelope_presentation(g);
    CHECK(p.raw_relator_count() == g.order() * g.order());
    for (const auto& r : p.relators()) CHECK(r.size() <= 4);
    auto m = abelianized_relation_matrix(p);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      // e_j - e_k: either zero or one +1 and one -1.
      const auto& row = m.row(r);
      CHECK((row.empty() || (row.size() == 2 && row[0].value + row[1].value == 0)));
    }
    auto s = smith_normal_form(m, false);
    for (const auto& d : s.invariant_factors) CHECK(d == 1);
    CHECK(s.nullity == brute_class_count(g));
  }
}

TEST_CASE(".fpres round trip and errors") {
  auto p = envelope_presentation(fixture_group("s3"));
  const auto text = write_presentation(p);
  auto q = read_presentation(text);
  CHECK(q.generator_count() == p.generator_count());
  CHECK(q.relators() == p.relators());
  CHECK(write_presentation(read_presentation("3\n1 2 -1 -3\n")) == "3\n1 2 -1 -3\n");
  CHECK_THROWS_AS(read_presentation("2\n1 3\n"), ParseError);
  CHECK_THROWS_AS(read_presentation("2\n1 0\n"), ParseError);
  CHECK_THROWS_AS(read_presentation("2\n1 x\n"), ParseError);
  CHECK_THROWS_AS(read_presentation(""), ParseError);
}
