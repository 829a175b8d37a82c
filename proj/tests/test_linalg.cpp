#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qenv/error.hpp"
#include "qenv/linalg.hpp"
#include "snf_reference.hpp"

using namespace qenv;

namespace {

std::vector<Integer> ints(std::initializer_list<long> v) { return {v.begin(), v.end()}; }

SparseIntMatrix random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols, int lo, int hi,
                              double density = 1.0) {
  std::uniform_int_distribution<int> val(lo, hi);
  std::uniform_real_distribution<double> keep(0, 1);
  SparseIntMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (keep(rng) < density) m.set(r, c, val(rng));
  return m;
}

SparseIntMatrix diagonal_of(const SmithResult& s, std::size_t rows, std::size_t cols) {
  SparseIntMatrix d(rows, cols);
  for (std::size_t i = 0; i < s.invariant_factors.size(); ++i) d.set(i, i, s.invariant_factors[i]);
  return d;
}

bool divisibility_chain(const std::vector<Integer>& d) {
  for (std::size_t i = 0; i + 1 < d.size(); ++i)
    if (d[i] <= 0 || !mpz_divisible_p(d[i + 1].get_mpz_t(), d[i].get_mpz_t())) return false;
  return d.empty() || d.back() > 0;
}

}  // namespace

TEST_CASE("sparse matrix basics") {
  SparseIntMatrix m(2, 3);
  m.set(0, 2, 5);
  m.add(0, 2, -5);
  CHECK(m.nnz() == 0);
  m.set(1, 0, 7);
  CHECK(m.get(1, 0) == 7);
  CHECK_THROWS_AS(m.get(2, 0), std::out_of_range);
  auto t = m.transpose();
  CHECK(t.rows() == 3);
  CHECK(t.get(0, 1) == 7);
  CHECK((m * t).get(1, 1) == 49);
}

TEST_CASE("matrix exchange format") {
  auto m = SparseIntMatrix::from_dense({{0, 2}, {-3, 0}, {0, 0}});
  const std::string text = write_matrix(m);
  CHECK(text == "3 2 2\n1 2 2\n2 1 -3\n");
  CHECK(read_matrix(text) == m);
  CHECK_THROWS_AS(read_matrix("2 2 1\n3 1 1\n"), ParseError);
  CHECK_THROWS_AS(read_matrix("2 2 1\n1 1 x\n"), ParseError);
}

TEST_CASE("smith_normal_form examples") {
  auto d23 = smith_normal_form(SparseIntMatrix::from_dense({{2, 0}, {0, 3}}), false);
  CHECK(d23.invariant_factors == ints({1, 6}));
  CHECK(d23.rank == 2);

  auto zero = smith_normal_form(SparseIntMatrix(3, 4), false);
  CHECK(zero.invariant_factors.empty());
  CHECK(zero.rank == 0);
  CHECK(zero.nullity == 4);

  auto empty = smith_normal_form(SparseIntMatrix(0, 0), true);
  CHECK(empty.rank == 0);

  auto torsion = smith_normal_form(SparseIntMatrix::from_dense({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}}), false);
  CHECK(torsion.invariant_factors == ints({2, 6, 12}));
}

TEST_CASE("smith_normal_form transforms reproduce the diagonal") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t rows = 1 + rng() % 30, cols = 1 + rng() % 30;
    // Mostly non-unit entries push work into the residual and dense stages.
    auto m = trial % 2 ? random_matrix(rng, rows, cols, -2, 2, 0.15) : random_matrix(rng, rows, cols, -6, 6, 0.2);
    auto s = smith_normal_form(m, true);
    REQUIRE(s.U);
    REQUIRE(s.V);
    CHECK(*s.U * m * *s.V == diagonal_of(s, rows, cols));
    CHECK(divisibility_chain(s.invariant_factors));
    CHECK(s.invariant_factors == snf_ref::invariant_factors(m.to_dense()));

    auto column_only = smith_normal_form(m, Transforms::column);
    CHECK_FALSE(column_only.U);
    CHECK(column_only.V == s.V);
  }
}

TEST_CASE("smith_normal_form resource caps") {
  auto m = SparseIntMatrix::from_dense({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}});
  SnfLimits tiny;
  tiny.max_entry_bits = 2;
  CHECK_THROWS_AS(smith_normal_form(m, false, tiny), ResourceError);
  SnfLimits expired;
  expired.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
  SparseIntMatrix big(3000, 4);
  for (std::size_t r = 0; r < 3000; ++r) big.set(r, r % 4, 2);
  CHECK_THROWS_AS(smith_normal_form(big, false, expired), ResourceError);
}

TEST_CASE("modular pre-pass agrees with the exact rank") {
  std::mt19937 rng(3);
  auto m = random_matrix(rng, 40, 25, -2, 2, 0.1);
  SnfLimits limits;
  limits.prepass_primes = {3, 65521};
  auto s = smith_normal_form(m, false, limits);
  REQUIRE(s.modular_ranks.size() == 2);
  for (auto [p, r] : s.modular_ranks) CHECK(r <= s.rank);
}

TEST_CASE("rank_mod_p examples") {
  CHECK(rank_mod_p(SparseIntMatrix::from_dense({{2, 0}, {0, 3}}), 2) == 1);
  CHECK(rank_mod_p(SparseIntMatrix::from_dense({{2, 0}, {0, 3}}), 3) == 1);
  CHECK(rank_mod_p(SparseIntMatrix::from_dense({{2, 0}, {0, 3}}), 5) == 2);
  for (std::uint32_t p : {2u, 3u, 7u, 65521u}) CHECK(rank_mod_p(SparseIntMatrix::identity(5), p) == 5);
  CHECK_THROWS_AS(rank_mod_p(SparseIntMatrix::identity(2), 4), std::invalid_argument);
  CHECK_THROWS_AS(rank_mod_p(SparseIntMatrix::identity(2), 1), std::invalid_argument);
}

TEST_CASE("nullspace_mod_p examples") {
  auto basis = nullspace_mod_p(SparseIntMatrix(2, 3), 2);
  CHECK(basis.size() == 3);
  CHECK(nullspace_mod_p(SparseIntMatrix::identity(4), 5).empty());
  auto parity = nullspace_mod_p(SparseIntMatrix::from_dense({{1, 1}}), 2);
  REQUIRE(parity.size() == 1);
  CHECK(parity[0] == std::vector<std::uint32_t>{1, 1});
  CHECK_THROWS_AS(nullspace_mod_p(SparseIntMatrix::identity(2), 9), std::invalid_argument);
}

TEST_CASE("nullspace vectors are annihilated and have the right dimension") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const std::uint32_t p = trial % 2 ? 2 : 3;
    auto m = random_matrix(rng, 1 + rng() % 12, 1 + rng() % 12, -3, 3, 0.4);
    auto basis = nullspace_mod_p(m, p);
    CHECK(basis.size() == m.cols() - rank_mod_p(m, p));
    for (const auto& x : basis)
      for (std::size_t r = 0; r < m.rows(); ++r) {
        mpz_class dot = 0;
        for (const auto& e : m.row(r)) dot += e.value * x[e.col];
        CHECK(mpz_fdiv_ui(dot.get_mpz_t(), p) == 0);
      }
  }
}

TEST_CASE("ModpEchelon highest-pivot rule picks free columns greedily from the left") {
  // x0 + x1 + x2 = 0 and x1 = x2 force x0 = 0; x1 is kept, x2 expressed by it.
  ModpEchelon ech(3, 2, ModpEchelon::Pivot::highest);
  ech.add_row({{0, 1}, {1, 1}, {2, 1}});
  ech.add_row({{1, 1}, {2, 1}});
  CHECK(ech.free_columns() == std::vector<std::uint32_t>{1});
  ModpEchelon ech2(3, 2, ModpEchelon::Pivot::highest);
  ech2.add_row({{1, 1}, {2, 1}});
  CHECK(ech2.free_columns() == std::vector<std::uint32_t>{0, 1});
}

TEST_CASE("qz_solution_group examples") {
  CHECK(qz_solution_group(SparseIntMatrix::from_dense({{2}}), SparseIntMatrix(1, 0)) == ints({2}));
  CHECK(qz_solution_group(SparseIntMatrix::identity(3), SparseIntMatrix(3, 2)).empty());
  // (2) times (1) is not zero: outside the contract.
  CHECK_THROWS_AS(qz_solution_group(SparseIntMatrix::from_dense({{2}}), SparseIntMatrix::from_dense({{1}})),
                  std::invalid_argument);
  // Kernel of M not covered by B: the divisible part survives.
  CHECK_THROWS_AS(qz_solution_group(SparseIntMatrix::from_dense({{2, 0}}), SparseIntMatrix(2, 0)),
                  std::domain_error);
  // x1 = x2 killed by B = (1,1)^T; 2x1 - 2x2 in Z leaves Z/2.
  CHECK(qz_solution_group(SparseIntMatrix::from_dense({{2, -2}}), SparseIntMatrix::from_dense({{1}, {1}})) ==
        ints({2}));
}
