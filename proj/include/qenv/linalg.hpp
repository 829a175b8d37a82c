#pragma once

// Exact integer linear algebra over sparse matrices: Smith normal form with
// optional unimodular transforms, elimination modulo a prime, and the
// Q/Z solution group used by the cohomology computation.

#include <gmpxx.h>

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qenv {

using Integer = mpz_class;

class SparseIntMatrix {
 public:
  struct Entry {
    std::uint32_t col;
    Integer value;
    bool operator==(const Entry&) const = default;
  };
  using Row = std::vector<Entry>;  // strictly increasing columns, no zeros

  SparseIntMatrix() = default;
  SparseIntMatrix(std::size_t rows, std::size_t cols);

  static SparseIntMatrix identity(std::size_t n);
  static SparseIntMatrix from_dense(const std::vector<std::vector<long>>& dense);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const;

  const Row& row(std::size_t r) const { return data_.at(r); }
  Integer get(std::size_t r, std::size_t c) const;
  void set(std::size_t r, std::size_t c, const Integer& v);
  void add(std::size_t r, std::size_t c, const Integer& v);
  /// Replaces a row; entries may be unsorted and may contain zeros or repeats.
  void set_row(std::size_t r, Row entries);
  std::size_t append_row(Row entries);

  SparseIntMatrix transpose() const;
  SparseIntMatrix operator*(const SparseIntMatrix& rhs) const;
  bool is_zero() const;
  bool operator==(const SparseIntMatrix&) const = default;

  std::vector<std::vector<Integer>> to_dense() const;

 private:
  static Row normalize(Row entries, std::size_t cols);

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Row> data_;
};

/// Text exchange format: "rows cols nnz", then nnz lines "r c v" (1-based).
std::string write_matrix(const SparseIntMatrix& m);
SparseIntMatrix read_matrix(std::string_view text);

enum class Transforms { none, column, both };

struct SnfLimits {
  std::size_t max_entry_bits = 4096;
  std::size_t max_stored_entries = 50'000'000;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  /// Primes for the modular rank pre-pass; empty disables it.
  std::vector<std::uint32_t> prepass_primes;
};

struct SmithResult {
  std::vector<Integer> invariant_factors;  // d1 | d2 | ... | dr, all positive
  std::size_t rank = 0;
  std::size_t nullity = 0;
  std::optional<SparseIntMatrix> U;  // rows x rows
  std::optional<SparseIntMatrix> V;  // cols x cols
  std::vector<std::pair<std::uint32_t, std::size_t>> modular_ranks;

  /// Factors greater than one: the torsion of the cokernel.
  std::vector<Integer> torsion() const;
};

/// U*M*V = diag(d1..dr, 0...) when transforms are requested.
SmithResult smith_normal_form(const SparseIntMatrix& m, Transforms transforms,
                              const SnfLimits& limits = {});
SmithResult smith_normal_form(const SparseIntMatrix& m, bool want_transforms,
                              const SnfLimits& limits = {});

/// Dense Smith form used for small blocks (a is rows x cols, reduced in
/// place). U and V are filled when non-null.
std::vector<Integer> dense_smith(std::vector<std::vector<Integer>>& a, std::size_t cols,
                                 std::vector<std::vector<Integer>>* u,
                                 std::vector<std::vector<Integer>>* v,
                                 const SnfLimits& limits = {});

bool is_prime(std::uint64_t p);

// ---------------------------------------------------------------------------
// Elimination over the field with p elements (p < 2^32).

/// Reduced echelon form built incrementally. Every pivot column is zero in all
/// rows but its own, and each pivot row is scaled to 1 at its pivot.
class ModpEchelon {
 public:
  using Row = std::vector<std::pair<std::uint32_t, std::uint32_t>>;  // (col, residue)

  enum class Pivot {
    lowest,   // first column of the reduced row
    highest,  // last column: free columns are then chosen greedily from the left
    sparsest  // column occurring in the fewest stored rows (ties: lowest)
  };

  ModpEchelon(std::size_t cols, std::uint32_t p, Pivot rule = Pivot::lowest);

  /// Inserts a row (entries need not be reduced mod p). Returns true if the
  /// rank increased.
  bool add_row(const Row& row);
  bool add_dense_row(const std::vector<std::uint32_t>& row);

  std::size_t rank() const { return pivots_.size(); }
  std::size_t cols() const { return cols_; }
  std::uint32_t prime() const { return p_; }
  bool is_pivot(std::uint32_t col) const { return pivot_row_[col] >= 0; }
  /// Pivot columns in creation order.
  const std::vector<std::uint32_t>& pivots() const { return pivots_; }
  std::vector<std::uint32_t> free_columns() const;
  /// Row with a 1 at the pivot column and entries only in free columns.
  const Row& pivot_row(std::uint32_t col) const;

  /// Basis of {x : R x = 0}, one vector per free column f (x_f = 1).
  std::vector<std::vector<std::uint32_t>> nullspace() const;

 private:
  void reduce(Row& row) const;

  std::size_t cols_;
  std::uint32_t p_;
  Pivot rule_;
  std::vector<Row> rows_;
  std::vector<std::int64_t> pivot_row_;
  std::vector<std::uint32_t> pivots_;
  std::vector<std::vector<std::uint32_t>> col_rows_;  // may hold stale ids
  std::vector<std::uint32_t> col_count_;
  mutable std::vector<std::uint64_t> acc_;
  mutable std::vector<std::uint32_t> support_;
};

std::size_t rank_mod_p(const SparseIntMatrix& m, std::uint32_t p);

/// Echelonized basis of the right nullspace modulo p.
std::vector<std::vector<std::uint32_t>> nullspace_mod_p(const SparseIntMatrix& m, std::uint32_t p);

/// Invariant factors of {x in (Q/Z)^c : M x in Z^rows} modulo the image of
/// B over Q. Requires M*B = 0; throws std::invalid_argument otherwise and
/// std::domain_error if the quotient is not finite.
std::vector<Integer> qz_solution_group(const SparseIntMatrix& m, const SparseIntMatrix& b,
                                       const SnfLimits& limits = {});

}  // namespace qenv
