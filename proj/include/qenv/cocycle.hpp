#pragma once

// Symmetric 2-cocycles of a finite group with values in Q/Z, modulo
// coboundaries of class functions.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "qenv/group.hpp"
#include "qenv/linalg.hpp"

namespace qenv {

using Rational = mpq_class;

/// Column of the unordered pair {g, h}: pairs g <= h in lexicographic order.
std::size_t pair_index(std::size_t n, Elem g, Elem h);
inline std::size_t pair_count(std::size_t n) { return n * (n + 1) / 2; }

struct CocycleSystem {
  SparseIntMatrix m;  // n^3 rows (g,h,k) row-major, one column per unordered pair
  SparseIntMatrix b;  // one row per unordered pair, one column per conjugacy class
  ConjugacyPartition classes;
};

/// With normalized set, pairs containing the identity and the identity's
/// class are dropped (cochains with alpha(1, g) = 0).
CocycleSystem symmetric_cocycle_system(const FiniteGroup& g, bool normalized = false);

struct CohomologyGroup {
  std::vector<Integer> invariant_factors;  // all > 1, d1 | d2 | ...
  bool trivial() const { return invariant_factors.empty(); }
};

class SymmetricCochain {
 public:
  explicit SymmetricCochain(std::size_t n) : n_(n), values_(pair_count(n)) {}

  std::size_t group_order() const { return n_; }
  /// Value in [0, 1).
  const Rational& get(Elem g, Elem h) const { return values_.at(pair_index(n_, g, h)); }
  /// Stores q reduced modulo 1.
  void set(Elem g, Elem h, const Rational& q);
  const std::vector<Rational>& values() const { return values_; }
  /// Least common denominator of all values.
  Integer denominator() const;

 private:
  std::size_t n_;
  std::vector<Rational> values_;
};

struct OracleOptions {
  std::size_t max_order = 64;
  bool normalized = false;
  SnfLimits limits = default_oracle_limits();

  static SnfLimits default_oracle_limits() {
    SnfLimits l;
    l.prepass_primes = {2, 3, 65521};
    return l;
  }
};

struct OracleResult {
  CohomologyGroup h2;
  std::optional<SymmetricCochain> cocycle;  // set iff h2 is nontrivial
  std::size_t class_count = 0;
};

/// One Smith form of the cocycle system gives both the group and, when it is
/// nontrivial, a cocycle generating its largest cyclic factor.
OracleResult symmetric_h2_with_cocycle(const FiniteGroup& g, const OracleOptions& options = {});
CohomologyGroup symmetric_h2(const FiniteGroup& g, const OracleOptions& options = {});
std::optional<SymmetricCochain> extract_nontrivial_cocycle(const FiniteGroup& g, const OracleOptions& options = {});

struct CocycleCheck {
  bool is_cocycle = true;
  std::array<Elem, 3> witness{};  // first (g,h,k) with non-integral coboundary
};

CocycleCheck verify_cocycle(const FiniteGroup& g, const SymmetricCochain& alpha);

/// Values f(class) in [0,1) with alpha = delta f modulo 1, or nothing when
/// alpha is not the coboundary of a class function.
std::optional<std::vector<Rational>> solve_class_coboundary(const FiniteGroup& g, const SymmetricCochain& alpha);

/// Lines "g h num/den" (1-based, g <= h), one per nonzero value. Absent
/// pairs read as 0; a pair given twice is an error.
std::string write_cochain(const SymmetricCochain& alpha);
SymmetricCochain read_cochain(std::string_view text, std::size_t group_order);

}  // namespace qenv
