#pragma once

// Finitely presented groups and the enveloping group of a conjugacy quandle.

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qenv/group.hpp"
#include "qenv/linalg.hpp"

namespace qenv {

struct Letter {
  std::uint32_t gen;  // 0-based generator index
  int exp;            // +1 or -1
  auto operator<=>(const Letter&) const = default;
};

using Word = std::vector<Letter>;

/// Cancels adjacent inverse pairs until none remain.
Word free_reduce(const Word& w);
Word inverse(const Word& w);

class Presentation {
 public:
  explicit Presentation(std::size_t generator_count = 0) : generator_count_(generator_count) {}

  std::size_t generator_count() const { return generator_count_; }
  const std::vector<Word>& relators() const { return relators_; }
  /// Relators offered to add_relator, before reduction and deduplication.
  std::size_t raw_relator_count() const { return raw_count_; }

  /// Stores the freely reduced relator unless it is empty or already present.
  /// Returns true if it was stored.
  bool add_relator(const Word& w);

 private:
  std::size_t generator_count_;
  std::vector<Word> relators_;
  std::set<Word> seen_;
  std::size_t raw_count_ = 0;
};

/// Presentation of A(G): one generator e_g per element and, for each ordered
/// pair (i, j) in row-major order, the relator e_i e_j e_i^-1 e_k^-1 with
/// g_k = g_i g_j g_i^-1.
Presentation envelope_presentation(const FiniteGroup& group);

/// One row per relator, one column per generator: exponent sums.
SparseIntMatrix abelianized_relation_matrix(const Presentation& p);

/// .fpres: generator count, then one relator per line as signed 1-based
/// generator indices.
std::string write_presentation(const Presentation& p);
Presentation read_presentation(std::string_view text);

}  // namespace qenv
