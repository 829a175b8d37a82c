#pragma once

// Finite groups given by Cayley tables.
//
// Element indices are 0-based in this API and the identity is always 0.
// Every text format and report uses 1-based indices; the loaders and
// writers do the shift.

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qenv {

using Elem = std::uint32_t;

class FiniteGroup {
 public:
  /// Builds a group from a row-major n*n table of 0-based indices.
  /// Re-verifies the Latin-square, identity and associativity axioms and
  /// throws ValidationError naming the first violation.
  static FiniteGroup from_table(std::size_t order, std::vector<Elem> table);

  std::size_t order() const { return order_; }
  static constexpr Elem identity() { return 0; }

  /// Range-checked product and inverse; throw std::out_of_range.
  Elem mul(Elem a, Elem b) const;
  Elem inv(Elem a) const;

  // Unchecked variants for inner loops.
  Elem mul_unchecked(Elem a, Elem b) const { return table_[std::size_t(a) * order_ + b]; }
  Elem inv_unchecked(Elem a) const { return inverse_[a]; }

  /// g*h*g^-1
  Elem conjugate(Elem g, Elem h) const {
    return mul_unchecked(mul_unchecked(g, h), inverse_[g]);
  }
  /// g*h*g^-1*h^-1
  Elem commutator(Elem g, Elem h) const {
    return mul_unchecked(mul_unchecked(g, h), mul_unchecked(inverse_[g], inverse_[h]));
  }

  std::span<const Elem> table() const { return table_; }
  bool is_abelian() const;

  /// Order of a single element.
  std::size_t element_order(Elem a) const;

 private:
  FiniteGroup(std::size_t order, std::vector<Elem> table);

  std::size_t order_ = 0;
  std::vector<Elem> table_;
  std::vector<Elem> inverse_;
};

/// Sorted, duplicate-free subset of a group's elements.
struct ElementSet {
  std::vector<Elem> members;
  std::size_t parent_order = 0;

  std::size_t size() const { return members.size(); }
  bool contains(Elem e) const;
};

struct ConjugacyPartition {
  std::vector<std::uint32_t> class_of;     // element -> class index (0-based)
  std::vector<Elem> representatives;       // smallest element of each class
  std::size_t class_count() const { return representatives.size(); }
};

using Permutation = std::vector<std::uint32_t>;  // 0-based image list

struct PermutationOptions {
  std::size_t max_order = 10000;
};

/// Parses .mtab text: n, then n rows of n 1-based indices.
FiniteGroup load_multiplication_table(std::string_view text);
std::string write_multiplication_table(const FiniteGroup& group);

/// Closure of the generators under composition. Elements are numbered
/// breadth-first from the identity, trying generators in input order.
/// The product g*h applies g first, then h.
FiniteGroup from_permutations(std::size_t degree, const std::vector<Permutation>& generators,
                              const PermutationOptions& options = {});

/// Parses .perm text: "d m", then m lines of d 1-based images.
FiniteGroup load_permutation_file(std::string_view text,
                                  const PermutationOptions& options = {});

/// Loads a group file, choosing the format by extension (.perm or .mtab).
FiniteGroup load_group_file(const std::string& path);

ConjugacyPartition conjugacy_classes(const FiniteGroup& group);

/// Smallest subgroup containing the seeds (worklist closure).
ElementSet subgroup_closure(const FiniteGroup& group, std::span<const Elem> seeds);

ElementSet derived_subgroup(const FiniteGroup& group);

bool is_normal(const FiniteGroup& group, const ElementSet& subgroup);

/// element order -> number of elements of that order
std::map<std::size_t, std::size_t> element_order_histogram(const FiniteGroup& group);

/// Reads a whole file into a string; throws std::runtime_error if unreadable.
std::string read_text_file(const std::string& path);

}  // namespace qenv
