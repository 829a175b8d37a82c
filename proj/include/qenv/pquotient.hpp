#pragma once

// Weighted power-commutator presentations of finite p-groups and the
// p-quotient algorithm.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qenv/linalg.hpp"
#include "qenv/presentation.hpp"

namespace qenv {

/// Exponent vector (x_1, ..., x_k), 0 <= x_i < p, standing for a_1^x_1 ... a_k^x_k.
using ExpVec = std::vector<std::uint32_t>;

struct PcLetter {
  std::uint32_t gen;  // 0-based
  std::int64_t exp;
};
using PcWord = std::vector<PcLetter>;

struct PcDefinition {
  enum class Kind { image, power, commutator };
  Kind kind;
  std::uint32_t a = 0;  // image: source generator; power: i; commutator: j
  std::uint32_t b = 0;  // commutator: i (< j)
  bool operator==(const PcDefinition&) const = default;
};

/// Collection step cap taken from QENV_MAX_STEPS, else 1e6.
std::size_t default_collection_steps();

class PcGroup {
 public:
  /// All relations trivial: elementary abelian of rank weights.size().
  PcGroup(std::uint32_t p, std::vector<std::uint32_t> weights);

  std::uint32_t prime() const { return p_; }
  std::size_t rank() const { return weights_.size(); }
  std::uint32_t weight(std::size_t i) const { return weights_.at(i); }
  const std::vector<std::uint32_t>& weights() const { return weights_; }
  /// Largest weight; 0 for the trivial group.
  std::uint32_t pclass() const;
  Integer order() const;

  /// a_i^p = tail.
  void set_power(std::size_t i, const ExpVec& tail);
  /// [a_j, a_i] = a_j^-1 a_i^-1 a_j a_i = tail, for j > i.
  void set_commutator(std::size_t j, std::size_t i, const ExpVec& tail);
  ExpVec power_relation(std::size_t i) const;
  ExpVec commutator_relation(std::size_t j, std::size_t i) const;

  void set_definition(std::size_t i, std::optional<PcDefinition> d);
  const std::optional<PcDefinition>& definition(std::size_t i) const { return definitions_.at(i); }

  void set_max_steps(std::size_t steps) { max_steps_ = steps; }
  std::size_t max_steps() const { return max_steps_; }

  ExpVec identity() const { return ExpVec(rank(), 0); }
  ExpVec generator(std::size_t i) const;
  bool is_identity(const ExpVec& v) const;

  /// Normal form of a word with arbitrary integer exponents. Throws
  /// ResourceError when the step cap is hit (a non-terminating collection
  /// signals an inconsistent presentation).
  ExpVec collect(const PcWord& w) const;
  ExpVec multiply(const ExpVec& u, const ExpVec& v) const;
  ExpVec inverse(const ExpVec& u) const;
  ExpVec power(const ExpVec& u, std::uint64_t n) const;
  /// u^-1 v^-1 u v
  ExpVec commutator(const ExpVec& u, const ExpVec& v) const;

 private:
  using Sparse = std::vector<std::pair<std::uint32_t, std::uint32_t>>;
  struct Stack;

  void check_vector(const ExpVec& v) const;
  Sparse to_sparse(const ExpVec& tail) const;
  void run(ExpVec& e, Stack& st) const;
  void step(ExpVec& e, std::uint32_t g, Stack& st) const;
  const Sparse& comm(std::uint32_t j, std::uint32_t i) const;

  std::uint32_t p_;
  std::vector<std::uint32_t> weights_;
  std::vector<Sparse> powers_;
  std::vector<std::vector<Sparse>> comms_;  // comms_[j][i], i < j; empty row = all trivial
  std::vector<std::vector<std::uint32_t>> noncommuting_;  // j > i with [a_j, a_i] != 1, sorted
  std::vector<std::optional<PcDefinition>> definitions_;
  std::size_t max_steps_;
};

struct ConsistencyViolation {
  std::string word;    // e.g. "(a3 a2) a1"
  std::string detail;  // both collected forms, or why collection failed
};

/// Empty iff the presentation is consistent. Checks (a_k a_j) a_i = a_k (a_j a_i)
/// for k > j > i, (a_j^p) a_i = a_j^(p-1) (a_j a_i) and a_j (a_i^p) = (a_j a_i) a_i^(p-1)
/// for j > i, and a_i (a_i^p) = (a_i^p) a_i.
std::vector<ConsistencyViolation> consistency_violations(const PcGroup& g);

/// Order of the subgroup generated by seeds, or of its normal closure.
Integer pc_subgroup_order(const PcGroup& g, const std::vector<ExpVec>& seeds, bool normal_closure = false);
Integer pc_derived_order(const PcGroup& g);

struct Epimorphism {
  std::vector<ExpVec> images;  // one per source generator
};

ExpVec evaluate(const PcGroup& g, const Epimorphism& f, const Word& w);

struct PQuotientOptions {
  std::size_t max_generators = 2048;
  std::size_t max_steps = default_collection_steps();
};

struct PQuotient {
  PcGroup group;
  Epimorphism epimorphism;
};

/// Largest p-quotient of p-class at most maxclass.
PQuotient p_quotient(const Presentation& pres, std::uint32_t p, std::uint32_t maxclass,
                     const PQuotientOptions& options = {});

/// Text dump: "p k", weights, definitions, then "i^p = ..." and "[j,i] = ..."
/// lines (1-based; nontrivial commutators only).
std::string write_pc_presentation(const PcGroup& g);

}  // namespace qenv
