#pragma once

// End-to-end certificate: |G'| against |K'| for a p-quotient K of A(G).

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qenv/group.hpp"
#include "qenv/linalg.hpp"
#include "qenv/pquotient.hpp"

namespace qenv {

enum class Verdict { nontrivial, inconclusive };

std::string to_string(Verdict v);
Verdict parse_verdict(std::string_view s);

/// NONTRIVIAL exactly when |K'| > |G'|.
Verdict decide(const Integer& derived_order, const Integer& quotient_derived_order);

extern const char* const kDecisionRule;
extern const char* const kToolVersion;

struct Certificate {
  std::size_t group_order = 0;
  std::size_t class_count = 0;
  std::size_t derived_order = 0;
  std::size_t envelope_generators = 0;
  std::size_t envelope_relators_raw = 0;
  std::uint32_t quotient_prime = 2;
  std::uint32_t quotient_class = 3;   // requested bound
  std::uint32_t quotient_pclass = 0;  // p-class actually reached
  Integer quotient_order = 1;
  Integer quotient_derived_order = 1;
  Verdict verdict = Verdict::inconclusive;
  std::string decision_rule = kDecisionRule;
  std::optional<std::vector<Integer>> oracle_invariant_factors;
  std::optional<std::string> cocycle_path;
  std::string tool_version = kToolVersion;
  std::string fixture_checksum;
  std::string timestamp;

  bool operator==(const Certificate&) const = default;
};

struct CertifyOptions {
  std::uint32_t prime = 2;
  std::uint32_t maxclass = 3;
  PQuotientOptions quotient;
  /// Receives the quotient when set (debug dumps).
  PQuotient* keep_quotient = nullptr;
};

/// Runs the quotient route. Resource errors are rethrown naming the stage.
/// fixture_checksum and timestamp are left for the caller.
Certificate certify(const FiniteGroup& g, const CertifyOptions& options = {});

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view bytes);
/// UTC, ISO 8601; SOURCE_DATE_EPOCH overrides the clock.
std::string utc_timestamp();

/// "key: value" lines in field order; absent optional fields are omitted.
std::string write_report_text(const Certificate& c);
Certificate read_report_text(std::string_view text);
/// Same keys as the text report.
std::string write_report_json(const Certificate& c);
Certificate read_report_json(std::string_view text);

}  // namespace qenv
