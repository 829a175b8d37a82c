#include "qenv/certificate.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>
#include <openssl/evp.h>

#include "qenv/error.hpp"
#include "qenv/presentation.hpp"

namespace qenv {

#ifndef QENV_VERSION
#define QENV_VERSION "0.0.0"
#endif

const char* const kDecisionRule =
    "an epimorphism A(G) -> K maps A(G)' onto K', so |A(G)'| >= |K'|; "
    "if |K'| > |G'| then A(G)' is not isomorphic to G' and H^2_S(G, C^x) != 0 (NONTRIVIAL); "
    "otherwise INCONCLUSIVE";
const char* const kToolVersion = "qenv " QENV_VERSION;

std::string to_string(Verdict v) { return v == Verdict::nontrivial ? "NONTRIVIAL" : "INCONCLUSIVE"; }

Verdict parse_verdict(std::string_view s) {
  if (s == "NONTRIVIAL") return Verdict::nontrivial;
  if (s == "INCONCLUSIVE") return Verdict::inconclusive;
  throw ParseError("report: unknown verdict '" + std::string(s) + "'");
}

Verdict decide(const Integer& derived_order, const Integer& quotient_derived_order) {
  return quotient_derived_order > derived_order ? Verdict::nontrivial : Verdict::inconclusive;
}

namespace {

template <class F>
auto stage(const char* name, F&& f) {
  try {
    return f();
  } catch (const ResourceError& e) {
    throw ResourceError(std::string("stage ") + name + ": " + e.what());
  }
}

}  // namespace

Certificate certify(const FiniteGroup& g, const CertifyOptions& options) {
  Certificate c;
  c.group_order = g.order();
  c.class_count = stage("conjugacy classes", [&] { return conjugacy_classes(g).class_count(); });
  c.derived_order = stage("derived subgroup", [&] { return derived_subgroup(g).size(); });
  const Presentation env = stage("envelope", [&] { return envelope_presentation(g); });
  c.envelope_generators = env.generator_count();
  c.envelope_relators_raw = env.raw_relator_count();
  c.quotient_prime = options.prime;
  c.quotient_class = options.maxclass;
  PQuotient q = stage("p-quotient", [&] { return p_quotient(env, options.prime, options.maxclass, options.quotient); });
  c.quotient_pclass = q.group.pclass();
  c.quotient_order = q.group.order();
  c.quotient_derived_order = stage("quotient derived subgroup", [&] { return pc_derived_order(q.group); });
  c.verdict = decide(c.derived_order, c.quotient_derived_order);
  if (options.keep_quotient) *options.keep_quotient = std::move(q);
  return c;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string utc_timestamp() {
  std::time_t t = std::time(nullptr);
  if (const char* s = std::getenv("SOURCE_DATE_EPOCH")) t = std::time_t(std::strtoll(s, nullptr, 10));
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace {

std::string join_factors(const std::vector<Integer>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].get_str();
  return s + "]";
}

Integer parse_integer(const std::string& s, const std::string& key) {
  Integer v;
  if (s.empty() || s[0] == '+' || v.set_str(s, 10) != 0 || v < 0)
    throw ParseError("report: " + key + " is not a non-negative integer: '" + s + "'");
  return v;
}

std::size_t parse_size(const std::string& s, const std::string& key) {
  const Integer v = parse_integer(s, key);
  if (!v.fits_ulong_p()) throw ParseError("report: " + key + " out of range");
  return v.get_ui();
}

std::vector<Integer> parse_factors(std::string s, const std::string& key) {
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') throw ParseError("report: " + key + " must be [..]");
  s = s.substr(1, s.size() - 2);
  std::vector<Integer> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(' '), e = item.find_last_not_of(' ');
    if (b == std::string::npos) throw ParseError("report: empty entry in " + key);
    out.push_back(parse_integer(item.substr(b, e - b + 1), key));
  }
  return out;
}

// Field table shared by the text and JSON forms: name, writer, reader.
struct Field {
  const char* name;
  bool optional;
  std::function<std::optional<std::string>(const Certificate&)> get;
  std::function<void(Certificate&, const std::string&)> set;
};

const std::vector<Field>& fields() {
  using C = Certificate;
  auto size_field = [](const char* name, std::size_t C::*m) {
    return Field{name, false, [m](const C& c) { return std::optional(std::to_string(c.*m)); },
                 [m, name](C& c, const std::string& v) { c.*m = parse_size(v, name); }};
  };
  auto u32_field = [](const char* name, std::uint32_t C::*m) {
    return Field{name, false, [m](const C& c) { return std::optional(std::to_string(c.*m)); },
                 [m, name](C& c, const std::string& v) { c.*m = std::uint32_t(parse_size(v, name)); }};
  };
  auto int_field = [](const char* name, Integer C::*m) {
    return Field{name, false, [m](const C& c) { return std::optional((c.*m).get_str()); },
                 [m, name](C& c, const std::string& v) { c.*m = parse_integer(v, name); }};
  };
  auto str_field = [](const char* name, std::string C::*m) {
    return Field{name, false, [m](const C& c) { return std::optional(c.*m); },
                 [m](C& c, const std::string& v) { c.*m = v; }};
  };
  static const std::vector<Field> table = {
      size_field("group_order", &C::group_order),
      size_field("class_count", &C::class_count),
      size_field("derived_order", &C::derived_order),
      size_field("envelope_generators", &C::envelope_generators),
      size_field("envelope_relators_raw", &C::envelope_relators_raw),
      u32_field("quotient_prime", &C::quotient_prime),
      u32_field("quotient_class", &C::quotient_class),
      u32_field("quotient_pclass", &C::quotient_pclass),
      int_field("quotient_order", &C::quotient_order),
      int_field("quotient_derived_order", &C::quotient_derived_order),
      Field{"verdict", false, [](const C& c) { return std::optional(to_string(c.verdict)); },
            [](C& c, const std::string& v) { c.verdict = parse_verdict(v); }},
      str_field("decision_rule", &C::decision_rule),
      Field{"oracle_invariant_factors", true,
            [](const C& c) {
              return c.oracle_invariant_factors ? std::optional(join_factors(*c.oracle_invariant_factors))
                                                : std::nullopt;
            },
            [](C& c, const std::string& v) { c.oracle_invariant_factors = parse_factors(v, "oracle_invariant_factors"); }},
      Field{"cocycle_path", true, [](const C& c) { return c.cocycle_path; },
            [](C& c, const std::string& v) { c.cocycle_path = v; }},
      str_field("tool_version", &C::tool_version),
      str_field("fixture_checksum", &C::fixture_checksum),
      str_field("timestamp", &C::timestamp),
  };
  return table;
}

const Field& field_named(const std::string& key) {
  for (const auto& f : fields())
    if (key == f.name) return f;
  throw ParseError("report: unknown key '" + key + "'");
}

Certificate from_pairs(const std::vector<std::pair<std::string, std::string>>& pairs) {
  Certificate c;
  c.decision_rule.clear();
  c.tool_version.clear();
  std::map<std::string, bool> seen;
  for (const auto& [k, v] : pairs) {
    const Field& f = field_named(k);
    if (seen[k]) throw ParseError("report: duplicate key '" + k + "'");
    seen[k] = true;
    f.set(c, v);
  }
  for (const auto& f : fields())
    if (!f.optional && !seen[f.name]) throw ParseError(std::string("report: missing key '") + f.name + "'");
  return c;
}

}  // namespace

std::string write_report_text(const Certificate& c) {
  std::string out;
  for (const auto& f : fields())
    if (auto v = f.get(c)) out += std::string(f.name) + ": " + *v + "\n";
  return out;
}

Certificate read_report_text(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::stringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto colon = line.find(": ");
    if (colon == std::string::npos) {
      // "key:" with an empty value
      if (!line.empty() && line.back() == ':') {
        pairs.emplace_back(line.substr(0, line.size() - 1), "");
        continue;
      }
      throw ParseError("report: expected 'key: value', got '" + line + "'");
    }
    pairs.emplace_back(line.substr(0, colon), line.substr(colon + 2));
  }
  return from_pairs(pairs);
}

std::string write_report_json(const Certificate& c) {
  nlohmann::ordered_json j;
  for (const auto& f : fields()) {
    auto v = f.get(c);
    if (!v) continue;
    const std::string name = f.name;
    if (name == "oracle_invariant_factors") {
      auto arr = nlohmann::ordered_json::array();
      for (const auto& d : *c.oracle_invariant_factors) {
        if (d.fits_ulong_p()) arr.push_back(d.get_ui());
        else arr.push_back(d.get_str());
      }
      j[name] = arr;
    } else if (name == "verdict" || name == "decision_rule" || name == "cocycle_path" || name == "tool_version" ||
               name == "fixture_checksum" || name == "timestamp") {
      j[name] = *v;
    } else {
      // Orders beyond 64 bits are written as decimal strings.
      const Integer n(*v);
      if (n.fits_ulong_p()) j[name] = n.get_ui();
      else j[name] = *v;
    }
  }
  return j.dump(2) + "\n";
}

Certificate read_report_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("report: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("report: JSON report must be an object");
  auto scalar = [](const nlohmann::json& v, const std::string& key) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
    throw ParseError("report: bad value for " + key);
  };
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& [k, v] : j.items()) {
    if (k == "oracle_invariant_factors") {
      if (!v.is_array()) throw ParseError("report: oracle_invariant_factors must be an array");
      std::string s = "[";
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + scalar(v[i], k);
      pairs.emplace_back(k, s + "]");
    } else {
      pairs.emplace_back(k, scalar(v, k));
    }
  }
  return from_pairs(pairs);
}

}  // namespace qenv
