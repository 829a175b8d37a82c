// Command-line front end: certify, oracle, derived, envelope, verify-cocycle.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qenv/certificate.hpp"
#include "qenv/cocycle.hpp"
#include "qenv/error.hpp"
#include "qenv/presentation.hpp"

using namespace qenv;

namespace {

constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDisagreement = 3;

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

std::string factors_text(const std::vector<Integer>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].get_str();
  return s + "]";
}

struct OracleFlags {
  double time_budget = 1800;
  std::size_t max_order = 64;
  bool normalized = false;
};

void add_oracle_flags(CLI::App* cmd, OracleFlags& f) {
  cmd->add_option("--time-budget", f.time_budget, "Oracle time budget in seconds")->capture_default_str();
  cmd->add_option("--max-order", f.max_order, "Largest group order the oracle accepts")->capture_default_str();
  cmd->add_flag("--normalized", f.normalized, "Restrict to normalized cochains (alpha(1,g) = 0)");
}

OracleOptions oracle_options(const OracleFlags& f) {
  OracleOptions o;
  o.max_order = f.max_order;
  o.normalized = f.normalized;
  o.limits.deadline = std::chrono::steady_clock::now() +
                      std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(f.time_budget));
  return o;
}

OracleResult run_oracle(const FiniteGroup& g, const OracleFlags& f) {
  try {
    return symmetric_h2_with_cocycle(g, oracle_options(f));
  } catch (const ResourceError& e) {
    throw ResourceError(std::string("stage oracle: ") + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetric 2-cocycle certificates through the enveloping group of the conjugacy quandle"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::string group_path;

  auto* certify_cmd = app.add_subcommand("certify", "Compare |G'| with the derived order of a p-quotient of A(G)");
  std::uint32_t prime = 2, cls = 3;
  std::string report_path, cocycle_path, dump_pc_path;
  bool with_oracle = false;
  OracleFlags certify_oracle;
  certify_cmd->add_option("--group", group_path, "Group file (.mtab or .perm)")->required();
  certify_cmd->add_option("--prime", prime, "Prime of the quotient")->capture_default_str();
  certify_cmd->add_option("--class", cls, "Largest p-class of the quotient")->capture_default_str();
  certify_cmd->add_option("--report", report_path, "Also write the report here (.json selects JSON)");
  certify_cmd->add_flag("--with-oracle", with_oracle, "Run the cocycle oracle and cross-check the verdict");
  certify_cmd->add_option("--emit-cocycle", cocycle_path, "Write a nontrivial symmetric cocycle (implies --with-oracle)");
  certify_cmd->add_option("--dump-pc", dump_pc_path, "Write the quotient's pc presentation");
  add_oracle_flags(certify_cmd, certify_oracle);

  auto* oracle_cmd = app.add_subcommand("oracle", "Compute H^2_S(G, Q/Z) by exact linear algebra");
  std::string oracle_report, oracle_cocycle, dump_matrix_path;
  OracleFlags oracle_flags;
  oracle_cmd->add_option("--group", group_path, "Group file (.mtab or .perm)")->required();
  oracle_cmd->add_option("--report", oracle_report, "Also write the result here (.json selects JSON)");
  oracle_cmd->add_option("--emit-cocycle", oracle_cocycle, "Write a nontrivial symmetric cocycle");
  oracle_cmd->add_option("--dump-matrix", dump_matrix_path, "Write the cocycle system M");
  add_oracle_flags(oracle_cmd, oracle_flags);

  auto* derived_cmd = app.add_subcommand("derived", "Print the order of the derived subgroup");
  derived_cmd->add_option("--group", group_path, "Group file (.mtab or .perm)")->required();

  auto* envelope_cmd = app.add_subcommand("envelope", "Write the presentation of A(G)");
  std::string envelope_out, envelope_matrix;
  envelope_cmd->add_option("--group", group_path, "Group file (.mtab or .perm)")->required();
  envelope_cmd->add_option("--out", envelope_out, "Output .fpres file")->required();
  envelope_cmd->add_option("--dump-matrix", envelope_matrix, "Write the abelianized relation matrix");

  auto* verify_cmd = app.add_subcommand("verify-cocycle", "Check the 2-cocycle identity and the coboundary solve");
  std::string cochain_path;
  verify_cmd->add_option("--group", group_path, "Group file (.mtab or .perm)")->required();
  verify_cmd->add_option("--cochain", cochain_path, "Cochain file (lines 'g h num/den')")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    const std::string group_bytes = read_text_file(group_path);
    const FiniteGroup g = load_group_file(group_path);

    if (*certify_cmd) {
      if (!cocycle_path.empty()) with_oracle = true;
      CertifyOptions opts;
      opts.prime = prime;
      opts.maxclass = cls;
      PQuotient holder{PcGroup(prime, {}), {}};
      if (!dump_pc_path.empty()) opts.keep_quotient = &holder;
      Certificate c = certify(g, opts);
      c.fixture_checksum = "sha256:" + sha256_hex(group_bytes);
      if (!dump_pc_path.empty()) write_file(dump_pc_path, write_pc_presentation(holder.group));
      int status = 0;
      if (with_oracle) {
        OracleResult r = run_oracle(g, certify_oracle);
        c.oracle_invariant_factors = r.h2.invariant_factors;
        if (!cocycle_path.empty() && r.cocycle) {
          write_file(cocycle_path, write_cochain(*r.cocycle));
          c.cocycle_path = cocycle_path;
        }
        if (r.h2.trivial() && c.verdict == Verdict::nontrivial) {
          std::cerr << "error: oracle finds H^2_S trivial but the quotient route says NONTRIVIAL\n";
          status = kExitDisagreement;
        }
      }
      c.timestamp = utc_timestamp();
      const std::string text = write_report_text(c);
      std::cout << text;
      if (!report_path.empty()) write_file(report_path, ends_with(report_path, ".json") ? write_report_json(c) : text);
      return status;
    }

    if (*oracle_cmd) {
      if (!dump_matrix_path.empty())
        write_file(dump_matrix_path, write_matrix(symmetric_cocycle_system(g, oracle_flags.normalized).m));
      const auto start = std::chrono::steady_clock::now();
      OracleResult r = run_oracle(g, oracle_flags);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (!oracle_cocycle.empty() && r.cocycle) write_file(oracle_cocycle, write_cochain(*r.cocycle));
      std::ostringstream out;
      out << "group_order: " << g.order() << "\n"
          << "class_count: " << r.class_count << "\n"
          << "invariant_factors: " << factors_text(r.h2.invariant_factors) << "\n"
          << "nontrivial: " << (r.h2.trivial() ? "no" : "yes") << "\n";
      if (r.cocycle) out << "cocycle_denominator: " << r.cocycle->denominator() << "\n";
      if (!oracle_cocycle.empty() && r.cocycle) out << "cocycle_path: " << oracle_cocycle << "\n";
      std::cout << out.str();
      std::cerr << "oracle time: " << secs << " s\n";
      if (!oracle_report.empty()) {
        if (ends_with(oracle_report, ".json")) {
          nlohmann::ordered_json j;
          j["group_order"] = g.order();
          j["class_count"] = r.class_count;
          auto arr = nlohmann::ordered_json::array();
          for (const auto& d : r.h2.invariant_factors) arr.push_back(d.get_str());
          j["invariant_factors"] = arr;
          j["nontrivial"] = !r.h2.trivial();
          if (!oracle_cocycle.empty() && r.cocycle) j["cocycle_path"] = oracle_cocycle;
          write_file(oracle_report, j.dump(2) + "\n");
        } else {
          write_file(oracle_report, out.str());
        }
      }
      return 0;
    }

    if (*derived_cmd) {
      std::cout << derived_subgroup(g).size() << "\n";
      return 0;
    }

    if (*envelope_cmd) {
      const Presentation p = envelope_presentation(g);
      write_file(envelope_out, write_presentation(p));
      if (!envelope_matrix.empty()) write_file(envelope_matrix, write_matrix(abelianized_relation_matrix(p)));
      std::cout << "generators: " << p.generator_count() << "\n"
                << "relators_raw: " << p.raw_relator_count() << "\n"
                << "relators: " << p.relators().size() << "\n";
      return 0;
    }

    if (*verify_cmd) {
      const SymmetricCochain alpha = read_cochain(read_text_file(cochain_path), g.order());
      const CocycleCheck check = verify_cocycle(g, alpha);
      if (!check.is_cocycle) {
        const auto [x, y, z] = check.witness;
        std::cout << "NOT_COCYCLE " << x + 1 << ' ' << y + 1 << ' ' << z + 1 << "\n";
        return 0;
      }
      std::cout << "COCYCLE\n";
      std::cout << "triples_checked: " << g.order() * g.order() * g.order() << "\n";
      std::cout << "class_coboundary: " << (solve_class_coboundary(g, alpha) ? "yes" : "no") << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}
