#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>

#include "cli_runner.hpp"
#include "fixtures.hpp"
#include "qenv/certificate.hpp"
#include "qenv/presentation.hpp"

using namespace qenv;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path = fs::temp_directory_path() / ("qenv_cli_" + std::to_string(getpid()));
  TempDir() { fs::create_directories(path); }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_text_file(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

}  // namespace

TEST_CASE("derived") {
  auto r = run_cli("derived --group " + fixture_path("c2.mtab"));
  CHECK(r.status == 0);
  CHECK(r.out == "1\n");
  CHECK(run_cli("derived --group " + fixture_path("g64_149.perm")).out == "8\n");
}

TEST_CASE("envelope") {
  TempDir tmp;
  auto r = run_cli("envelope --group " + fixture_path("s3.mtab") + " --out " + tmp.file("s3.fpres"));
  CHECK(r.status == 0);
  CHECK(r.out.find("generators: 6\nrelators_raw: 36\n") == 0);
  const auto p = read_presentation(read_text_file(tmp.file("s3.fpres")));
  CHECK(p.generator_count() == 6);
  CHECK(p.relators() == envelope_presentation(fixture_group("s3")).relators());
}

TEST_CASE("certify writes text and JSON reports") {
  TempDir tmp;
  auto r = run_cli("certify --group " + fixture_path("q8.mtab") + " --report " + tmp.file("q8.json"));
  CHECK(r.status == 0);
  const auto text = read_report_text(r.out);
  CHECK(text.verdict == Verdict::inconclusive);
  CHECK(text.fixture_checksum == "sha256:" + sha256_hex(read_text_file(fixture_path("q8.mtab"))));
  CHECK(read_report_json(read_text_file(tmp.file("q8.json"))) == text);

  r = run_cli("certify --group " + fixture_path("d4.mtab") + " --with-oracle --report " + tmp.file("d4.txt"));
  CHECK(r.status == 0);
  const auto d4 = read_report_text(read_text_file(tmp.file("d4.txt")));
  REQUIRE(d4.oracle_invariant_factors);
  CHECK(d4.oracle_invariant_factors->empty());
}

TEST_CASE("certify --dump-pc") {
  TempDir tmp;
  auto r = run_cli("certify --group " + fixture_path("c2.mtab") + " --class 2 --dump-pc " + tmp.file("k.pc"));
  CHECK(r.status == 0);
  // A(C2) is free abelian of rank 2, so K = (Z/4)^2.
  CHECK(read_text_file(tmp.file("k.pc")) ==
        "2 4\nweights 1 1 2 2\ndef 1 = x1\ndef 2 = x2\ndef 3 = 1^2\ndef 4 = 2^2\n"
        "1^2 = a3\n2^2 = a4\n3^2 = id\n4^2 = id\n");
}

TEST_CASE("oracle and verify-cocycle") {
  TempDir tmp;
  auto r = run_cli("oracle --group " + fixture_path("s3.mtab") + " --report " + tmp.file("s3.json"));
  CHECK(r.status == 0);
  CHECK(r.out.find("invariant_factors: []\nnontrivial: no\n") != std::string::npos);

  // alpha(1, 1) = 1/2 alone: (x,y,z) = (1,1,2) gives -1/2.
  write_text_file(tmp.file("bad.coc"), "1 1 1/2\n");
  r = run_cli("verify-cocycle --group " + fixture_path("c2.mtab") + " --cochain " + tmp.file("bad.coc"));
  CHECK(r.status == 0);
  CHECK(r.out == "NOT_COCYCLE 1 1 2\n");

  // alpha(2, 2) = 1/2 is delta f with f(g2) = 1/4.
  write_text_file(tmp.file("cob.coc"), "2 2 1/2\n");
  r = run_cli("verify-cocycle --group " + fixture_path("c2.mtab") + " --cochain " + tmp.file("cob.coc"));
  CHECK(r.out == "COCYCLE\ntriples_checked: 8\nclass_coboundary: yes\n");

  write_text_file(tmp.file("zero.coc"), "");
  r = run_cli("verify-cocycle --group " + fixture_path("c2.mtab") + " --cochain " + tmp.file("zero.coc"));
  CHECK(r.out == "COCYCLE\ntriples_checked: 8\nclass_coboundary: yes\n");

  r = run_cli("oracle --group " + fixture_path("g64_149.mtab") + " --max-order 32");
  CHECK(r.status == 1);
}

TEST_CASE("exit codes") {
  CHECK(run_cli("").status == 2);
  CHECK(run_cli("certify").status == 2);
  CHECK(run_cli("frobnicate --group x").status == 2);
  CHECK(run_cli("certify --group /nonexistent.mtab").status == 1);
  CHECK(run_cli("certify --group " + fixture_path("c2.mtab") + " --prime 4").status == 1);
  CHECK(run_cli("--help").status == 0);
}
