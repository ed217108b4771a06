// End-to-end tests of the driver: source text in, report out, with the
// real SMT backend.  Also exercises the command line binary (exit codes,
// JSON output) and the corpus runner.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "rslv/driver.hpp"

using namespace rslv;

namespace {

std::string corpus_path(const std::string& name) {
  return std::string(RSLV_SOURCE_DIR) + "/corpus/" + name;
}

int run_cli(const std::string& args, std::string* out = nullptr) {
  std::string cmd = std::string(RSLV_BIN) + " " + args;
  if (out) {
    cmd += " > /tmp/rslv_cli_out.txt 2>&1";
  } else {
    cmd += " > /dev/null 2>&1";
  }
  int status = std::system(cmd.c_str());
  if (out) {
    std::ifstream f("/tmp/rslv_cli_out.txt");
    std::stringstream ss;
    ss << f.rdbuf();
    *out = ss.str();
  }
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("a correct program verifies end to end") {
  DriverOptions opts;
  FileReport rep = verify_file(corpus_path("bank_ok.rsl"), opts);
  REQUIRE(rep.front_errors.empty());
  CHECK(rep.verified());
  CHECK(rep.methods.size() == 5);
  for (auto& m : rep.methods) {
    CHECK(m.verified);
    CHECK(m.proved == m.obligations);
  }
}

TEST_CASE("an over-withdrawing client fails at the second withdrawal") {
  DriverOptions opts;
  FileReport rep = verify_file(corpus_path("bad.rsl"), opts);
  REQUIRE(rep.front_errors.empty());
  CHECK(!rep.verified());
  bool found = false;
  for (auto& m : rep.methods)
    for (auto& d : m.diagnostics)
      if (m.method == "client" && d.kind == ObKind::InsufficientResource &&
          d.span.line == 25)
        found = true;
  CHECK_MESSAGE(found,
                "expected insufficient-resource in client at line 25");
}

TEST_CASE("front-end errors produce an empty method list") {
  DriverOptions opts;
  FileReport rep =
      verify_source("inline.rsl", "fn f(x: Int) { assert(x && true); }", opts);
  CHECK(!rep.front_errors.empty());
  CHECK(rep.methods.empty());
  CHECK(!rep.verified());
}

TEST_CASE("the JSON report round-trips") {
  DriverOptions opts;
  opts.run_oracle = true;
  for (const char* f : {"bank_ok.rsl", "bad.rsl", "havoc_matters.rsl"}) {
    FileReport rep = verify_file(corpus_path(f), opts);
    FileReport back = report_from_json(report_to_json(rep));
    CHECK_MESSAGE(same_report(rep, back), "JSON round-trip changed ", f);
  }
}

TEST_CASE("the oracle agrees on a verified and on a failing program") {
  DriverOptions opts;
  opts.run_oracle = true;
  FileReport ok = verify_file(corpus_path("bank_ok.rsl"), opts);
  for (auto& m : ok.methods) {
    REQUIRE(m.oracle_ran);
    CHECK(m.oracle.verdict == OracleVerdict::NoViolation);
    CHECK(!m.disagreement);
  }
  FileReport bad = verify_file(corpus_path("bad.rsl"), opts);
  bool oracle_caught = false;
  for (auto& m : bad.methods) {
    CHECK(!m.disagreement);  // prover caught it too, so no disagreement
    if (m.oracle.verdict == OracleVerdict::Violation) oracle_caught = true;
  }
  CHECK(oracle_caught);
}

TEST_CASE("cli: exit code 0 / 1 / 2 for verified / failed / rejected") {
  CHECK(run_cli("verify " + corpus_path("bank_ok.rsl")) == 0);
  CHECK(run_cli("verify " + corpus_path("bad.rsl")) == 1);
  std::ofstream bad_src("/tmp/rslv_reject.rsl");
  bad_src << "fn f(x: Int) { assert(x && true); }\n";
  bad_src.close();
  CHECK(run_cli("verify /tmp/rslv_reject.rsl") == 2);
  CHECK(run_cli("verify /tmp/no_such_file.rsl") == 2);
}

TEST_CASE("cli: --json emits a parseable report") {
  std::string out;
  int code = run_cli("verify --json " + corpus_path("bad.rsl"), &out);
  CHECK(code == 1);
  FileReport rep = report_from_json(out);
  CHECK(!rep.verified());
  CHECK(!rep.methods.empty());
}

TEST_CASE("cli: the corpus manifest passes") {
  std::string out;
  int code = run_cli(
      "corpus " + std::string(RSLV_SOURCE_DIR) + "/corpus/manifest.json",
      &out);
  CHECK_MESSAGE(code == 0, "corpus run failed:\n", out);
  CHECK(out.find("FAIL") == std::string::npos);
}
