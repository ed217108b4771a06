// Acceptance gate: one pass/fail line per criterion.  Exits nonzero if
// any criterion fails.  Uses the bundled corpus and the same driver as
// the command line tool.
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "rslv/driver.hpp"

using namespace rslv;

namespace {

int g_criterion = 0;
int g_failures = 0;

void report(bool ok, const std::string& what, const std::string& detail) {
  ++g_criterion;
  if (ok) {
    std::cout << "PASS criterion " << g_criterion << ": " << what << "\n";
  } else {
    ++g_failures;
    std::cout << "FAIL criterion " << g_criterion << ": " << what;
    if (!detail.empty()) std::cout << " -- " << detail;
    std::cout << "\n";
  }
}

std::string corpus(const std::string& name) {
  return std::string(RSLV_SOURCE_DIR) + "/corpus/" + name;
}

struct Timed {
  FileReport rep;
  double secs = 0;
};

Timed verify(const std::string& name, DriverOptions opts = {}) {
  auto t0 = std::chrono::steady_clock::now();
  Timed t;
  t.rep = verify_file(corpus(name), opts);
  t.secs = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         t0)
               .count();
  return t;
}

const MethodReport* find_method(const FileReport& r, const std::string& m) {
  for (auto& mr : r.methods)
    if (mr.method == m) return &mr;
  return nullptr;
}

bool method_verified(const FileReport& r, const std::string& m,
                     std::string& why) {
  const MethodReport* mr = find_method(r, m);
  if (!mr) {
    why += " missing method " + m + ";";
    return false;
  }
  if (!mr->verified) {
    why += " " + m + " not verified;";
    return false;
  }
  return true;
}

bool has_diag(const FileReport& r, const std::string& m, ObKind kind,
              int line) {
  const MethodReport* mr = find_method(r, m);
  if (!mr) return false;
  for (auto& d : mr->diagnostics)
    if (d.kind == kind && d.span.line == line) return true;
  return false;
}

// -- criterion 1: bank corpus verdicts and diagnostics ----------------------

void criterion1() {
  std::string why;
  bool ok = true;

  Timed good = verify("bank_ok.rsl");
  for (const char* m : {"Bank::deposit", "Bank::withdraw", "Bank::transfer",
                        "take2return1", "client"})
    ok &= method_verified(good.rep, m, why);
  if (!good.rep.verified()) {
    ok = false;
    why += " bank_ok.rsl not verified;";
  }

  Timed bad = verify("bad.rsl");
  if (bad.rep.verified()) {
    ok = false;
    why += " bad.rsl unexpectedly verified;";
  }
  if (!has_diag(bad.rep, "client", ObKind::InsufficientResource, 25)) {
    ok = false;
    why += " bad.rsl: no insufficient-resource at the second withdrawal;";
  }

  Timed badt = verify("bad_transfer.rsl");
  if (badt.rep.verified()) {
    ok = false;
    why += " bad_transfer.rsl unexpectedly verified;";
  }
  if (!has_diag(badt.rep, "Bank::transfer_both", ObKind::InsufficientResource,
                22)) {
    ok = false;
    why += " bad_transfer.rsl: no insufficient-resource at the second "
           "consumption;";
  }

  for (auto& [n, t] : {std::pair<const char*, double>{"bank_ok.rsl",
                                                      good.secs},
                       {"bad.rsl", bad.secs},
                       {"bad_transfer.rsl", badt.secs}}) {
    if (t >= 10.0) {
      ok = false;
      std::ostringstream s;
      s << " " << n << " took " << t << "s (>= 10s);";
      why += s.str();
    }
  }
  report(ok,
         "bank_ok.rsl verifies (deposit, withdraw, transfer, take2return1, "
         "client); bad.rsl and bad_transfer.rsl fail at the right place, "
         "each file under 10s",
         why);
}

// -- criterion 2: instrumented holds() observation points -------------------

void criterion2() {
  std::string why;
  bool ok = true;
  Timed t = verify("holds_points.rsl");
  ok &= method_verified(t.rep, "take2return1", why);
  ok &= method_verified(t.rep, "client", why);
  if (!t.rep.verified()) {
    ok = false;
    why += " holds_points.rsl not verified;";
  }
  report(ok,
         "take2return1 instrumented with holds()==1/2 between requires "
         "clauses, old(holds())==2, holds()==0 and ==1 in ensures verifies "
         "exactly as annotated (holds_points.rsl)",
         why);
}

// -- criterion 3: derived functional postcondition ---------------------------

void criterion3() {
  std::string why;
  bool ok = true;
  Timed t = verify("derived_post.rsl");
  ok &= method_verified(t.rep, "derived_check", why);
  if (!t.rep.verified()) {
    ok = false;
    why += " derived_post.rsl not verified;";
  }
  if (t.secs >= 10.0) {
    ok = false;
    std::ostringstream s;
    s << " took " << t.secs << "s (>= 10s);";
    why += s.str();
  }
  report(ok,
         "deposit's resource spec plus the coupling invariant entail the "
         "balance update and its frame quantifier (asserts in derived_post."
         "rsl prove unsat within 10s)",
         why);
}

// -- criterion 4: aliasing-free sum of resources -----------------------------

void criterion4() {
  std::string why;
  bool ok = true;
  Timed t = verify("withdraw2_resources.rsl");
  ok &= method_verified(t.rep, "Bank::withdraw2", why);
  for (int ids : {1, 2}) {
    DriverOptions o;
    o.run_oracle = true;
    o.domain_size = ids;
    FileReport r = verify_file(corpus("withdraw2_resources.rsl"), o);
    const MethodReport* m = find_method(r, "Bank::withdraw2");
    if (!m || !m->oracle_ran ||
        m->oracle.verdict != OracleVerdict::NoViolation || m->disagreement) {
      ok = false;
      why += " oracle with " + std::to_string(ids) + " id(s) disagrees;";
    }
  }
  report(ok,
         "withdraw2 verifies from resource(Money(acct_id1), 1) && "
         "resource(Money(acct_id2), 2) alone, with no aliasing case split, "
         "confirmed by the oracle with 1 and with 2 distinct ids",
         why);
}

// -- criterion 5: token transfer case study ----------------------------------

void criterion5() {
  std::string why;
  bool ok = true;
  Timed t = verify("token_transfer.rsl");
  for (const char* m :
       {"send_fungible_tokens", "on_recv_packet", "round_trip",
        "transfer_supply"})
    ok &= method_verified(t.rep, m, why);
  if (!t.rep.verified()) {
    ok = false;
    why += " token_transfer.rsl not verified;";
  }
  report(ok,
         "token_transfer.rsl verifies send_fungible_tokens, the round-trip "
         "property and supply preservation with the Money and "
         "UnescrowedCoins kinds and their coupling invariants",
         why);
}

// -- criterion 6: oracle agreement and mutation detection --------------------

const std::vector<std::pair<std::string, bool>> kAllCases = {
    {"bank_ok.rsl", true},         {"holds_points.rsl", true},
    {"withdraw2_resources.rsl", true}, {"derived_post.rsl", true},
    {"token_transfer.rsl", true}, {"bad.rsl", false},
    {"bad_transfer.rsl", false},  {"havoc_matters.rsl", false}};

void criterion6() {
  std::string why;
  bool ok = true;

  // (a) agreement: no soundness disagreement on any corpus method
  for (auto& [file, expect_ok] : kAllCases) {
    DriverOptions o;
    o.run_oracle = true;
    FileReport r = verify_file(corpus(file), o);
    for (auto& m : r.methods)
      if (m.disagreement) {
        ok = false;
        why += " disagreement in " + file + " " + m.method + ";";
      }
  }

  // (b) each seeded bug is caught as a disagreement or a flipped verdict.
  // token_transfer is excluded here: refutation queries over quantifiers
  // and uninterpreted functions routinely time out instead of failing.
  struct Mut {
    const char* name;
    Mutations m;
  };
  std::vector<Mut> muts(5);
  muts[0] = {"drop-exhale-check", {}};
  muts[0].m.drop_exhale_check = true;
  muts[1] = {"drop-havoc", {}};
  muts[1].m.drop_havoc = true;
  muts[2] = {"drop-coupling", {}};
  muts[2].m.drop_coupling = true;
  muts[3] = {"swap-holds-plus-cur", {}};
  muts[3].m.swap_holds_plus_cur = true;
  muts[4] = {"swap-holds-minus-cur", {}};
  muts[4].m.swap_holds_minus_cur = true;

  for (auto& mut : muts) {
    bool caught = false;
    for (auto& [file, expect_ok] : kAllCases) {
      if (file == "token_transfer.rsl") continue;
      DriverOptions o;
      o.run_oracle = true;
      o.mut = mut.m;
      FileReport r = verify_file(corpus(file), o);
      bool disagree = false;
      for (auto& m : r.methods) disagree |= m.disagreement;
      bool verdict_flip = r.front_errors.empty() &&
                          (r.verified() != expect_ok) && !disagree;
      if (disagree || verdict_flip) {
        caught = true;
        break;
      }
    }
    if (!caught) {
      ok = false;
      why += std::string(" mutation ") + mut.name + " undetected;";
    }
  }
  report(ok,
         "symbolic and concrete oracle agree on every corpus method, and "
         "all five seeded encoder bugs are detected as a disagreement or a "
         "flipped verdict",
         why);
}

// -- criteria 7 and 8 delegate to the dedicated suites ------------------------

int run_suite(const std::string& binary, const std::string& log) {
  std::string cmd = binary + " > " + log + " 2>&1";
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

void criterion7() {
  std::string bin =
      (std::filesystem::path(RSLV_BIN).parent_path() / "test_encoder")
          .string();
  int code = run_suite(bin, "/tmp/rslv_accept_encoder.txt");
  report(code == 0,
         "every encoding rule matches its checked-in golden IR byte for "
         "byte, with the six holds() context rules covered individually "
         "(test_encoder)",
         code == 0 ? "" : "see /tmp/rslv_accept_encoder.txt");
}

void criterion8() {
  std::string bin =
      (std::filesystem::path(RSLV_BIN).parent_path() / "test_oracle_props")
          .string();
  // prove independence from the solver: point the solver at /bin/false
  setenv("RSLV_SMT_CMD", "/bin/false", 1);
  int code = run_suite(bin, "/tmp/rslv_accept_props.txt");
  unsetenv("RSLV_SMT_CMD");
  report(code == 0,
         "resource-semantics property suites (nonnegativity, inverse, "
         "aggregation, frame-by-default) pass on 10^4+ random programs via "
         "the concrete executor, with no SMT solver available",
         code == 0 ? "" : "see /tmp/rslv_accept_props.txt");
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  if (g_failures) {
    std::cout << g_failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all " << g_criterion << " criteria pass\n";
  return 0;
}
