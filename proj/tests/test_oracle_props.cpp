// Property tests for the resource semantics, checked by the concrete
// oracle executor on randomly generated straight-line inhale/exhale
// programs.  No SMT solver is involved anywhere in this binary.
//
// Properties:
//   - nonnegativity: no sequence of inhales/exhales can drive a resource
//     count below zero (over-consuming exhales fail instead);
//   - inverse: exhaling exactly what was just inhaled restores the count;
//   - aggregation: two inhales of m and n units equal one of m+n;
//   - frame by default: operations on one kind never change another kind;
//   - determinism: the executor is a function of the program.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "rslv/oracle.hpp"

using namespace rslv;
using namespace rslv::core;

namespace {

constexpr int kCasesPerProperty = 2600;  // x4 properties > 10^4 cases total

struct Builder {
  CProgram p;
  CMethod m;

  Builder() {
    p.sorts.insert("Id");
    p.predicates.push_back({"P", {CType::sort("Id")}});
    p.predicates.push_back({"Q", {CType::sort("Id")}});
    m.name = "t";
    m.vars = {{"a", CType::sort("Id")}, {"b", CType::sort("Id")}};
    m.param_count = 2;
  }

  CExprP key(int i) { return c_var(i == 0 ? "a" : "b"); }

  void stmt(CS kind, CExprP e, std::string name = "") {
    CStmt s;
    s.kind = kind;
    s.expr = std::move(e);
    s.name = std::move(name);
    m.body.push_back(std::move(s));
  }

  void inhale(const char* pred, int k, int amt) {
    stmt(CS::Inhale, c_acc(pred, {key(k)}, c_int(amt)));
  }
  void exhale(const char* pred, int k, int amt) {
    stmt(CS::Exhale, c_acc(pred, {key(k)}, c_int(amt)));
  }
  void label(const char* n) { stmt(CS::Label, nullptr, n); }

  OracleFinding run() {
    p.methods.clear();
    p.methods.push_back(m);
    REQUIRE_MESSAGE(wellformed(p).empty(), "generated program ill-formed");
    OracleOptions o;
    return oracle_check_method(p, p.methods[0], o);
  }
};

}  // namespace

TEST_CASE("nonnegativity: counts never drop below zero, whatever we throw "
          "at them") {
  std::mt19937 rng(1001);
  int violations = 0;
  for (int c = 0; c < kCasesPerProperty; ++c) {
    Builder b;
    int steps = 1 + static_cast<int>(rng() % 8);
    for (int i = 0; i < steps; ++i) {
      int k = static_cast<int>(rng() % 2);
      int amt = static_cast<int>(rng() % 4);
      if (rng() % 2)
        b.inhale("P", k, amt);
      else
        b.exhale("P", k, amt);  // may legitimately fail as insufficient
    }
    b.stmt(CS::Assert, c_bin(BinOp::Ge, c_perm("P", {b.key(0)}), c_int(0)));
    b.stmt(CS::Assert, c_bin(BinOp::Ge, c_perm("P", {b.key(1)}), c_int(0)));
    OracleFinding f = b.run();
    REQUIRE(f.verdict != OracleVerdict::Incomplete);
    // an over-consuming exhale is caught as insufficient-resource; the
    // nonnegativity asserts themselves must never fire
    if (f.verdict == OracleVerdict::Violation &&
        f.kind != ObKind::InsufficientResource)
      violations++;
  }
  CHECK(violations == 0);
}

TEST_CASE("inverse: inhale then exhale of the same amount is a no-op") {
  std::mt19937 rng(2002);
  int violations = 0;
  for (int c = 0; c < kCasesPerProperty; ++c) {
    Builder b;
    // a safe random prefix: exhales never exceed what was inhaled
    int credit[2] = {0, 0};
    int steps = static_cast<int>(rng() % 6);
    for (int i = 0; i < steps; ++i) {
      int k = static_cast<int>(rng() % 2);
      int amt = static_cast<int>(rng() % 4);
      if (rng() % 2) {
        b.inhale("P", k, amt);
        credit[k] += amt;
      } else if (credit[k] > 0) {
        int e = static_cast<int>(rng() % credit[k]) + 1;
        b.exhale("P", k, e);
        credit[k] -= e;
      }
    }
    b.label("l");
    int k = static_cast<int>(rng() % 2);
    int amt = static_cast<int>(rng() % 4);
    b.inhale("P", k, amt);
    b.exhale("P", k, amt);
    for (int j = 0; j < 2; ++j)
      b.stmt(CS::Assert,
             c_bin(BinOp::Eq, c_perm("P", {b.key(j)}),
                   c_old("l", c_perm("P", {b.key(j)}))));
    OracleFinding f = b.run();
    if (f.verdict != OracleVerdict::NoViolation) violations++;
  }
  CHECK(violations == 0);
}

TEST_CASE("aggregation: inhaling m then n units equals inhaling m+n") {
  std::mt19937 rng(3003);
  int violations = 0;
  for (int c = 0; c < kCasesPerProperty; ++c) {
    Builder b;
    int k = static_cast<int>(rng() % 2);
    int m = static_cast<int>(rng() % 4);
    int n = static_cast<int>(rng() % 4);
    b.label("l");
    b.inhale("P", k, m);
    b.inhale("P", k, n);
    // the merged amount can be exhaled in one step...
    b.exhale("P", k, m + n);
    // ...leaving exactly the initial count
    b.stmt(CS::Assert,
           c_bin(BinOp::Eq, c_perm("P", {b.key(k)}),
                 c_old("l", c_perm("P", {b.key(k)}))));
    OracleFinding f = b.run();
    if (f.verdict != OracleVerdict::NoViolation) violations++;
  }
  CHECK(violations == 0);
}

TEST_CASE("frame by default: one kind's traffic never touches another") {
  std::mt19937 rng(4004);
  int violations = 0;
  for (int c = 0; c < kCasesPerProperty; ++c) {
    Builder b;
    b.inhale("Q", 0, static_cast<int>(rng() % 4));
    b.label("l");
    int credit[2] = {0, 0};
    int steps = 1 + static_cast<int>(rng() % 8);
    for (int i = 0; i < steps; ++i) {
      int k = static_cast<int>(rng() % 2);
      int amt = static_cast<int>(rng() % 4);
      if (rng() % 2) {
        b.inhale("P", k, amt);
        credit[k] += amt;
      } else if (credit[k] > 0) {
        int e = static_cast<int>(rng() % credit[k]) + 1;
        b.exhale("P", k, e);
        credit[k] -= e;
      }
    }
    for (int j = 0; j < 2; ++j)
      b.stmt(CS::Assert,
             c_bin(BinOp::Eq, c_perm("Q", {b.key(j)}),
                   c_old("l", c_perm("Q", {b.key(j)}))));
    OracleFinding f = b.run();
    if (f.verdict != OracleVerdict::NoViolation) violations++;
  }
  CHECK(violations == 0);
}

TEST_CASE("the executor is deterministic") {
  std::mt19937 rng(5005);
  for (int c = 0; c < 50; ++c) {
    Builder b;
    int steps = 1 + static_cast<int>(rng() % 8);
    for (int i = 0; i < steps; ++i) {
      int k = static_cast<int>(rng() % 2);
      int amt = static_cast<int>(rng() % 4);
      if (rng() % 2)
        b.inhale("P", k, amt);
      else
        b.exhale("P", k, amt);
    }
    OracleFinding f1 = b.run();
    OracleFinding f2 = b.run();
    CHECK(f1.verdict == f2.verdict);
    CHECK(f1.witness == f2.witness);
    CHECK(f1.kind == f2.kind);
  }
}
