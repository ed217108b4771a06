// Front-end tests: lexing, parsing, printing round-trips, and the
// surface-language well-formedness rules enforced by the checker.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>
#include <sstream>

#include "doctest.h"
#include "rslv/parser.hpp"
#include "rslv/typecheck.hpp"

using namespace rslv;
using namespace rslv::front;

namespace {

Program parsed(const std::string& src) {
  ParseResult r = parse_text(src);
  for (auto& e : r.errors)
    FAIL("parse error: ", e.message, " at line ", e.span.line);
  return std::move(r.program);
}

Program checked(const std::string& src) {
  Program p = parsed(src);
  CheckResult c = typecheck(p);
  for (auto& e : c.errors)
    FAIL("type error: ", e.message, " at line ", e.span.line);
  return p;
}

std::vector<std::string> check_errors(const std::string& src) {
  ParseResult r = parse_text(src);
  std::vector<std::string> msgs;
  for (auto& e : r.errors) msgs.push_back(e.message);
  if (!msgs.empty()) return msgs;
  CheckResult c = typecheck(r.program);
  for (auto& e : c.errors) msgs.push_back(e.message);
  return msgs;
}

bool rejected_with(const std::string& src, const std::string& needle) {
  for (auto& m : check_errors(src))
    if (m.find(needle) != std::string::npos) return true;
  return false;
}

const char* kBank = R"(
#[resource_kind]
struct Money(AcctId);

#[invariant_twostate(forall(|a: AcctId| holds(Money(a)) - old(holds(Money(a))) == self.balance(a) - old(self.balance(a))))]
struct Bank {
  balances: Map[AcctId]Int,
}

impl Bank {
  #[pure]
  fn balance(&self, a: AcctId) -> Int {
    self.balances.get(a)
  }

  #[ensures(resource(Money(acct_id), amt))]
  fn deposit(&mut self, acct_id: AcctId, amt: U32) {
    let b = self.balances.get(acct_id);
    self.balances.insert(acct_id, b + amt);
    produce!(resource(Money(acct_id), amt));
  }

  #[requires(resource(Money(acct_id), amt))]
  fn withdraw(&mut self, acct_id: AcctId, amt: U32) {
    consume!(resource(Money(acct_id), amt));
    let b = self.balances.get(acct_id);
    self.balances.insert(acct_id, b - amt);
  }
}

#[requires(resource(Money(a), 2))]
#[ensures(resource(Money(a), 1))]
fn take2return1(bank: &mut Bank, a: AcctId) {
  assert(holds(Money(a)) == 2);
  bank.withdraw(a, 2);
  bank.deposit(a, 1);
}
)";

}  // namespace

TEST_CASE("print/parse round-trip is the identity on the AST") {
  Program p1 = parsed(kBank);
  std::string printed = print_program(p1);
  ParseResult r2 = parse_text(printed);
  REQUIRE(r2.ok());
  CHECK(same_program(p1, r2.program));
  // and printing is a fixed point
  CHECK(print_program(r2.program) == printed);
}

TEST_CASE("round-trip holds for randomly generated expressions") {
  // Build random well-formed integer/boolean expressions over a small
  // vocabulary, print them inside an assert, and re-parse.
  std::mt19937 rng(12345);
  auto pick = [&](int n) { return static_cast<int>(rng() % n); };
  std::function<std::string(int, bool)> gen = [&](int depth,
                                                  bool boolean) -> std::string {
    if (depth == 0 || pick(4) == 0) {
      if (boolean) return pick(2) ? "true" : "false";
      switch (pick(3)) {
        case 0: return std::to_string(pick(100));
        case 1: return "x";
        default: return "y";
      }
    }
    if (boolean) {
      switch (pick(6)) {
        case 0: return "(" + gen(depth - 1, true) + " && " + gen(depth - 1, true) + ")";
        case 1: return "(" + gen(depth - 1, true) + " || " + gen(depth - 1, true) + ")";
        case 2: return "(" + gen(depth - 1, true) + " ==> " + gen(depth - 1, true) + ")";
        case 3: return "(!" + gen(depth - 1, true) + ")";
        case 4: return "(" + gen(depth - 1, false) + " <= " + gen(depth - 1, false) + ")";
        default: return "(" + gen(depth - 1, false) + " == " + gen(depth - 1, false) + ")";
      }
    }
    switch (pick(4)) {
      case 0: return "(" + gen(depth - 1, false) + " + " + gen(depth - 1, false) + ")";
      case 1: return "(" + gen(depth - 1, false) + " - " + gen(depth - 1, false) + ")";
      case 2: return "(" + gen(depth - 1, false) + " * " + gen(depth - 1, false) + ")";
      default:
        return "(if " + gen(depth - 1, true) + " { " + gen(depth - 1, false) +
               " } else { " + gen(depth - 1, false) + " })";
    }
  };
  for (int i = 0; i < 500; ++i) {
    std::string src = "fn f(x: Int, y: Int) {\n  assert(" + gen(4, true) +
                      ");\n}\n";
    Program p1 = parsed(src);
    ParseResult r2 = parse_text(print_program(p1));
    REQUIRE(r2.ok());
    CHECK(same_program(p1, r2.program));
  }
}

TEST_CASE("a well-formed program typechecks") { checked(kBank); }

TEST_CASE("old is rejected in preconditions") {
  CHECK(rejected_with(R"(
struct Bank { balances: Map[AcctId]Int }
impl Bank {
  #[requires(old(self.balances.get(a)) > 0)]
  fn f(&mut self, a: AcctId) { let x = 1; }
}
)",
                      "old"));
}

TEST_CASE("nested old is rejected") {
  CHECK(rejected_with(R"(
struct Bank { balances: Map[AcctId]Int }
impl Bank {
  #[ensures(old(old(self.balances.get(a))) > 0)]
  fn f(&mut self, a: AcctId) { let x = 1; }
}
)",
                      "old"));
}

TEST_CASE("resource is only allowed in positive conjunctive positions") {
  const char* header = R"(
#[resource_kind]
struct Money(AcctId);
struct Bank { balances: Map[AcctId]Int }
)";
  // under negation
  CHECK(rejected_with(std::string(header) + R"(
impl Bank {
  #[requires(!resource(Money(a), 1))]
  fn f(&mut self, a: AcctId) { let x = 1; }
}
)",
                      "resource"));
  // under disjunction
  CHECK(rejected_with(std::string(header) + R"(
impl Bank {
  #[requires(resource(Money(a), 1) || resource(Money(a), 2))]
  fn f(&mut self, a: AcctId) { let x = 1; }
}
)",
                      "resource"));
  // under forall
  CHECK(rejected_with(std::string(header) + R"(
impl Bank {
  #[requires(forall(|a: AcctId| resource(Money(a), 1)))]
  fn f(&mut self) { let x = 1; }
}
)",
                      "resource"));
  // in the guard of an implication
  CHECK(rejected_with(std::string(header) + R"(
impl Bank {
  #[requires(resource(Money(a), 1) ==> a == a)]
  fn f(&mut self, a: AcctId) { let x = 1; }
}
)",
                      "resource"));
  // but fine on both sides of && and in the body of ==>
  checked(std::string(header) + R"(
impl Bank {
  #[requires(resource(Money(a), 1) && (a == b ==> resource(Money(b), 1)))]
  fn f(&mut self, a: AcctId, b: AcctId) { let x = 1; }
}
)");
}

TEST_CASE("holds and resource are rejected in pure bodies and conditions") {
  const char* header = R"(
#[resource_kind]
struct Money(AcctId);
)";
  CHECK(rejected_with(std::string(header) + R"(
#[pure]
fn f(a: AcctId) -> Int { holds(Money(a)) }
)",
                      "holds"));
  CHECK(rejected_with(std::string(header) + R"(
fn g(a: AcctId) {
  if holds(Money(a)) == 0 { let x = 1; } else { let y = 2; }
}
)",
                      "holds"));
}

TEST_CASE("pure functions must not be recursive") {
  CHECK(rejected_with(R"(
#[pure]
fn f(x: Int) -> Int { g(x) }
#[pure]
fn g(x: Int) -> Int { f(x) }
)",
                      "recursive"));
}

TEST_CASE("arity and type errors are caught") {
  const char* header = R"(
#[resource_kind]
struct Money(AcctId);
)";
  CHECK(rejected_with(std::string(header) + R"(
fn f(a: AcctId, b: AcctId) {
  produce!(resource(Money(a, b), 1));
}
)",
                      "argument"));
  CHECK(rejected_with(std::string(header) + R"(
fn f(x: Int) {
  produce!(resource(Money(x), 1));
}
)",
                      ""));
  CHECK(rejected_with(R"(
fn f(x: Int) {
  assert(x && true);
}
)",
                      ""));
}

TEST_CASE("trusted declarations have no body; others need one") {
  CHECK(rejected_with(R"(
struct Bank { balances: Map[AcctId]Int }
impl Bank {
  fn f(&mut self, a: AcctId);
}
)",
                      "body"));
}

TEST_CASE("spans point at the offending token") {
  ParseResult r = parse_text("fn f(x: Int) {\n  assert(x ==);\n}\n");
  REQUIRE(!r.ok());
  CHECK(r.errors[0].span.line == 2);
}
