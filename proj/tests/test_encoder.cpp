// Golden tests for the encoder: each encoding rule has a minimal input
// program whose printed IR must match the checked-in golden file byte for
// byte.  Regenerate with RSLV_REGEN_GOLDEN=1 after an intentional change
// and review the diff.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "rslv/encoder.hpp"
#include "rslv/parser.hpp"
#include "rslv/typecheck.hpp"

using namespace rslv;

namespace {

std::string encode_text(const std::string& src,
                        const Mutations& mut = Mutations{}) {
  front::ParseResult r = front::parse_text(src);
  for (auto& e : r.errors)
    FAIL("parse error: ", e.message, " at line ", e.span.line);
  front::CheckResult c = front::typecheck(r.program);
  for (auto& e : c.errors)
    FAIL("type error: ", e.message, " at line ", e.span.line);
  EncodeResult enc = encode(r.program, mut);
  for (auto& e : enc.errors)
    FAIL("encode error: ", e.message, " at line ", e.span.line);
  auto bad = core::wellformed(enc.program);
  for (auto& v : bad) FAIL("ill-formed IR: ", v);
  return core::pretty_print(enc.program);
}

void golden(const std::string& name, const std::string& got) {
  std::string path = std::string(RSLV_SOURCE_DIR) + "/tests/golden/" + name +
                     ".txt";
  if (std::getenv("RSLV_REGEN_GOLDEN")) {
    std::ofstream out(path, std::ios::binary);
    out << got;
    return;
  }
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing golden file ", path);
  std::stringstream want;
  want << in.rdbuf();
  CHECK_MESSAGE(got == want.str(), "golden mismatch for ", name,
                "\n--- got ---\n", got, "--- want ---\n", want.str());
}

// Shared scaffolding: one resource kind over one id sort.
const char* kKind = R"(#[resource_kind]
struct Money(AcctId);
)";

}  // namespace

TEST_CASE("declarations: resource kinds become predicates; trusted value "
          "functions become uninterpreted functions") {
  golden("decl", encode_text(std::string(kKind) + R"(
#[trusted]
fn lookup(a: AcctId) -> Int;

#[pure]
fn twice(x: Int) -> Int { x + x }
)"));
}

TEST_CASE("method skeleton: inhale pre, label, body, label, exhale post, "
          "with U32 bounds added") {
  golden("method_skeleton", encode_text(std::string(kKind) + R"(
#[requires(amt > 0)]
#[ensures(amt > 0)]
fn skel(a: AcctId, amt: U32) {
  let b = amt + 1;
}
)"));
}

TEST_CASE("produce! and consume! become inhale and exhale") {
  golden("produce_consume", encode_text(std::string(kKind) + R"(
fn pc(a: AcctId, amt: U32) {
  produce!(resource(Money(a), amt));
  consume!(resource(Money(a), amt));
}
)"));
}

TEST_CASE("resource atoms under a guard encode as conditional acc") {
  golden("conditional_acc", encode_text(std::string(kKind) + R"(
#[requires(f ==> resource(Money(a), 1))]
#[requires(if f { resource(Money(a), 1) } else { resource(Money(b), 2) })]
fn cond(a: AcctId, b: AcctId, f: Bool) {
  let x = 1;
}
)"));
}

TEST_CASE("calls exhale the precondition, havoc &mut state, and inhale the "
          "postcondition between fresh labels") {
  golden("call", encode_text(std::string(kKind) + R"(
struct Bank {
  balances: Map[AcctId]Int,
}

impl Bank {
  #[trusted]
  #[requires(resource(Money(a), amt))]
  #[ensures(resource(Money(a), amt))]
  fn nop(&mut self, a: AcctId, amt: U32);
}

#[requires(resource(Money(a), 1))]
#[ensures(resource(Money(a), 1))]
fn caller(bank: &mut Bank, a: AcctId) {
  bank.nop(a, 1);
}
)"));
}

TEST_CASE("old(..) wraps mutable state in old[..] at the right label") {
  golden("old_wrap", encode_text(std::string(kKind) + R"(
struct Bank {
  balances: Map[AcctId]Int,
}

impl Bank {
  #[pure]
  fn balance(&self, a: AcctId) -> Int {
    self.balances.get(a)
  }

  #[ensures(self.balance(a) == old(self.balance(a)) + amt)]
  fn grow(&mut self, a: AcctId, amt: U32) {
    let b = self.balances.get(a);
    self.balances.insert(a, b + amt);
  }
}
)"));
}

TEST_CASE("coupling invariants are exhaled at method exit and inhaled after "
          "calls on &mut struct arguments") {
  golden("coupling", encode_text(std::string(kKind) + R"(
#[invariant_twostate(forall(|a: AcctId| holds(Money(a)) - old(holds(Money(a))) == self.balance(a) - old(self.balance(a))))]
struct Bank {
  balances: Map[AcctId]Int,
}

impl Bank {
  #[pure]
  fn balance(&self, a: AcctId) -> Int {
    self.balances.get(a)
  }

  #[trusted]
  #[ensures(resource(Money(acct_id), amt))]
  fn deposit(&mut self, acct_id: AcctId, amt: U32);
}

fn caller(bank: &mut Bank, a: AcctId) {
  bank.deposit(a, 1);
  consume!(resource(Money(a), 1));
}
)"));
}

// ---------------------------------------------------------------------------
// The six holds(..) context rules, one golden file each.  The context is
// (mode, time): mode is set by the enclosing inhale/exhale (+l after a call,
// -l in a postcondition or a call precondition), time by an enclosing old.

TEST_CASE("holds, no mode, current state: plain perm") {
  golden("holds_cur", encode_text(std::string(kKind) + R"(
fn f(a: AcctId) {
  assert(holds(Money(a)) == 0);
}
)"));
}

TEST_CASE("holds, no mode, old state: perm at the entry label") {
  golden("holds_old", encode_text(std::string(kKind) + R"(
fn f(a: AcctId) {
  assert(old(holds(Money(a))) == 0);
}
)"));
}

TEST_CASE("holds under minus, current state: given back so far") {
  golden("holds_minus_cur", encode_text(std::string(kKind) + R"(
#[ensures(holds(Money(a)) == 0)]
fn f(a: AcctId) {
  let x = 1;
}
)"));
}

TEST_CASE("holds under minus, old state: count at the entry label") {
  golden("holds_minus_old", encode_text(std::string(kKind) + R"(
#[ensures(old(holds(Money(a))) == 0)]
fn f(a: AcctId) {
  let x = 1;
}
)"));
}

TEST_CASE("holds under plus, current state: received so far") {
  golden("holds_plus_cur", encode_text(std::string(kKind) + R"(
#[trusted]
#[ensures(holds(Money(a)) == 0)]
fn callee(a: AcctId);

fn caller(a: AcctId) {
  callee(a);
}
)"));
}

TEST_CASE("holds under plus, old state: count when the call started") {
  golden("holds_plus_old", encode_text(std::string(kKind) + R"(
#[trusted]
#[ensures(old(holds(Money(a))) == 0)]
fn callee(a: AcctId);

fn caller(a: AcctId) {
  callee(a);
}
)"));
}

// ---------------------------------------------------------------------------
// Mutations must actually change the encoding they claim to change.

TEST_CASE("each mutation alters the encoded program") {
  std::string src = std::string(kKind) + R"(
#[invariant_twostate(forall(|a: AcctId| holds(Money(a)) - old(holds(Money(a))) == self.balance(a) - old(self.balance(a))))]
struct Bank {
  balances: Map[AcctId]Int,
}

impl Bank {
  #[pure]
  fn balance(&self, a: AcctId) -> Int {
    self.balances.get(a)
  }

  #[trusted]
  #[requires(resource(Money(a), amt))]
  #[ensures(holds(Money(a)) == 0 && old(holds(Money(a))) == amt)]
  fn op(&mut self, a: AcctId, amt: U32);
}

#[requires(resource(Money(a), 1))]
#[ensures(holds(Money(a)) == 0)]
fn caller(bank: &mut Bank, a: AcctId) {
  bank.op(a, 1);
}
)";
  std::string base = encode_text(src);
  Mutations m;

  m = Mutations{};
  m.drop_havoc = true;
  CHECK(encode_text(src, m) != base);

  m = Mutations{};
  m.drop_coupling = true;
  CHECK(encode_text(src, m) != base);

  m = Mutations{};
  m.swap_holds_plus_cur = true;
  std::string plus = encode_text(src, m);
  CHECK(plus != base);

  m = Mutations{};
  m.swap_holds_minus_cur = true;
  std::string minus = encode_text(src, m);
  CHECK(minus != base);
  CHECK(minus != plus);

  // drop_exhale_check acts in vc generation, not in the encoding
  m = Mutations{};
  m.drop_exhale_check = true;
  CHECK(encode_text(src, m) == base);
}
