// Tests for the core IR: construction helpers, well-formedness checking,
// and the stability of the pretty printer (other suites compare printed IR
// against golden files, so its exact output is part of the contract).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "rslv/core.hpp"

using namespace rslv;
using namespace rslv::core;

namespace {

// A tiny valid program: one predicate, one method moving one unit around.
CProgram tiny() {
  CProgram p;
  p.sorts.insert("AcctId");
  p.predicates.push_back({"Money", {CType::sort("AcctId")}});
  CMethod m;
  m.name = "m";
  m.vars = {{"a", CType::sort("AcctId")}, {"amt", CType::integer()}};
  m.param_count = 2;
  CStmt in;
  in.kind = CS::Inhale;
  in.expr = c_acc("Money", {c_var("a")}, c_var("amt"));
  m.body.push_back(in);
  CStmt lb;
  lb.kind = CS::Label;
  lb.name = "pre";
  m.body.push_back(lb);
  CStmt ex;
  ex.kind = CS::Exhale;
  ex.expr = c_acc("Money", {c_var("a")}, c_var("amt"));
  m.body.push_back(ex);
  p.methods.push_back(std::move(m));
  return p;
}

bool has_violation(const CProgram& p, const std::string& needle) {
  for (auto& v : wellformed(p))
    if (v.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("a valid program is well-formed") {
  CHECK(wellformed(tiny()).empty());
}

TEST_CASE("undeclared variables are flagged") {
  CProgram p = tiny();
  p.methods[0].body[0].expr = c_acc("Money", {c_var("nope")}, c_int(1));
  CHECK(has_violation(p, "nope"));
}

TEST_CASE("unknown predicates are flagged") {
  CProgram p = tiny();
  p.methods[0].body[0].expr = c_acc("Gold", {c_var("a")}, c_int(1));
  CHECK(has_violation(p, "Gold"));
}

TEST_CASE("predicate arity mismatches are flagged") {
  CProgram p = tiny();
  p.methods[0].body[0].expr =
      c_acc("Money", {c_var("a"), c_var("a")}, c_int(1));
  CHECK(has_violation(p, "Money"));
}

TEST_CASE("old[..] must refer to an earlier label") {
  CProgram p = tiny();
  CStmt as;
  as.kind = CS::Assert;
  as.expr = c_bin(BinOp::Eq, c_old("later", c_perm("Money", {c_var("a")})),
                  c_int(0));
  p.methods[0].body.insert(p.methods[0].body.begin(), as);
  CHECK(has_violation(p, "later"));

  // the same reference after the label is fine
  CProgram q = tiny();
  CStmt lb;
  lb.kind = CS::Label;
  lb.name = "later";
  q.methods[0].body.push_back(lb);
  CStmt ok;
  ok.kind = CS::Assert;
  ok.expr = c_bin(BinOp::Eq, c_old("later", c_perm("Money", {c_var("a")})),
                  c_int(0));
  q.methods[0].body.push_back(ok);
  CHECK(wellformed(q).empty());
}

TEST_CASE("acc is rejected outside positive inhale/exhale positions") {
  // acc under negation
  CProgram p = tiny();
  p.methods[0].body[0].expr =
      c_un(UnOp::Not, c_acc("Money", {c_var("a")}, c_int(1)));
  CHECK(has_violation(p, "acc"));

  // acc in an assert
  CProgram q = tiny();
  CStmt as;
  as.kind = CS::Assert;
  as.expr = c_acc("Money", {c_var("a")}, c_int(1));
  q.methods[0].body.push_back(as);
  CHECK(has_violation(q, "acc"));

  // acc on both sides of && and in the branches of ite is fine
  CProgram r = tiny();
  r.methods[0].body[0].expr = c_bin(
      BinOp::And, c_acc("Money", {c_var("a")}, c_int(1)),
      c_ite(c_bin(BinOp::Ge, c_var("amt"), c_int(1)),
            c_acc("Money", {c_var("a")}, c_int(1)), c_bool(true)));
  CHECK(wellformed(r).empty());
}

TEST_CASE("pretty printer output is deterministic and parenthesized") {
  CExprP e = c_bin(
      BinOp::Eq,
      c_bin(BinOp::Sub, c_perm("Money", {c_var("a")}),
            c_old("pre", c_perm("Money", {c_var("a")}))),
      c_bin(BinOp::Sub, c_select(c_var("self.balances"), {c_var("a")}),
            c_select(c_old("pre", c_var("self.balances")), {c_var("a")})));
  std::string s = pretty_print(e);
  CHECK(s ==
        "((perm(Money(a)) - old[pre](perm(Money(a)))) == "
        "(select(self.balances, a) - select(old[pre](self.balances), a)))");
  CHECK(pretty_print(e) == s);
}

TEST_CASE("program pretty printing covers every statement form") {
  CProgram p = tiny();
  CMethod& m = p.methods[0];
  m.vars.push_back({"b", CType::integer()});
  CStmt asg;
  asg.kind = CS::Assign;
  asg.name = "b";
  asg.expr = c_bin(BinOp::Add, c_var("amt"), c_int(1));
  m.body.push_back(asg);
  CStmt hv;
  hv.kind = CS::Havoc;
  hv.name = "b";
  m.body.push_back(hv);
  CStmt iff;
  iff.kind = CS::If;
  iff.expr = c_bin(BinOp::Gt, c_var("b"), c_int(0));
  CStmt th;
  th.kind = CS::Assume;
  th.expr = c_bool(true);
  iff.then_body.push_back(th);
  CStmt el;
  el.kind = CS::Assert;
  el.expr = c_bin(BinOp::Ge, c_var("b"), c_int(0));
  iff.else_body.push_back(el);
  m.body.push_back(iff);
  REQUIRE(wellformed(p).empty());

  std::string s = pretty_print(p);
  CHECK(s.find("predicate Money(arg1: AcctId)") != std::string::npos);
  CHECK(s.find("inhale acc(Money(a), amt)") != std::string::npos);
  CHECK(s.find("exhale acc(Money(a), amt)") != std::string::npos);
  CHECK(s.find("label pre") != std::string::npos);
  CHECK(s.find("b := (amt + 1)") != std::string::npos);
  CHECK(s.find("havoc b") != std::string::npos);
  CHECK(s.find("if (b > 0)") != std::string::npos);
  CHECK(s.find("assume true") != std::string::npos);
  CHECK(s.find("assert (b >= 0)") != std::string::npos);
}
