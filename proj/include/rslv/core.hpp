#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rslv/common.hpp"

namespace rslv::core {

// ---------------------------------------------------------------------------
// Types of intermediate-representation values.

struct CType {
  enum K { Int, Bool, Sort, Map } kind = Int;
  std::string name;         // Sort name
  std::vector<CType> keys;  // Map key types; value type is always Int

  static CType integer() { return {Int, "", {}}; }
  static CType boolean() { return {Bool, "", {}}; }
  static CType sort(std::string n) { return {Sort, std::move(n), {}}; }
  static CType map_of(std::vector<CType> ks) { return {Map, "", std::move(ks)}; }

  bool operator==(const CType& o) const {
    return kind == o.kind && name == o.name && keys == o.keys;
  }
  std::string str() const;
};

// ---------------------------------------------------------------------------
// Expressions. `Acc` is an assertion construct and may only occur in
// positive conjunctive positions of inhale/exhale payloads; everything else
// is a pure term.

enum class CE {
  IntLit,
  BoolLit,
  Var,
  Bin,     // args[0], args[1]
  Un,      // args[0]
  Ite,     // args[0..2]
  Forall,  // binders, args[0]
  OldAt,   // name = label, args[0]
  Perm,    // name = resource kind, args = key terms
  Acc,     // name = resource kind, args = key terms, amt
  App,     // name = uninterpreted function, args
  Select,  // args[0] = map, args[1..] = keys
  Store,   // args[0] = map, args[1..n-1] = keys, args[n] = value
};

// Which user-facing diagnostic an obligation derived from this node carries.
struct Prov {
  ObKind kind = ObKind::AssertFailure;
  Span span;
  std::string note;
};

struct CExpr;
using CExprP = std::shared_ptr<const CExpr>;

struct CExpr {
  CE kind;
  int64_t int_val = 0;
  bool bool_val = false;
  std::string name;
  BinOp bin = BinOp::Add;
  UnOp un = UnOp::Neg;
  std::vector<CExprP> args;
  CExprP amt;  // Acc amount
  std::vector<std::pair<std::string, CType>> binders;  // Forall
  std::optional<Prov> prov;
};

CExprP c_int(int64_t v);
CExprP c_bool(bool v);
CExprP c_var(std::string name);
CExprP c_bin(BinOp op, CExprP l, CExprP r);
CExprP c_un(UnOp op, CExprP a);
CExprP c_ite(CExprP c, CExprP t, CExprP e);
CExprP c_forall(std::vector<std::pair<std::string, CType>> binders, CExprP body);
CExprP c_old(std::string label, CExprP a);
CExprP c_perm(std::string kind, std::vector<CExprP> args);
CExprP c_acc(std::string kind, std::vector<CExprP> args, CExprP amount);
CExprP c_app(std::string fn, std::vector<CExprP> args);
CExprP c_select(CExprP map, std::vector<CExprP> keys);
CExprP c_store(CExprP map, std::vector<CExprP> keys, CExprP val);
CExprP with_prov(CExprP e, Prov p);

bool same_cexpr(const CExprP& a, const CExprP& b);  // ignores source spans

// ---------------------------------------------------------------------------
// Statements

enum class CS { Inhale, Exhale, Assert, Assume, Label, Assign, Havoc, If };

struct CStmt {
  CS kind;
  Span span;
  CExprP expr;       // payload / branch condition / assignment rhs
  std::string name;  // Label name; Assign/Havoc target variable
  std::vector<CStmt> then_body, else_body;
};

struct CMethod {
  std::string name;
  // All variables of the method (parameters and locals), in declaration
  // order. Struct parameters arrive flattened to one variable per field
  // ("bank.balances"). The first `param_count` entries are the inputs;
  // the rest are locals, always assigned before they are read.
  std::vector<std::pair<std::string, CType>> vars;
  size_t param_count = 0;
  std::vector<CStmt> body;
  Span span;

  const CType* var_type(const std::string& n) const {
    for (auto& [vn, vt] : vars)
      if (vn == n) return &vt;
    return nullptr;
  }
};

struct Predicate {
  std::string name;
  std::vector<CType> params;
};

struct UFun {
  std::string name;
  std::vector<CType> args;
  CType ret;
};

struct CProgram {
  std::vector<Predicate> predicates;
  std::vector<UFun> ufs;
  std::vector<CMethod> methods;
  std::set<std::string> sorts;  // uninterpreted sorts in use

  const Predicate* find_predicate(const std::string& n) const {
    for (auto& p : predicates)
      if (p.name == n) return &p;
    return nullptr;
  }
  const UFun* find_uf(const std::string& n) const {
    for (auto& u : ufs)
      if (u.name == n) return &u;
    return nullptr;
  }
};

// Structural sanity of an encoded program: all variables, labels, predicates
// and uninterpreted functions resolve; arities match; acc(..) occurs only in
// positive conjunctive positions of inhale/exhale payloads. Returns a list of
// violations (empty means well-formed).
std::vector<std::string> wellformed(const CProgram& p);

// Deterministic human-readable rendering (used in golden tests; injective up
// to whitespace for distinct programs).
std::string pretty_print(const CProgram& p);
std::string pretty_print(const CExprP& e);
std::string pretty_print(const CStmt& s, int depth = 0);

}  // namespace rslv::core
