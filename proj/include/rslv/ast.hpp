#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "rslv/common.hpp"

namespace rslv::front {

// ---------------------------------------------------------------------------
// Types

struct Type {
  enum Kind { Unit, Int, U32, Bool, Id, Map, Struct } kind = Unit;
  std::string name;        // Id sort name / struct name
  std::vector<Type> keys;  // Map key types (value type is always Int)

  static Type unit() { return {}; }
  static Type integer() { return {Int, "", {}}; }
  static Type u32() { return {U32, "", {}}; }
  static Type boolean() { return {Bool, "", {}}; }
  static Type id(std::string n) { return {Id, std::move(n), {}}; }
  static Type map_of(std::vector<Type> ks) { return {Map, "", std::move(ks)}; }
  static Type struct_ref(std::string n) { return {Struct, std::move(n), {}}; }

  bool is_integer_like() const { return kind == Int || kind == U32; }
  bool is_value_type() const {
    return kind == Int || kind == U32 || kind == Bool || kind == Id;
  }
  bool operator==(const Type& o) const;
  std::string str() const;
};

enum class ParamMode { Value, SharedRef, MutRef };

struct Param {
  std::string name;
  Type type;
  ParamMode mode = ParamMode::Value;
  Span span;
};

// ---------------------------------------------------------------------------
// Expressions

enum class ExprKind {
  IntLit,
  BoolLit,
  Var,
  FieldRead,     // args[0] = base, name = field
  MapGet,        // args[0] = map expr, args[1..] = keys
  PureCall,      // name = fn; if has_receiver, args[0] = receiver
  Unary,         // args[0]
  Binary,        // args[0], args[1]
  Cond,          // args[0] = cond, args[1] = then, args[2] = else
  Forall,        // binders + args[0] = body
  Old,           // args[0]
  Holds,         // args[0] = Ctor
  ResourceAtom,  // args[0] = Ctor, args[1] = amount
  Ctor,          // name = resource kind, args = constructor args
};

struct Expr;
using ExprP = std::shared_ptr<Expr>;

struct Expr {
  ExprKind kind;
  Span span;
  Type type;  // filled in by the type checker

  int64_t int_val = 0;
  bool bool_val = false;
  std::string name;
  BinOp bin = BinOp::Add;
  UnOp un = UnOp::Neg;
  bool has_receiver = false;
  std::vector<ExprP> args;
  std::vector<Param> binders;  // Forall
};

ExprP mk_expr(ExprKind k, Span sp);

// ---------------------------------------------------------------------------
// Statements

enum class StmtKind { Let, Insert, FieldAssign, Call, Produce, Consume, Assert, If, Block };

struct Stmt {
  StmtKind kind;
  Span span;

  std::string name;  // Let: variable; Call: function name
  Type let_type;
  bool has_type = false;
  ExprP expr;    // Let rhs / Produce / Consume / Assert / If cond / Insert and
                 // FieldAssign value
  ExprP target;  // Insert / FieldAssign: a FieldRead
  std::vector<ExprP> args;  // Call args; Insert keys
  ExprP receiver;           // Call receiver (method calls), may be null
  std::vector<Stmt> then_body, else_body;
};

// ---------------------------------------------------------------------------
// Declarations

struct ResourceKindDecl {
  std::string name;
  std::vector<Type> params;
  Span span;
};

struct FunctionDecl {
  std::string name;
  Span span;
  std::string owner;  // enclosing impl struct, "" for free functions
  std::vector<Param> params;
  Type ret;
  bool has_ret = false;
  bool pure = false;
  bool trusted = false;
  std::vector<ExprP> requires_;
  std::vector<ExprP> ensures_;
  std::vector<Stmt> body;
  bool has_body = false;
  ExprP pure_body;  // pure functions: a single expression

  std::string qualified_name() const {
    return owner.empty() ? name : owner + "::" + name;
  }
};

struct StructDecl {
  std::string name;
  Span span;
  std::vector<std::pair<std::string, Type>> fields;
  std::vector<ExprP> coupling_invariants;
};

struct Program {
  std::vector<ResourceKindDecl> resource_kinds;
  std::vector<StructDecl> structs;
  std::vector<FunctionDecl> functions;

  const ResourceKindDecl* find_kind(const std::string& n) const;
  const StructDecl* find_struct(const std::string& n) const;
  // Resolves a call: method calls pass the receiver struct name, free calls "".
  const FunctionDecl* find_function(const std::string& owner,
                                    const std::string& n) const;
};

// Structural equality, ignoring spans and inferred types (used by the
// pretty-print/reparse round-trip check).
bool same_expr(const ExprP& a, const ExprP& b);
bool same_program(const Program& a, const Program& b);

// Prints a program back to RSL surface syntax.
std::string print_program(const Program& p);
std::string print_expr(const ExprP& e);

// Deep-copy an expression while substituting variables: any Var whose name is
// in `sub` is replaced by a copy of the mapped expression. Forall binders
// shadow substitution.
ExprP subst_expr(const ExprP& e,
                 const std::map<std::string, ExprP>& sub);

}  // namespace rslv::front
