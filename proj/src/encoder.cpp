#include "rslv/encoder.hpp"

#include <stdexcept>

#include "rslv/typecheck.hpp"

namespace rslv {

using namespace front;
using namespace core;

CType lower_type(const front::Type& t) {
  switch (t.kind) {
    case Type::Int:
    case Type::U32:
      return CType::integer();
    case Type::Bool:
      return CType::boolean();
    case Type::Id:
      return CType::sort(t.name);
    case Type::Map: {
      std::vector<CType> ks;
      for (auto& k : t.keys) ks.push_back(lower_type(k));
      return CType::map_of(std::move(ks));
    }
    default:
      throw std::logic_error("lower_type: struct/unit type reaches backend");
  }
}

namespace {

struct EncErr : std::runtime_error {
  Span span;
  EncErr(std::string m, Span s) : std::runtime_error(std::move(m)), span(s) {}
};

// Encoding position: a transfer mode (what portion of the resource heap a
// holds(..) observation refers to) plus a time (whether we are under old).
struct ECtx {
  enum M { None, Plus, Minus } mode = None;
  std::string mode_label;          // the label of Plus/Minus
  bool old_time = false;           // inside old(..)
  std::string time_label = "pre";  // label old(..) refers to
};

// How obligations derived from a clause are reported.
struct ProvSpec {
  ObKind pure_kind = ObKind::AssertFailure;
  ObKind acc_kind = ObKind::InsufficientResource;
  std::optional<Span> span_override;  // e.g. the call site
  std::string note;
};

class Encoder {
 public:
  Encoder(const Program& p, const Mutations& mut) : p_(p), mut_(mut) {}

  CProgram run() {
    collect_decls();
    for (auto& f : p_.functions) {
      if (spec_callable(f) || !f.has_body) continue;
      out_.methods.push_back(encode_method(f));
    }
    return std::move(out_);
  }

 private:
  const Program& p_;
  const Mutations& mut_;
  CProgram out_;

  // per-method state
  CMethod* m_ = nullptr;
  std::map<std::string, std::string> scope_;  // surface name -> IR name/prefix
  std::map<std::string, const StructDecl*> struct_vars_;
  int call_count_ = 0;
  int local_count_ = 0;

  void note_sorts(const front::Type& t) {
    if (t.kind == Type::Id) out_.sorts.insert(t.name);
    for (auto& k : t.keys) note_sorts(k);
  }

  void collect_decls() {
    for (auto& k : p_.resource_kinds) {
      Predicate pr{k.name, {}};
      for (auto& t : k.params) {
        note_sorts(t);
        pr.params.push_back(lower_type(t));
      }
      out_.predicates.push_back(std::move(pr));
    }
    for (auto& s : p_.structs)
      for (auto& [fn, ft] : s.fields) note_sorts(ft);
    for (auto& f : p_.functions) {
      for (auto& prm : f.params) note_sorts(prm.type);
      if (f.has_ret) note_sorts(f.ret);
      if (spec_callable(f) && !f.has_body) {
        UFun u{f.name, {}, lower_type(f.ret)};
        for (auto& prm : f.params) u.args.push_back(lower_type(prm.type));
        out_.ufs.push_back(std::move(u));
      }
    }
  }

  // -- variables ------------------------------------------------------------

  void declare_var(const std::string& ir_name, CType t) {
    m_->vars.emplace_back(ir_name, std::move(t));
  }

  std::string fresh_local(const std::string& base) {
    for (auto& [n, _] : m_->vars)
      if (n == base) return base + "#" + std::to_string(++local_count_);
    return base;
  }

  void bind_struct(const std::string& name, const StructDecl* sd) {
    scope_[name] = name;
    struct_vars_[name] = sd;
    for (auto& [fn, ft] : sd->fields)
      declare_var(name + "." + fn, lower_type(ft));
  }

  // -- expressions ----------------------------------------------------------

  CExprP state_read(std::string ir_name, const ECtx& c, bool mutable_state) {
    CExprP v = c_var(std::move(ir_name));
    if (c.old_time && mutable_state) return c_old(c.time_label, v);
    return v;
  }

  CExprP enc(const ExprP& e, const ECtx& c) {
    switch (e->kind) {
      case ExprKind::IntLit:
        return c_int(e->int_val);
      case ExprKind::BoolLit:
        return c_bool(e->bool_val);
      case ExprKind::Var: {
        auto it = scope_.find(e->name);
        if (it == scope_.end())  // quantifier binder
          return c_var(e->name);
        if (struct_vars_.count(e->name))
          throw EncErr("struct value used as a first-class expression",
                       e->span);
        // Value parameters and locals are single-assignment; they read the
        // same under old(..).
        return c_var(it->second);
      }
      case ExprKind::FieldRead: {
        const ExprP& base = e->args[0];
        auto it = scope_.find(base->name);
        if (base->kind != ExprKind::Var || it == scope_.end())
          throw EncErr("field access on a non-variable struct", e->span);
        return state_read(it->second + "." + e->name, c, true);
      }
      case ExprKind::MapGet: {
        std::vector<CExprP> keys;
        for (size_t i = 1; i < e->args.size(); ++i)
          keys.push_back(enc(e->args[i], c));
        return c_select(enc(e->args[0], c), std::move(keys));
      }
      case ExprKind::PureCall:
        return enc_pure_call(e, c);
      case ExprKind::Unary:
        return c_un(e->un, enc(e->args[0], c));
      case ExprKind::Binary:
        return c_bin(e->bin, enc(e->args[0], c), enc(e->args[1], c));
      case ExprKind::Cond:
        return c_ite(enc(e->args[0], c), enc(e->args[1], c),
                     enc(e->args[2], c));
      case ExprKind::Forall: {
        std::vector<std::pair<std::string, CType>> bs;
        auto saved_scope = scope_;
        auto saved_structs = struct_vars_;
        for (auto& b : e->binders) {
          bs.emplace_back(b.name, lower_type(b.type));
          scope_[b.name] = b.name;  // binders shadow program variables
          struct_vars_.erase(b.name);
        }
        CExprP body = enc(e->args[0], c);
        scope_ = saved_scope;
        struct_vars_ = saved_structs;
        return c_forall(std::move(bs), body);
      }
      case ExprKind::Old: {
        ECtx inner = c;
        inner.old_time = true;
        return enc(e->args[0], inner);
      }
      case ExprKind::Holds:
        return enc_holds(e->args[0], c);
      case ExprKind::ResourceAtom:
        throw EncErr("resource(..) outside an assertion position", e->span);
      case ExprKind::Ctor:
        throw EncErr("stray resource constructor", e->span);
    }
    throw EncErr("bad expression", e->span);
  }

  std::vector<CExprP> enc_ctor_args(const ExprP& ctor, const ECtx& c) {
    // Constructor arguments are read in the surrounding time context; the
    // transfer mode never applies below a constructor.
    ECtx inner = c;
    inner.mode = ECtx::None;
    std::vector<CExprP> args;
    for (auto& a : ctor->args) args.push_back(enc(a, inner));
    return args;
  }

  // The six holds(..) rules: a mode (none / +l' / -l') crossed with a time
  // (current / under old(l)).
  CExprP enc_holds(const ExprP& ctor, const ECtx& c) {
    // perm arguments are evaluated at the current state; the old[..]
    // wrappers below shift the whole observation where needed.
    ECtx plain;
    std::vector<CExprP> args;
    for (auto& a : ctor->args) args.push_back(enc(a, plain));
    CExprP P = c_perm(ctor->name, std::move(args));
    auto oldP = [&](const std::string& l) { return c_old(l, P); };
    switch (c.mode) {
      case ECtx::None:
        return c.old_time ? oldP(c.time_label) : P;
      case ECtx::Plus: {
        if (c.old_time)
          return c_bin(BinOp::Sub, oldP(c.time_label), oldP(c.mode_label));
        if (mut_.swap_holds_plus_cur)
          return c_bin(BinOp::Sub, oldP(c.mode_label), P);
        return c_bin(BinOp::Sub, P, oldP(c.mode_label));
      }
      case ECtx::Minus: {
        if (c.old_time) return oldP(c.time_label);
        if (mut_.swap_holds_minus_cur)
          return c_bin(BinOp::Sub, P, oldP(c.mode_label));
        return c_bin(BinOp::Sub, oldP(c.mode_label), P);
      }
    }
    throw EncErr("bad holds context", ctor->span);
  }

  CExprP enc_pure_call(const ExprP& e, const ECtx& c) {
    std::string owner;
    size_t first_arg = 0;
    if (e->has_receiver) {
      owner = e->args[0]->type.name;
      first_arg = 1;
    }
    const FunctionDecl* callee = p_.find_function(owner, e->name);
    if (!callee) throw EncErr("unknown function '" + e->name + "'", e->span);
    if (!callee->has_body) {  // uninterpreted
      std::vector<CExprP> args;
      for (size_t i = first_arg; i < e->args.size(); ++i)
        args.push_back(enc(e->args[i], c));
      return c_app(e->name, std::move(args));
    }
    // Inline the pure body with actuals substituted for formals.
    std::map<std::string, ExprP> sub;
    size_t j = first_arg;
    for (auto& prm : callee->params) {
      if (prm.name == "self")
        sub["self"] = e->args[0];
      else
        sub[prm.name] = e->args[j++];
    }
    return enc(subst_expr(callee->pure_body, sub), c);
  }

  // -- assertions -----------------------------------------------------------
  //
  // Conjunction structure is preserved; implications and spec conditionals
  // become ite so a resource atom stays in a positive branch position.

  CExprP enc_assertion(const ExprP& e, const ECtx& c, const ProvSpec& pv) {
    if (e->kind == ExprKind::Binary && e->bin == BinOp::And)
      return c_bin(BinOp::And, enc_assertion(e->args[0], c, pv),
                   enc_assertion(e->args[1], c, pv));
    if (e->kind == ExprKind::Binary && e->bin == BinOp::Implies)
      return c_ite(enc(e->args[0], c), enc_assertion(e->args[1], c, pv),
                   c_bool(true));
    if (e->kind == ExprKind::Cond)
      return c_ite(enc(e->args[0], c), enc_assertion(e->args[1], c, pv),
                   enc_assertion(e->args[2], c, pv));
    if (e->kind == ExprKind::ResourceAtom) {
      const ExprP& ctor = e->args[0];
      CExprP acc =
          c_acc(ctor->name, enc_ctor_args(ctor, c), enc(e->args[1], c));
      Prov ap;
      ap.kind = pv.acc_kind;
      ap.span = pv.span_override ? *pv.span_override : e->span;
      ap.note = pv.note;
      return with_prov(acc, ap);
    }
    return enc(e, c);
  }

  CExprP enc_clause(const ExprP& clause, const ECtx& c, const ProvSpec& pv) {
    CExprP enc_c = enc_assertion(clause, c, pv);
    if (enc_c->prov) return enc_c;  // the clause root is itself an atom
    Prov root;
    root.kind = pv.pure_kind;
    root.span = pv.span_override ? *pv.span_override : clause->span;
    root.note = pv.note;
    return with_prov(enc_c, root);
  }

  // amt >= 0 for each value parameter declared U32, substituted with the
  // call's actuals when used at a call site.
  static ExprP u32_constraint(const Param& prm, Span sp) {
    ExprP v = mk_expr(ExprKind::Var, sp);
    v->name = prm.name;
    ExprP z = mk_expr(ExprKind::IntLit, sp);
    z->int_val = 0;
    ExprP ge = mk_expr(ExprKind::Binary, sp);
    ge->bin = BinOp::Ge;
    ge->args = {v, z};
    return ge;
  }

  // -- statements -----------------------------------------------------------

  CStmt st(CS kind, Span sp) {
    CStmt s;
    s.kind = kind;
    s.span = sp;
    return s;
  }

  void emit_body(const std::vector<Stmt>& body, std::vector<CStmt>& out) {
    auto saved_scope = scope_;
    auto saved_structs = struct_vars_;
    for (auto& s : body) emit_stmt(s, out);
    scope_ = saved_scope;
    struct_vars_ = saved_structs;
  }

  void emit_stmt(const Stmt& s, std::vector<CStmt>& out) {
    ECtx cur;  // (no mode, current time, old(..) refers to entry)
    switch (s.kind) {
      case StmtKind::Let: {
        std::string ir = fresh_local(s.name);
        declare_var(ir, lower_type(s.expr->type.is_integer_like() &&
                                           s.has_type
                                       ? s.let_type
                                       : s.expr->type));
        CStmt a = st(CS::Assign, s.span);
        a.name = ir;
        a.expr = enc(s.expr, cur);
        out.push_back(std::move(a));
        scope_[s.name] = ir;
        return;
      }
      case StmtKind::Insert: {
        std::string var =
            scope_.at(s.target->args[0]->name) + "." + s.target->name;
        std::vector<CExprP> keys;
        for (auto& k : s.args) keys.push_back(enc(k, cur));
        CStmt a = st(CS::Assign, s.span);
        a.name = var;
        a.expr = c_store(c_var(var), std::move(keys), enc(s.expr, cur));
        out.push_back(std::move(a));
        return;
      }
      case StmtKind::FieldAssign: {
        std::string var =
            scope_.at(s.target->args[0]->name) + "." + s.target->name;
        CStmt a = st(CS::Assign, s.span);
        a.name = var;
        a.expr = enc(s.expr, cur);
        out.push_back(std::move(a));
        return;
      }
      case StmtKind::Produce:
      case StmtKind::Consume: {
        ProvSpec pv;
        pv.pure_kind = ObKind::AssertFailure;
        pv.note = s.kind == StmtKind::Produce ? "produce!" : "consume!";
        CStmt c =
            st(s.kind == StmtKind::Produce ? CS::Inhale : CS::Exhale, s.span);
        c.expr = enc_clause(s.expr, cur, pv);
        out.push_back(std::move(c));
        return;
      }
      case StmtKind::Assert: {
        ProvSpec pv;
        pv.pure_kind = ObKind::AssertFailure;
        CStmt a = st(CS::Assert, s.span);
        a.expr = enc_clause(s.expr, cur, pv);
        out.push_back(std::move(a));
        return;
      }
      case StmtKind::If: {
        CStmt i = st(CS::If, s.span);
        i.expr = enc(s.expr, cur);
        emit_body(s.then_body, i.then_body);
        emit_body(s.else_body, i.else_body);
        out.push_back(std::move(i));
        return;
      }
      case StmtKind::Block:
        emit_body(s.then_body, out);
        return;
      case StmtKind::Call:
        emit_call(s, out);
        return;
    }
  }

  void emit_call(const Stmt& s, std::vector<CStmt>& out) {
    std::string owner;
    if (s.receiver) owner = s.receiver->type.name;
    const FunctionDecl* callee = p_.find_function(owner, s.name);
    int k = ++call_count_;
    std::string lpre = "l_pre" + std::to_string(k);
    std::string lpost = "l_post" + std::to_string(k);

    // actuals for formals
    std::map<std::string, ExprP> sub;
    std::vector<std::pair<const Param*, ExprP>> bindings;
    size_t j = 0;
    for (auto& prm : callee->params) {
      ExprP actual = (prm.name == "self") ? s.receiver : s.args[j++];
      sub[prm.name] = actual;
      bindings.emplace_back(&prm, actual);
    }

    CStmt lp = st(CS::Label, s.span);
    lp.name = lpre;
    out.push_back(std::move(lp));

    // exhale the precondition at the call site: nonnegativity of U32
    // arguments first, then the user clauses, left to right. holds(..)
    // observations are relative to the start of the call: (-l_pre, cur)
    ECtx pre_ctx;
    pre_ctx.mode = ECtx::Minus;
    pre_ctx.mode_label = lpre;
    pre_ctx.time_label = lpre;
    ProvSpec pv;
    pv.pure_kind = ObKind::PreconditionAtCallFailure;
    pv.span_override = s.span;
    pv.note = "precondition of '" + callee->name + "'";
    for (auto& prm : callee->params) {
      if (prm.mode == ParamMode::Value && prm.type.kind == Type::U32) {
        ExprP c = subst_expr(u32_constraint(prm, s.span), sub);
        ProvSpec upv = pv;
        upv.note = "argument '" + prm.name + "' of '" + callee->name +
                   "' must be nonnegative";
        CStmt e = st(CS::Exhale, s.span);
        e.expr = enc_clause(c, pre_ctx, upv);
        out.push_back(std::move(e));
      }
    }
    for (auto& r : callee->requires_) {
      CStmt e = st(CS::Exhale, s.span);
      e.expr = enc_clause(subst_expr(r, sub), pre_ctx, pv);
      out.push_back(std::move(e));
    }

    // the callee may change anything reachable through its &mut parameters
    if (!mut_.drop_havoc) {
      for (auto& [prm, actual] : bindings) {
        if (prm->mode != ParamMode::MutRef) continue;
        const StructDecl* sd = p_.find_struct(prm->type.name);
        std::string base = scope_.at(actual->name);
        for (auto& [fn, _] : sd->fields) {
          CStmt h = st(CS::Havoc, s.span);
          h.name = base + "." + fn;
          out.push_back(std::move(h));
        }
      }
    }

    CStmt lq = st(CS::Label, s.span);
    lq.name = lpost;
    out.push_back(std::move(lq));

    // inhale the postcondition, then the coupling invariants of every &mut
    // struct parameter; holds(..) observations and old(..) are relative to
    // this call: (+l_post, cur(l_pre))
    ECtx post_ctx;
    post_ctx.mode = ECtx::Plus;
    post_ctx.mode_label = lpost;
    post_ctx.time_label = lpre;
    for (auto& en : callee->ensures_) {
      ProvSpec epv;
      epv.pure_kind = ObKind::PostconditionFailure;
      epv.span_override = s.span;
      epv.note = "postcondition of '" + callee->name + "'";
      CStmt i = st(CS::Inhale, s.span);
      i.expr = enc_clause(subst_expr(en, sub), post_ctx, epv);
      out.push_back(std::move(i));
    }
    if (!mut_.drop_coupling) {
      for (auto& [prm, actual] : bindings) {
        if (prm->mode != ParamMode::MutRef) continue;
        const StructDecl* sd = p_.find_struct(prm->type.name);
        for (auto& inv : sd->coupling_invariants) {
          std::map<std::string, ExprP> self_sub{{"self", actual}};
          ProvSpec ipv;
          ipv.pure_kind = ObKind::CouplingInvariantFailure;
          ipv.span_override = s.span;
          ipv.note = "coupling invariant of " + sd->name + " ('" +
                     actual->name + "')";
          CStmt i = st(CS::Inhale, s.span);
          i.expr = enc_clause(subst_expr(inv, self_sub), post_ctx, ipv);
          out.push_back(std::move(i));
        }
      }
    }
  }

  // -- methods --------------------------------------------------------------

  CMethod encode_method(const FunctionDecl& f) {
    CMethod m;
    m.name = f.qualified_name();
    m.span = f.span;
    m_ = &m;
    scope_.clear();
    struct_vars_.clear();
    call_count_ = 0;
    local_count_ = 0;

    for (auto& prm : f.params) {
      if (prm.type.kind == Type::Struct) {
        bind_struct(prm.name, p_.find_struct(prm.type.name));
      } else {
        scope_[prm.name] = prm.name;
        declare_var(prm.name, lower_type(prm.type));
      }
    }
    m.param_count = m.vars.size();

    ECtx entry_ctx;  // (no mode, current)
    for (auto& prm : f.params) {
      if (prm.mode == ParamMode::Value && prm.type.kind == Type::U32) {
        ProvSpec pv;
        pv.pure_kind = ObKind::AssertFailure;
        CStmt i = st(CS::Inhale, prm.span);
        i.expr = enc_clause(u32_constraint(prm, prm.span), entry_ctx, pv);
        m.body.push_back(std::move(i));
      }
    }
    for (auto& r : f.requires_) {
      ProvSpec pv;
      pv.pure_kind = ObKind::AssertFailure;
      pv.note = "precondition";
      CStmt i = st(CS::Inhale, r->span);
      i.expr = enc_clause(r, entry_ctx, pv);
      m.body.push_back(std::move(i));
    }

    CStmt lp = st(CS::Label, f.span);
    lp.name = "pre";
    m.body.push_back(std::move(lp));

    emit_body(f.body, m.body);

    CStmt lq = st(CS::Label, f.span);
    lq.name = "post";
    m.body.push_back(std::move(lq));

    // exhale the declared postcondition, then coupling invariants of &mut
    // struct parameters; context (-post, cur(pre))
    ECtx post_ctx;
    post_ctx.mode = ECtx::Minus;
    post_ctx.mode_label = "post";
    post_ctx.time_label = "pre";
    for (auto& en : f.ensures_) {
      ProvSpec pv;
      pv.pure_kind = ObKind::PostconditionFailure;
      pv.note = "postcondition of '" + f.name + "'";
      CStmt e = st(CS::Exhale, en->span);
      e.expr = enc_clause(en, post_ctx, pv);
      m.body.push_back(std::move(e));
    }
    if (!mut_.drop_coupling) {
      for (auto& prm : f.params) {
        if (prm.mode != ParamMode::MutRef) continue;
        const StructDecl* sd = p_.find_struct(prm.type.name);
        for (auto& inv : sd->coupling_invariants) {
          ExprP self_var = mk_expr(ExprKind::Var, inv->span);
          self_var->name = prm.name;
          self_var->type = prm.type;
          std::map<std::string, ExprP> self_sub{{"self", self_var}};
          ProvSpec pv;
          pv.pure_kind = ObKind::CouplingInvariantFailure;
          pv.note = "coupling invariant of " + sd->name + " ('" + prm.name +
                    "')";
          CStmt e = st(CS::Exhale, inv->span);
          e.expr = enc_clause(subst_expr(inv, self_sub), post_ctx, pv);
          m.body.push_back(std::move(e));
        }
      }
    }
    m_ = nullptr;
    return m;
  }
};

}  // namespace

EncodeResult encode(const front::Program& p, const Mutations& mut) {
  EncodeResult r;
  try {
    r.program = Encoder(p, mut).run();
  } catch (const EncErr& e) {
    r.errors.push_back({e.what(), e.span});
  }
  return r;
}

}  // namespace rslv
