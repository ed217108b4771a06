#include "rslv/core.hpp"

namespace rslv::core {

std::string CType::str() const {
  switch (kind) {
    case Int: return "Int";
    case Bool: return "Bool";
    case Sort: return name;
    case Map: {
      std::string s = "Map[";
      for (size_t i = 0; i < keys.size(); ++i) {
        if (i) s += ",";
        s += keys[i].str();
      }
      return s + "]Int";
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Builders

namespace {
std::shared_ptr<CExpr> mk(CE k) {
  auto e = std::make_shared<CExpr>();
  e->kind = k;
  return e;
}
}  // namespace

CExprP c_int(int64_t v) {
  auto e = mk(CE::IntLit);
  e->int_val = v;
  return e;
}
CExprP c_bool(bool v) {
  auto e = mk(CE::BoolLit);
  e->bool_val = v;
  return e;
}
CExprP c_var(std::string name) {
  auto e = mk(CE::Var);
  e->name = std::move(name);
  return e;
}
CExprP c_bin(BinOp op, CExprP l, CExprP r) {
  auto e = mk(CE::Bin);
  e->bin = op;
  e->args = {std::move(l), std::move(r)};
  return e;
}
CExprP c_un(UnOp op, CExprP a) {
  auto e = mk(CE::Un);
  e->un = op;
  e->args = {std::move(a)};
  return e;
}
CExprP c_ite(CExprP c, CExprP t, CExprP el) {
  auto e = mk(CE::Ite);
  e->args = {std::move(c), std::move(t), std::move(el)};
  return e;
}
CExprP c_forall(std::vector<std::pair<std::string, CType>> binders,
                CExprP body) {
  auto e = mk(CE::Forall);
  e->binders = std::move(binders);
  e->args = {std::move(body)};
  return e;
}
CExprP c_old(std::string label, CExprP a) {
  auto e = mk(CE::OldAt);
  e->name = std::move(label);
  e->args = {std::move(a)};
  return e;
}
CExprP c_perm(std::string kind, std::vector<CExprP> args) {
  auto e = mk(CE::Perm);
  e->name = std::move(kind);
  e->args = std::move(args);
  return e;
}
CExprP c_acc(std::string kind, std::vector<CExprP> args, CExprP amount) {
  auto e = mk(CE::Acc);
  e->name = std::move(kind);
  e->args = std::move(args);
  e->amt = std::move(amount);
  return e;
}
CExprP c_app(std::string fn, std::vector<CExprP> args) {
  auto e = mk(CE::App);
  e->name = std::move(fn);
  e->args = std::move(args);
  return e;
}
CExprP c_select(CExprP map, std::vector<CExprP> keys) {
  auto e = mk(CE::Select);
  e->args.push_back(std::move(map));
  for (auto& k : keys) e->args.push_back(std::move(k));
  return e;
}
CExprP c_store(CExprP map, std::vector<CExprP> keys, CExprP val) {
  auto e = mk(CE::Store);
  e->args.push_back(std::move(map));
  for (auto& k : keys) e->args.push_back(std::move(k));
  e->args.push_back(std::move(val));
  return e;
}
CExprP with_prov(CExprP e, Prov p) {
  auto c = std::make_shared<CExpr>(*e);
  c->prov = std::move(p);
  return c;
}

bool same_cexpr(const CExprP& a, const CExprP& b) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind || a->int_val != b->int_val ||
      a->bool_val != b->bool_val || a->name != b->name)
    return false;
  if (a->kind == CE::Bin && a->bin != b->bin) return false;
  if (a->kind == CE::Un && a->un != b->un) return false;
  if (!(a->binders == b->binders)) return false;
  if (!same_cexpr(a->amt, b->amt)) return false;
  if (a->args.size() != b->args.size()) return false;
  for (size_t i = 0; i < a->args.size(); ++i)
    if (!same_cexpr(a->args[i], b->args[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Pretty printer

namespace {

void pe(std::string& s, const CExprP& e);

void pargs(std::string& s, const std::vector<CExprP>& args, size_t from = 0,
           size_t upto_excl = SIZE_MAX) {
  size_t end = upto_excl == SIZE_MAX ? args.size() : upto_excl;
  for (size_t i = from; i < end; ++i) {
    if (i > from) s += ", ";
    pe(s, args[i]);
  }
}

void pe(std::string& s, const CExprP& e) {
  switch (e->kind) {
    case CE::IntLit: s += std::to_string(e->int_val); return;
    case CE::BoolLit: s += e->bool_val ? "true" : "false"; return;
    case CE::Var: s += e->name; return;
    case CE::Bin:
      s += "(";
      pe(s, e->args[0]);
      s += std::string(" ") + bin_op_str(e->bin) + " ";
      pe(s, e->args[1]);
      s += ")";
      return;
    case CE::Un:
      s += e->un == UnOp::Not ? "!" : "-";
      s += "(";
      pe(s, e->args[0]);
      s += ")";
      return;
    case CE::Ite:
      s += "ite(";
      pargs(s, e->args);
      s += ")";
      return;
    case CE::Forall: {
      s += "forall ";
      for (size_t i = 0; i < e->binders.size(); ++i) {
        if (i) s += ", ";
        s += e->binders[i].first + ": " + e->binders[i].second.str();
      }
      s += " :: ";
      pe(s, e->args[0]);
      return;
    }
    case CE::OldAt:
      s += "old[" + e->name + "](";
      pe(s, e->args[0]);
      s += ")";
      return;
    case CE::Perm:
      s += "perm(" + e->name + "(";
      pargs(s, e->args);
      s += "))";
      return;
    case CE::Acc:
      s += "acc(" + e->name + "(";
      pargs(s, e->args);
      s += "), ";
      pe(s, e->amt);
      s += ")";
      return;
    case CE::App:
      s += e->name + "(";
      pargs(s, e->args);
      s += ")";
      return;
    case CE::Select:
      s += "select(";
      pargs(s, e->args);
      s += ")";
      return;
    case CE::Store:
      s += "store(";
      pargs(s, e->args);
      s += ")";
      return;
  }
}

void ps(std::string& s, const CStmt& st, int depth) {
  std::string ind(static_cast<size_t>(depth) * 4, ' ');
  auto pay = [&](const char* kw) {
    s += ind + kw + " " + pretty_print(st.expr) + "\n";
  };
  switch (st.kind) {
    case CS::Inhale: pay("inhale"); return;
    case CS::Exhale: pay("exhale"); return;
    case CS::Assert: pay("assert"); return;
    case CS::Assume: pay("assume"); return;
    case CS::Label: s += ind + "label " + st.name + "\n"; return;
    case CS::Assign:
      s += ind + st.name + " := " + pretty_print(st.expr) + "\n";
      return;
    case CS::Havoc: s += ind + "havoc " + st.name + "\n"; return;
    case CS::If:
      s += ind + "if " + pretty_print(st.expr) + " {\n";
      for (auto& t : st.then_body) ps(s, t, depth + 1);
      if (!st.else_body.empty()) {
        s += ind + "} else {\n";
        for (auto& t : st.else_body) ps(s, t, depth + 1);
      }
      s += ind + "}\n";
      return;
  }
}

}  // namespace

std::string pretty_print(const CExprP& e) {
  std::string s;
  pe(s, e);
  return s;
}

std::string pretty_print(const CStmt& st, int depth) {
  std::string s;
  ps(s, st, depth);
  return s;
}

std::string pretty_print(const CProgram& p) {
  std::string s;
  for (auto& sort : p.sorts) s += "sort " + sort + "\n";
  for (auto& pr : p.predicates) {
    s += "predicate " + pr.name + "(";
    for (size_t i = 0; i < pr.params.size(); ++i) {
      if (i) s += ", ";
      s += "arg" + std::to_string(i + 1) + ": " + pr.params[i].str();
    }
    s += ")\n";
  }
  for (auto& u : p.ufs) {
    s += "function " + u.name + "(";
    for (size_t i = 0; i < u.args.size(); ++i) {
      if (i) s += ", ";
      s += u.args[i].str();
    }
    s += "): " + u.ret.str() + "\n";
  }
  for (auto& m : p.methods) {
    s += "\nmethod " + m.name + "(";
    for (size_t i = 0; i < m.vars.size(); ++i) {
      if (i) s += ", ";
      s += m.vars[i].first + ": " + m.vars[i].second.str();
    }
    s += ")";
    if (m.body.empty()) {
      s += " {}\n";
      continue;
    }
    s += " {\n";
    for (auto& st : m.body) ps(s, st, 1);
    s += "}\n";
  }
  return s;
}

// ---------------------------------------------------------------------------
// Well-formedness

namespace {

struct WfCtx {
  const CProgram& p;
  const CMethod& m;
  std::vector<std::string>& out;
  std::set<std::string> labels_seen;

  void bad(const std::string& msg) {
    out.push_back(m.name + ": " + msg);
  }

  // positive == may contain acc(..) at this position
  void expr(const CExprP& e, bool positive,
            std::set<std::string> bound = {}) {
    if (!e) {
      bad("null expression");
      return;
    }
    switch (e->kind) {
      case CE::Var:
        if (!bound.count(e->name) && !m.var_type(e->name))
          bad("undeclared variable '" + e->name + "'");
        return;
      case CE::IntLit:
      case CE::BoolLit:
        return;
      case CE::Bin: {
        bool keep = positive && e->bin == BinOp::And;
        bool guard_rhs = positive && e->bin == BinOp::Implies;
        expr(e->args[0], keep, bound);
        expr(e->args[1], keep || guard_rhs, bound);
        return;
      }
      case CE::Un:
        expr(e->args[0], false, bound);
        return;
      case CE::Ite:
        expr(e->args[0], false, bound);
        expr(e->args[1], positive, bound);
        expr(e->args[2], positive, bound);
        return;
      case CE::Forall: {
        auto inner = bound;
        for (auto& [n, _] : e->binders) inner.insert(n);
        expr(e->args[0], false, inner);
        return;
      }
      case CE::OldAt:
        if (!labels_seen.count(e->name))
          bad("old[..] references label '" + e->name +
              "' not defined earlier");
        expr(e->args[0], false, bound);
        return;
      case CE::Perm:
      case CE::Acc: {
        const Predicate* pr = p.find_predicate(e->name);
        if (!pr) {
          bad("unknown predicate '" + e->name + "'");
        } else if (pr->params.size() != e->args.size()) {
          bad("predicate '" + e->name + "' expects " +
              std::to_string(pr->params.size()) + " argument(s), got " +
              std::to_string(e->args.size()));
        }
        if (e->kind == CE::Acc) {
          if (!positive)
            bad("acc(" + e->name +
                ", ..) outside a positive inhale/exhale position");
          expr(e->amt, false, bound);
        }
        for (auto& a : e->args) expr(a, false, bound);
        return;
      }
      case CE::App: {
        const UFun* u = p.find_uf(e->name);
        if (!u)
          bad("unknown function '" + e->name + "'");
        else if (u->args.size() != e->args.size())
          bad("function '" + e->name + "' arity mismatch");
        for (auto& a : e->args) expr(a, false, bound);
        return;
      }
      case CE::Select:
        if (e->args.size() < 2) bad("select needs a map and keys");
        for (auto& a : e->args) expr(a, false, bound);
        return;
      case CE::Store:
        if (e->args.size() < 3) bad("store needs a map, keys, and a value");
        for (auto& a : e->args) expr(a, false, bound);
        return;
    }
  }

  void stmt(const CStmt& st) {
    switch (st.kind) {
      case CS::Inhale:
      case CS::Exhale:
        expr(st.expr, true);
        return;
      case CS::Assert:
      case CS::Assume:
        expr(st.expr, false);
        return;
      case CS::Label:
        if (!labels_seen.insert(st.name).second)
          bad("duplicate label '" + st.name + "'");
        return;
      case CS::Assign:
        if (!m.var_type(st.name))
          bad("assignment to undeclared variable '" + st.name + "'");
        expr(st.expr, false);
        return;
      case CS::Havoc:
        if (!m.var_type(st.name))
          bad("havoc of undeclared variable '" + st.name + "'");
        return;
      case CS::If: {
        expr(st.expr, false);
        auto snapshot = labels_seen;
        for (auto& t : st.then_body) stmt(t);
        auto after_then = labels_seen;
        labels_seen = snapshot;
        for (auto& t : st.else_body) stmt(t);
        // Labels defined inside one branch are not visible after the split,
        // so restore the pre-branch set.
        labels_seen = snapshot;
        (void)after_then;
        return;
      }
    }
  }
};

}  // namespace

std::vector<std::string> wellformed(const CProgram& p) {
  std::vector<std::string> out;
  std::set<std::string> pred_names;
  for (auto& pr : p.predicates)
    if (!pred_names.insert(pr.name).second)
      out.push_back("duplicate predicate '" + pr.name + "'");
  std::set<std::string> uf_names;
  for (auto& u : p.ufs)
    if (!uf_names.insert(u.name).second)
      out.push_back("duplicate function '" + u.name + "'");
  for (auto& m : p.methods) {
    std::set<std::string> vnames;
    for (auto& [n, _] : m.vars)
      if (!vnames.insert(n).second)
        out.push_back(m.name + ": duplicate variable '" + n + "'");
    WfCtx ctx{p, m, out, {}};
    for (auto& st : m.body) ctx.stmt(st);
  }
  return out;
}

}  // namespace rslv::core
