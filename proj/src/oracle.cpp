#include "rslv/oracle.hpp"

#include <functional>
#include <sstream>
#include <stdexcept>

namespace rslv {

using namespace core;

namespace {

// ---------------------------------------------------------------------------
// Concrete values

struct Value {
  enum K { IntV, BoolV, SortV, MapV } k = IntV;
  long long i = 0;  // IntV payload, or SortV element index
  bool b = false;
  std::map<std::vector<Value>, long long> map;  // MapV: missing keys read 0

  bool operator==(const Value& o) const {
    return k == o.k && i == o.i && b == o.b && map == o.map;
  }
  bool operator<(const Value& o) const {
    if (k != o.k) return k < o.k;
    if (i != o.i) return i < o.i;
    if (b != o.b) return b < o.b;
    return map < o.map;
  }
};

std::string show(const Value& v) {
  switch (v.k) {
    case Value::IntV: return std::to_string(v.i);
    case Value::BoolV: return v.b ? "true" : "false";
    case Value::SortV: return "#" + std::to_string(v.i);
    case Value::MapV: {
      std::string s = "{";
      bool first = true;
      for (auto& [ks, val] : v.map) {
        if (val == 0) continue;
        if (!first) s += ", ";
        first = false;
        s += "(";
        for (size_t i = 0; i < ks.size(); ++i) {
          if (i) s += ",";
          s += show(ks[i]);
        }
        s += ")->" + std::to_string(val);
      }
      return s + "}";
    }
  }
  return "?";
}

struct BudgetExceeded {};

using VarMap = std::map<std::string, Value>;
using Heap = std::map<std::vector<Value>, long long>;
using Heaps = std::map<std::string, Heap>;
using Table = std::map<std::vector<Value>, Value>;

struct Snapshot {
  VarMap vars;
  Heaps heaps;
};

struct OState {
  VarMap vars;
  Heaps heaps;
  std::map<std::string, Snapshot> snaps;
};

struct Violation {
  ObKind kind;
  Span span;
  std::string note;
};

enum class Flow { Ok, Pruned, Viol };

class Exec {
 public:
  Exec(const CProgram& p, const CMethod& m, const OracleOptions& opts)
      : p_(p), m_(m), opts_(opts) {}

  const CProgram& p_;
  const CMethod& m_;
  const OracleOptions& opts_;
  std::map<std::string, Table> tables;  // uninterpreted functions
  long long steps = 0;
  Violation viol{};

  void tick() {
    if (++steps > opts_.budget) throw BudgetExceeded{};
  }

  // -- domains --------------------------------------------------------------

  std::vector<Value> domain(const CType& t) {
    std::vector<Value> out;
    switch (t.kind) {
      case CType::Int:
        for (long long v = -1; v <= opts_.amount_max; ++v)
          out.push_back({Value::IntV, v, false, {}});
        return out;
      case CType::Bool:
        out.push_back({Value::BoolV, 0, false, {}});
        out.push_back({Value::BoolV, 0, true, {}});
        return out;
      case CType::Sort:
        for (long long v = 0; v < opts_.domain_size; ++v)
          out.push_back({Value::SortV, v, false, {}});
        return out;
      case CType::Map: {
        std::vector<std::vector<Value>> keys = key_tuples(t.keys);
        std::vector<Value> vals = domain(CType::integer());
        // all assignments of a value to each key tuple
        out.push_back({Value::MapV, 0, false, {}});
        for (auto& kt : keys) {
          std::vector<Value> grown;
          for (auto& m : out)
            for (auto& v : vals) {
              Value m2 = m;
              if (v.i != 0) m2.map[kt] = v.i;
              grown.push_back(std::move(m2));
            }
          out = std::move(grown);
          if (static_cast<long long>(out.size()) > opts_.budget)
            throw BudgetExceeded{};
        }
        return out;
      }
    }
    return out;
  }

  std::vector<std::vector<Value>> key_tuples(const std::vector<CType>& ks) {
    std::vector<std::vector<Value>> out{{}};
    for (auto& k : ks) {
      std::vector<std::vector<Value>> grown;
      for (auto& t : out)
        for (auto& v : domain(k)) {
          auto t2 = t;
          t2.push_back(v);
          grown.push_back(std::move(t2));
        }
      out = std::move(grown);
    }
    return out;
  }

  Value default_value(const CType& t) {
    switch (t.kind) {
      case CType::Int: return {Value::IntV, 0, false, {}};
      case CType::Bool: return {Value::BoolV, 0, false, {}};
      case CType::Sort: return {Value::SortV, 0, false, {}};
      case CType::Map: return {Value::MapV, 0, false, {}};
    }
    return {};
  }

  // -- evaluation -----------------------------------------------------------

  struct View {
    const VarMap* vars;
    const VarMap* fallback;
    const Heaps* heaps;
    const std::map<std::string, Snapshot>* snaps;
  };

  Value eval(const CExprP& e, const View& v, const VarMap& bound) {
    tick();
    switch (e->kind) {
      case CE::IntLit: return {Value::IntV, e->int_val, false, {}};
      case CE::BoolLit: return {Value::BoolV, 0, e->bool_val, {}};
      case CE::Var: {
        auto bit = bound.find(e->name);
        if (bit != bound.end()) return bit->second;
        auto it = v.vars->find(e->name);
        if (it != v.vars->end()) return it->second;
        if (v.fallback) {
          auto fit = v.fallback->find(e->name);
          if (fit != v.fallback->end()) return fit->second;
        }
        throw std::logic_error("oracle: unbound variable '" + e->name + "'");
      }
      case CE::Bin: {
        // boolean connectives short-circuit
        if (e->bin == BinOp::And || e->bin == BinOp::Or ||
            e->bin == BinOp::Implies) {
          bool l = eval(e->args[0], v, bound).b;
          if (e->bin == BinOp::And && !l) return {Value::BoolV, 0, false, {}};
          if (e->bin == BinOp::Or && l) return {Value::BoolV, 0, true, {}};
          if (e->bin == BinOp::Implies && !l)
            return {Value::BoolV, 0, true, {}};
          return {Value::BoolV, 0, eval(e->args[1], v, bound).b, {}};
        }
        Value l = eval(e->args[0], v, bound);
        Value r = eval(e->args[1], v, bound);
        switch (e->bin) {
          case BinOp::Add: return {Value::IntV, l.i + r.i, false, {}};
          case BinOp::Sub: return {Value::IntV, l.i - r.i, false, {}};
          case BinOp::Mul: return {Value::IntV, l.i * r.i, false, {}};
          case BinOp::Eq: return {Value::BoolV, 0, l == r, {}};
          case BinOp::Ne: return {Value::BoolV, 0, !(l == r), {}};
          case BinOp::Lt: return {Value::BoolV, 0, l.i < r.i, {}};
          case BinOp::Le: return {Value::BoolV, 0, l.i <= r.i, {}};
          case BinOp::Gt: return {Value::BoolV, 0, l.i > r.i, {}};
          case BinOp::Ge: return {Value::BoolV, 0, l.i >= r.i, {}};
          default: break;
        }
        throw std::logic_error("oracle: bad operator");
      }
      case CE::Un: {
        Value a = eval(e->args[0], v, bound);
        if (e->un == UnOp::Not) return {Value::BoolV, 0, !a.b, {}};
        return {Value::IntV, -a.i, false, {}};
      }
      case CE::Ite:
        return eval(e->args[0], v, bound).b ? eval(e->args[1], v, bound)
                                            : eval(e->args[2], v, bound);
      case CE::Forall: {
        std::vector<std::vector<Value>> doms;
        for (auto& [_, t] : e->binders) doms.push_back(domain(t));
        VarMap inner = bound;
        std::function<bool(size_t)> go = [&](size_t i) -> bool {
          if (i == e->binders.size())
            return eval(e->args[0], v, inner).b;
          for (auto& val : doms[i]) {
            inner[e->binders[i].first] = val;
            if (!go(i + 1)) return false;
          }
          return true;
        };
        return {Value::BoolV, 0, go(0), {}};
      }
      case CE::OldAt: {
        auto sit = v.snaps->find(e->name);
        if (sit == v.snaps->end())
          throw std::logic_error("oracle: old[..] at unknown label '" +
                                 e->name + "'");
        View ov{&sit->second.vars, v.fallback ? v.fallback : v.vars,
                &sit->second.heaps, v.snaps};
        return eval(e->args[0], ov, bound);
      }
      case CE::Perm: {
        std::vector<Value> keys;
        for (auto& a : e->args) keys.push_back(eval(a, v, bound));
        auto hit = v.heaps->find(e->name);
        long long have = 0;
        if (hit != v.heaps->end()) {
          auto kit = hit->second.find(keys);
          if (kit != hit->second.end()) have = kit->second;
        }
        return {Value::IntV, have, false, {}};
      }
      case CE::App: {
        std::vector<Value> args;
        for (auto& a : e->args) args.push_back(eval(a, v, bound));
        return tables.at(e->name).at(args);
      }
      case CE::Select: {
        Value m = eval(e->args[0], v, bound);
        std::vector<Value> keys;
        for (size_t i = 1; i < e->args.size(); ++i)
          keys.push_back(eval(e->args[i], v, bound));
        auto it = m.map.find(keys);
        return {Value::IntV, it == m.map.end() ? 0 : it->second, false, {}};
      }
      case CE::Store: {
        Value m = eval(e->args[0], v, bound);
        std::vector<Value> keys;
        for (size_t i = 1; i + 1 < e->args.size(); ++i)
          keys.push_back(eval(e->args[i], v, bound));
        long long val = eval(e->args.back(), v, bound).i;
        if (val == 0)
          m.map.erase(keys);
        else
          m.map[keys] = val;
        return m;
      }
      case CE::Acc:
        throw std::logic_error("oracle: acc(..) in a term position");
    }
    throw std::logic_error("oracle: bad expression");
  }

  Value eval(const CExprP& e, const OState& st) {
    View v{&st.vars, nullptr, &st.heaps, &st.snaps};
    return eval(e, v, {});
  }

  // -- inhale / exhale ------------------------------------------------------

  Flow fail(const CExprP& node, const Prov* inherited, ObKind fallback,
            Span span) {
    const Prov* pv = node->prov ? &*node->prov : inherited;
    if (pv) {
      viol = {pv->kind, pv->span, pv->note};
    } else {
      viol = {fallback, span, ""};
    }
    return Flow::Viol;
  }

  Flow transfer(OState& st, const CExprP& e, const Prov* prov, bool inhale,
                Span span) {
    tick();
    const Prov* here = e->prov ? &*e->prov : prov;
    if (e->kind == CE::Bin && e->bin == BinOp::And) {
      Flow f = transfer(st, e->args[0], here, inhale, span);
      if (f != Flow::Ok) return f;
      return transfer(st, e->args[1], here, inhale, span);
    }
    if (e->kind == CE::Ite ||
        (e->kind == CE::Bin && e->bin == BinOp::Implies)) {
      bool g = eval(e->args[0], st).b;
      if (g) return transfer(st, e->args[1], here, inhale, span);
      if (e->kind == CE::Ite)
        return transfer(st, e->args[2], here, inhale, span);
      return Flow::Ok;
    }
    if (e->kind == CE::Acc) {
      long long amt = eval(e->amt, st).i;
      std::vector<Value> keys;
      for (auto& a : e->args) keys.push_back(eval(a, st));
      if (amt < 0) {
        const Prov* pv = here;
        viol = {ObKind::NegativeAmount, pv ? pv->span : span,
                pv ? pv->note : ""};
        return Flow::Viol;
      }
      long long& cell = st.heaps[e->name][keys];
      if (inhale) {
        cell += amt;
      } else {
        if (cell < amt)
          return fail(e, here, ObKind::InsufficientResource, span);
        cell -= amt;
      }
      return Flow::Ok;
    }
    // pure conjunct
    bool val = eval(e, st).b;
    if (inhale) return val ? Flow::Ok : Flow::Pruned;
    if (!val) return fail(e, here, ObKind::AssertFailure, span);
    return Flow::Ok;
  }

  // -- statement execution --------------------------------------------------

  // Returns Viol if some havoc choice leads to a violation (the verifier
  // must be robust to every callee behavior), Ok otherwise.
  Flow exec(const std::vector<const CStmt*>& rest, size_t i, OState st) {
    for (; i < rest.size(); ++i) {
      tick();
      const CStmt& s = *rest[i];
      switch (s.kind) {
        case CS::Inhale: {
          Flow f = transfer(st, s.expr, nullptr, true, s.span);
          if (f == Flow::Pruned) return Flow::Ok;
          if (f == Flow::Viol) return f;
          break;
        }
        case CS::Exhale: {
          Flow f = transfer(st, s.expr, nullptr, false, s.span);
          if (f == Flow::Pruned) return Flow::Ok;
          if (f == Flow::Viol) return f;
          break;
        }
        case CS::Assert: {
          if (!eval(s.expr, st).b)
            return fail(s.expr, nullptr, ObKind::AssertFailure, s.span);
          break;
        }
        case CS::Assume:
          if (!eval(s.expr, st).b) return Flow::Ok;
          break;
        case CS::Label:
          st.snaps[s.name] = {st.vars, st.heaps};
          break;
        case CS::Assign:
          st.vars[s.name] = eval(s.expr, st);
          break;
        case CS::Havoc: {
          const CType* t = m_.var_type(s.name);
          for (auto& v : domain(*t)) {
            OState st2 = st;
            st2.vars[s.name] = v;
            Flow f = exec(rest, i + 1, std::move(st2));
            if (f == Flow::Viol) return f;
          }
          return Flow::Ok;
        }
        case CS::If: {
          bool g = eval(s.expr, st).b;
          std::vector<const CStmt*> cont;
          const auto& body = g ? s.then_body : s.else_body;
          for (auto& b : body) cont.push_back(&b);
          for (size_t j = i + 1; j < rest.size(); ++j) cont.push_back(rest[j]);
          return exec(cont, 0, std::move(st));
        }
      }
    }
    return Flow::Ok;
  }
};

// Uninterpreted functions referenced by a method.
void collect_apps(const CExprP& e, std::set<std::string>& out) {
  if (!e) return;
  if (e->kind == CE::App) out.insert(e->name);
  if (e->amt) collect_apps(e->amt, out);
  for (auto& a : e->args) collect_apps(a, out);
}

void collect_apps(const CStmt& s, std::set<std::string>& out) {
  collect_apps(s.expr, out);
  for (auto& t : s.then_body) collect_apps(t, out);
  for (auto& t : s.else_body) collect_apps(t, out);
}

}  // namespace

OracleFinding oracle_check_method(const CProgram& p, const CMethod& m,
                                  const OracleOptions& opts) {
  OracleFinding out;
  Exec ex(p, m, opts);
  try {
    // function tables to enumerate
    std::set<std::string> used;
    for (auto& s : m.body) collect_apps(s, used);
    std::vector<const UFun*> ufs;
    long long combos = 1;
    for (auto& n : used) {
      const UFun* u = p.find_uf(n);
      if (!u) continue;
      ufs.push_back(u);
      auto keys = ex.key_tuples(u->args);
      long long ret = static_cast<long long>(ex.domain(u->ret).size());
      for (size_t i = 0; i < keys.size(); ++i) {
        combos *= ret;
        if (combos > opts.uf_budget) {
          out.verdict = OracleVerdict::Incomplete;
          out.reason = "too many interpretations of '" + u->name +
                       "' to enumerate";
          return out;
        }
      }
    }

    // input domains
    std::vector<std::vector<Value>> doms;
    for (size_t i = 0; i < m.param_count; ++i)
      doms.push_back(ex.domain(m.vars[i].second));

    OState init;
    for (size_t i = m.param_count; i < m.vars.size(); ++i)
      init.vars[m.vars[i].first] = ex.default_value(m.vars[i].second);

    std::vector<const CStmt*> body;
    for (auto& s : m.body) body.push_back(&s);

    bool violated = false;
    std::function<void(size_t, OState&)> inputs = [&](size_t i, OState& st) {
      if (violated) return;
      if (i == m.param_count) {
        OState st2 = st;
        if (ex.exec(body, 0, std::move(st2)) == Flow::Viol) {
          violated = true;
          out.verdict = OracleVerdict::Violation;
          out.kind = ex.viol.kind;
          out.span = ex.viol.span;
          out.note = ex.viol.note;
          std::string w;
          for (size_t j = 0; j < m.param_count; ++j) {
            if (j) w += ", ";
            w += m.vars[j].first + " = " + show(st.vars.at(m.vars[j].first));
          }
          out.witness = w;
        }
        return;
      }
      for (auto& v : doms[i]) {
        st.vars[m.vars[i].first] = v;
        inputs(i + 1, st);
        if (violated) return;
      }
    };

    // every combination of function tables
    std::function<void(size_t)> per_table = [&](size_t ui) {
      if (violated) return;
      if (ui == ufs.size()) {
        OState st = init;
        inputs(0, st);
        return;
      }
      const UFun* u = ufs[ui];
      auto keys = ex.key_tuples(u->args);
      auto rets = ex.domain(u->ret);
      Table& tbl = ex.tables[u->name];
      std::function<void(size_t)> fill = [&](size_t ki) {
        if (violated) return;
        if (ki == keys.size()) {
          per_table(ui + 1);
          return;
        }
        for (auto& r : rets) {
          tbl[keys[ki]] = r;
          fill(ki + 1);
          if (violated) return;
        }
      };
      fill(0);
    };
    per_table(0);
  } catch (const BudgetExceeded&) {
    out = {};
    out.verdict = OracleVerdict::Incomplete;
    out.reason = "state space too large (budget exhausted)";
    return out;
  }
  return out;
}

std::vector<std::pair<std::string, OracleFinding>> oracle_check(
    const CProgram& p, const OracleOptions& opts) {
  std::vector<std::pair<std::string, OracleFinding>> out;
  for (auto& m : p.methods)
    out.emplace_back(m.name, oracle_check_method(p, m, opts));
  return out;
}

}  // namespace rslv
