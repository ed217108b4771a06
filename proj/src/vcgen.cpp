#include "rslv/vcgen.hpp"

#include <stdexcept>

namespace rslv {

using namespace core;

namespace {

using VarMap = std::map<std::string, CExprP>;

struct Snapshot {
  VarMap vars;
  VarMap heaps;  // predicate name -> heap term
};

struct State {
  VarMap vars;
  VarMap heaps;
  std::vector<CExprP> path;
  std::map<std::string, Snapshot> snaps;
};

CExprP conj(const CExprP& a, const CExprP& b) {
  if (!a) return b;
  if (!b) return a;
  return c_bin(BinOp::And, a, b);
}

CExprP guarded(const CExprP& g, const CExprP& e) {
  if (!g) return e;
  return c_bin(BinOp::Implies, g, e);
}

class Gen {
 public:
  Gen(const CProgram& p, const CMethod& m, const VcOptions& opts,
      std::vector<Obligation>& out)
      : p_(p), m_(m), opts_(opts), out_(out) {}

  void run() {
    State st;
    for (auto& [n, t] : m_.vars) {
      symbols_[n] = t;
      st.vars[n] = c_var(n);
    }
    // Every resource heap starts empty: a fresh symbol constrained to zero
    // everywhere, so path formulas stay solver-agnostic.
    for (auto& pr : p_.predicates) {
      std::string h = "heap$" + pr.name + "!0";
      if (pr.params.empty()) {
        symbols_[h] = CType::integer();
        st.heaps[pr.name] = c_var(h);
        st.path.push_back(c_bin(BinOp::Eq, c_var(h), c_int(0)));
      } else {
        symbols_[h] = CType::map_of(pr.params);
        st.heaps[pr.name] = c_var(h);
        std::vector<std::pair<std::string, CType>> bs;
        std::vector<CExprP> ks;
        for (size_t i = 0; i < pr.params.size(); ++i) {
          std::string b = "k" + std::to_string(i + 1);
          bs.emplace_back(b, pr.params[i]);
          ks.push_back(c_var(b));
        }
        st.path.push_back(c_forall(
            bs, c_bin(BinOp::Eq, c_select(c_var(h), ks), c_int(0))));
      }
    }
    std::vector<const CStmt*> rest;
    for (auto& s : m_.body) rest.push_back(&s);
    exec(rest, 0, std::move(st));
  }

 private:
  const CProgram& p_;
  const CMethod& m_;
  const VcOptions& opts_;
  std::vector<Obligation>& out_;
  std::map<std::string, CType> symbols_;
  std::map<std::string, int> fresh_count_;
  int ob_index_ = 0;

  std::string fresh(const std::string& base, CType t) {
    std::string n = base + "!" + std::to_string(++fresh_count_[base]);
    symbols_[n] = std::move(t);
    return n;
  }

  void emit(const State& st, CExprP goal, const Prov* prov, ObKind fallback,
            Span fallback_span, const std::string& fallback_note) {
    Obligation ob;
    ob.method = m_.name;
    ob.index = ob_index_++;
    if (prov) {
      ob.kind = prov->kind;
      ob.span = prov->span;
      ob.note = prov->note;
    } else {
      ob.kind = fallback;
      ob.span = fallback_span;
      ob.note = fallback_note;
    }
    ob.warning = ob.kind == ObKind::Leak;
    ob.goal = std::move(goal);
    ob.path = st.path;
    ob.symbols = symbols_;
    out_.push_back(std::move(ob));
  }

  // -- term evaluation ------------------------------------------------------

  struct EvalView {
    const VarMap* vars;
    const VarMap* fallback_vars;  // current frame, for locals introduced
                                  // after the snapshot was taken
    const VarMap* heaps;
    const std::map<std::string, Snapshot>* snaps;
  };

  CExprP eval(const CExprP& e, const EvalView& v, const VarMap& bound) {
    switch (e->kind) {
      case CE::IntLit:
      case CE::BoolLit:
        return e;
      case CE::Var: {
        auto bit = bound.find(e->name);
        if (bit != bound.end()) return bit->second;
        auto it = v.vars->find(e->name);
        if (it != v.vars->end()) return it->second;
        if (v.fallback_vars) {
          auto fit = v.fallback_vars->find(e->name);
          if (fit != v.fallback_vars->end()) return fit->second;
        }
        throw std::logic_error(m_.name + ": unbound variable '" + e->name +
                               "' during symbolic execution");
      }
      case CE::OldAt: {
        auto sit = v.snaps->find(e->name);
        if (sit == v.snaps->end())
          throw std::logic_error(m_.name + ": old[..] at unknown label '" +
                                 e->name + "'");
        EvalView ov{&sit->second.vars,
                    v.fallback_vars ? v.fallback_vars : v.vars,
                    &sit->second.heaps, v.snaps};
        return eval(e->args[0], ov, bound);
      }
      case CE::Perm: {
        auto hit = v.heaps->find(e->name);
        if (hit == v.heaps->end())
          throw std::logic_error("unknown predicate '" + e->name + "'");
        if (e->args.empty()) return hit->second;
        std::vector<CExprP> keys;
        for (auto& a : e->args) keys.push_back(eval(a, v, bound));
        return c_select(hit->second, std::move(keys));
      }
      case CE::Forall: {
        VarMap inner = bound;
        std::vector<std::pair<std::string, CType>> bs;
        for (auto& [n, t] : e->binders) {
          std::string rn = "q$" + n + std::to_string(++qcount_);
          inner[n] = c_var(rn);
          bs.emplace_back(rn, t);
        }
        return c_forall(std::move(bs), eval(e->args[0], v, inner));
      }
      case CE::Acc:
        throw std::logic_error(
            "acc(..) outside an inhale/exhale assertion position");
      default: {
        // pure node: rebuild with evaluated children
        auto c = std::make_shared<CExpr>(*e);
        c->args.clear();
        for (auto& a : e->args) c->args.push_back(eval(a, v, bound));
        return c;
      }
    }
  }

  CExprP eval(const CExprP& e, const State& st) {
    EvalView v{&st.vars, nullptr, &st.heaps, &st.snaps};
    return eval(e, v, {});
  }

  // -- inhale / exhale ------------------------------------------------------

  CExprP heap_read(const State& st, const std::string& pred,
                   const std::vector<CExprP>& keys) {
    const CExprP& h = st.heaps.at(pred);
    if (keys.empty()) return h;
    return c_select(h, keys);
  }

  void heap_add(State& st, const std::string& pred,
                const std::vector<CExprP>& keys, const CExprP& delta) {
    const CExprP& h = st.heaps.at(pred);
    CExprP updated;
    CType ht;
    const Predicate* pr = p_.find_predicate(pred);
    if (keys.empty()) {
      updated = c_bin(BinOp::Add, h, delta);
      ht = CType::integer();
    } else {
      updated = c_store(h, keys, c_bin(BinOp::Add, c_select(h, keys), delta));
      ht = CType::map_of(pr->params);
    }
    // Name the updated heap.  Leaving the store chain inline makes every
    // later heap term contain two copies of the previous one, which blows
    // up exponentially once printed.
    CExprP nh = c_var(fresh("heap$" + pred, std::move(ht)));
    st.path.push_back(c_bin(BinOp::Eq, nh, updated));
    st.heaps[pred] = nh;
  }

  void transfer(State& st, const CExprP& e, CExprP guard, const Prov* prov,
                bool inhale, Span span) {
    const Prov* here = e->prov ? &*e->prov : prov;
    if (e->kind == CE::Bin && e->bin == BinOp::And) {
      transfer(st, e->args[0], guard, here, inhale, span);
      transfer(st, e->args[1], guard, here, inhale, span);
      return;
    }
    if ((e->kind == CE::Ite) ||
        (e->kind == CE::Bin && e->bin == BinOp::Implies)) {
      CExprP g = eval(e->args[0], st);
      const CExprP& thenb = e->args[1];
      transfer(st, thenb, conj(guard, g), here, inhale, span);
      if (e->kind == CE::Ite)
        transfer(st, e->args[2], conj(guard, c_un(UnOp::Not, g)), here,
                 inhale, span);
      return;
    }
    if (e->kind == CE::Acc) {
      CExprP amt = eval(e->amt, st);
      std::vector<CExprP> keys;
      for (auto& a : e->args) keys.push_back(eval(a, st));
      // amounts must be provably nonnegative wherever an atom is processed
      // (a literal amount is checked right here, without a solver call)
      if (!(amt->kind == CE::IntLit && amt->int_val >= 0)) {
        CExprP nn = guarded(guard, c_bin(BinOp::Ge, amt, c_int(0)));
        Prov np;
        np.kind = ObKind::NegativeAmount;
        np.span = here ? here->span : span;
        np.note = here ? here->note : "";
        emit(st, nn, &np, ObKind::NegativeAmount, span, "");
        st.path.push_back(nn);
      }
      if (!inhale) {
        CExprP have = heap_read(st, e->name, keys);
        CExprP enough = guarded(guard, c_bin(BinOp::Ge, have, amt));
        if (!opts_.mut.drop_exhale_check)
          emit(st, enough, here, ObKind::InsufficientResource, span, "");
        st.path.push_back(enough);
      }
      CExprP delta = guard ? c_ite(guard, amt, c_int(0)) : amt;
      if (!inhale) delta = c_un(UnOp::Neg, delta);
      heap_add(st, e->name, keys, delta);
      return;
    }
    // pure conjunct; `true` conjuncts (e.g. the implicit else of an
    // implication) carry no information
    if (e->kind == CE::BoolLit && e->bool_val) return;
    CExprP t = guarded(guard, eval(e, st));
    if (inhale) {
      st.path.push_back(t);
    } else {
      emit(st, t, here, ObKind::AssertFailure, span, "");
      st.path.push_back(t);
    }
  }

  // -- statement execution --------------------------------------------------

  void exec(const std::vector<const CStmt*>& rest, size_t i, State st) {
    for (; i < rest.size(); ++i) {
      const CStmt& s = *rest[i];
      switch (s.kind) {
        case CS::Inhale:
          transfer(st, s.expr, nullptr, nullptr, true, s.span);
          break;
        case CS::Exhale:
          transfer(st, s.expr, nullptr, nullptr, false, s.span);
          break;
        case CS::Assert: {
          CExprP t = eval(s.expr, st);
          const Prov* pv = s.expr->prov ? &*s.expr->prov : nullptr;
          emit(st, t, pv, ObKind::AssertFailure, s.span, "");
          st.path.push_back(t);
          break;
        }
        case CS::Assume:
          st.path.push_back(eval(s.expr, st));
          break;
        case CS::Label:
          st.snaps[s.name] = {st.vars, st.heaps};
          break;
        case CS::Assign:
          st.vars[s.name] = eval(s.expr, st);
          break;
        case CS::Havoc: {
          const CType* t = m_.var_type(s.name);
          st.vars[s.name] = c_var(fresh(s.name, *t));
          break;
        }
        case CS::If: {
          CExprP g = eval(s.expr, st);
          // then branch
          {
            State ts = st;
            ts.path.push_back(g);
            std::vector<const CStmt*> cont;
            for (auto& b : s.then_body) cont.push_back(&b);
            for (size_t j = i + 1; j < rest.size(); ++j)
              cont.push_back(rest[j]);
            exec(cont, 0, std::move(ts));
          }
          // else branch
          {
            State es = std::move(st);
            es.path.push_back(c_un(UnOp::Not, g));
            std::vector<const CStmt*> cont;
            for (auto& b : s.else_body) cont.push_back(&b);
            for (size_t j = i + 1; j < rest.size(); ++j)
              cont.push_back(rest[j]);
            exec(cont, 0, std::move(es));
          }
          return;  // both continuations handled recursively
        }
      }
    }
    end_of_path(st);
  }

  int qcount_ = 0;

  void end_of_path(const State& st) {
    if (!opts_.check_leaks) return;
    for (auto& pr : p_.predicates) {
      CExprP goal;
      if (pr.params.empty()) {
        goal = c_bin(BinOp::Eq, st.heaps.at(pr.name), c_int(0));
      } else {
        std::vector<std::pair<std::string, CType>> bs;
        std::vector<CExprP> ks;
        for (size_t i = 0; i < pr.params.size(); ++i) {
          std::string b = "k" + std::to_string(i + 1);
          bs.emplace_back(b, pr.params[i]);
          ks.push_back(c_var(b));
        }
        goal = c_forall(
            bs, c_bin(BinOp::Eq, c_select(st.heaps.at(pr.name), ks),
                      c_int(0)));
      }
      Prov pv;
      pv.kind = ObKind::Leak;
      pv.span = m_.span;
      pv.note = "resources of kind " + pr.name + " left over";
      emit(st, goal, &pv, ObKind::Leak, m_.span, "");
    }
  }
};

}  // namespace

std::vector<MethodVcs> vcgen(const core::CProgram& p, const VcOptions& opts) {
  std::vector<MethodVcs> out;
  for (auto& m : p.methods) {
    MethodVcs mv;
    mv.method = m.name;
    mv.span = m.span;
    Gen(p, m, opts, mv.obligations).run();
    out.push_back(std::move(mv));
  }
  return out;
}

}  // namespace rslv
