#include "rslv/smt.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace rslv {

using namespace core;

// ---------------------------------------------------------------------------
// Lowering to SMT-LIB2

namespace {

// All identifiers go out quoted, so '.', '!', '$' and '#' in generated names
// need no escaping rules of their own.
std::string sym(const std::string& n) { return "|" + n + "|"; }

std::string smt_type(const CType& t) {
  switch (t.kind) {
    case CType::Int: return "Int";
    case CType::Bool: return "Bool";
    case CType::Sort: return sym(t.name);
    case CType::Map: {
      std::string s = "Int";
      for (auto it = t.keys.rbegin(); it != t.keys.rend(); ++it)
        s = "(Array " + smt_type(*it) + " " + s + ")";
      return s;
    }
  }
  return "Int";
}

struct Lower {
  std::string term(const CExprP& e) {
    switch (e->kind) {
      case CE::IntLit:
        if (e->int_val < 0)
          return "(- " + std::to_string(-e->int_val) + ")";
        return std::to_string(e->int_val);
      case CE::BoolLit:
        return e->bool_val ? "true" : "false";
      case CE::Var:
        return sym(e->name);
      case CE::Bin: {
        std::string l = term(e->args[0]), r = term(e->args[1]);
        switch (e->bin) {
          case BinOp::Add: return "(+ " + l + " " + r + ")";
          case BinOp::Sub: return "(- " + l + " " + r + ")";
          case BinOp::Mul: return "(* " + l + " " + r + ")";
          case BinOp::Eq: return "(= " + l + " " + r + ")";
          case BinOp::Ne: return "(not (= " + l + " " + r + "))";
          case BinOp::Lt: return "(< " + l + " " + r + ")";
          case BinOp::Le: return "(<= " + l + " " + r + ")";
          case BinOp::Gt: return "(> " + l + " " + r + ")";
          case BinOp::Ge: return "(>= " + l + " " + r + ")";
          case BinOp::And: return "(and " + l + " " + r + ")";
          case BinOp::Or: return "(or " + l + " " + r + ")";
          case BinOp::Implies: return "(=> " + l + " " + r + ")";
        }
        break;
      }
      case CE::Un:
        return (e->un == UnOp::Not ? "(not " : "(- ") + term(e->args[0]) +
               ")";
      case CE::Ite:
        return "(ite " + term(e->args[0]) + " " + term(e->args[1]) + " " +
               term(e->args[2]) + ")";
      case CE::Forall: {
        std::string s = "(forall (";
        for (size_t i = 0; i < e->binders.size(); ++i) {
          if (i) s += " ";
          s += "(" + sym(e->binders[i].first) + " " +
               smt_type(e->binders[i].second) + ")";
        }
        return s + ") " + term(e->args[0]) + ")";
      }
      case CE::App: {
        if (e->args.empty()) return sym(e->name);
        std::string s = "(" + sym(e->name);
        for (auto& a : e->args) s += " " + term(a);
        return s + ")";
      }
      case CE::Select: {
        std::string s = term(e->args[0]);
        for (size_t i = 1; i < e->args.size(); ++i)
          s = "(select " + s + " " + term(e->args[i]) + ")";
        return s;
      }
      case CE::Store:
        return store(e->args[0], e->args, 1);
      case CE::OldAt:
      case CE::Perm:
      case CE::Acc:
        throw std::logic_error(
            "old/perm/acc must be resolved before SMT lowering");
    }
    throw std::logic_error("bad term");
  }

  // store(m, k1..kn, v) over nested arrays:
  //   (store m k1 (store (select m k1) k2 ... v))
  std::string store(const CExprP& map, const std::vector<CExprP>& args,
                    size_t ki) {
    std::string m = term(map);
    std::string k = term(args[ki]);
    if (ki + 2 == args.size())
      return "(store " + m + " " + k + " " + term(args.back()) + ")";
    // deeper: build the inner map expression textually
    auto inner = std::make_shared<CExpr>();
    inner->kind = CE::Select;
    inner->args = {map, args[ki]};
    CExprP innerp = inner;
    return "(store " + m + " " + k + " " + store(innerp, args, ki + 1) + ")";
  }
};

}  // namespace

std::string to_smt2(const core::CProgram& decls, const Obligation& ob) {
  std::ostringstream s;
  s << "; obligation " << ob.method << " #" << ob.index << " ("
    << ob_kind_str(ob.kind) << ")\n";
  s << "(set-logic ALL)\n";
  for (auto& sort : decls.sorts) s << "(declare-sort " << sym(sort) << " 0)\n";
  for (auto& u : decls.ufs) {
    s << "(declare-fun " << sym(u.name) << " (";
    for (size_t i = 0; i < u.args.size(); ++i) {
      if (i) s << " ";
      s << smt_type(u.args[i]);
    }
    s << ") " << smt_type(u.ret) << ")\n";
  }
  for (auto& [n, t] : ob.symbols)
    s << "(declare-const " << sym(n) << " " << smt_type(t) << ")\n";
  Lower lw;
  for (auto& a : ob.path) s << "(assert " << lw.term(a) << ")\n";
  s << "(assert (not " << lw.term(ob.goal) << "))\n";
  s << "(check-sat)\n";
  return s.str();
}

// ---------------------------------------------------------------------------
// Running the solver

namespace {

struct Pipe {
  int rd = -1, wr = -1;
  bool open() {
    int fds[2];
    if (pipe(fds) != 0) return false;
    rd = fds[0];
    wr = fds[1];
    return true;
  }
  ~Pipe() {
    if (rd >= 0) close(rd);
    if (wr >= 0) close(wr);
  }
};

}  // namespace

namespace {

struct RawRun {
  std::string out;
  bool timed_out = false;
  bool spawn_failed = false;
  int status = 0;
};

RawRun run_process(const std::string& command, const std::string& input,
                   double timeout_secs) {
  RawRun res;
  Pipe to_child, from_child;
  if (!to_child.open() || !from_child.open()) {
    res.spawn_failed = true;
    return res;
  }
  pid_t pid = fork();
  if (pid < 0) {
    res.spawn_failed = true;
    return res;
  }
  if (pid == 0) {
    dup2(to_child.rd, 0);
    dup2(from_child.wr, 1);
    dup2(from_child.wr, 2);
    close(to_child.rd);
    close(to_child.wr);
    close(from_child.rd);
    close(from_child.wr);
    execl("/bin/sh", "sh", "-c", command.c_str(), (char*)nullptr);
    _exit(127);
  }
  close(to_child.rd);
  to_child.rd = -1;
  close(from_child.wr);
  from_child.wr = -1;
  fcntl(to_child.wr, F_SETFL, O_NONBLOCK);
  fcntl(from_child.rd, F_SETFL, O_NONBLOCK);

  auto deadline =
      std::chrono::steady_clock::now() +
      std::chrono::milliseconds(static_cast<long>(timeout_secs * 1000));
  const std::string& script = input;
  std::string& out = res.out;
  size_t written = 0;
  bool timed_out = false;
  while (true) {
    struct pollfd fds[2];
    int n = 0;
    int write_idx = -1, read_idx = -1;
    if (to_child.wr >= 0) {
      fds[n] = {to_child.wr, POLLOUT, 0};
      write_idx = n++;
    }
    if (from_child.rd >= 0) {
      fds[n] = {from_child.rd, POLLIN, 0};
      read_idx = n++;
    }
    if (n == 0) break;
    auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      timed_out = true;
      break;
    }
    int ms = static_cast<int>(
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now)
            .count());
    int rc = poll(fds, static_cast<nfds_t>(n), ms > 0 ? ms : 1);
    if (rc == 0) {
      timed_out = true;
      break;
    }
    if (rc < 0) break;
    if (write_idx >= 0 && (fds[write_idx].revents & (POLLOUT | POLLERR))) {
      ssize_t w = write(to_child.wr, script.data() + written,
                        script.size() - written);
      if (w > 0) written += static_cast<size_t>(w);
      if (w < 0 || written == script.size()) {
        close(to_child.wr);
        to_child.wr = -1;
      }
    }
    if (read_idx >= 0 &&
        (fds[read_idx].revents & (POLLIN | POLLHUP | POLLERR))) {
      char buf[4096];
      ssize_t r = read(from_child.rd, buf, sizeof buf);
      if (r > 0) {
        out.append(buf, static_cast<size_t>(r));
      } else if (r == 0 || (r < 0 && errno != EAGAIN)) {
        close(from_child.rd);
        from_child.rd = -1;
      }
    }
  }
  int status = 0;
  if (timed_out) {
    kill(pid, SIGKILL);
    waitpid(pid, &status, 0);
    res.timed_out = true;
    return res;
  }
  waitpid(pid, &status, 0);
  res.status = status;
  return res;
}

}  // namespace

SmtResult run_solver(const SolverConfig& cfg, const std::string& script) {
  SmtResult res;
  RawRun raw = run_process(cfg.command, script, cfg.timeout_secs);
  if (raw.spawn_failed) {
    res.detail = "failed to spawn solver";
    return res;
  }
  if (raw.timed_out) {
    res.verdict = SmtVerdict::Unknown;
    res.detail = "timeout after " + std::to_string(cfg.timeout_secs) + "s";
    return res;
  }
  // first whitespace-delimited token decides
  std::istringstream is(raw.out);
  std::string tok;
  is >> tok;
  if (tok == "unsat") {
    res.verdict = SmtVerdict::Proved;
  } else if (tok == "sat") {
    res.verdict = SmtVerdict::Refuted;
  } else if (tok == "unknown") {
    res.verdict = SmtVerdict::Unknown;
    res.detail = raw.out;
  } else {
    res.verdict = SmtVerdict::SolverError;
    res.detail = raw.out.empty() ? "no solver output (exit status " +
                                       std::to_string(raw.status) + ")"
                                 : raw.out;
  }
  return res;
}

std::vector<std::vector<SmtResult>> check_all(
    const core::CProgram& decls, const std::vector<MethodVcs>& vcs,
    const SolverConfig& cfg) {
  struct Job {
    size_t mi, oi;
    std::string script;
  };
  std::vector<Job> jobs;
  std::vector<std::vector<SmtResult>> results(vcs.size());
  for (size_t mi = 0; mi < vcs.size(); ++mi) {
    results[mi].resize(vcs[mi].obligations.size());
    for (size_t oi = 0; oi < vcs[mi].obligations.size(); ++oi)
      jobs.push_back({mi, oi, to_smt2(decls, vcs[mi].obligations[oi])});
  }
  if (!cfg.dump_dir.empty()) {
    std::filesystem::create_directories(cfg.dump_dir);
    for (auto& j : jobs) {
      std::string name = vcs[j.mi].method;
      for (auto& c : name)
        if (c == ':' || c == '/') c = '_';
      std::ofstream f(cfg.dump_dir + "/" + name + "_" +
                      std::to_string(vcs[j.mi].obligations[j.oi].index) +
                      ".smt2");
      f << j.script;
    }
  }
  // Batch all queries through a single solver process, separated by
  // (reset), to amortize process startup.  Each query is self-contained,
  // so this matches what the solver would see one file at a time.  Any
  // query left without a verdict (batch timeout, solver errors, output
  // misalignment) is retried individually.
  std::vector<bool> done(jobs.size(), false);
  if (jobs.size() > 1) {
    std::string batch;
    for (auto& j : jobs) {
      batch += j.script;
      batch += "(reset)\n";
    }
    RawRun raw = run_process(cfg.command, batch,
                             cfg.timeout_secs * static_cast<double>(jobs.size()));
    if (!raw.spawn_failed && raw.out.find("(error") == std::string::npos) {
      std::istringstream is(raw.out);
      std::string tok;
      size_t i = 0;
      while (i < jobs.size() && (is >> tok)) {
        SmtResult r;
        if (tok == "unsat")
          r.verdict = SmtVerdict::Proved;
        else if (tok == "sat")
          r.verdict = SmtVerdict::Refuted;
        else if (tok == "unknown")
          r.verdict = SmtVerdict::Unknown;
        else
          continue;  // not a verdict token
        results[jobs[i].mi][jobs[i].oi] = r;
        done[i] = true;
        ++i;
      }
    }
  }
  std::vector<size_t> rest;
  for (size_t i = 0; i < jobs.size(); ++i)
    if (!done[i]) rest.push_back(i);
  if (!rest.empty()) {
    int nthreads = cfg.jobs > 0
                       ? cfg.jobs
                       : static_cast<int>(std::thread::hardware_concurrency());
    if (nthreads < 1) nthreads = 1;
    if (nthreads > static_cast<int>(rest.size()))
      nthreads = static_cast<int>(rest.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
      while (true) {
        size_t k = next.fetch_add(1);
        if (k >= rest.size()) return;
        size_t i = rest[k];
        results[jobs[i].mi][jobs[i].oi] = run_solver(cfg, jobs[i].script);
      }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return results;
}

std::string resolve_solver_command(const std::string& explicit_cmd) {
  if (!explicit_cmd.empty()) return explicit_cmd;
  if (const char* env = std::getenv("RSLV_SMT_CMD"); env && *env) return env;
  if (const char* path = std::getenv("PATH")) {
    std::string p(path);
    size_t pos = 0;
    while (pos <= p.size()) {
      size_t colon = p.find(':', pos);
      std::string dir =
          p.substr(pos, colon == std::string::npos ? colon : colon - pos);
      if (!dir.empty() &&
          access((dir + "/z3").c_str(), X_OK) == 0)
        return "z3 -in";
      if (colon == std::string::npos) break;
      pos = colon + 1;
    }
  }
#ifdef RSLV_DEFAULT_SHIM
  return RSLV_DEFAULT_SHIM;
#else
  return "node tools/smt/z3smt.js";
#endif
}

}  // namespace rslv
