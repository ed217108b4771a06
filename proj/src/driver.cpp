#include "rslv/driver.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rslv/parser.hpp"
#include "rslv/typecheck.hpp"

namespace rslv {

using json = nlohmann::json;

FileReport verify_source(const std::string& file_label,
                         const std::string& source,
                         const DriverOptions& opts) {
  FileReport rep;
  rep.file = file_label;

  auto parsed = front::parse_text(source);
  if (!parsed.ok()) {
    rep.front_errors = parsed.errors;
    return rep;
  }
  auto checked = front::typecheck(parsed.program);
  if (!checked.ok()) {
    rep.front_errors = checked.errors;
    return rep;
  }
  auto encoded = encode(parsed.program, opts.mut);
  if (!encoded.ok()) {
    rep.front_errors = encoded.errors;
    return rep;
  }
  auto violations = core::wellformed(encoded.program);
  for (auto& v : violations) rep.front_errors.push_back({v, {}});
  if (!rep.front_errors.empty()) return rep;
  if (opts.dump_ir) rep.ir = core::pretty_print(encoded.program);

  VcOptions vopts;
  vopts.check_leaks = opts.warn_leaks;
  vopts.mut = opts.mut;
  auto vcs = vcgen(encoded.program, vopts);

  SolverConfig cfg;
  cfg.command = resolve_solver_command(opts.smt_cmd);
  cfg.timeout_secs = opts.timeout_secs;
  cfg.jobs = opts.jobs;
  cfg.dump_dir = opts.dump_smt_dir;
  auto results = check_all(encoded.program, vcs, cfg);

  for (size_t mi = 0; mi < vcs.size(); ++mi) {
    MethodReport mr;
    mr.method = vcs[mi].method;
    mr.span = vcs[mi].span;
    mr.verified = true;
    for (size_t oi = 0; oi < vcs[mi].obligations.size(); ++oi) {
      const Obligation& ob = vcs[mi].obligations[oi];
      const SmtResult& res = results[mi][oi];
      mr.obligations++;
      if (res.verdict == SmtVerdict::Proved) {
        mr.proved++;
        continue;
      }
      Diagnostic d;
      d.kind = ob.kind;
      d.span = ob.span;
      d.note = ob.note;
      d.warning = ob.warning;
      switch (res.verdict) {
        case SmtVerdict::Refuted:
          d.message = std::string(ob_kind_str(ob.kind)) +
                      (ob.note.empty() ? "" : ": " + ob.note);
          break;
        case SmtVerdict::Unknown:
          d.message = std::string("not decided (") + res.detail + "): " +
                      ob_kind_str(ob.kind);
          break;
        default:
          d.message = "solver error: " + res.detail;
          break;
      }
      if (!ob.warning) mr.verified = false;
      mr.diagnostics.push_back(std::move(d));
    }
    rep.methods.push_back(std::move(mr));
  }

  if (opts.run_oracle) {
    OracleOptions oopts;
    oopts.domain_size = opts.domain_size;
    oopts.amount_max = opts.amount_max;
    // The oracle must be an independent check, so it always executes the
    // clean encoding, even when the symbolic side runs with an injected
    // encoder bug.  Any mutation that makes an unsound method verify then
    // shows up as a disagreement.
    const core::CProgram* ref = &encoded.program;
    EncodeResult clean;
    if (opts.mut.drop_exhale_check || opts.mut.drop_havoc ||
        opts.mut.drop_coupling || opts.mut.swap_holds_plus_cur ||
        opts.mut.swap_holds_minus_cur) {
      clean = encode(parsed.program, Mutations{});
      if (clean.ok()) ref = &clean.program;
    }
    for (size_t mi = 0; mi < ref->methods.size(); ++mi) {
      MethodReport& mr = rep.methods[mi];
      mr.oracle_ran = true;
      mr.oracle = oracle_check_method(*ref, ref->methods[mi], oopts);
      mr.disagreement = mr.verified &&
                        mr.oracle.verdict == OracleVerdict::Violation;
    }
  }
  return rep;
}

FileReport verify_file(const std::string& path, const DriverOptions& opts) {
  std::ifstream f(path);
  if (!f) {
    FileReport rep;
    rep.file = path;
    rep.front_errors.push_back({"cannot open file", {}});
    return rep;
  }
  std::stringstream ss;
  ss << f.rdbuf();
  return verify_source(path, ss.str(), opts);
}

// ---------------------------------------------------------------------------
// JSON report (schema: docs/report-schema.md)

namespace {

json span_json(const Span& s) { return json{{"line", s.line}, {"col", s.col}}; }

Span span_from(const json& j) {
  return {j.at("line").get<int>(), j.at("col").get<int>()};
}

}  // namespace

std::string report_to_json(const FileReport& r) {
  json j;
  j["file"] = r.file;
  j["verified"] = r.verified();
  j["errors"] = json::array();
  for (auto& e : r.front_errors)
    j["errors"].push_back({{"message", e.message}, {"span", span_json(e.span)}});
  j["methods"] = json::array();
  for (auto& m : r.methods) {
    json mj;
    mj["name"] = m.method;
    mj["span"] = span_json(m.span);
    mj["verified"] = m.verified;
    mj["obligations"] = m.obligations;
    mj["proved"] = m.proved;
    mj["diagnostics"] = json::array();
    for (auto& d : m.diagnostics) {
      mj["diagnostics"].push_back({{"kind", ob_kind_str(d.kind)},
                                   {"message", d.message},
                                   {"span", span_json(d.span)},
                                   {"note", d.note},
                                   {"warning", d.warning}});
    }
    if (m.oracle_ran) {
      json oj;
      switch (m.oracle.verdict) {
        case OracleVerdict::NoViolation:
          oj["verdict"] = "no-violation";
          break;
        case OracleVerdict::Violation:
          oj["verdict"] = "violation";
          oj["kind"] = ob_kind_str(m.oracle.kind);
          oj["span"] = span_json(m.oracle.span);
          oj["note"] = m.oracle.note;
          oj["witness"] = m.oracle.witness;
          break;
        case OracleVerdict::Incomplete:
          oj["verdict"] = "incomplete";
          oj["reason"] = m.oracle.reason;
          break;
      }
      mj["oracle"] = oj;
      mj["disagreement"] = m.disagreement;
    }
    j["methods"].push_back(std::move(mj));
  }
  return j.dump(2);
}

FileReport report_from_json(const std::string& text) {
  json j = json::parse(text);
  FileReport r;
  r.file = j.at("file").get<std::string>();
  for (auto& e : j.at("errors"))
    r.front_errors.push_back(
        {e.at("message").get<std::string>(), span_from(e.at("span"))});
  for (auto& mj : j.at("methods")) {
    MethodReport m;
    m.method = mj.at("name").get<std::string>();
    m.span = span_from(mj.at("span"));
    m.verified = mj.at("verified").get<bool>();
    m.obligations = mj.at("obligations").get<int>();
    m.proved = mj.at("proved").get<int>();
    for (auto& dj : mj.at("diagnostics")) {
      Diagnostic d;
      d.kind = *ob_kind_from_str(dj.at("kind").get<std::string>());
      d.message = dj.at("message").get<std::string>();
      d.span = span_from(dj.at("span"));
      d.note = dj.at("note").get<std::string>();
      d.warning = dj.at("warning").get<bool>();
      m.diagnostics.push_back(std::move(d));
    }
    if (mj.contains("oracle")) {
      m.oracle_ran = true;
      auto& oj = mj.at("oracle");
      std::string v = oj.at("verdict").get<std::string>();
      if (v == "no-violation") {
        m.oracle.verdict = OracleVerdict::NoViolation;
      } else if (v == "violation") {
        m.oracle.verdict = OracleVerdict::Violation;
        m.oracle.kind = *ob_kind_from_str(oj.at("kind").get<std::string>());
        m.oracle.span = span_from(oj.at("span"));
        m.oracle.note = oj.at("note").get<std::string>();
        m.oracle.witness = oj.at("witness").get<std::string>();
      } else {
        m.oracle.verdict = OracleVerdict::Incomplete;
        m.oracle.reason = oj.at("reason").get<std::string>();
      }
      m.disagreement = mj.at("disagreement").get<bool>();
    }
    r.methods.push_back(std::move(m));
  }
  return r;
}

bool same_report(const FileReport& a, const FileReport& b) {
  auto same_span = [](const Span& x, const Span& y) {
    return x.line == y.line && x.col == y.col;
  };
  if (a.file != b.file || a.front_errors.size() != b.front_errors.size() ||
      a.methods.size() != b.methods.size())
    return false;
  for (size_t i = 0; i < a.front_errors.size(); ++i)
    if (a.front_errors[i].message != b.front_errors[i].message ||
        !same_span(a.front_errors[i].span, b.front_errors[i].span))
      return false;
  for (size_t i = 0; i < a.methods.size(); ++i) {
    auto& x = a.methods[i];
    auto& y = b.methods[i];
    if (x.method != y.method || !same_span(x.span, y.span) ||
        x.verified != y.verified || x.obligations != y.obligations ||
        x.proved != y.proved || x.oracle_ran != y.oracle_ran ||
        x.disagreement != y.disagreement ||
        x.diagnostics.size() != y.diagnostics.size())
      return false;
    for (size_t k = 0; k < x.diagnostics.size(); ++k) {
      auto& dx = x.diagnostics[k];
      auto& dy = y.diagnostics[k];
      if (dx.kind != dy.kind || dx.message != dy.message ||
          !same_span(dx.span, dy.span) || dx.note != dy.note ||
          dx.warning != dy.warning)
        return false;
    }
    if (x.oracle_ran) {
      auto& ox = x.oracle;
      auto& oy = y.oracle;
      if (ox.verdict != oy.verdict) return false;
      if (ox.verdict == OracleVerdict::Violation &&
          (ox.kind != oy.kind || !same_span(ox.span, oy.span) ||
           ox.note != oy.note || ox.witness != oy.witness))
        return false;
      if (ox.verdict == OracleVerdict::Incomplete && ox.reason != oy.reason)
        return false;
    }
  }
  return true;
}

std::string report_to_text(const FileReport& r, bool show_warnings) {
  std::ostringstream s;
  s << r.file << "\n";
  for (auto& e : r.front_errors) {
    s << "  error";
    if (e.span.valid()) s << " (line " << e.span.line << ")";
    s << ": " << e.message << "\n";
  }
  for (auto& m : r.methods) {
    s << "  " << m.method << ": "
      << (m.verified ? "verified" : "FAILED") << " (" << m.proved << "/"
      << m.obligations << " obligations)\n";
    for (auto& d : m.diagnostics) {
      if (d.warning && !show_warnings) continue;
      s << "    " << (d.warning ? "warning" : "error") << " (line "
        << d.span.line << "): " << d.message << "\n";
    }
    if (m.oracle_ran) {
      switch (m.oracle.verdict) {
        case OracleVerdict::NoViolation:
          s << "    oracle: no violation found\n";
          break;
        case OracleVerdict::Violation:
          s << "    oracle: " << ob_kind_str(m.oracle.kind) << " at line "
            << m.oracle.span.line << " with " << m.oracle.witness << "\n";
          break;
        case OracleVerdict::Incomplete:
          s << "    oracle: incomplete (" << m.oracle.reason << ")\n";
          break;
      }
      if (m.disagreement)
        s << "    DISAGREEMENT: prover accepted, oracle found a violation\n";
    }
  }
  s << (r.verified() ? "VERIFIED" : "NOT VERIFIED") << "\n";
  return s.str();
}

}  // namespace rslv
