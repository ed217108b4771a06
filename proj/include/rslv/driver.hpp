#pragma once

#include "rslv/oracle.hpp"
#include "rslv/smt.hpp"
#include "rslv/vcgen.hpp"

namespace rslv {

struct DriverOptions {
  std::string smt_cmd;        // empty = resolve (env, PATH, bundled shim)
  double timeout_secs = 10;   // per obligation
  int jobs = 0;               // 0 = hardware concurrency
  bool dump_ir = false;
  std::string dump_smt_dir;
  bool run_oracle = false;
  int domain_size = 2;
  int amount_max = 3;
  bool warn_leaks = false;
  Mutations mut;  // used by tests only
};

struct MethodReport {
  std::string method;
  Span span;
  bool verified = false;  // every non-warning obligation proved
  int obligations = 0;
  int proved = 0;
  std::vector<Diagnostic> diagnostics;
  bool oracle_ran = false;
  OracleFinding oracle;
  // The prover accepted the method but concrete execution violates an
  // obligation: one of the two is defective.
  bool disagreement = false;
};

struct FileReport {
  std::string file;
  std::vector<FrontError> front_errors;
  std::vector<MethodReport> methods;
  std::string ir;  // filled when dump_ir is set

  bool verified() const {
    if (!front_errors.empty()) return false;
    for (auto& m : methods)
      if (!m.verified || m.disagreement) return false;
    return true;
  }
};

FileReport verify_source(const std::string& file_label,
                         const std::string& source,
                         const DriverOptions& opts);
FileReport verify_file(const std::string& path, const DriverOptions& opts);

std::string report_to_json(const FileReport& r);
std::string report_to_text(const FileReport& r, bool show_warnings);

// Round-trip of the JSON report (used by tests).
FileReport report_from_json(const std::string& json_text);
bool same_report(const FileReport& a, const FileReport& b);

}  // namespace rslv
