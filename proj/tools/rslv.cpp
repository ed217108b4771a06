#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rslv/driver.hpp"

using nlohmann::json;

namespace {

int run_verify(const std::string& path, const rslv::DriverOptions& opts,
               bool as_json, bool warn_leaks) {
  rslv::FileReport rep = rslv::verify_file(path, opts);
  if (as_json)
    std::cout << rslv::report_to_json(rep) << "\n";
  else
    std::cout << rslv::report_to_text(rep, warn_leaks);
  if (!rep.front_errors.empty()) return 2;
  return rep.verified() ? 0 : 1;
}

int run_corpus(const std::string& manifest_path, rslv::DriverOptions opts) {
  std::ifstream f(manifest_path);
  if (!f) {
    std::cerr << "cannot open manifest " << manifest_path << "\n";
    return 2;
  }
  json manifest;
  try {
    f >> manifest;
  } catch (const std::exception& e) {
    std::cerr << "bad manifest: " << e.what() << "\n";
    return 2;
  }
  auto base = std::filesystem::path(manifest_path).parent_path();
  int failures = 0;
  for (auto& c : manifest.at("cases")) {
    std::string file = c.at("file").get<std::string>();
    std::string expect = c.at("expect").get<std::string>();
    rslv::DriverOptions o = opts;
    if (c.value("oracle", false)) o.run_oracle = true;
    rslv::FileReport rep = rslv::verify_file((base / file).string(), o);
    std::vector<std::string> problems;
    if (!rep.front_errors.empty() && expect != "rejected")
      problems.push_back("front-end error: " + rep.front_errors[0].message);
    if (expect == "verified" && !rep.verified()) {
      for (auto& m : rep.methods)
        if (!m.verified)
          for (auto& d : m.diagnostics)
            problems.push_back(m.method + ": " + d.message + " (line " +
                               std::to_string(d.span.line) + ")");
      if (problems.empty()) problems.push_back("not verified");
    } else if (expect == "failed" && rep.verified()) {
      problems.push_back("unexpectedly verified");
    } else if (expect == "rejected" && rep.front_errors.empty()) {
      problems.push_back("unexpectedly accepted by the front end");
    }
    if (c.contains("diagnostics")) {
      for (auto& dj : c.at("diagnostics")) {
        std::string method = dj.at("method").get<std::string>();
        std::string kind = dj.at("kind").get<std::string>();
        int line = dj.value("line", 0);
        bool found = false;
        for (auto& m : rep.methods) {
          if (m.method != method) continue;
          for (auto& d : m.diagnostics)
            if (std::string(rslv::ob_kind_str(d.kind)) == kind &&
                (line == 0 || d.span.line == line))
              found = true;
        }
        if (!found)
          problems.push_back("missing diagnostic " + kind + " in " + method +
                             (line ? " at line " + std::to_string(line) : ""));
      }
    }
    if (problems.empty()) {
      std::cout << "PASS " << file << " (" << expect << ")\n";
    } else {
      failures++;
      std::cout << "FAIL " << file << " (expected " << expect << ")\n";
      for (auto& p : problems) std::cout << "     " << p << "\n";
    }
  }
  std::cout << (failures ? "corpus: FAILURES\n" : "corpus: all cases pass\n");
  return failures ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rslv - deductive verifier for resource specifications"};
  app.require_subcommand(1);

  rslv::DriverOptions opts;
  bool as_json = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--smt-cmd", opts.smt_cmd,
                    "solver command (reads SMT-LIB2 on stdin)");
    cmd->add_option("--timeout", opts.timeout_secs,
                    "per-obligation solver timeout in seconds");
    cmd->add_option("--jobs", opts.jobs,
                    "parallel solver processes (0 = all cores)");
  };

  std::string file;
  auto* verify = app.add_subcommand("verify", "verify one source file");
  verify->add_option("file", file, "source file")->required();
  add_common(verify);
  verify->add_flag("--json", as_json, "machine-readable report");
  verify->add_flag("--dump-ir", opts.dump_ir,
                   "print the intermediate representation");
  verify->add_option("--dump-smt", opts.dump_smt_dir,
                     "write each solver script into this directory");
  verify->add_flag("--oracle", opts.run_oracle,
                   "cross-check verified methods by concrete enumeration");
  verify->add_option("--domain-size", opts.domain_size,
                     "oracle: elements per uninterpreted sort");
  verify->add_option("--amount-max", opts.amount_max,
                     "oracle: largest integer input");
  verify->add_flag("--warn-leaks", opts.warn_leaks,
                   "warn when a method ends holding resources");
  std::vector<std::string> mutations;
  verify
      ->add_option("--mutate", mutations,
                   "inject an encoder bug (for testing the test suite): "
                   "drop-exhale-check, drop-havoc, drop-coupling, "
                   "swap-holds-plus-cur, swap-holds-minus-cur")
      ->expected(-1);

  std::string manifest;
  auto* corpus = app.add_subcommand("corpus", "run a corpus manifest");
  corpus->add_option("manifest", manifest, "manifest JSON")->required();
  add_common(corpus);

  CLI11_PARSE(app, argc, argv);

  for (auto& m : mutations) {
    if (m == "drop-exhale-check")
      opts.mut.drop_exhale_check = true;
    else if (m == "drop-havoc")
      opts.mut.drop_havoc = true;
    else if (m == "drop-coupling")
      opts.mut.drop_coupling = true;
    else if (m == "swap-holds-plus-cur")
      opts.mut.swap_holds_plus_cur = true;
    else if (m == "swap-holds-minus-cur")
      opts.mut.swap_holds_minus_cur = true;
    else {
      std::cerr << "unknown mutation '" << m << "'\n";
      return 2;
    }
  }

  if (verify->parsed()) {
    if (opts.dump_ir && !as_json) {
      rslv::DriverOptions probe = opts;
      rslv::FileReport rep = rslv::verify_file(file, probe);
      if (!rep.ir.empty()) std::cout << rep.ir << "\n";
      if (!rep.front_errors.empty()) {
        std::cout << rslv::report_to_text(rep, opts.warn_leaks);
        return 2;
      }
      std::cout << rslv::report_to_text(rep, opts.warn_leaks);
      return rep.verified() ? 0 : 1;
    }
    return run_verify(file, opts, as_json, opts.warn_leaks);
  }
  return run_corpus(manifest, opts);
}
