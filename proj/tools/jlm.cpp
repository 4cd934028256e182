// jlm: derive / verify / corpus / numcheck over problem files.
// Exit codes: 0 all checks pass, 1 some check failed, 2 bad input or usage.

#include <iostream>

#include <CLI11.hpp>

#include "jlm/shell/corpus.hpp"

namespace {

int emit(const jlm::json& report, const std::string& out) {
  if (out.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    jlm::write_json(out, report);
  }
  return 0;
}

int status_code(const std::string& status) { return status == "pass" ? 0 : 1; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Jacobi last multipliers, Lagrangians and Noether integrals for x'' = F(t, x, x')"};
  app.require_subcommand(1);

  std::string file, out, dir = "corpus";
  std::optional<int> degree;
  std::uint64_t seed = jlm::kDefaultSeed;
  bool no_numeric = false;

  auto* derive = app.add_subcommand("derive", "run every route and verification, print the report");
  derive->add_option("file", file, "problem file")->required()->check(CLI::ExistingFile);
  derive->add_option("--out", out, "write the report here instead of stdout");
  derive->add_option("--degree", degree, "Noether ansatz degree")->check(CLI::Range(0, 6));
  derive->add_option("--seed", seed, "seed for randomized zero tests");
  derive->add_flag("--no-numeric", no_numeric, "skip the RK4 drift table");

  auto* verify = app.add_subcommand("verify", "check the expected objects only, no derivation");
  verify->add_option("file", file, "problem file")->required()->check(CLI::ExistingFile);

  auto* corpus = app.add_subcommand("corpus", "derive every problem in a directory");
  corpus->add_option("--dir", dir, "directory of problem files");
  corpus->add_option("--out", out, "directory for reports and summary.json");
  corpus->add_option("--degree", degree, "Noether ansatz degree")->check(CLI::Range(0, 6));

  auto* numcheck = app.add_subcommand("numcheck", "RK4 drift of the expected integrals");
  numcheck->add_option("file", file, "problem file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    jlm::DeriveOptions opt{degree, seed, !no_numeric};
    if (*corpus) {
      auto res = jlm::run_corpus(dir, out.empty() ? std::nullopt : std::optional<std::filesystem::path>(out), opt);
      std::cout << res.summary.dump(2) << "\n";
      return res.exit_code;
    }
    jlm::Problem p = jlm::load_problem(file);
    jlm::json report;
    if (*derive) {
      report = jlm::derive(p, opt);
      emit(report, out);
      return status_code(report["summary"].value("status", "fail"));
    }
    report = *verify ? jlm::verify_goldens(p) : jlm::numcheck(p);
    emit(report, out);
    std::string st = report.value("status", "fail");
    return st == "no scenario" ? 0 : status_code(st);
  } catch (const jlm::SchemaError& e) {
    std::cerr << "jlm: " << file << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "jlm: " << e.what() << "\n";
    return 2;
  }
}
