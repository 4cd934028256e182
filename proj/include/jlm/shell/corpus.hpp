#pragma once

// Corpus runs: derive every problem in a directory, write one report per
// problem plus a summary. Exit code 0 = all pass, 1 = some failure, 2 = nothing to run.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <string>
#include <vector>

#include "jlm/shell/derive.hpp"

namespace jlm {

struct CorpusResult {
  int exit_code = 2;
  json summary;
  std::vector<json> reports;  // in file-name order
};

inline std::vector<std::filesystem::path> problem_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  if (!std::filesystem::is_directory(dir)) return out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline json derive_file(const std::filesystem::path& path, const DeriveOptions& opt) {
  try {
    return derive(load_problem(path.string()), opt);
  } catch (const std::exception& e) {
    return {{"name", path.stem().string()},
            {"summary", {{"status", "fail"}, {"failures", {std::string("cannot load problem: ") + e.what()}}}}};
  }
}

inline void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

inline CorpusResult run_corpus(const std::filesystem::path& dir, const std::optional<std::filesystem::path>& out_dir = {},
                               const DeriveOptions& opt = {}) {
  CorpusResult res;
  auto files = problem_files(dir);
  if (files.empty()) {
    res.summary = {{"status", "empty"}, {"detail", "no problem files in " + dir.string()}};
    return res;
  }
  std::vector<std::future<json>> jobs;
  for (const auto& f : files) jobs.push_back(std::async(std::launch::async, derive_file, f, opt));
  json entries = json::array(), failing = json::array();
  for (std::size_t i = 0; i < files.size(); ++i) {
    json r = jobs[i].get();
    const json& s = r["summary"];
    bool pass = s.value("status", "fail") == "pass";
    json entry = {{"file", files[i].filename().string()}, {"name", r.value("name", "")}, {"status", pass ? "pass" : "fail"}};
    if (s.contains("findings")) entry["findings"] = s["findings"];
    if (!pass) {
      entry["failures"] = s.value("failures", json::array());
      failing.push_back(files[i].filename().string());
    }
    entries.push_back(entry);
    if (out_dir) {
      std::filesystem::create_directories(*out_dir);
      write_json(*out_dir / (files[i].stem().string() + ".report.json"), r);
    }
    res.reports.push_back(std::move(r));
  }
  res.exit_code = failing.empty() ? 0 : 1;
  res.summary = {{"problems", files.size()}, {"entries", entries}, {"failing", failing},
                 {"status", failing.empty() ? "pass" : "fail"}};
  if (out_dir) write_json(*out_dir / "summary.json", res.summary);
  return res;
}

}  // namespace jlm
