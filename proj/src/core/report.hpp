#pragma once

#include <cstdint>
#include <string>

#include "core/params.hpp"

namespace bilform {

struct RunOptions {
  uint64_t seed = 0;
  uint32_t jobs = 0;  // 0 = hardware concurrency
  uint64_t budget = 10'000'000;
  uint64_t samples_per_cell = 50;
  bool full = false;
  bool grid = false;
  bool heavy = false;  // include the local-graph nullity check
};

struct RunResult {
  bool pass = false;
  std::string json;  // deterministic (timing only under "elapsed_ms" keys)
  std::string csv;   // optional alternate rendering, empty if none
  std::string text;  // human-readable summary
};

// One entry point per CLI subcommand. All throw on invalid input or
// exceeded budgets; check failures are reported via pass = false.
RunResult run_census(const Params& p, const RunOptions& opt);
RunResult run_classify(const Params& p, const std::string& matrix_literal,
                       const std::string& x_literal, const std::string& y_literal);
RunResult run_cells(const Params& p);
RunResult run_verify_equitable(const Params& p, const RunOptions& opt);
RunResult run_verify_algebra(const Params& p, const RunOptions& opt);
RunResult run_verify_algebra_grid(const RunOptions& opt);
RunResult run_export_modules(const Params& p);
RunResult run_norton(const Params& p);

// Strips volatile keys ("elapsed_ms") so byte-identical reproducibility can
// be checked across runs.
std::string strip_timing(const std::string& json_text);

}  // namespace bilform
