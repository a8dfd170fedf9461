// Command-line front end for the bilform shared library. Subcommands map
// one-to-one onto the C API; exit code 0 means every requested check
// passed, 1 means a certification check failed, 2 means usage or input
// error.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "bilform.h"

namespace {

struct ParamsDeleter {
  void operator()(bf_params* p) const { bf_params_free(p); }
};
struct ReportDeleter {
  void operator()(bf_report* r) const { bf_report_free(r); }
};
using ParamsPtr = std::unique_ptr<bf_params, ParamsDeleter>;
using ReportPtr = std::unique_ptr<bf_report, ReportDeleter>;

int fail_status(bf_status st) {
  std::cerr << "error: " << bf_last_error() << "\n";
  // invalid input and exceeded budgets are usage errors
  return (st == BF_ERR_INVALID || st == BF_ERR_BUDGET) ? 2 : 1;
}

int emit(const ReportPtr& rep, const std::string& format,
         const std::string& out_path) {
  const char* body = nullptr;
  if (format == "json") {
    body = bf_report_json(rep.get());
  } else if (format == "csv") {
    body = bf_report_csv(rep.get());
    if (!body) {
      std::cerr << "error: this command has no CSV rendering\n";
      return 2;
    }
  } else {
    body = bf_report_text(rep.get());
  }
  if (out_path.empty()) {
    std::cout << body;
  } else {
    std::ofstream os(out_path, std::ios::binary);
    if (!os) {
      std::cerr << "error: cannot open " << out_path << "\n";
      return 2;
    }
    os << body;
    std::cerr << (bf_report_pass(rep.get()) ? "PASS" : "FAIL") << " -> "
              << out_path << "\n";
  }
  return bf_report_pass(rep.get()) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact certification toolkit for the bilinear forms graph"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(bf_version()));

  uint32_t q = 0, d = 0, n = 0;
  bf_options opt;
  bf_options_init(&opt);
  std::string format;  // default depends on subcommand
  std::string out_path;

  auto add_params = [&](CLI::App* cmd) {
    cmd->add_option("--q", q, "field order (prime power, != 2)")->required();
    cmd->add_option("--D", d, "diameter D >= 3")->required();
    cmd->add_option("--N", n, "N > 2D")->required();
  };
  auto add_common = [&](CLI::App* cmd, const char* default_format) {
    cmd->add_option("--jobs", opt.jobs, "worker threads (0 = all cores)");
    cmd->add_option("--budget", opt.budget,
                    "vertex budget for full enumeration");
    cmd->add_option("--format", format, "output format: text|json|csv");
    cmd->add_option("--out", out_path, "write the report to a file");
    cmd->parse_complete_callback([&format, default_format] {
      if (format.empty()) format = default_format;
    });
  };

  auto* census = app.add_subcommand("census", "full sphere census |Gamma_i(x)|");
  add_params(census);
  add_common(census, "json");

  std::string matrix_lit, x_lit, y_lit;
  auto* classify =
      app.add_subcommand("classify", "classify a vertex into its partition cell");
  add_params(classify);
  classify->add_option("--matrix", matrix_lit,
                       "matrix literal, e.g. \"0 0 0 1; 0 0 0 0; 0 0 0 0\"")
      ->required();
  classify->add_option("--x", x_lit, "basepoint x (default: zero matrix)");
  classify->add_option("--y", y_lit, "basepoint y (default: E11)");
  add_common(classify, "text");

  auto* cells = app.add_subcommand("cells", "cell-size table of the partition");
  add_params(cells);
  add_common(cells, "csv");

  auto* veq = app.add_subcommand("verify-equitable",
                                 "certify the partition is equitable");
  add_params(veq);
  bool full = false;
  veq->add_flag("--full", full, "enumerate every vertex (budget-capped)");
  veq->add_option("--samples", opt.samples_per_cell, "samples per cell");
  veq->add_option("--seed", opt.seed, "PRNG seed");
  add_common(veq, "json");

  auto* valg = app.add_subcommand(
      "verify-algebra", "certify the exact level structure and decomposition");
  add_params(valg);
  bool grid = false;
  valg->add_flag("--grid", grid, "run the built-in parameter grid instead");
  bool heavy = false;
  valg->add_flag("--heavy", heavy, "include the local-graph nullity check");
  add_common(valg, "json");

  auto* exm = app.add_subcommand("export-modules",
                                 "write the five exact module bases");
  add_params(exm);
  add_common(exm, "json");

  auto* nor = app.add_subcommand("norton", "Norton algebra evidence report");
  add_params(nor);
  add_common(nor, "json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return 0;  // --help / --version
    std::cerr << e.what() << "\n";
    return 2;
  }

  opt.full = full ? 1 : 0;
  opt.heavy = heavy ? 1 : 0;

  ParamsPtr params;
  CLI::App* sub = app.get_subcommands().front();
  const bool needs_params = !(sub == valg && grid);
  if (needs_params) {
    bf_params* raw = nullptr;
    const bf_status st = bf_params_create(q, d, n, &raw);
    if (st != BF_OK) return fail_status(st);
    params.reset(raw);
  }

  bf_report* raw_rep = nullptr;
  bf_status st = BF_OK;
  if (sub == census) {
    st = bf_census(params.get(), &opt, &raw_rep);
  } else if (sub == classify) {
    st = bf_classify(params.get(), matrix_lit.c_str(),
                     x_lit.empty() ? nullptr : x_lit.c_str(),
                     y_lit.empty() ? nullptr : y_lit.c_str(), &raw_rep);
  } else if (sub == cells) {
    st = bf_cells(params.get(), &raw_rep);
  } else if (sub == veq) {
    st = bf_verify_equitable(params.get(), &opt, &raw_rep);
  } else if (sub == valg) {
    st = grid ? bf_verify_algebra_grid(&opt, &raw_rep)
              : bf_verify_algebra(params.get(), &opt, &raw_rep);
  } else if (sub == exm) {
    st = bf_export_modules(params.get(), &raw_rep);
  } else if (sub == nor) {
    st = bf_norton(params.get(), &raw_rep);
  }
  if (st != BF_OK) return fail_status(st);
  ReportPtr rep(raw_rep);
  return emit(rep, format, out_path);
}
