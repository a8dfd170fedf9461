#include "core/report.hpp"

#include <json.hpp>

#include <chrono>
#include <functional>
#include <sstream>

#include "core/exact.hpp"
#include "core/gf.hpp"
#include "core/graph.hpp"
#include "core/localspec.hpp"
#include "core/norton.hpp"
#include "core/partition.hpp"
#include "core/quotient.hpp"

namespace bilform {

namespace {

using json = nlohmann::ordered_json;

json params_json(const Params& p) {
  return json{{"q", p.q}, {"D", p.d}, {"N", p.n},
              {"n_vertices", p.n_vertices.get_str()}};
}

json mpzs(const mpz_class& v) { return v.get_str(); }

json rat_pair(const mpq_class& v) {
  return json::array({v.get_num().get_str(), v.get_den().get_str()});
}

json matrix_json(const QuotientMatrix& m) {
  json rows = json::array();
  for (int a = 0; a < m.order; ++a) {
    json row = json::array();
    for (int b = 0; b < m.order; ++b) row.push_back(m.at(a, b).get_str());
    rows.push_back(std::move(row));
  }
  return rows;
}

double elapsed_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

json equitability_json(const Params& p, const EquitabilityReport& rep) {
  const CellTable table(p);
  json j;
  j["command"] = "verify-equitable";
  j["params"] = params_json(p);
  j["mode"] = rep.mode == EquitabilityReport::Mode::Full ? "full" : "sampled";
  j["pass"] = rep.pass;
  if (rep.mode == EquitabilityReport::Mode::Sampled) {
    j["samples_per_cell"] = rep.samples_per_cell;
    j["seed"] = rep.seed;
  }
  if (!rep.warning.empty()) j["warning"] = rep.warning;
  json cells = json::array();
  for (int c = 0; c < table.order(); ++c) {
    json cj;
    cj["label"] = table.labels[c];
    cj["size"] = mpzs(cell_size(p, table.cells[c]));
    if (!rep.cell_census.empty()) cj["observed"] = mpzs(rep.cell_census[c]);
    bool ok = true;
    if (!rep.cell_census.empty())
      ok = rep.cell_census[c] == cell_size(p, table.cells[c]);
    for (const Discrepancy& d : rep.discrepancies)
      if (d.source == table.labels[c]) ok = false;
    cj["status"] = ok ? "pass" : "fail";
    cells.push_back(std::move(cj));
  }
  j["cells"] = std::move(cells);
  j["cell_labels"] = table.labels;
  j["quotient_formula"] = matrix_json(rep.formula);
  j["quotient_observed"] = rep.observed ? matrix_json(*rep.observed) : json();
  json ds = json::array();
  for (const Discrepancy& d : rep.discrepancies) {
    ds.push_back(json{{"source", d.source},
                      {"target", d.target},
                      {"expected", d.expected},
                      {"observed", d.observed},
                      {"vertex", d.vertex}});
  }
  j["discrepancies"] = std::move(ds);
  j["elapsed_ms"] = rep.elapsed_ms;
  return j;
}

json checks_json(const std::vector<Check>& checks) {
  json out = json::array();
  for (const Check& c : checks) {
    json cj{{"name", c.name}, {"pass", c.pass}};
    if (!c.detail.empty()) cj["detail"] = c.detail;
    out.push_back(std::move(cj));
  }
  return out;
}

json modules_summary_json(const ModuleDecomposition& dec) {
  json out = json::array();
  for (const WModule& m : dec.modules) {
    json mj{{"name", m.name},
            {"endpoint", m.endpoint},
            {"diameter", m.diameter},
            {"thin", m.thin},
            {"dim", m.basis.size()}};
    mj["local_eigenvalue"] = m.local_eig ? json(m.local_eig->get_str()) : json();
    out.push_back(std::move(mj));
  }
  return out;
}

json spectrum_json(const std::vector<std::pair<mpz_class, int>>& sp) {
  json out = json::array();
  for (const auto& [theta, mult] : sp)
    out.push_back(json::array({theta.get_str(), mult}));
  return out;
}

json norton_json(const NortonReport& nr) {
  json j;
  j["theta1"] = nr.theta1.get_str();
  j["projector_idempotent"] = nr.idempotent;
  j["projector_commutes"] = nr.commutes;
  j["dim_EU"] = nr.dim_eu;
  j["conjectured_rank"] = nr.conjectured_rank;
  j["conjectured_spans"] = nr.conjectured_spans;
  j["closure"] = json{{"dim", nr.closure_dim},
                      {"rounds", nr.closure_rounds},
                      {"generates", nr.closure_generates}};
  j["basis_used"] = nr.basis_used;
  j["basis"] = nr.basis_names;
  json table = json::array();
  for (const auto& row : nr.star_table) {
    json rj = json::array();
    for (const auto& coeffs : row) {
      json cj = json::array();
      for (const mpq_class& c : coeffs) cj.push_back(rat_pair(c));
      rj.push_back(std::move(cj));
    }
    table.push_back(std::move(rj));
  }
  j["star_table"] = std::move(table);
  j["notes"] = nr.notes;
  return j;
}

json algebra_json(const Params& p, const AlgebraCertificate& cert) {
  json j;
  j["command"] = "verify-algebra";
  j["params"] = params_json(p);
  j["pass"] = cert.pass;
  j["checks"] = checks_json(cert.checks);
  j["findings"] = cert.findings;
  json dims = json::array();
  for (const WModule& m : cert.decomposition.modules) dims.push_back(m.basis.size());
  j["module_dims"] = std::move(dims);
  j["modules"] = modules_summary_json(cert.decomposition);
  j["spectrum"] = spectrum_json(cert.spectrum);
  const Spectrum sp = eigenvalues(p);
  json local = json::array();
  for (int i = 0; i < 5; ++i)
    local.push_back(json::array(
        {sp.local_eig[i].get_str(), sp.local_mult[i].get_str()}));
  j["local_spectrum"] = std::move(local);
  json ynz = json::array();
  for (const auto& comp : cert.yhat_components) {
    bool nonzero = false;
    for (const mpq_class& v : comp) nonzero = nonzero || v != 0;
    ynz.push_back(nonzero);
  }
  j["yhat_components_nonzero"] = std::move(ynz);
  return j;
}

}  // namespace

RunResult run_census(const Params& p, const RunOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  const Field f(p.q);
  const GfMat x = standard_x(p);
  const auto observed = sphere_census(p, f, x, opt.budget, opt.jobs);
  const IntersectionNumbers in = intersection_numbers(p);

  bool pass = true;
  mpz_class total = 0;
  for (size_t i = 0; i < observed.size(); ++i) {
    total += observed[i];
    if (observed[i] != in.k_i[i]) pass = false;
  }
  if (total != p.n_vertices) pass = false;

  json j;
  j["command"] = "census";
  j["params"] = params_json(p);
  json ki = json::array(), kif = json::array();
  for (size_t i = 0; i < observed.size(); ++i) {
    ki.push_back(observed[i].get_str());
    kif.push_back(in.k_i[i].get_str());
  }
  j["k_i"] = std::move(ki);
  j["k_i_formula"] = std::move(kif);
  j["total"] = total.get_str();
  j["pass"] = pass;
  j["elapsed_ms"] = elapsed_since(t0);

  RunResult out;
  out.pass = pass;
  out.json = j.dump(2) + "\n";
  std::ostringstream ts;
  ts << "census " << (pass ? "PASS" : "FAIL") << ": k_i =";
  for (const auto& v : observed) ts << ' ' << v.get_str();
  ts << " (total " << total.get_str() << ")\n";
  out.text = ts.str();
  return out;
}

RunResult run_classify(const Params& p, const std::string& matrix_literal,
                       const std::string& x_literal,
                       const std::string& y_literal) {
  const Field f(p.q);
  GfMat z = parse_matrix(matrix_literal, p);
  bool normalized = false;
  if (!x_literal.empty() || !y_literal.empty()) {
    if (x_literal.empty() || y_literal.empty())
      throw invalid_argument_error("--x and --y must be given together");
    const GfMat x = parse_matrix(x_literal, p);
    const GfMat y = parse_matrix(y_literal, p);
    const PairNormalizer nz = normalize_pair(f, x, y);
    z = nz.apply(f, x, z);
    normalized = true;
  }
  const RankProfile pr = rank_profile(f, z);
  const CellId cell = classify_profile(p, pr);

  static const char* fam_names[] = {"lower", "A", "B", "C", "D", "upper"};
  json j;
  j["command"] = "classify";
  j["params"] = params_json(p);
  j["matrix"] = format_matrix(z);
  j["normalized"] = normalized;
  j["cell"] = json{{"family", fam_names[static_cast<int>(cell.family)]},
                   {"i", cell.i},
                   {"label", cell_label(cell)},
                   {"short", cell_short(cell)}};
  j["rank_profile"] = json::array({pr.r, pr.ry, pr.rc, pr.rr, pr.rb});

  RunResult out;
  out.pass = true;
  out.json = j.dump(2) + "\n";
  std::ostringstream ts;
  ts << cell_short(cell) << "  [" << cell_label(cell) << "]\n"
     << "rank profile: (" << pr.r << ", " << pr.ry << ", " << pr.rc << ", "
     << pr.rr << ", " << pr.rb << ")\n";
  out.text = ts.str();
  return out;
}

RunResult run_cells(const Params& p) {
  const CellTable table(p);
  mpz_class total = 0;
  json cells = json::array();
  for (const CellId& c : table.cells) {
    const mpz_class sz = cell_size(p, c);
    total += sz;
    cells.push_back(json{{"label", cell_label(c)},
                         {"dist_x", cell_dist_x(c)},
                         {"dist_y", cell_dist_y(c)},
                         {"size", sz.get_str()}});
  }
  const bool pass = total == p.n_vertices;
  json j;
  j["command"] = "cells";
  j["params"] = params_json(p);
  j["cells"] = std::move(cells);
  j["total"] = total.get_str();
  j["pass"] = pass;

  RunResult out;
  out.pass = pass;
  out.json = j.dump(2) + "\n";
  out.csv = cells_csv(p);
  out.text = out.csv;
  return out;
}

RunResult run_verify_equitable(const Params& p, const RunOptions& opt) {
  const Field f(p.q);
  EquitabilityReport rep;
  if (opt.full) {
    const QuotientMatrix expected = quotient_formula(p);
    rep = quotient_bruteforce(p, f, expected, opt.budget, opt.jobs);
    // the same pass yields the cell census; check it against the closed forms
    const CellTable table(p);
    for (int c = 0; c < table.order(); ++c) {
      if (rep.cell_census[c] != cell_size(p, table.cells[c])) {
        rep.pass = false;
        Discrepancy d;
        d.source = table.labels[c];
        d.target = table.labels[c];
        d.expected = cell_size(p, table.cells[c]).get_str();
        d.observed = rep.cell_census[c].get_str();
        rep.discrepancies.push_back(std::move(d));
      }
    }
  } else {
    rep = quotient_sampled(p, f, opt.samples_per_cell, opt.seed, opt.budget, opt.jobs);
  }

  RunResult out;
  out.pass = rep.pass;
  out.json = equitability_json(p, rep).dump(2) + "\n";
  out.csv = quotient_csv(p, rep.formula);
  std::ostringstream ts;
  ts << "verify-equitable (" << (opt.full ? "full" : "sampled") << ") "
     << (rep.pass ? "PASS" : "FAIL");
  if (!rep.discrepancies.empty())
    ts << ", " << rep.discrepancies.size() << " discrepancies";
  ts << "\n";
  out.text = ts.str();
  return out;
}

RunResult run_verify_algebra(const Params& p, const RunOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  AlgebraCertificate cert = verify_algebra(p);
  NortonReport nr = norton_explore(p);

  bool pass = cert.pass && nr.idempotent && nr.commutes;
  json j = algebra_json(p, cert);
  j["norton"] = norton_json(nr);
  if (opt.heavy) {
    const Field f(p.q);
    const LocalSpectrumCheck lc = local_spectrum_nullity(p, f, opt.budget, opt.jobs);
    json lj;
    lj["pass"] = lc.pass;
    json rows = json::array();
    for (size_t i = 0; i < lc.eigenvalue.size(); ++i)
      rows.push_back(json{{"eigenvalue", lc.eigenvalue[i].get_str()},
                          {"claimed", lc.claimed[i].get_str()},
                          {"nullity", lc.nullity[i]}});
    lj["rows"] = std::move(rows);
    lj["elapsed_ms"] = lc.elapsed_ms;
    j["local_nullity"] = std::move(lj);
    pass = pass && lc.pass;
  }
  j["pass"] = pass;
  j["elapsed_ms"] = elapsed_since(t0);

  RunResult out;
  out.pass = pass;
  out.json = j.dump(2) + "\n";
  std::ostringstream ts;
  ts << "verify-algebra " << (pass ? "PASS" : "FAIL") << " ("
     << cert.checks.size() << " checks";
  if (!cert.findings.empty()) ts << ", " << cert.findings.size() << " findings";
  ts << ")\n";
  out.text = ts.str();
  return out;
}

RunResult run_verify_algebra_grid(const RunOptions&) {
  const auto t0 = std::chrono::steady_clock::now();
  json points = json::array();
  bool pass = true;
  for (uint32_t q : {3u, 4u, 5u, 7u, 9u}) {
    for (uint32_t d : {3u, 4u, 5u}) {
      for (uint32_t n : {2 * d + 1, 2 * d + 2, 2 * d + 3}) {
        const Params p = Params::validate(q, d, n);
        AlgebraCertificate cert = verify_algebra(p);
        pass = pass && cert.pass;
        json pj;
        pj["params"] = params_json(p);
        pj["pass"] = cert.pass;
        pj["findings"] = cert.findings;
        json dims = json::array();
        for (const WModule& m : cert.decomposition.modules)
          dims.push_back(m.basis.size());
        pj["module_dims"] = std::move(dims);
        pj["spectrum"] = spectrum_json(cert.spectrum);
        points.push_back(std::move(pj));
      }
    }
  }
  const size_t n_points = points.size();
  json j;
  j["command"] = "verify-algebra";
  j["mode"] = "grid";
  j["pass"] = pass;
  j["points"] = std::move(points);
  j["elapsed_ms"] = elapsed_since(t0);

  RunResult out;
  out.pass = pass;
  out.json = j.dump(2) + "\n";
  std::ostringstream ts;
  ts << "verify-algebra grid (" << n_points << " instances) "
     << (pass ? "PASS" : "FAIL") << "\n";
  out.text = ts.str();
  return out;
}

RunResult run_export_modules(const Params& p) {
  std::vector<Check> checks;
  GradedOperator g = build_graded_operator(p, &checks);
  ModuleDecomposition dec = decompose(p, g, checks);
  bool pass = true;
  for (const Check& c : checks) pass = pass && c.pass;

  json j;
  j["command"] = "export-modules";
  j["params"] = params_json(p);
  j["basis_order"] = dec.basis_labels;
  json mods = json::array();
  for (const WModule& m : dec.modules) {
    json mj;
    mj["name"] = m.name;
    mj["endpoint"] = m.endpoint;
    mj["diameter"] = m.diameter;
    mj["thin"] = m.thin;
    mj["local_eigenvalue"] = m.local_eig ? json(m.local_eig->get_str()) : json();
    json vecs = json::array();
    for (const ModuleVec& v : m.basis) {
      json coords = json::array();
      for (const mpq_class& c : v.coords) coords.push_back(rat_pair(c));
      vecs.push_back(json{{"level", v.level},
                          {"tag", wtag_name(v.tag)},
                          {"coords", std::move(coords)}});
    }
    mj["vectors"] = std::move(vecs);
    mods.push_back(std::move(mj));
  }
  j["modules"] = std::move(mods);
  j["pass"] = pass;

  RunResult out;
  out.pass = pass;
  out.json = j.dump(2) + "\n";
  std::ostringstream ts;
  ts << "export-modules " << (pass ? "PASS" : "FAIL") << ": dims";
  for (const WModule& m : dec.modules) ts << ' ' << m.basis.size();
  ts << "\n";
  out.text = ts.str();
  return out;
}

RunResult run_norton(const Params& p) {
  const auto t0 = std::chrono::steady_clock::now();
  NortonReport nr = norton_explore(p);
  const bool pass = nr.idempotent && nr.commutes;

  json j;
  j["command"] = "norton";
  j["params"] = params_json(p);
  j["pass"] = pass;
  j["norton"] = norton_json(nr);
  j["elapsed_ms"] = elapsed_since(t0);

  RunResult out;
  out.pass = pass;
  out.json = j.dump(2) + "\n";
  std::ostringstream ts;
  ts << "norton " << (pass ? "PASS" : "FAIL") << ": dim EU = " << nr.dim_eu
     << ", conjectured rank = " << nr.conjectured_rank << "\n";
  for (const std::string& note : nr.notes) ts << "  " << note << "\n";
  out.text = ts.str();
  return out;
}

std::string strip_timing(const std::string& json_text) {
  json j = json::parse(json_text);
  std::function<void(json&)> scrub = [&](json& node) {
    if (node.is_object()) {
      node.erase("elapsed_ms");
      for (auto& [key, value] : node.items()) scrub(value);
    } else if (node.is_array()) {
      for (auto& value : node) scrub(value);
    }
  };
  scrub(j);
  return j.dump(2) + "\n";
}

}  // namespace bilform
