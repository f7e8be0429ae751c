// Command-line front end for the ergodicity bounds library.
#include <chrono>
#include <cmath>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ergobound/atomic.hpp"
#include "ergobound/errors.hpp"
#include "ergobound/kendall.hpp"
#include "ergobound/models.hpp"
#include "ergobound/split.hpp"
#include "ergobound/tables.hpp"
#include "ergobound/validation.hpp"
#include "report.hpp"

namespace eb = ergobound;
using eb::cli::Json;
using eb::cli::num;
using eb::cli::Report;

namespace {

struct Output {
  std::string format = "json";
  std::optional<std::string> out;
  bool timing = false;
};

void add_output_flags(CLI::App* cmd, Output& o) {
  cmd->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", o.out, "write to FILE instead of stdout");
  cmd->add_flag("--timing", o.timing, "record wall-clock time (output no longer byte-stable)");
}

Json bound_summary(const eb::kendall::KendallBound& kb) {
  return {{"method", eb::kendall::to_string(kb.method)},
          {"r0", num(kb.r0)},
          {"rho", num(1.0 / kb.r0)},
          {"alpha_star", num(kb.alpha_star)},
          {"capped", kb.capped},
          {"degenerate", kb.degenerate}};
}

Json provenance_json(const std::vector<eb::atomic::ProvenanceEntry>& p) {
  Json a = Json::array();
  for (const auto& e : p) a.push_back({{"component", e.component}, {"source", e.source}});
  return a;
}

Json certificate_json(const eb::atomic::ErgodicityCertificate& c, const std::vector<double>& rs) {
  Json j;
  j["rho_bound"] = num(c.rho_bound);
  j["r0"] = num(c.r0);
  Json bounds = Json::array();
  for (const auto& kb : c.bounds) bounds.push_back(bound_summary(kb));
  j["bounds"] = bounds;
  std::vector<double> pts = rs;
  if (pts.empty()) pts.push_back(0.5 * (1.0 + c.r0));
  Json ev = Json::array();
  for (double r : pts) ev.push_back({{"r", num(r)}, {"k0", num(c.k0(r))}, {"m1", num(c.m1(r))}, {"mv", num(c.mv(r))}});
  j["evaluations"] = ev;
  return j;
}

// ---------------------------------------------------------------- kendall
struct KendallArgs {
  double b = 0, R = 0, L = 0;
  std::optional<double> c1;
  std::vector<double> r;
};

Report run_kendall(const KendallArgs& a) {
  Report rep;
  rep.inputs = {{"command", "kendall"}, {"b", num(a.b)}, {"R", num(a.R)}, {"L", num(a.L)}};
  if (a.c1) rep.inputs["c1"] = num(*a.c1);
  if (!a.r.empty()) {
    rep.inputs["r"] = Json::array();
    for (double r : a.r) rep.inputs["r"].push_back(num(r));
  }
  eb::kendall::KendallInput in{a.b, a.R, a.L, std::nullopt};
  const auto unknown = eb::kendall::bound_unknown_c1(in);
  rep.warn_all(unknown.warnings);
  rep.results["alpha0"] = num(unknown.alpha0);
  rep.results["b_effective"] = num(unknown.b_effective);
  rep.results["unknown_c1"] = bound_summary(unknown);
  double best_r0 = unknown.r0;
  std::optional<eb::kendall::KendallBound> known;
  if (a.c1) {
    in.c1_known = a.c1;
    known = eb::kendall::bound_known_c1(in);
    in.c1_known.reset();
    rep.warn_all(known->warnings);
    rep.results["known_c1"] = bound_summary(*known);
    best_r0 = std::max(best_r0, known->r0);
  }
  const auto simp = eb::kendall::bound_simplified(in);
  rep.results["r1"] = num(simp.r0);
  rep.results["r2"] = num(eb::kendall::r2_baxendale(in));
  if (a.R < 1.05) {
    const auto as = eb::kendall::r0_asymptotic(unknown.b_effective, a.L, a.R);
    rep.results["asymptotic"] = {{"r0", num(as.r0)},
                                 {"regime", as.regime},
                                 {"seam", as.seam},
                                 {"predicate", num(as.predicate)}};
    if (as.seam) rep.warn("asymptotic regime predicate at its seam; both regimes reported");
  }
  rep.results["rho"] = num(1.0 / best_r0);
  Json k0 = Json::array();
  for (double r : a.r) {
    Json e = {{"r", num(r)}, {"unknown_c1", num(unknown.k0(r))}};
    if (known) e["known_c1"] = num(known->k0(r));
    e["simplified_K1"] = num(simp.k0(r));
    k0.push_back(e);
  }
  rep.results["k0"] = k0;
  rep.provenance = Json::array({{{"component", "r0"}, {"source", "minimum over alpha of the renewal radius bound"}},
                                {{"component", "r1"}, {"source", "alpha fixed at alpha0"}},
                                {{"component", "r2"}, {"source", "second-order comparison radius"}}});
  return rep;
}

// ---------------------------------------------------------------- bound
struct BoundArgs {
  double b = 0, lambda = 0, K = 0;
  std::optional<double> bbar, pi_c;
  std::vector<double> r;
};

Json echo_drift(const std::string& kind, const BoundArgs& a) {
  Json j = {{"command", "bound"}, {"kind", kind}, {"b", num(a.b)}};
  if (a.bbar) j["bbar"] = num(*a.bbar);
  j["lambda"] = num(a.lambda);
  j["K"] = num(a.K);
  if (a.pi_c) j["pi_C"] = num(*a.pi_c);
  if (!a.r.empty()) {
    j["r"] = Json::array();
    for (double r : a.r) j["r"].push_back(num(r));
  }
  return j;
}

Json split_details(const eb::split::SplitDriftSpec& s) {
  Json j = Json::object();
  if (s.bbar >= 1.0) return j;
  const auto ex = eb::split::exponents(s);
  j["alpha1"] = num(ex.alpha1);
  j["alpha2"] = ex.alpha2 ? num(*ex.alpha2) : Json(nullptr);
  const auto range = eb::split::alpha_bar_range(s, ex.alpha1, ex.alpha2);
  j["alpha_bar_range"] = {{"lo", num(range.lo)}, {"hi", num(range.hi)}, {"collapsed", range.collapsed}};
  Json parts = Json::array();
  auto add = [&](const eb::split::SplitKendallBound& b) {
    parts.push_back({{"method", eb::kendall::to_string(b.base.method)},
                     {"r0", num(b.base.r0)},
                     {"alpha_bar", num(b.base.alpha_star)},
                     {"x0", num(b.x0)},
                     {"kappa0", num(b.kappa0)},
                     {"r_cap", num(b.r_cap)},
                     {"tangent_regime", b.tangent_regime},
                     {"closed_form", b.closed_form}});
  };
  add(eb::split::split_bound_unknown(s));
  if (s.pi_C) add(eb::split::split_bound_known(s));
  j["split_bounds"] = parts;
  return j;
}

Report run_bound_atomic(const BoundArgs& a) {
  Report rep;
  rep.inputs = echo_drift("atomic", a);
  const eb::atomic::AtomicDriftSpec spec{a.b, a.lambda, a.K, a.pi_c};
  const auto cert = eb::atomic::atomic_certificate(spec);
  rep.warn_all(cert.warnings);
  rep.results = certificate_json(cert, a.r);
  rep.provenance = provenance_json(cert.provenance);
  return rep;
}

Report run_bound_split(const BoundArgs& a) {
  Report rep;
  rep.inputs = echo_drift("split", a);
  if (!a.bbar) throw eb::InvalidInput("split bounds require --bbar");
  const eb::split::SplitDriftSpec spec{a.b, *a.bbar, a.lambda, a.K, a.pi_c};
  const auto cert = eb::split::split_certificate(spec);
  rep.warn_all(cert.warnings);
  rep.results = certificate_json(cert, a.r);
  const auto det = split_details(spec);
  for (const auto& [k, v] : det.items()) rep.results[k] = v;
  rep.provenance = provenance_json(cert.provenance);
  return rep;
}

// ---------------------------------------------------------------- model
struct ModelArgs {
  std::string family;
  double p = 0, eps = 0, d = 0, s = 0, theta = 0, c = 0;
  int nu = 1;
  std::vector<double> r;
};

Report run_model(const ModelArgs& a) {
  Report rep;
  eb::models::ModelSpec spec;
  if (a.family == "reflecting") {
    spec = eb::models::ModelSpec::reflecting_rw(a.p);
    rep.inputs = {{"command", "model"}, {"family", a.family}, {"p", num(a.p)}};
  } else if (a.family == "sticky") {
    spec = eb::models::ModelSpec::sticky_rw(a.p, a.eps);
    rep.inputs = {{"command", "model"}, {"family", a.family}, {"p", num(a.p)}, {"eps", num(a.eps)}};
  } else if (a.family == "mh") {
    spec = eb::models::ModelSpec::mh_normal(a.d, a.s, a.nu);
    rep.inputs = {{"command", "model"}, {"family", a.family}, {"d", num(a.d)}, {"s", num(a.s)}, {"nu", a.nu}};
  } else {
    spec = eb::models::ModelSpec::contracting_normals(a.theta, a.c);
    rep.inputs = {{"command", "model"}, {"family", a.family}, {"theta", num(a.theta)}, {"c", num(a.c)}};
  }
  const auto dp = eb::models::derive(spec);
  rep.warn_all(dp.warnings);
  Json drift;
  eb::atomic::ErgodicityCertificate cert;
  if (dp.is_atomic()) {
    const auto& s = std::get<eb::atomic::AtomicDriftSpec>(dp.drift);
    drift = {{"kind", "atomic"}, {"b", num(s.b)}, {"lambda", num(s.lambda)}, {"K", num(s.K)}};
    cert = eb::atomic::atomic_certificate(s);
  } else {
    const auto& s = std::get<eb::split::SplitDriftSpec>(dp.drift);
    drift = {{"kind", "split"}, {"b", num(s.b)}, {"bbar", num(s.bbar)}, {"lambda", num(s.lambda)}, {"K", num(s.K)}};
    cert = eb::split::split_certificate(s);
  }
  rep.warn_all(cert.warnings);
  rep.results["drift"] = drift;
  rep.results["pi_C_exact"] = dp.pi_C_exact ? num(*dp.pi_C_exact) : Json(nullptr);
  rep.results["rho_optimal"] = dp.rho_optimal ? num(*dp.rho_optimal) : Json(nullptr);
  rep.results["certificate"] = certificate_json(cert, a.r);
  rep.provenance = provenance_json(cert.provenance);
  return rep;
}

// ---------------------------------------------------------------- table
struct TableArgs {
  int id = 1;
  int grid = 21;
};

Json cell_json(const eb::tables::Cell& c) {
  Json j;
  j["model"] = c.model;
  j["param1"] = num(c.param1);
  j["param2"] = c.param2 ? num(*c.param2) : Json(nullptr);
  j["column"] = c.column;
  j["quantity"] = c.quantity;
  j["computed"] = num(c.computed);
  j["printed"] = c.printed_text;
  j["abs_delta"] = num(c.abs_delta);
  j["rel_delta"] = num(c.rel_delta);
  j["tolerance"] = num(c.tolerance);
  j["status"] = c.pass ? "within_tolerance" : "outside_tolerance";
  if (c.closed_form) j["closed_form"] = num(*c.closed_form);
  if (c.grid_best)
    j["grid_best"] = {{"value", num(*c.grid_best)}, {"param1", num(*c.grid_param1)}, {"param2", num(*c.grid_param2)}};
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

std::string table_csv(const eb::tables::TableResult& t) {
  using eb::cli::csv_escape;
  using eb::cli::csv_num;
  std::string out =
      "table,model,param1,param2,column,quantity,computed,printed,abs_delta,rel_delta,tolerance,status,"
      "closed_form,grid_best,grid_param1,grid_param2,note\n";
  for (const auto& c : t.cells) {
    out += std::to_string(t.id) + "," + c.model + "," + csv_num(c.param1) + "," +
           (c.param2 ? csv_num(*c.param2) : "") + "," + c.column + "," + c.quantity + "," + csv_num(c.computed) +
           "," + c.printed_text + "," + csv_num(c.abs_delta) + "," + csv_num(c.rel_delta) + "," +
           csv_num(c.tolerance) + "," + (c.pass ? "within_tolerance" : "outside_tolerance") + "," +
           (c.closed_form ? csv_num(*c.closed_form) : "") + "," + (c.grid_best ? csv_num(*c.grid_best) : "") +
           "," + (c.grid_param1 ? csv_num(*c.grid_param1) : "") + "," +
           (c.grid_param2 ? csv_num(*c.grid_param2) : "") + "," + csv_escape(c.note) + "\n";
  }
  for (const auto& q : t.quoted) {
    out += std::to_string(t.id) + "," + q.model + "," + csv_num(q.param1) + "," +
           (q.param2 ? csv_num(*q.param2) : "") + "," + q.column + "," + q.quantity + ",," + q.printed +
           ",,,,published reference not computed,,,,,\n";
  }
  return out;
}

Report run_table(const TableArgs& a, eb::tables::TableResult& out) {
  Report rep;
  rep.inputs = {{"command", "table"}, {"id", a.id}, {"grid", a.grid}};
  eb::tables::TableOptions opt;
  opt.grid_points = a.grid;
  out = eb::tables::reproduce_table(a.id, opt);
  rep.warn_all(out.warnings);
  rep.results["table"] = a.id;
  Json cells = Json::array();
  int within = 0;
  for (const auto& c : out.cells) {
    cells.push_back(cell_json(c));
    within += c.pass ? 1 : 0;
  }
  rep.results["cells"] = cells;
  rep.results["within_tolerance"] = within;
  rep.results["outside_tolerance"] = static_cast<int>(out.cells.size()) - within;
  Json quoted = Json::array();
  for (const auto& q : out.quoted) {
    quoted.push_back({{"model", q.model},
                      {"param1", num(q.param1)},
                      {"param2", q.param2 ? num(*q.param2) : Json(nullptr)},
                      {"column", q.column},
                      {"quantity", q.quantity},
                      {"printed", q.printed},
                      {"status", "published reference, not computed"}});
  }
  rep.results["quoted"] = quoted;
  for (const auto& c : out.cells)
    if (!c.pass)
      rep.warn("table " + std::to_string(a.id) + " " + c.model + " (" + eb::cli::csv_num(c.param1) +
               (c.param2 ? ", " + eb::cli::csv_num(*c.param2) : "") + ") " + c.column + ": computed " +
               eb::cli::csv_num(c.computed) + " vs printed " + c.printed_text + " outside tolerance");
  rep.provenance = Json::array({{{"component", "printed values"}, {"source", "data/reference_values.csv"}},
                                {{"component", "optimal"}, {"source", "truncated transition-matrix iteration"}}});
  return rep;
}

// ---------------------------------------------------------------- validate
struct ValidateArgs {
  std::uint64_t seed = 7;
  int n_cases = 200;
};

Report run_validate(const ValidateArgs& a, bool& ok) {
  Report rep;
  rep.inputs = {{"command", "validate"}, {"seed", a.seed}, {"n_cases", a.n_cases}};
  const auto vr = eb::validation::run_validation(a.seed, a.n_cases, eb::tables::thread_budget());
  Json props = Json::array();
  for (const auto& p : vr.properties) {
    props.push_back({{"name", p.name},
                     {"checks", p.checks},
                     {"violations", p.violations},
                     {"skipped", p.skipped},
                     {"worst_margin", num(p.worst_margin)},
                     {"failures", p.failures}});
    if (p.skipped > 0)
      rep.warn(p.name + ": " + std::to_string(p.skipped) + " checks skipped (series truncation too short)");
  }
  rep.results["properties"] = props;
  rep.results["passed"] = vr.ok();
  ok = vr.ok();
  return rep;
}

int finish(const Report& rep, const Output& o, const std::optional<std::string>& csv_override = std::nullopt) {
  std::string text;
  if (o.format == "csv") text = csv_override ? *csv_override : rep.to_csv();
  else text = rep.to_json().dump(2) + "\n";
  eb::cli::emit(text, o.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Computable geometric-ergodicity bounds from drift and minorization constants"};
  app.require_subcommand(1);
  Output out;

  KendallArgs ka;
  auto* kendall = app.add_subcommand("kendall", "renewal radius and tail bounds from (b, R, L)");
  kendall->add_option("--b", ka.b, "lower bound on b_1")->required();
  kendall->add_option("--R", ka.R, "radius with b(R) <= L")->required();
  kendall->add_option("--L", ka.L, "bound on b(R)")->required();
  kendall->add_option("--c1", ka.c1, "known mean increment c(1)");
  kendall->add_option("--r", ka.r, "radii at which to evaluate K0")->delimiter(',');
  add_output_flags(kendall, out);

  BoundArgs ba;
  auto* bound = app.add_subcommand("bound", "full certificate from drift constants");
  bound->require_subcommand(1);
  auto* atomic_cmd = bound->add_subcommand("atomic", "C is an atom");
  auto* split_cmd = bound->add_subcommand("split", "C is a small set (split chain)");
  for (auto* c : {atomic_cmd, split_cmd}) {
    c->add_option("--b", ba.b, "b, lower bound on nu(C) (bbar nu(C) for split)")->required();
    c->add_option("--lambda", ba.lambda, "drift rate off C")->required();
    c->add_option("--K", ba.K, "drift bound on C")->required();
    c->add_option("--pi-c", ba.pi_c, "stationary mass of C, if known");
    c->add_option("--r", ba.r, "radii at which to evaluate K0, M1, MV")->delimiter(',');
    add_output_flags(c, out);
  }
  split_cmd->add_option("--bbar", ba.bbar, "minorization constant")->required();

  ModelArgs ma;
  auto* model = app.add_subcommand("model", "derive constants and a certificate for a built-in chain");
  model->add_option("family", ma.family, "reflecting, sticky, mh or contracting")
      ->required()
      ->check(CLI::IsMember({"reflecting", "sticky", "mh", "contracting"}));
  model->add_option("--p", ma.p, "walk: probability of a step towards 0");
  model->add_option("--eps", ma.eps, "sticky walk: P(0,0)");
  model->add_option("--d", ma.d, "MH: C = [-d, d]");
  model->add_option("--s", ma.s, "MH: V(x) = exp(s|x|)");
  model->add_option("--nu", ma.nu, "MH: minorizing measure choice (1 or 2)");
  model->add_option("--theta", ma.theta, "contracting normals: autoregression coefficient");
  model->add_option("--c", ma.c, "contracting normals: C = [-c, c]");
  model->add_option("--r", ma.r, "radii at which to evaluate K0, M1, MV")->delimiter(',');
  add_output_flags(model, out);

  TableArgs ta;
  auto* table = app.add_subcommand("table", "reproduce a published comparison table");
  table->add_option("--id", ta.id, "table number 1..5")->required()->check(CLI::Range(1, 5));
  table->add_option("--grid", ta.grid, "points per axis of the local parameter search (0 disables)")
      ->check(CLI::NonNegativeNumber);
  add_output_flags(table, out);

  ValidateArgs va;
  auto* validate = app.add_subcommand("validate", "run the seeded oracle-vs-bound property suite");
  validate->add_option("--seed", va.seed, "RNG seed");
  validate->add_option("--n-cases", va.n_cases, "number of random cases")->check(CLI::PositiveNumber);
  add_output_flags(validate, out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  auto stamp = [&](Report& r) {
    if (out.timing)
      r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  };
  try {
    if (*kendall) {
      auto rep = run_kendall(ka);
      stamp(rep);
      return finish(rep, out);
    }
    if (*atomic_cmd || *split_cmd) {
      auto rep = *atomic_cmd ? run_bound_atomic(ba) : run_bound_split(ba);
      stamp(rep);
      return finish(rep, out);
    }
    if (*model) {
      auto rep = run_model(ma);
      stamp(rep);
      return finish(rep, out);
    }
    if (*table) {
      eb::tables::TableResult tr;
      auto rep = run_table(ta, tr);
      stamp(rep);
      return finish(rep, out, table_csv(tr));
    }
    if (*validate) {
      bool ok = true;
      auto rep = run_validate(va, ok);
      stamp(rep);
      finish(rep, out);
      return ok ? 0 : 1;
    }
  } catch (const eb::InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
