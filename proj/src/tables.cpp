#include "ergobound/tables.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "ergobound/atomic.hpp"
#include "ergobound/errors.hpp"
#include "ergobound/kendall.hpp"
#include "ergobound/models.hpp"
#include "ergobound/split.hpp"

namespace ergobound::tables {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) out.push_back(f);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void add_warnings(std::vector<std::string>& dst, const std::vector<std::string>& src) {
  for (const auto& w : src)
    if (std::find(dst.begin(), dst.end(), w) == dst.end()) dst.push_back(w);
}

struct CellOutput {
  double value;
  std::vector<std::string> warnings;
};

// Rate bound for an atomic chain from one renewal method.
CellOutput atomic_rho(const atomic::AtomicDriftSpec& spec, bool known) {
  auto in = atomic::kendall_input(spec);
  kendall::KendallBound kb;
  if (known) {
    in.c1_known = 1.0 / *spec.pi_C;
    kb = kendall::bound_known_c1(in);
  } else {
    kb = kendall::bound_unknown_c1(in);
  }
  return {1.0 / kb.r0, kb.warnings};
}

CellOutput split_one_minus_rho(const split::SplitDriftSpec& spec, bool known) {
  const auto sb = known ? split::split_bound_known(spec) : split::split_bound_unknown(spec);
  return {1.0 - 1.0 / sb.base.r0, sb.base.warnings};
}

models::DerivedParams derive_for(const std::string& model, double p1, double p2) {
  if (model == "reflecting_rw") return models::derive_reflecting_rw(p1);
  if (model == "sticky_rw") return models::derive_sticky_rw(p1, p2);
  if (model == "mh_normal_nu1") return models::derive_mh_normal(p1, p2, 1);
  if (model == "mh_normal_nu2") return models::derive_mh_normal(p1, p2, 2);
  if (model == "contracting_normals") return models::derive_contracting_normals(p1, p2);
  throw InvalidInput("unknown model in reference data: " + model);
}

models::ModelSpec walk_spec(const std::string& model, double p1, double p2) {
  if (model == "reflecting_rw") return models::ModelSpec::reflecting_rw(p1);
  return models::ModelSpec::sticky_rw(p1, p2);
}

CellOutput evaluate(const std::string& model, const std::string& column, double p1, double p2) {
  const auto dp = derive_for(model, p1, p2);
  const bool known = column == "renewal_known_pi";
  CellOutput out;
  if (dp.is_atomic()) out = atomic_rho(std::get<atomic::AtomicDriftSpec>(dp.drift), known);
  else out = split_one_minus_rho(std::get<split::SplitDriftSpec>(dp.drift), known);
  add_warnings(out.warnings, dp.warnings);
  return out;
}

void finish_cell(Cell& c) {
  if (c.printed) {
    c.abs_delta = c.computed - *c.printed;
    c.rel_delta = *c.printed != 0.0 ? c.abs_delta / *c.printed : 0.0;
  }
}

Cell compute_cell(const ReferenceValue& ref, const TableOptions& opt, std::vector<std::string>& warnings) {
  Cell c;
  c.table = ref.table;
  c.model = ref.model;
  c.param1 = ref.param1;
  c.param2 = ref.param2;
  c.column = ref.column;
  c.quantity = ref.quantity;
  c.printed = ref.value;
  c.printed_text = ref.printed;
  const double p2 = ref.param2.value_or(0.0);

  if (ref.column == "optimal") {
    const auto dp = derive_for(ref.model, ref.param1, p2);
    c.closed_form = *dp.rho_optimal;
    const auto oracle = models::rw_matrix_oracle(walk_spec(ref.model, ref.param1, p2), opt.oracle_states,
                                                 opt.oracle_steps);
    c.computed = oracle.fitted_rate;
    c.tolerance = 2e-3;
    c.pass = std::abs(c.computed - *c.closed_form) <= c.tolerance;
    c.note = "matrix-oracle fitted rate compared with the closed form " + fmt(*c.closed_form);
    if (std::abs(ref.value - *c.closed_form) > 5e-4)
      c.note += "; printed value disagrees with the closed form";
    finish_cell(c);
    return c;
  }

  const auto out = evaluate(ref.model, ref.column, ref.param1, p2);
  add_warnings(warnings, out.warnings);
  c.computed = out.value;
  finish_cell(c);
  if (ref.quantity == "rho") {
    c.tolerance = 5e-4;
  } else {
    c.tolerance = std::max(0.1 * std::abs(ref.value), printed_half_unit(ref.printed));
  }
  c.pass = std::abs(c.abs_delta) <= c.tolerance;
  if (!c.pass) c.note = "outside tolerance";

  if (ref.quantity == "one_minus_rho" && opt.grid_points > 0) {
    const int n = std::max(2, opt.grid_points);
    double best = -1.0, b1 = 0.0, b2 = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double q1 = ref.param1 * (1.0 - opt.grid_span + 2.0 * opt.grid_span * i / (n - 1));
        const double q2 = p2 * (1.0 - opt.grid_span + 2.0 * opt.grid_span * j / (n - 1));
        try {
          const double v = evaluate(ref.model, ref.column, q1, q2).value;
          if (v > best) {
            best = v;
            b1 = q1;
            b2 = q2;
          }
        } catch (const Error&) {
          // Grid points where the drift condition fails are skipped.
        }
      }
    }
    if (best >= 0.0) {
      c.grid_best = best;
      c.grid_param1 = b1;
      c.grid_param2 = b2;
    }
  }
  return c;
}

}  // namespace

std::vector<ReferenceValue> reference_values() {
  std::vector<ReferenceValue> out;
  std::stringstream ss{std::string(reference_csv())};
  std::string line;
  bool header = true;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    const auto f = split_fields(line);
    if (f.size() != 8) throw InvalidInput("malformed reference row: " + line);
    ReferenceValue r;
    r.table = std::stoi(f[0]);
    r.model = f[1];
    r.param1 = std::stod(f[2]);
    if (!f[3].empty()) r.param2 = std::stod(f[3]);
    r.column = f[4];
    r.quantity = f[5];
    r.printed = f[6];
    r.value = std::stod(f[6]);
    r.computed = f[7] == "1";
    out.push_back(std::move(r));
  }
  return out;
}

double printed_half_unit(const std::string& printed) {
  const auto dot = printed.find('.');
  if (dot == std::string::npos) return 0.5;
  const int decimals = static_cast<int>(printed.size() - dot - 1);
  return 0.5 * std::pow(10.0, -decimals);
}

int thread_budget() {
  if (const char* env = std::getenv("ERGOBOUND_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<int>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& task) {
  const std::size_t workers = std::min<std::size_t>(n, std::max(1, threads));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          task(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

TableResult reproduce_table(int id, const TableOptions& opt) {
  if (id < 1 || id > 5) throw InvalidInput("table id must be 1..5");
  TableResult res;
  res.id = id;
  std::vector<ReferenceValue> todo;
  for (auto& r : reference_values()) {
    if (r.table != id) continue;
    if (r.computed) todo.push_back(r);
    else res.quoted.push_back(r);
  }
  res.cells.resize(todo.size());
  std::vector<std::vector<std::string>> warn(todo.size());
  const int threads = opt.threads > 0 ? opt.threads : thread_budget();
  parallel_for(todo.size(), threads, [&](std::size_t i) { res.cells[i] = compute_cell(todo[i], opt, warn[i]); });
  for (const auto& w : warn) add_warnings(res.warnings, w);
  return res;
}

}  // namespace ergobound::tables
