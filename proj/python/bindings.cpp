#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ergobound/atomic.hpp"
#include "ergobound/errors.hpp"
#include "ergobound/kendall.hpp"
#include "ergobound/models.hpp"
#include "ergobound/split.hpp"
#include "ergobound/tables.hpp"

namespace py = pybind11;
namespace eb = ergobound;

namespace {

py::dict bound_dict(const eb::kendall::KendallBound& kb, const std::vector<double>& rs) {
  py::dict d;
  d["method"] = eb::kendall::to_string(kb.method);
  d["r0"] = kb.r0;
  d["rho"] = 1.0 / kb.r0;
  d["alpha_star"] = kb.alpha_star;
  d["capped"] = kb.capped;
  d["degenerate"] = kb.degenerate;
  d["warnings"] = kb.warnings;
  std::vector<double> k0;
  for (double r : rs) k0.push_back(kb.k0(r));
  d["k0"] = k0;
  return d;
}

py::dict cert_dict(const eb::atomic::ErgodicityCertificate& c, const std::vector<double>& rs) {
  py::dict d;
  d["rho_bound"] = c.rho_bound;
  d["r0"] = c.r0;
  std::vector<double> k0, m1, mv;
  for (double r : rs) {
    k0.push_back(c.k0(r));
    m1.push_back(c.m1(r));
    mv.push_back(c.mv(r));
  }
  d["r"] = rs;
  d["k0"] = k0;
  d["m1"] = m1;
  d["mv"] = mv;
  d["warnings"] = c.warnings;
  py::list bounds;
  for (const auto& kb : c.bounds) bounds.append(bound_dict(kb, {}));
  d["bounds"] = bounds;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Computable geometric-ergodicity bounds";

  auto base = py::register_exception<eb::Error>(m, "Error");
  py::register_exception<eb::InvalidInput>(m, "InvalidInput", base.ptr());

  m.def("d_alpha", &eb::kendall::d_alpha, py::arg("b"), py::arg("alpha"));

  m.def(
      "kendall_bound",
      [](double b, double R, double L, std::optional<double> c1, std::vector<double> r) {
        eb::kendall::KendallInput in{b, R, L, c1};
        return bound_dict(c1 ? eb::kendall::bound_known_c1(in) : eb::kendall::bound_unknown_c1(in), r);
      },
      py::arg("b"), py::arg("R"), py::arg("L"), py::arg("c1") = py::none(),
      py::arg("r") = std::vector<double>{});

  m.def(
      "atomic_certificate",
      [](double b, double lambda, double K, std::optional<double> pi_c, std::vector<double> r) {
        return cert_dict(eb::atomic::atomic_certificate({b, lambda, K, pi_c}), r);
      },
      py::arg("b"), py::arg("lam"), py::arg("K"), py::arg("pi_c") = py::none(),
      py::arg("r") = std::vector<double>{});

  m.def(
      "split_certificate",
      [](double b, double bbar, double lambda, double K, std::optional<double> pi_c, std::vector<double> r) {
        return cert_dict(eb::split::split_certificate({b, bbar, lambda, K, pi_c}), r);
      },
      py::arg("b"), py::arg("bbar"), py::arg("lam"), py::arg("K"), py::arg("pi_c") = py::none(),
      py::arg("r") = std::vector<double>{});

  m.def(
      "derive_model",
      [](const std::string& family, py::kwargs kw) {
        auto get = [&](const char* k) { return kw.contains(k) ? kw[k].cast<double>() : 0.0; };
        eb::models::DerivedParams dp;
        if (family == "reflecting") dp = eb::models::derive_reflecting_rw(get("p"));
        else if (family == "sticky") dp = eb::models::derive_sticky_rw(get("p"), get("eps"));
        else if (family == "mh")
          dp = eb::models::derive_mh_normal(get("d"), get("s"), kw.contains("nu") ? kw["nu"].cast<int>() : 1);
        else if (family == "contracting") dp = eb::models::derive_contracting_normals(get("theta"), get("c"));
        else throw eb::InvalidInput("unknown family " + family);
        py::dict d;
        if (dp.is_atomic()) {
          const auto& s = std::get<eb::atomic::AtomicDriftSpec>(dp.drift);
          d["kind"] = "atomic";
          d["b"] = s.b;
          d["lam"] = s.lambda;
          d["K"] = s.K;
        } else {
          const auto& s = std::get<eb::split::SplitDriftSpec>(dp.drift);
          d["kind"] = "split";
          d["b"] = s.b;
          d["bbar"] = s.bbar;
          d["lam"] = s.lambda;
          d["K"] = s.K;
        }
        d["pi_c"] = dp.pi_C_exact;
        d["rho_optimal"] = dp.rho_optimal;
        d["warnings"] = dp.warnings;
        return d;
      },
      py::arg("family"));

  m.def("contracting_exact_tv", &eb::models::contracting_exact_tv, py::arg("theta"), py::arg("x0"),
        py::arg("n"));

  m.def(
      "reproduce_table",
      [](int id, int grid) {
        eb::tables::TableOptions opt;
        opt.grid_points = grid;
        const auto t = eb::tables::reproduce_table(id, opt);
        py::list cells;
        for (const auto& c : t.cells) {
          py::dict d;
          d["model"] = c.model;
          d["param1"] = c.param1;
          d["param2"] = c.param2;
          d["column"] = c.column;
          d["quantity"] = c.quantity;
          d["computed"] = c.computed;
          d["printed"] = c.printed;
          d["tolerance"] = c.tolerance;
          d["pass"] = c.pass;
          cells.append(d);
        }
        return cells;
      },
      py::arg("id"), py::arg("grid") = 0);
}
