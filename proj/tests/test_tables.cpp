#include <atomic>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "ergobound/tables.hpp"
#include "ergobound/validation.hpp"

using namespace ergobound;

TEST_SUITE("tables") {
  TEST_CASE("reference data parses") {
    const auto refs = tables::reference_values();
    REQUIRE(!refs.empty());
    std::set<int> ids;
    for (const auto& r : refs) {
      ids.insert(r.table);
      CHECK(std::isfinite(r.value));
      CHECK((r.quantity == "rho" || r.quantity == "one_minus_rho"));
    }
    CHECK(ids == std::set<int>{1, 2, 3, 4, 5});
  }

  TEST_CASE("printed precision") {
    CHECK(tables::printed_half_unit("0.000000000004") == doctest::Approx(5e-13));
    CHECK(tables::printed_half_unit("0.9737") == doctest::Approx(5e-5));
    CHECK(tables::printed_half_unit("0.6") == doctest::Approx(0.05));
  }

  TEST_CASE("parallel_for covers every slot and rethrows") {
    std::vector<int> hits(1000, 0);
    tables::parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
    CHECK_THROWS_AS(tables::parallel_for(10, 3,
                                         [](std::size_t i) {
                                           if (i == 7) throw std::runtime_error("boom");
                                         }),
                    std::runtime_error);
  }

  TEST_CASE("table 1 and table 5 cells pass") {
    for (int id : {1, 5}) {
      const auto t = tables::reproduce_table(id);
      REQUIRE(!t.cells.empty());
      for (const auto& c : t.cells) {
        INFO("table ", id, " ", c.model, " ", c.param1, " ", c.column);
        CHECK(c.pass);
      }
    }
  }

  TEST_CASE("table 4 contracting rows are within ten percent") {
    tables::TableOptions opt;
    opt.grid_points = 0;
    const auto t = tables::reproduce_table(4, opt);
    for (const auto& c : t.cells) {
      INFO(c.param1, " ", c.param2.value_or(0), " ", c.column);
      CHECK(c.pass);
    }
    CHECK_THROWS(tables::reproduce_table(9));
  }

  TEST_CASE("validation properties on a small seed") {
    const auto rep = validation::run_validation(123, 12, 2);
    for (const auto& p : rep.properties) {
      INFO(p.name);
      CHECK(p.violations == 0);
      CHECK(p.checks > 0);
    }
    CHECK(rep.ok());
  }

  TEST_CASE("seeded generators are reproducible") {
    const auto a = validation::random_increments(77, 20);
    const auto b = validation::random_increments(77, 20);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].probs() == b[i].probs());
    CHECK(a[0].probs()[0] == a[0].b_floor());
    for (const auto& inc : a) CHECK(inc.support() <= 20);
  }

  TEST_CASE("deviation bound and drift checks") {
    CHECK(validation::deviation_bound(models::ModelSpec::reflecting_rw(0.9), 60).violations == 0);
    CHECK(validation::drift_conditions().violations == 0);
  }
}
