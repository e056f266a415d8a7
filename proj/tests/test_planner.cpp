#include <d2dstore/planner.hpp>

#include <array>
#include <cmath>

#include <doctest.h>

using namespace d2d;

namespace {

SystemParams make_params(double n, double lambda, double omega, double r) {
  SystemParams params;
  params.expected_nodes = n;
  params.departure_rate = lambda;
  params.request_rate = omega;
  params.cost_ratio = r;
  return params;
}

const DesignSpace kSpace{30, 10, 2, 10};

double method_cost_at(Method method, double r, double n, double p) {
  return method_cost(make_params(n, 1.0, p, r), kSpace, method);
}

}  // namespace

TEST_CASE("design space validation") {
  CHECK_NOTHROW(kSpace.validate());
  CHECK_THROWS_AS(DesignSpace{30, 10, 1, 10}.validate(), std::invalid_argument);
  CHECK_THROWS_AS(DesignSpace{30, 10, 2, 11}.validate(), std::invalid_argument);
  CHECK_THROWS_AS(DesignSpace{10, 10, 2, 10}.validate(), std::invalid_argument);
  CHECK_THROWS_AS(DesignSpace{30, 10, 5, 4}.validate(), std::invalid_argument);
}

TEST_CASE("best k at the reference point") {
  const SystemParams params = make_params(1000.0, 1.0, 0.005, 20.0);
  const KSearchResult mbr = best_k(params, kSpace, CodeFlavor::mbr);
  CHECK(mbr.k == 7);
  CHECK(mbr.cost == doctest::Approx(13.236224872339939).epsilon(1e-9));
  const KSearchResult msr = best_k(params, kSpace, CodeFlavor::msr);
  CHECK(msr.k == 5);

  // Independent re-evaluation of all candidates.
  for (int k = 2; k <= 10; ++k) {
    const CodeParams code{30, k, 10};
    CHECK(cost_regenerating(params, code, mbr_point(1.0, code)).total >= mbr.cost);
    CHECK(cost_regenerating(params, code, msr_point(1.0, code)).total >= msr.cost);
  }
}

TEST_CASE("single-candidate search returns the candidate") {
  const DesignSpace narrow{30, 10, 2, 2};
  const SystemParams params = make_params(1000.0, 1.0, 0.005, 20.0);
  CHECK(best_k(params, narrow, CodeFlavor::mbr).k == 2);
  CHECK(best_k(params, narrow, CodeFlavor::msr).k == 2);
}

TEST_CASE("best method across the popularity range") {
  CHECK(best_method(make_params(1000.0, 1.0, 1e-5, 20.0), kSpace).method ==
        Method::simple_caching);
  const MethodChoice at_reference = best_method(make_params(1000.0, 1.0, 0.005, 20.0), kSpace);
  CHECK(at_reference.method == Method::mbr);
  CHECK(at_reference.k == 7);
  CHECK(best_method(make_params(1000.0, 1.0, 2.0, 20.0), kSpace).method ==
        Method::replication);
}

TEST_CASE("best method tie-breaks toward the simpler scheme") {
  // With no requests, simple caching costs 0 by convention while every
  // redundant scheme still pays churn costs.
  const MethodChoice quiet = best_method(make_params(1000.0, 1.0, 0.0, 20.0), kSpace);
  CHECK(quiet.method == Method::simple_caching);
  CHECK(quiet.cost == 0.0);
}

TEST_CASE("single-point sweep equals direct evaluation") {
  const std::array<double, 1> grid{0.005};
  const std::vector<SweepRow> rows = sweep_p(20.0, 1000.0, kSpace, grid);
  REQUIRE(rows.size() == 1);
  const SystemParams params = make_params(1000.0, 1.0, 0.005, 20.0);
  CHECK(rows[0].cost_simple == cost_simple_caching(params));
  CHECK(rows[0].cost_mbr == best_k(params, kSpace, CodeFlavor::mbr).cost);
  CHECK(rows[0].k_mbr == 7);
  CHECK(rows[0].cost_msr == best_k(params, kSpace, CodeFlavor::msr).cost);
  CHECK(rows[0].cost_replication == cost_replication(params, 30).total);
  CHECK(rows[0].best == Method::mbr);
  CHECK(rows[0].rel_mbr == rows[0].cost_mbr / rows[0].cost_simple);
}

TEST_CASE("sweep rejects malformed grids") {
  CHECK_THROWS_AS(sweep_p(20.0, 1000.0, kSpace, std::array<double, 0>{}),
                  std::invalid_argument);
  CHECK_THROWS_AS(sweep_p(20.0, 1000.0, kSpace, std::array<double, 2>{0.1, 0.1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(sweep_p(20.0, 1000.0, kSpace, std::array<double, 2>{-0.1, 0.1}),
                  std::invalid_argument);
}

TEST_CASE("sweep regimes appear in the caching/mbr/msr/replication order") {
  std::vector<double> grid;
  for (int j = 0; j < 48; ++j) {
    grid.push_back(std::pow(10.0, -4.0 + 5.0 * j / 47.0));
  }
  const std::vector<SweepRow> rows = sweep_p(20.0, 1000.0, kSpace, grid);
  std::vector<Method> order;
  for (const SweepRow& row : rows) {
    if (order.empty() || order.back() != row.best) order.push_back(row.best);
  }
  const std::vector<Method> expected{Method::simple_caching, Method::mbr, Method::msr,
                                     Method::replication};
  CHECK(order == expected);
}

TEST_CASE("threshold search finds the reference crossings") {
  const CrossingSearch p1 = threshold(Method::simple_caching, Method::mbr, 20.0, 1000.0, kSpace);
  REQUIRE(p1.p.has_value());
  CHECK(*p1.p == doctest::Approx(0.000440969).epsilon(1e-3));
  // Simple caching overtakes MBR again at very high p (its reconstruction
  // volume k*alpha exceeds the file size), so the scan sees two crossings
  // and must return the smaller.
  CHECK(p1.sign_changes == 2);
  CHECK(p1.multiple());

  const CrossingSearch p2 = threshold(Method::mbr, Method::msr, 20.0, 1000.0, kSpace);
  REQUIRE(p2.p.has_value());
  CHECK(*p2.p == doctest::Approx(0.0100629).epsilon(1e-3));
  CHECK(p2.sign_changes == 1);

  const CrossingSearch p3 = threshold(Method::msr, Method::replication, 20.0, 1000.0, kSpace);
  REQUIRE(p3.p.has_value());
  CHECK(*p3.p == doctest::Approx(0.889111).epsilon(1e-3));
  CHECK(p3.sign_changes == 1);
}

TEST_CASE("bisection lands where the costs genuinely cross") {
  for (auto [a, b] : {std::pair{Method::simple_caching, Method::mbr},
                      std::pair{Method::mbr, Method::msr},
                      std::pair{Method::msr, Method::replication}}) {
    const CrossingSearch crossing = threshold(a, b, 60.0, 300.0, kSpace);
    REQUIRE(crossing.p.has_value());
    const double cost_a = method_cost_at(a, 60.0, 300.0, *crossing.p);
    const double cost_b = method_cost_at(b, 60.0, 300.0, *crossing.p);
    CHECK(std::abs(cost_a - cost_b) / std::max(cost_a, cost_b) <= 1e-6);
  }
}

TEST_CASE("no crossing is reported explicitly") {
  // At R barely above 1 the base station is almost as cheap as D2D; MBR
  // never undercuts simple caching anywhere in the scanned range.
  const CrossingSearch none =
      threshold(Method::simple_caching, Method::mbr, 1.001, 1000.0, kSpace);
  CHECK_FALSE(none.p.has_value());
  CHECK(none.sign_changes == 0);
}

TEST_CASE("threshold rejects identical methods") {
  CHECK_THROWS_AS(threshold(Method::mbr, Method::mbr, 20.0, 1000.0, kSpace),
                  std::invalid_argument);
}

TEST_CASE("popularity is the only coordinate: lambda cancels from crossings") {
  // Every method cost is proportional to lambda at fixed p, so crossings do
  // not move; the search itself normalizes lambda to 1.
  for (double p : {0.0005, 0.01, 0.9}) {
    const SystemParams at_unit = make_params(1000.0, 1.0, p, 20.0);
    const SystemParams at_seven = make_params(1000.0, 7.0, 7.0 * p, 20.0);
    for (Method m : {Method::simple_caching, Method::mbr, Method::msr, Method::replication}) {
      CHECK(method_cost(at_seven, kSpace, m) ==
            doctest::Approx(7.0 * method_cost(at_unit, kSpace, m)).epsilon(1e-9));
    }
  }
}

TEST_CASE("switching thresholds are ordered") {
  const ThresholdSet set = switching_thresholds(20.0, 1000.0, kSpace);
  REQUIRE(set.caching_to_mbr.p.has_value());
  REQUIRE(set.mbr_to_msr.p.has_value());
  REQUIRE(set.msr_to_replication.p.has_value());
  CHECK(*set.caching_to_mbr.p < *set.mbr_to_msr.p);
  CHECK(*set.mbr_to_msr.p < *set.msr_to_replication.p);
}

TEST_CASE("thresholds separate the best-method regimes") {
  const ThresholdSet set = switching_thresholds(20.0, 1000.0, kSpace);
  const auto best_at = [&](double p) {
    return best_method(make_params(1000.0, 1.0, p, 20.0), kSpace).method;
  };
  CHECK(best_at(*set.caching_to_mbr.p * 0.9) == Method::simple_caching);
  CHECK(best_at(*set.caching_to_mbr.p * 1.1) == Method::mbr);
  CHECK(best_at(*set.mbr_to_msr.p * 0.9) == Method::mbr);
  CHECK(best_at(*set.mbr_to_msr.p * 1.1) == Method::msr);
  CHECK(best_at(*set.msr_to_replication.p * 0.9) == Method::msr);
  CHECK(best_at(*set.msr_to_replication.p * 1.1) == Method::replication);
}

TEST_CASE("a single-cell surface equals the direct threshold calls") {
  const std::array<double, 1> r_grid{20.0};
  const std::array<double, 1> n_grid{1000.0};
  const std::vector<SurfaceRow> rows = threshold_surface(r_grid, n_grid, kSpace);
  REQUIRE(rows.size() == 1);
  const ThresholdSet direct = switching_thresholds(20.0, 1000.0, kSpace);
  CHECK(rows[0].thresholds.caching_to_mbr.p == direct.caching_to_mbr.p);
  CHECK(rows[0].thresholds.mbr_to_msr.p == direct.mbr_to_msr.p);
  CHECK(rows[0].thresholds.msr_to_replication.p == direct.msr_to_replication.p);
}

TEST_CASE("surface rows are sorted and independent of the worker count") {
  const std::array<double, 2> r_grid{60.0, 20.0};      // deliberately unsorted
  const std::array<double, 2> n_grid{1000.0, 100.0};
  const std::vector<SurfaceRow> serial = threshold_surface(r_grid, n_grid, kSpace, {}, 1);
  const std::vector<SurfaceRow> parallel = threshold_surface(r_grid, n_grid, kSpace, {}, 4);
  REQUIRE(serial.size() == 4);
  REQUIRE(parallel.size() == 4);
  for (std::size_t j = 0; j < serial.size(); ++j) {
    CHECK(serial[j].cost_ratio == parallel[j].cost_ratio);
    CHECK(serial[j].expected_nodes == parallel[j].expected_nodes);
    CHECK(serial[j].thresholds.caching_to_mbr.p == parallel[j].thresholds.caching_to_mbr.p);
    CHECK(serial[j].thresholds.mbr_to_msr.p == parallel[j].thresholds.mbr_to_msr.p);
    CHECK(serial[j].thresholds.msr_to_replication.p ==
          parallel[j].thresholds.msr_to_replication.p);
  }
  CHECK(serial[0].cost_ratio == 20.0);
  CHECK(serial[0].expected_nodes == 100.0);
  CHECK(serial[3].cost_ratio == 60.0);
  CHECK(serial[3].expected_nodes == 1000.0);
  CHECK_THROWS_AS(threshold_surface(std::array<double, 0>{}, n_grid, kSpace),
                  std::invalid_argument);
}
