#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "atiyah/search.hpp"
#include "atiyah/spinor.hpp"

using namespace atiyah;
using namespace atiyah::search;

namespace {

double distance_spread(const geo::Config& c) {
  geo::DistanceSet d = geo::distances(c);
  double lo = 1e300, hi = 0;
  for (int i = 1; i <= d.n; ++i)
    for (int j = i + 1; j <= d.n; ++j) lo = std::min(lo, d.r(i, j)), hi = std::max(hi, d.r(i, j));
  return (hi - lo) / hi;
}

// Rotation about z, uniform scale and a shift.
geo::Config move(const geo::Config& c) {
  double co = std::cos(0.7), si = std::sin(0.7);
  geo::Config out;
  for (const geo::Vec3& p : c.points)
    out.points.push_back({3 * (co * p[0] - si * p[1]) + 1, 3 * (si * p[0] + co * p[1]) - 2, 3 * p[2] + 0.5});
  return out;
}

MinimizeOptions quick(int workers = 1) {
  MinimizeOptions o;
  o.restarts = 4;
  o.workers = workers;
  return o;
}

}  // namespace

TEST_CASE("gauge coordinates round trip") {
  for (int n = 3; n <= 8; ++n) {
    geo::Config c = geo::random_config(n, 3, geo::Distribution::Ball, n);
    std::vector<double> x = to_gauge(c);
    CHECK(x.size() == static_cast<std::size_t>(3 * n - 7));
    geo::Config g = from_gauge(n, x);
    CHECK(std::abs(spinor::energy(g) - spinor::energy(c)) < 1e-12);
    std::vector<double> y = to_gauge(g);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(x[i] - y[i]) < 1e-12);
  }
  CHECK_THROWS_AS(from_gauge(4, {1, 2}), std::invalid_argument);
}

TEST_CASE("three points minimize to the equilateral triangle") {
  MinimizeResult r = minimize(3, 1, quick());
  CHECK(r.converged);
  CHECK(r.energy == doctest::Approx(-std::log(9.0 / 8)).epsilon(1e-6));
  CHECK(distance_spread(r.config) < 1e-4);
  for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i] <= r.history[i - 1]);
}

TEST_CASE("four points minimize to the regular tetrahedron") {
  MinimizeResult r = minimize(4, 2, quick());
  CHECK(r.abs_d == doctest::Approx(25.0 / 16).epsilon(1e-4));
  CHECK(distance_spread(r.config) < 1e-3);
  for (double g : energy_gradient(r.config)) CHECK(std::abs(g) < 1e-3);
  MinimizeResult again = minimize_from(move(r.config), quick());
  CHECK(again.energy == doctest::Approx(r.energy).epsilon(1e-8));
}

TEST_CASE("minimization is reproducible and independent of worker count") {
  MinimizeResult a = minimize(5, 9, quick(1)), b = minimize(5, 9, quick(4));
  CHECK(a.energy == b.energy);
  CHECK(a.best_restart == b.best_restart);
  CHECK(a.config.points == b.config.points);
  CHECK(a.energy <= -std::log(25.0 / 16));
  CHECK_THROWS_AS(minimize(2, 1), std::invalid_argument);
  CHECK_THROWS_AS(minimize(9, 1), std::invalid_argument);
}

TEST_CASE("Monte Carlo report is deterministic across workers") {
  MonteCarloOptions one, many;
  one.workers = 1;
  many.workers = 6;
  json a = monte_carlo(4, 5000, 21, one).to_json(), b = monte_carlo(4, 5000, 21, many).to_json();
  a.erase("elapsed_ms");
  b.erase("elapsed_ms");
  CHECK(a == b);
}

TEST_CASE("Monte Carlo margins, sign consistency and reproduction") {
  for (int n = 3; n <= 6; ++n) {
    ConjectureReport r = monte_carlo(n, 3000, 22);
    CHECK(r.ok);
    CHECK(r.data["violation_count"] == 0);
    CHECK(r.data["energy_sign_inconsistencies"] == 0);
    const json& m = r.data["min_abs_D"];
    CHECK(m["value"].get<double>() >= 1 - 1e-9);
    geo::Config c = geo::random_config(n, 22, geo::Distribution::Ball, m["sample_index"].get<std::uint64_t>(), 1e-4);
    CHECK(std::abs(std::abs(spinor::normalized_det(c)) - m["value"].get<double>()) < 1e-14);
  }
}

TEST_CASE("three-point minimum of |D| over random triangles approaches one from above") {
  double v = monte_carlo(3, 20000, 23).data["min_abs_D"]["value"].get<double>();
  CHECK(v >= 1);
  CHECK(v < 1.01);
}
