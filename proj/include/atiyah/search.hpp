#pragma once

// Energy minimization over gauge-fixed configurations and seeded Monte Carlo
// stress tests of the C1/C2/C3 margins.

#include <cstdint>
#include <vector>

#include "atiyah/geometry.hpp"
#include "atiyah/report.hpp"

namespace atiyah::search {

/// ATIYAH_WORKERS if set and positive, otherwise the hardware concurrency.
int default_workers();

/// Point 1 at the origin, point 2 at (1,0,0), point 3 in the xy-plane: 3n-7 coordinates.
std::vector<double> to_gauge(const geo::Config& c);
geo::Config from_gauge(int n, const std::vector<double>& params);

/// Central differences of the energy with respect to the gauge coordinates.
std::vector<double> energy_gradient(const geo::Config& c, double h = 1e-6);

struct MinimizeOptions {
  int restarts = 16;
  int maxiter = 20000;
  double ftol = 1e-10;
  int workers = 0;  // 0 selects default_workers()
};

struct MinimizeResult {
  geo::Config config;
  double energy = 0;
  double abs_d = 0;
  int iterations = 0;
  bool converged = false;
  int restarts_used = 0;
  int best_restart = 0;
  std::uint64_t seed = 0;
  std::vector<double> history;  // best energy so far, per iteration of the winning restart

  json to_json() const;
};

/// Requires 3 <= n <= 8; throws std::invalid_argument otherwise.
MinimizeResult minimize(int n, std::uint64_t seed, const MinimizeOptions& opt = {});
/// Single descent from a given configuration.
MinimizeResult minimize_from(const geo::Config& start, const MinimizeOptions& opt = {});

struct MonteCarloOptions {
  int workers = 0;
  geo::Distribution distribution = geo::Distribution::Ball;
  double tol = 1e-9;
  double min_separation = 1e-4;
  int max_violations_listed = 100;
};

ConjectureReport monte_carlo(int n, std::uint64_t samples, std::uint64_t seed, const MonteCarloOptions& opt = {});

}  // namespace atiyah::search
