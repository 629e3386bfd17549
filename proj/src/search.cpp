#include "atiyah/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <thread>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include "atiyah/rng.hpp"
#include "atiyah/spinor.hpp"

namespace atiyah::search {

namespace {

constexpr double kPenalty = 1e3;

template <class F>
void parallel_for(std::uint64_t count, int workers, F&& body) {
  workers = std::max(1, std::min<int>(workers, static_cast<int>(std::max<std::uint64_t>(count, 1))));
  if (workers == 1) {
    for (std::uint64_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        std::uint64_t i = next.fetch_add(1);
        if (i >= count) return;
        body(i);
      }
    });
  for (auto& t : pool) t.join();
}

double energy_or_penalty(const geo::Config& c) {
  try {
    double e = spinor::energy(c);
    return std::isfinite(e) ? e : kPenalty;
  } catch (const geo::GeometryError&) {
    return kPenalty;
  }
}

struct Problem {
  int n;
};

double objective(const gsl_vector* x, void* p) {
  const auto* prob = static_cast<const Problem*>(p);
  std::vector<double> v(x->size);
  for (std::size_t i = 0; i < x->size; ++i) v[i] = gsl_vector_get(x, i);
  return energy_or_penalty(from_gauge(prob->n, v));
}

MinimizeResult descend(const geo::Config& start, const MinimizeOptions& opt) {
  int n = start.n();
  std::vector<double> x0 = to_gauge(start);
  MinimizeResult r;
  Problem prob{n};
  std::size_t dim = x0.size();
  gsl_multimin_function f{&objective, dim, &prob};
  gsl_vector* x = gsl_vector_alloc(dim);
  gsl_vector* step = gsl_vector_alloc(dim);
  for (std::size_t i = 0; i < dim; ++i) gsl_vector_set(x, i, x0[i]);
  gsl_vector_set_all(step, 0.1);
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, dim);
  gsl_multimin_fminimizer_set(s, &f, x, step);
  // the energy spread of a simplex of size h around a smooth minimum is O(h²)
  double xtol = std::sqrt(opt.ftol);
  double best = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < opt.maxiter; ++it) {
    if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
    best = std::min(best, gsl_multimin_fminimizer_minimum(s));
    r.history.push_back(best);
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), xtol) == GSL_SUCCESS) {
      r.converged = true;
      ++it;
      break;
    }
  }
  std::vector<double> xb(dim);
  for (std::size_t i = 0; i < dim; ++i) xb[i] = gsl_vector_get(gsl_multimin_fminimizer_x(s), i);
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(x);
  gsl_vector_free(step);
  r.config = from_gauge(n, xb);
  r.energy = spinor::energy(r.config);
  r.abs_d = std::exp(-r.energy);
  r.iterations = it;
  r.restarts_used = 1;
  return r;
}

struct GslQuiet {
  GslQuiet() { gsl_set_error_handler_off(); }
};

}  // namespace

int default_workers() {
  if (const char* env = std::getenv("ATIYAH_WORKERS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<double> to_gauge(const geo::Config& c) {
  int n = c.n();
  if (n < 3) throw std::invalid_argument("gauge needs n >= 3");
  geo::Vec3 o = c.points[0];
  geo::Vec3 u = geo::sub(c.points[1], o);
  double scale = geo::norm(u);
  if (scale < 1e-300) throw geo::DegenerateConfig("points 1 and 2 coincide");
  geo::Vec3 ex{u[0] / scale, u[1] / scale, u[2] / scale};
  geo::Vec3 w = geo::sub(c.points[2], o);
  double wx = geo::dot(w, ex);
  geo::Vec3 perp{w[0] - wx * ex[0], w[1] - wx * ex[1], w[2] - wx * ex[2]};
  double pn = geo::norm(perp);
  geo::Vec3 ey;
  if (pn > 1e-12 * scale) {
    ey = {perp[0] / pn, perp[1] / pn, perp[2] / pn};
  } else {
    // 1, 2, 3 collinear: any unit vector orthogonal to ex
    geo::Vec3 a = std::abs(ex[0]) < 0.9 ? geo::Vec3{1.0, 0.0, 0.0} : geo::Vec3{0.0, 1.0, 0.0};
    geo::Vec3 cr = geo::cross(ex, a);
    double cn = geo::norm(cr);
    ey = {cr[0] / cn, cr[1] / cn, cr[2] / cn};
  }
  geo::Vec3 ez = geo::cross(ex, ey);
  std::vector<double> p;
  for (int i = 2; i < n; ++i) {
    geo::Vec3 v = geo::sub(c.points[i], o);
    p.push_back(geo::dot(v, ex) / scale);
    p.push_back(geo::dot(v, ey) / scale);
    if (i > 2) p.push_back(geo::dot(v, ez) / scale);
  }
  return p;
}

geo::Config from_gauge(int n, const std::vector<double>& params) {
  if (static_cast<int>(params.size()) != 3 * n - 7) throw std::invalid_argument("gauge needs 3n-7 coordinates");
  geo::Config c;
  c.points.push_back({0.0, 0.0, 0.0});
  c.points.push_back({1.0, 0.0, 0.0});
  c.points.push_back({params[0], params[1], 0.0});
  for (int i = 3; i < n; ++i) {
    std::size_t k = 2 + 3 * (i - 3);
    c.points.push_back({params[k], params[k + 1], params[k + 2]});
  }
  return c;
}

std::vector<double> energy_gradient(const geo::Config& c, double h) {
  std::vector<double> x = to_gauge(c), g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::vector<double> xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (spinor::energy(from_gauge(c.n(), xp)) - spinor::energy(from_gauge(c.n(), xm))) / (2 * h);
  }
  return g;
}

json MinimizeResult::to_json() const {
  json d = json::array();
  geo::DistanceSet ds = geo::distances(config);
  for (int i = 1; i <= ds.n; ++i)
    for (int j = i + 1; j <= ds.n; ++j) d.push_back(ds.r(i, j));
  return {{"n", config.n()},
          {"energy", energy},
          {"abs_D", abs_d},
          {"iterations", iterations},
          {"converged", converged},
          {"restarts_used", restarts_used},
          {"best_restart", best_restart},
          {"seed", seed},
          {"config", geo::to_json(config)},
          {"distances", d},
          {"history_length", history.size()}};
}

MinimizeResult minimize_from(const geo::Config& start, const MinimizeOptions& opt) {
  static GslQuiet quiet;
  return descend(start, opt);
}

MinimizeResult minimize(int n, std::uint64_t seed, const MinimizeOptions& opt) {
  static GslQuiet quiet;
  if (n < 3 || n > 8) throw std::invalid_argument("minimize needs 3 <= n <= 8");
  int restarts = std::max(1, opt.restarts);
  std::vector<MinimizeResult> runs(restarts);
  parallel_for(restarts, opt.workers > 0 ? opt.workers : default_workers(), [&](std::uint64_t k) {
    runs[k] = descend(geo::random_config(n, seed, geo::Distribution::Ball, k, 1e-2), opt);
  });
  int best = 0;
  for (int k = 1; k < restarts; ++k)
    if (runs[k].energy < runs[best].energy) best = k;
  MinimizeResult r = std::move(runs[best]);
  r.restarts_used = restarts;
  r.best_restart = best;
  r.seed = seed;
  return r;
}

namespace {

struct Sample {
  double abs_d = 0, c2 = 0, c3n = 0, energy = 0;
  int resamples = 0;
};

json argmin_entry(double value, std::uint64_t index, int n, std::uint64_t seed, const MonteCarloOptions& opt) {
  geo::Config c = geo::random_config(n, seed, opt.distribution, index, opt.min_separation);
  return {{"value", value},
          {"sample_index", index},
          {"config", geo::to_json(c)},
          {"reproduction",
           {{"n", n}, {"seed", seed}, {"sample_index", index}, {"distribution", geo::to_string(opt.distribution)}}}};
}

}  // namespace

ConjectureReport monte_carlo(int n, std::uint64_t samples, std::uint64_t seed, const MonteCarloOptions& opt) {
  std::int64_t start = now_ns();
  if (n < 3) throw std::invalid_argument("monte_carlo needs n >= 3");
  std::vector<Sample> out(samples);
  parallel_for(samples, opt.workers > 0 ? opt.workers : default_workers(), [&](std::uint64_t i) {
    Sample s;
    geo::Config c = geo::random_config(n, seed, opt.distribution, i, opt.min_separation, &s.resamples);
    spinor::Margins m = spinor::margins(c);
    s.abs_d = m.abs_d;
    s.c2 = m.c2;
    s.c3n = m.c3_normalized;
    s.energy = spinor::energy(c);
    out[i] = s;
  });

  ConjectureReport rep;
  rep.conjecture = "atiyah_sutcliffe_monte_carlo";
  rep.mode = "numeric";
  rep.n = n;
  std::uint64_t arg_d = 0, arg_c3 = 0, resampled = 0, inconsistent = 0, violations = 0;
  json listed = json::array();
  for (std::uint64_t i = 0; i < samples; ++i) {
    const Sample& s = out[i];
    resampled += s.resamples;
    if (s.abs_d < out[arg_d].abs_d) arg_d = i;
    if (s.c3n < out[arg_c3].c3n) arg_c3 = i;
    if ((s.energy <= 0) != (s.abs_d >= 1)) ++inconsistent;
    if (s.c2 < -opt.tol || s.c3n < -opt.tol) {
      ++violations;
      if (static_cast<int>(listed.size()) < opt.max_violations_listed) {
        json v = argmin_entry(s.abs_d, i, n, seed, opt);
        v["C2_margin"] = s.c2;
        v["C3_normalized_margin"] = s.c3n;
        listed.push_back(v);
      }
    }
  }
  rep.data["samples"] = samples;
  rep.data["seed"] = seed;
  rep.data["distribution"] = geo::to_string(opt.distribution);
  rep.data["resampled_near_degenerate"] = resampled;
  if (samples > 0) {
    rep.data["min_abs_D"] = argmin_entry(out[arg_d].abs_d, arg_d, n, seed, opt);
    rep.data["min_C2_margin"] = out[arg_d].c2;
    rep.data["min_C3_normalized_margin"] = argmin_entry(out[arg_c3].c3n, arg_c3, n, seed, opt);
  }
  rep.data["energy_sign_inconsistencies"] = inconsistent;
  rep.data["violation_count"] = violations;
  rep.data["violations"] = listed;
  rep.ok = violations == 0 && inconsistent == 0;
  if (!listed.empty()) rep.witness = listed.front();
  rep.elapsed_ms = elapsed_since(start);
  return rep;
}

}  // namespace atiyah::search
