#include "atiyah/suites.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "atiyah/closed_forms.hpp"
#include "atiyah/rng.hpp"
#include "atiyah/spinor.hpp"
#include "atiyah/typea.hpp"

namespace atiyah::suites {

namespace {

using closed::Edges4;

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

struct Triangle {
  double a, b, c;
};

Triangle random_triangle(Stream& rng) {
  for (;;) {
    geo::Config t;
    for (int i = 0; i < 3; ++i) {
      geo::Vec3 p;
      do {
        p = {rng.uniform(-1, 1), rng.uniform(-1, 1), 0.0};
      } while (geo::dot(p, p) > 1.0);
      t.points.push_back(p);
    }
    double a = geo::norm(geo::sub(t.points[1], t.points[2])), b = geo::norm(geo::sub(t.points[0], t.points[2])),
           c = geo::norm(geo::sub(t.points[0], t.points[1]));
    double s = std::max({a, b, c});
    if (std::min({a, b, c}) > 1e-3 * s && closed::d3(a, b, c) > 1e-6 * s * s * s) return {a, b, c};
  }
}

struct Worst {
  double value = std::numeric_limits<double>::infinity();
  std::uint64_t index = 0;
  void offer(double v, std::uint64_t i) {
    if (v < value) value = v, index = i;
  }
  json to_json(std::uint64_t seed) const {
    return {{"value", value}, {"sample_index", index}, {"seed", seed}};
  }
};

struct MaxErr {
  double value = 0;
  std::uint64_t index = 0;
  void offer(double v, std::uint64_t i) {
    if (v > value) value = v, index = i;
  }
  json to_json(std::uint64_t seed) const {
    return {{"value", value}, {"sample_index", index}, {"seed", seed}};
  }
};

bool chain_holds(const json& j) { return j.contains("chain_ok") && j["chain_ok"].get<bool>(); }

}  // namespace

ConjectureReport en3_crosscheck(std::uint64_t samples, std::uint64_t seed, double tol) {
  std::int64_t start = now_ns();
  ConjectureReport rep;
  rep.conjecture = "en3_crosscheck";
  rep.mode = "numeric";
  rep.n = 3;
  MaxErr worst;
  std::uint64_t failures = 0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    geo::Config c = geo::random_config(3, seed, geo::Distribution::Ball, i);
    geo::DistanceSet d = geo::distances(c);
    double closed = closed::det_m3_closed(d.r(1, 2), d.r(1, 3), d.r(2, 3));
    double err = std::abs(std::abs(spinor::det_m(c)) - closed) / closed;
    worst.offer(err, i);
    if (!(err <= tol)) ++failures;
  }
  rep.data["samples"] = samples;
  rep.data["tolerance"] = tol;
  rep.data["max_relative_error"] = worst.to_json(seed);
  rep.data["failures"] = failures;
  rep.ok = failures == 0;
  rep.elapsed_ms = elapsed_since(start);
  return rep;
}

ConjectureReport en4_crosscheck(std::uint64_t samples, std::uint64_t seed, double tol) {
  std::int64_t start = now_ns();
  ConjectureReport rep;
  rep.conjecture = "en4_crosscheck";
  rep.mode = "numeric";
  rep.n = 4;
  MaxErr planar_re, planar_im, planar_trig, general_re;
  Worst general_gap, e0_margin;
  MaxErr e0_res;
  std::uint64_t failures = 0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    geo::Config g = geo::random_config(4, seed, geo::Distribution::Ball, i);
    {
      Edges4<double> e = closed::edges_of(geo::distances(g));
      double re = closed::re_det_m4_closed(e);
      spinor::cd det = spinor::det_m(g);
      double gap = (std::abs(det) - std::abs(re)) / std::abs(det);
      general_gap.offer(gap, i);
      general_re.offer(rel(det.real(), re), i);
      closed::EnResiduals en = closed::en_identity_residuals(e);
      double scale = e.product();
      e0_res.offer(std::abs(en.e0_residual) / scale, i);
      e0_margin.offer(-en.nonpositivity_margin / scale, i);
      if (gap < -tol || rel(det.real(), re) > tol || std::abs(en.e0_residual) > tol * scale ||
          en.nonpositivity_margin > tol * scale)
        ++failures;
    }
    geo::Config p = g;
    for (auto& q : p.points) q[2] = 0;
    try {
      Edges4<double> e = closed::edges_of(geo::distances(p));
      double re = closed::re_det_m4_closed(e);
      spinor::cd det = spinor::det_m(p);
      double r1 = std::abs(det - spinor::cd(re, 0)) / std::abs(re), r2 = std::abs(det.imag()) / std::abs(det);
      double r3 = closed::trig_re_det_m4(p, false)["relative_residual"].get<double>();
      planar_re.offer(r1, i);
      planar_im.offer(r2, i);
      planar_trig.offer(r3, i);
      if (r1 > tol || r2 > tol || r3 > tol) ++failures;
    } catch (const geo::DegenerateConfig&) {
      // projection merged two points; the nonplanar check above still counts
    }
  }
  rep.data["samples"] = samples;
  rep.data["tolerance"] = tol;
  rep.data["planar"] = {{"max_relative_error_vs_closed", planar_re.to_json(seed)},
                        {"max_relative_imaginary_part", planar_im.to_json(seed)},
                        {"max_relative_error_trig_form", planar_trig.to_json(seed)}};
  rep.data["nonplanar"] = {{"min_relative_gap_abs_det_minus_abs_re", general_gap.to_json(seed)},
                           {"max_relative_error_real_part", general_re.to_json(seed)}};
  rep.data["e0"] = {{"max_relative_residual", e0_res.to_json(seed)},
                    {"min_relative_nonpositivity_margin", e0_margin.to_json(seed)}};
  rep.data["failures"] = failures;
  rep.ok = failures == 0;
  rep.elapsed_ms = elapsed_since(start);
  return rep;
}

ConjectureReport family_suite(const std::string& kind, std::uint64_t samples, std::uint64_t seed, double tol) {
  std::int64_t start = now_ns();
  ConjectureReport rep;
  rep.conjecture = "family_" + kind;
  rep.mode = "numeric";
  rep.n = 4;
  Worst c2, chain_margin, aux1, aux2;
  MaxErr ptolemy, split;
  std::uint64_t accepted = 0, attempts = 0, unrealizable = 0, chain_failures = 0, range_failures = 0;
  json first_failure;
  const std::uint64_t max_attempts = samples * 50 + 100;
  auto c2_of = [&](const geo::Config& c, const Edges4<double>& e) {
    double prod = 64 * e.product();
    return (std::abs(spinor::det_m(c)) - prod) / prod;
  };
  if (kind != "upright" && kind != "tangential" && kind != "isosceles" && kind != "cyclic")
    throw std::invalid_argument("unknown family " + kind);
  while (accepted < samples && attempts < max_attempts) {
    std::uint64_t idx = attempts++;
    Stream rng(seed, idx);
    try {
      if (kind == "upright") {
        Triangle t = random_triangle(rng);
        double R = geo::circumradius(t.a, t.b, t.c);
        double u = rng.uniform();
        double d = R * (1 + 3 * u * u);
        geo::FamilyMember f = geo::upright(t.a, t.b, t.c, d);
        Edges4<double> e = closed::upright_edges(t.a, t.b, t.c, d);
        closed::UprightReport ur = closed::upright_margins(t.a, t.b, t.c, d);
        double m = c2_of(f.config, e);
        c2.offer(m, idx);
        double s6 = std::pow(std::max({t.a, t.b, t.c}), 6);
        aux1.offer(ur.b1_plus_b2p / s6, idx);
        aux2.offer(ur.lemma1_margin / (s6 * s6), idx);
        split.offer(std::abs(ur.split_residual) / std::max(std::abs(ur.re_det), 1e-300), idx);
        bool ok = m >= -tol && ur.b1_plus_b2p >= -tol * s6 && ur.lemma1_margin >= -tol * s6 * s6 &&
                  std::abs(ur.split_residual) <= tol * std::abs(ur.re_det);
        if (!ok && first_failure.is_null()) first_failure = ur.to_json();
        if (!ok) ++chain_failures;
      } else if (kind == "tangential") {
        std::array<double, 4> t;
        for (double& v : t) v = std::exp(rng.uniform(-1.5, 1.5));
        geo::FamilyMember f = geo::tangential(t);
        Edges4<double> e = closed::edges_of(f.d);
        json j = closed::tangential_closed(t);
        double m = c2_of(f.config, e);
        c2.offer(m, idx);
        aux1.offer(j["lemma2_margin"].get<double>() / std::pow(*std::max_element(t.begin(), t.end()), 12), idx);
        bool ok = m >= -tol && chain_holds(j);
        if (!ok && first_failure.is_null()) first_failure = j;
        if (!ok) ++chain_failures;
      } else if (kind == "isosceles") {
        Triangle t = random_triangle(rng);
        geo::FamilyMember f = geo::isosceles(t.a, t.b, t.c);
        Edges4<double> e = closed::edges_of(f.d);
        json j = closed::isosceles_closed(t.a, t.b, t.c);
        double m = c2_of(f.config, e);
        c2.offer(m, idx);
        bool ok = m >= -tol && chain_holds(j);
        if (!ok && first_failure.is_null()) first_failure = j;
        if (!ok) ++chain_failures;
      } else {
        std::array<double, 4> phi;
        for (double& v : phi) v = rng.uniform(0, 2 * std::numbers::pi);
        std::sort(phi.begin(), phi.end());
        geo::FamilyMember f = geo::cyclic(phi);
        Edges4<double> e = closed::edges_of(f.d);
        json j = closed::trig_re_det_m4(f.config, true);
        double m = c2_of(f.config, e);
        c2.offer(m, idx);
        double pt = std::max(std::abs(j["ptolemy_residual"].get<double>()),
                             std::abs(j["ptolemy_residual_from_products"].get<double>()));
        ptolemy.offer(pt, idx);
        bool in_range = j["c_l_in_range"].get<bool>();
        if (!in_range) ++range_failures;
        bool ok = m >= -tol && chain_holds(j) && pt <= tol && in_range;
        if (!ok && first_failure.is_null()) first_failure = j;
        if (!ok) ++chain_failures;
      }
      ++accepted;
    } catch (const geo::NotRealizable&) {
      ++unrealizable;
    } catch (const geo::DegenerateConfig&) {
      ++unrealizable;
    }
  }
  rep.data["samples"] = accepted;
  rep.data["requested"] = samples;
  rep.data["attempts"] = attempts;
  rep.data["skipped_unrealizable"] = unrealizable;
  rep.data["tolerance"] = tol;
  rep.data["min_C2_relative_margin"] = c2.to_json(seed);
  if (kind == "upright") {
    rep.data["min_B1_plus_B2_prime_scaled"] = aux1.to_json(seed);
    rep.data["min_lemma1_margin_scaled"] = aux2.to_json(seed);
    rep.data["max_split_relative_residual"] = split.to_json(seed);
  }
  if (kind == "tangential") rep.data["min_lemma2_margin_scaled"] = aux1.to_json(seed);
  if (kind == "cyclic") {
    rep.data["max_ptolemy_residual"] = ptolemy.to_json(seed);
    rep.data["c_l_range_failures"] = range_failures;
  }
  rep.data["failures"] = chain_failures;
  rep.ok = accepted == samples && chain_failures == 0;
  if (!first_failure.is_null()) rep.witness = first_failure;
  rep.elapsed_ms = elapsed_since(start);
  return rep;
}

bool type_a_bridge(int n) {
  std::map<poly::Var, poly::MPoly> sub;
  for (int i = 1; i <= n; ++i) {
    sub[poly::Var::x(i)] = poly::var(spinor::lambda_var(n + 1 - i));
    sub[poly::Var::xi(i)] = poly::var(spinor::lambda_var(i));
  }
  return typea::psi_full(n).substitute(sub) == spinor::type_a_det_symbolic(n);
}

ConjectureReport symbolic_identities(int max_res, int max_typea, int max_resultant) {
  std::int64_t start = now_ns();
  ConjectureReport rep;
  rep.conjecture = "symbolic_identities";
  rep.mode = "symbolic";
  json s = closed::symbolic_suite();
  auto zero = [](const json& j) { return j.is_boolean() ? j.get<bool>() : j["zero"].get<bool>(); };
  json required = {
      {"A4_sum_equals_alt", zero(s["A4_sum_equals_alt"])},
      {"e0_identity", zero(s["e0_identity"])},
      {"tangential_prod_equals_s321", zero(s["tangential"]["prod_equals_s321"])},
      {"tangential_64prod_e_form", zero(s["tangential"]["64prod_e_form"])},
      {"tangential_minus4d3_e_form", zero(s["tangential"]["minus4d3_e_form"])},
      {"tangential_288V2_e_form", zero(s["tangential"]["288V2_e_form"])},
      {"tangential_A4_e_form", zero(s["tangential"]["A4_e_form"])},
      {"tangential_re_det_e_m_form", zero(s["tangential"]["re_det_e_m_form"])},
      {"isosceles_zero_identity", zero(s["isosceles"]["zero_identity"])},
      {"isosceles_re_det_equals_(2d3+8abc)^2", zero(s["isosceles"]["re_det_equals_(2d3+8abc)^2"])},
  };
  json res = json::object();
  for (int n = 1; n <= max_res; ++n) res[std::to_string(n)] = typea::res_coeffs(n).ok;
  json bridge = json::object();
  for (int n = 1; n <= max_typea; ++n) bridge[std::to_string(n)] = type_a_bridge(n);
  json resultant = json::object();
  for (int n = 2; n <= max_resultant; ++n) {
    typea::ResultantDelta rd = typea::resultant_delta(n);
    resultant[std::to_string(n)] = {
        {"det_sylvester_equals_Rn", rd.checks["det_sylvester_equals_Rn"]},
        {"det_delta_equals_det_sylvester", rd.checks["det_delta_equals_det_sylvester"]},
        {"det_delta_prime_equals_det_sylvester", rd.checks["det_delta_prime_equals_det_sylvester"]},
        {"ok", rd.ok}};
  }
  bool ok = true;
  for (auto it = required.begin(); it != required.end(); ++it) ok = ok && it.value().get<bool>();
  for (auto it = res.begin(); it != res.end(); ++it) ok = ok && it.value().get<bool>();
  for (auto it = bridge.begin(); it != bridge.end(); ++it) ok = ok && it.value().get<bool>();
  for (auto it = resultant.begin(); it != resultant.end(); ++it) {
    const json& r = it.value();
    ok = ok && r["det_sylvester_equals_Rn"].get<bool>() && r["det_delta_equals_det_sylvester"].get<bool>() &&
         r["det_delta_prime_equals_det_sylvester"].get<bool>();
  }
  rep.data["required"] = required;
  rep.data["res_coeffs"] = res;
  rep.data["type_a_det_equals_psi"] = bridge;
  rep.data["resultant_chain"] = resultant;
  rep.data["closed_form_suite"] = s;
  rep.ok = ok;
  rep.elapsed_ms = elapsed_since(start);
  return rep;
}

ConjectureReport reference_coefficients() {
  std::int64_t start = now_ns();
  ConjectureReport rep;
  rep.conjecture = "reference_coefficients";
  rep.mode = "symbolic";
  poly::MPoly l1 = closed::lemma1_substituted();
  poly::NonnegCertificate cert = poly::nonneg_certificate(l1);
  bool l1_ok = cert.ok && cert.min_coeff && cert.max_coeff && *cert.min_coeff == 1 && *cert.max_coeff == 254930;
  json lemma1 = {{"terms", l1.size()}, {"degree", l1.degree()}, {"all_positive", cert.ok}, {"ok", l1_ok}};
  if (cert.min_coeff) lemma1["min_coeff"] = integer_json(*cert.min_coeff);
  if (cert.max_coeff) lemma1["max_coeff"] = integer_json(*cert.max_coeff);
  json lemma2 = closed::tangential_identities()["lemma2"];
  typea::Mode mode;
  mode.samples = 200;
  ConjectureReport chain = typea::corollary_chain(4, mode);
  json q4;
  for (const auto& c : chain.data["chains"])
    if (c["name"] == "Q4") q4 = c["terminal"];
  bool q4_ok = !q4.is_null() && q4["matches_display_reciprocal_times_d24_squared"].get<bool>();
  rep.data["lemma1"] = lemma1;
  rep.data["lemma2"] = lemma2;
  rep.data["q4_terminal"] = q4;
  rep.ok = l1_ok && lemma2["matches_display"].get<bool>() && q4_ok;
  rep.elapsed_ms = elapsed_since(start);
  return rep;
}

ConjectureReport collinear_energy(int nmax, std::uint64_t samples, std::uint64_t seed, double tol) {
  std::int64_t start = now_ns();
  ConjectureReport rep;
  rep.conjecture = "collinear_energy";
  rep.mode = "numeric";
  rep.n = nmax;
  MaxErr worst;
  for (int n = 2; n <= nmax; ++n)
    for (std::uint64_t i = 0; i < samples; ++i) {
      Stream rng(seed + n, i);
      geo::Vec3 dir{rng.gaussian(), rng.gaussian(), rng.gaussian()};
      double len = geo::norm(dir);
      geo::Config c;
      std::vector<double> s;
      for (int k = 0; k < n; ++k) s.push_back(rng.uniform(-1, 1));
      std::sort(s.begin(), s.end());
      bool spread = true;
      for (int k = 1; k < n; ++k) spread = spread && s[k] - s[k - 1] > 1e-3;
      if (!spread) continue;
      for (double t : s) c.points.push_back({t * dir[0] / len, t * dir[1] / len, t * dir[2] / len});
      worst.offer(std::abs(spinor::energy(c)), static_cast<std::uint64_t>(n) * 1000000 + i);
    }
  rep.data["max_abs_energy"] = worst.value;
  rep.data["tolerance"] = tol;
  rep.ok = worst.value <= tol;
  rep.elapsed_ms = elapsed_since(start);
  return rep;
}

}  // namespace atiyah::suites
