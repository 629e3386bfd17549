#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "atiyah/closed_forms.hpp"
#include "atiyah/rng.hpp"
#include "atiyah/spinor.hpp"

using namespace atiyah;
using namespace atiyah::closed;

namespace {

Edges4<double> all(double v) { return {v, v, v, v, v, v}; }

bool zero(const json& entry) { return entry["zero"].get<bool>(); }

// Deterministic planar quadrilateral with a tilt out of the xy-plane.
geo::Config planar_quad(std::uint64_t k) {
  geo::Config c = geo::random_config(4, 31, geo::Distribution::Ball, k, 1e-2);
  for (geo::Vec3& p : c.points) p[2] = 0.4 * p[0] + 0.1 * p[1];
  return c;
}

}  // namespace

TEST_CASE("d3 values, symmetry and the abc bound") {
  CHECK(d3(1.0, 1.0, 1.0) == 1.0);
  CHECK(d3(1.0, 1.0, 2.0) == 0.0);
  MPoly a = poly::sym("a"), b = poly::sym("b"), c = poly::sym("c");
  MPoly p = d3(a, b, c);
  CHECK(p == d3(b, a, c));
  CHECK(p == d3(c, b, a));
  CHECK(p == d3(a, c, b));
  CHECK(p == d3(b, c, a));
  CHECK(p == d3(c, a, b));
  Stream rng(1, 0);
  for (int k = 0; k < 100000; ++k) {
    double x = rng.uniform(), y = rng.uniform(), z = rng.uniform();
    CHECK(d3(x, y, z) <= x * y * z + 1e-15);
  }
}

TEST_CASE("abc - d3 is nonnegative after ordering the arguments") {
  MPoly c = poly::sym("c"), k = poly::sym("k"), h = poly::sym("h");
  MPoly b = c + k, a = b + h;
  MPoly diff = a * b * c - d3(a, b, c);
  for (const auto& t : diff.terms()) CHECK(t.coeff > 0);
}

TEST_CASE("three-point closed form") {
  CHECK(det_m3_closed(1.0, 1.0, 1.0) == 9.0);
  CHECK(det_m3_closed(2.0, 3.0, 5.0) == 8.0 * 2 * 3 * 5);
  CHECK(trig_det_m3(1, 1, 1) == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(trig_det_m3(1, 1, 2) == doctest::Approx(16.0).epsilon(1e-12));
  for (std::uint64_t k = 0; k < 10000; ++k) {
    geo::DistanceSet d = geo::distances(geo::random_config(3, 2, geo::Distribution::Ball, k));
    double a = d.r(1, 2), b = d.r(1, 3), c = d.r(2, 3);
    CHECK(trig_det_m3(a, b, c) == doctest::Approx(det_m3_closed(a, b, c)).epsilon(1e-12));
  }
}

TEST_CASE("A4 forms agree and take the expected values") {
  CHECK(a4_alt(all(1.0)) == 36.0);
  CHECK(a4_sum(all(1.0)) == 36.0);
  // t = 1/2 each: e1 = 2, e2 = 3/2, e4 = 1/16
  geo::FamilyMember t = geo::tangential({0.5, 0.5, 0.5, 0.5});
  CHECK(a4_alt(edges_of(t.d)) == doctest::Approx(32 * (3 * 4 + 4 * 1.5) / 16.0).epsilon(1e-12));
  Edges4<MPoly> e = edge_symbols();
  CHECK((a4_sum(e, true) - a4_alt(e)).is_zero());
  CHECK_FALSE((a4_sum(e, false) - a4_alt(e)).is_zero());
  Stream rng(2, 0);
  for (int k = 0; k < 1000; ++k) {
    Edges4<double> r{rng.uniform(0.5, 2), rng.uniform(0.5, 2), rng.uniform(0.5, 2),
                     rng.uniform(0.5, 2), rng.uniform(0.5, 2), rng.uniform(0.5, 2)};
    CHECK(a4_sum(r) == doctest::Approx(a4_alt(r)).epsilon(1e-12));
  }
}

TEST_CASE("real part of det M4 on the regular tetrahedron and a collinear quadruple") {
  Edges4<double> e = all(1.0);
  CHECK(64 * e.product() == 64.0);
  CHECK(-4 * d3_products(e) == -4.0);
  CHECK(2 * vol2_144(e) == doctest::Approx(288.0 / 72).epsilon(1e-14));
  CHECK(re_det_m4_closed(e) == doctest::Approx(100.0).epsilon(1e-14));
  geo::Config col{{{0, 0, 0}, {1, 0, 0}, {3, 0, 0}, {3.5, 0, 0}}};
  Edges4<double> ce = edges_of(geo::distances(col));
  CHECK(re_det_m4_closed(ce) == doctest::Approx(64 * ce.product()).epsilon(1e-12));
}

TEST_CASE("closed Re det M4 matches the spinor determinant") {
  for (std::uint64_t k = 0; k < 2000; ++k) {
    geo::Config p = planar_quad(k);
    spinor::cd m = spinor::det_m(p);
    double closed = re_det_m4_closed(edges_of(geo::distances(p)));
    CHECK(std::abs(m - spinor::cd(closed, 0)) <= 1e-8 * std::abs(m));
    geo::Config g = geo::random_config(4, 32, geo::Distribution::Ball, k, 1e-2);
    spinor::cd mg = spinor::det_m(g);
    double cg = re_det_m4_closed(edges_of(geo::distances(g)));
    CHECK(std::abs(mg) >= std::abs(cg) * (1 - 1e-8));
    CHECK(cg >= 60 * edges_of(geo::distances(g)).product());
  }
}

TEST_CASE("identity rewriting 288 V^2 - 4 d3 of the products") {
  Edges4<MPoly> e = edge_symbols();
  CHECK((e0_lhs(e) - MPoly(2) * e0_rhs(e)).is_zero());
  EnResiduals reg = en_identity_residuals(all(1.0));
  CHECK(std::abs(reg.nonpositivity_margin) < 1e-12);
  CHECK(std::abs(reg.e0_residual) < 1e-12);
  for (std::uint64_t k = 0; k < 20000; ++k) {
    Edges4<double> r = edges_of(geo::distances(geo::random_config(4, 33, geo::Distribution::Ball, k)));
    EnResiduals res = en_identity_residuals(r);
    double scale = std::pow(std::max({r.r12, r.r13, r.r14, r.r23, r.r24, r.r34}), 6);
    CHECK(res.nonpositivity_margin <= 1e-9 * scale);
    CHECK(std::abs(res.e0_residual) <= 1e-10 * scale);
  }
}

TEST_CASE("upright tetrahedra") {
  UprightReport u = upright_margins(1, 1, 1, 1);
  CHECK(u.re_det == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(u.c2_margin == doctest::Approx(36.0).epsilon(1e-12));
  CHECK(u.lemma1_margin >= 0);
  CHECK(u.b1_plus_b2p >= 0);
  CHECK(std::abs(u.split_residual) < 1e-9);
  CHECK_THROWS_AS(upright_margins(1, 1, 1, 0.5), geo::ConstraintViolated);
  json s = upright_symbolic();
  CHECK(zero(s["split_dB1_B2_dB3_equals_display"]));
  CHECK(zero(s["display_equals_en_terms"]));
  CHECK_FALSE(zero(s["split_dB1_B2_B3_as_displayed"]));
  Stream rng(3, 0);
  for (int k = 0; k < 2000; ++k) {
    double a = rng.uniform(0.5, 1.5), b = rng.uniform(0.5, 1.5);
    double c = rng.uniform(std::abs(a - b) + 0.05, a + b - 0.05);
    double d = geo::circumradius(a, b, c) * (1 + 3 * rng.uniform());
    UprightReport r = upright_margins(a, b, c, d);
    CHECK(r.c2_margin >= -1e-9 * r.re_det);
    CHECK(r.lemma1_margin >= -1e-9 * std::abs(r.lemma1_inner) * std::abs(r.lemma1_inner));
  }
}

TEST_CASE("Lemma 1 polynomial has positive coefficients after ordering") {
  MPoly p = lemma1_substituted();
  CHECK(p.size() == 85);
  CHECK(p.degree() == 12);
  for (const auto& t : p.terms()) CHECK(t.coeff > 0);
}

TEST_CASE("edge-tangential tetrahedra") {
  json id = tangential_identities();
  for (const char* key : {"prod_equals_s321", "64prod_e_form", "minus4d3_e_form", "288V2_e_form", "A4_e_form",
                          "re_det_e_m_form"})
    CHECK_MESSAGE(zero(id[key]), key);
  CHECK(id["lemma2"]["matches_display"].get<bool>());
  json t = tangential_closed({1, 1, 1, 1});
  CHECK(t["re_det_m4_em_form"].get<double>() == doctest::Approx(6400.0));
  CHECK(t["re_det_m4_closed"].get<double>() == doctest::Approx(6400.0));
  CHECK(t["lemma2_margin"].get<double>() >= 0);
  CHECK(t["C3_margin"].get<double>() >= 0);
  Stream rng(4, 0);
  for (int k = 0; k < 1000; ++k) {
    std::array<double, 4> tl;
    for (double& v : tl) v = std::exp(rng.uniform(-1.5, 1.5));
    json r = tangential_closed(tl);
    double scale = r["re_det_m4_closed"].get<double>();
    CHECK(r["re_det_m4_em_form"].get<double>() == doctest::Approx(scale).epsilon(1e-10));
    CHECK(r["lemma2_margin"].get<double>() >= -1e-9 * scale * scale);
    CHECK(r["remark_first_margin"].get<double>() >= -1e-9 * scale);
    CHECK(r["remark_second_margin"].get<double>() >= -1e-9 * scale);
    CHECK(r["C3_margin"].get<double>() >= -1e-9 * scale * scale);
  }
}

TEST_CASE("isosceles tetrahedra") {
  json id = isosceles_identities();
  CHECK(zero(id["zero_identity"]));
  CHECK(zero(id["A4_equals_4(d3+8abc)d3"]));
  CHECK(zero(id["re_det_equals_(2d3+8abc)^2"]));
  json r = isosceles_closed(1, 1, 1);
  CHECK(r["re_det_m4"].get<double>() == doctest::Approx(100.0));
  CHECK(r["C3_margin"].get<double>() == doctest::Approx(3439.0));
  CHECK(std::abs(r["zero_identity_residual"].get<double>()) < 1e-12);
  CHECK(r["chain_ok"].get<bool>());
  json degenerate = isosceles_closed(1, 1, 2);
  CHECK(degenerate["re_det_m4"].get<double>() == doctest::Approx(64.0 * 4));
}

TEST_CASE("trigonometric Re det M4 on planar quadrilaterals") {
  geo::Config square{{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}};
  json s = trig_re_det_m4(square, true);
  CHECK(s["relative_residual"].get<double>() < 1e-9);
  for (std::uint64_t k = 0; k < 500; ++k) {
    json q = trig_re_det_m4(planar_quad(k), false);
    CHECK(q["relative_residual"].get<double>() < 1e-9);
    CHECK(q["c_l_in_range"].get<bool>());
  }
  Stream rng(5, 0);
  for (int k = 0; k < 500; ++k) {
    std::array<double, 4> phi;
    for (double& v : phi) v = rng.uniform(0, 6.28);
    std::sort(phi.begin(), phi.end());
    if (phi[1] - phi[0] < 1e-2 || phi[2] - phi[1] < 1e-2 || phi[3] - phi[2] < 1e-2) continue;
    json c = trig_re_det_m4(geo::cyclic(phi).config, true);
    CHECK(std::abs(c["ptolemy_residual"].get<double>()) < 1e-9);
    CHECK(c["chain_ok"].get<bool>());
  }
}

TEST_CASE("symbolic suite") {
  json j = symbolic_suite();
  CHECK(zero(j["A4_sum_equals_alt"]));
  CHECK(zero(j["e0_identity"]));
  CHECK(zero(j["d3_plus_8abc_sum_form"]));
  CHECK_FALSE(zero(j["A4_displayed_minus_sign_equals_alt"]));
  CHECK_FALSE(zero(j["e0_identity_as_displayed"]));
}
