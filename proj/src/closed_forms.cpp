#include "atiyah/closed_forms.hpp"

#include <algorithm>
#include <optional>

#include "atiyah/spinor.hpp"

namespace atiyah::closed {

using poly::Partition;
using poly::Var;

Edges4<double> edges_of(const geo::DistanceSet& d) {
  if (d.n != 4) throw geo::GeometryError("edges_of needs four points");
  return {d.r(1, 2), d.r(1, 3), d.r(1, 4), d.r(2, 3), d.r(2, 4), d.r(3, 4)};
}

Edges4<MPoly> edge_symbols() {
  return {poly::sym("r12"), poly::sym("r13"), poly::sym("r14"), poly::sym("r23"), poly::sym("r24"), poly::sym("r34")};
}

MPoly lemma1_substituted() {
  MPoly c = poly::sym("c"), h = poly::sym("h"), k = poly::sym("k");
  MPoly b = c + k, a = b + h;
  return lemma1_difference(a, b, c);
}

namespace {

MPoly e_t(int k) { return poly::elementary(k, poly::t_vars(4)); }

MPoly face_factor_product() {
  MPoly p(1);
  const int f[4][3] = {{1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}};
  for (const auto& q : f) {
    MPoly a = poly::t(q[0]), b = poly::t(q[1]), c = poly::t(q[2]);
    p *= (a + b + c) * (a * b + a * c + b * c);
  }
  return p;
}

MPoly m211_t() { return poly::monomial_sym(Partition({2, 1, 1}), poly::t_vars(4)); }

Edges4<MPoly> tangential_symbols() {
  auto r = [](int i, int j) { return poly::t(i) + poly::t(j); };
  return {r(1, 2), r(1, 3), r(1, 4), r(2, 3), r(2, 4), r(3, 4)};
}

json residual_entry(const MPoly& residual) {
  return {{"zero", residual.is_zero()}, {"residual_terms", residual.size()}};
}

}  // namespace

MPoly lemma2_difference() {
  MPoly e2 = e_t(2), e4 = e_t(4);
  MPoly q = MPoly(2) * e4 + m211_t();
  return e2 * e2 * q * q - face_factor_product();
}

EnResiduals en_identity_residuals(const Edges4<double>& e) {
  double lhs = e0_lhs(e), rhs = e0_rhs(e);
  return {lhs - 2 * rhs, lhs - rhs, lhs};
}

json UprightReport::to_json() const {
  return {{"R", R},
          {"B1", b1},
          {"B2", b2},
          {"B3", b3},
          {"B2_prime", b2p},
          {"B2_double_prime", b2pp},
          {"B1_plus_B2_prime", b1_plus_b2p},
          {"lemma1_margin", lemma1_margin},
          {"lemma1_bracket", lemma1_inner},
          {"split_residual", split_residual},
          {"re_det_m4", re_det},
          {"C2_margin", c2_margin}};
}

UprightReport upright_margins(double a, double b, double c, double d) {
  geo::FamilyMember f = geo::upright(a, b, c, d);
  UprightReport r;
  r.R = geo::circumradius(a, b, c);
  r.b1 = upright_b1(a, b, c, d);
  r.b2 = upright_b2(a, b, c, d);
  r.b3 = upright_b3(a, b, c, d);
  double pa = a * a * b * b * c + a * a * b * c * c, pb = a * a * b * b * c + a * b * b * c * c,
         pc = a * a * b * c * c + a * b * b * c * c;
  r.b2p = pa * (2 - a / r.R) + pb * (2 - b / r.R) + pc * (2 - c / r.R);
  r.b2pp = pa * (a * d / r.R - a) + pb * (b * d / r.R - b) + pc * (c * d / r.R - c);
  r.b1_plus_b2p = r.b1 + r.b2p;
  r.lemma1_margin = lemma1_difference(a, b, c);
  r.lemma1_inner = 4 * a * b * c * (2 * a * b * c + (a + b + c) * (a * b + a * c + b * c)) -
                   (a * a + b * b + c * c) * D3(a, b, c);
  Edges4<double> e = upright_edges(a, b, c, d);
  r.split_residual = d * r.b1 + r.b2 + d * r.b3 - (-4 * d3_products(e) + a4_alt(e));
  r.re_det = re_det_m4_closed(e, 288 * geo::vol2(f.d));
  r.c2_margin = r.re_det - 64 * e.product();
  return r;
}

json upright_symbolic() {
  MPoly a = poly::sym("a"), b = poly::sym("b"), c = poly::sym("c"), d = poly::sym("d");
  Edges4<MPoly> e = upright_edges(a, b, c, d);
  MPoly b1 = upright_b1(a, b, c, d), b2 = upright_b2(a, b, c, d), b3 = upright_b3(a, b, c, d);
  MPoly shown = upright_bracketed(a, b, c, d);
  MPoly direct = MPoly(-4) * d3_products(e) + a4_alt(e);
  return {{"split_dB1_B2_dB3_equals_display", residual_entry(d * b1 + b2 + d * b3 - shown)},
          {"split_dB1_B2_B3_as_displayed", residual_entry(d * b1 + b2 + b3 - shown)},
          {"display_equals_en_terms", residual_entry(shown - direct)}};
}

json chain_json(const std::vector<ChainStep>& steps) {
  json j = json::array();
  for (const auto& s : steps)
    j.push_back({{"step", s.label}, {"relation", s.relation}, {"lhs", s.lhs}, {"rhs", s.rhs}, {"ok", s.ok}});
  return j;
}

void add_step(std::vector<ChainStep>& steps, std::string relation, std::string label, double lhs, double rhs,
              double tol) {
  double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  bool ok = relation == "=" ? std::abs(lhs - rhs) <= tol * scale : lhs - rhs >= -tol * scale;
  steps.push_back({std::move(relation), std::move(label), lhs, rhs, ok});
}

json tangential_identities() {
  Edges4<MPoly> e = tangential_symbols();
  MPoly e1 = e_t(1), e2 = e_t(2), e3 = e_t(3), e4 = e_t(4);
  MPoly v288 = MPoly(2) * vol2_144(e);
  json j;
  MPoly s321 = poly::schur_jt(Partition({3, 2, 1}), poly::t_vars(4));
  j["prod_equals_s321"] = residual_entry(e.product() - s321);
  j["64prod_e_form"] = residual_entry(MPoly(64) * e.product() - (64 * e3 * e2 * e1 - 64 * e4 * e1 * e1 - 64 * e3 * e3));
  j["minus4d3_e_form"] =
      residual_entry(MPoly(-4) * d3_products(e) - (128 * e4 * e2 - 32 * e4 * e1 * e1 - 32 * e3 * e3));
  j["288V2_e_form"] = residual_entry(v288 - (128 * e4 * e2 - 32 * e3 * e3));
  j["A4_e_form"] = residual_entry(a4_sum(e, true) - 32 * (3 * e1 * e1 + 4 * e2) * e4);
  j["re_det_e_m_form"] =
      residual_entry(re_det_m4_closed(e, v288) - (64 * e2 * (2 * e4 + m211_t()) + MPoly(4) * v288));
  // per-face ingredients
  bool faces_ok = true, vertex_ok = true, vertex_literal = true;
  for (int l = 1; l <= 4; ++l) {
    int f[3], m = 0;
    for (int v = 1; v <= 4; ++v)
      if (v != l) f[m++] = v;
    MPoly ti = poly::t(f[0]), tj = poly::t(f[1]), tk = poly::t(f[2]), tl = poly::t(l);
    if (!(d3(e.r(f[0], f[1]), e.r(f[0], f[2]), e.r(f[1], f[2])) == 8 * ti * tj * tk)) faces_ok = false;
    MPoly inner;
    for (int idx = 0; idx < 3; ++idx) {
      int i = f[idx], jj = f[(idx + 1) % 3], k = f[(idx + 2) % 3];
      MPoly s = e.r(l, jj) + e.r(l, k);
      inner += e.r(l, i) * (s * s - e.r(jj, k) * e.r(jj, k));
    }
    MPoly pairs = ti * tj + ti * tk + tj * tk;
    if (!(inner == 4 * (3 * tl * e1 + 2 * pairs) * tl)) vertex_ok = false;
    if (!(inner == 4 * (3 * tl * e1 + pairs) * tl)) vertex_literal = false;
  }
  j["face_d3_equals_8ttt"] = faces_ok;
  j["vertex_sum_4(3tl_e1+2pairs)tl"] = vertex_ok;
  j["vertex_sum_4(3tl_e1+pairs)tl_as_displayed"] = vertex_literal;
  bool face_c3 = true;
  const int f4[4][3] = {{1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}};
  for (const auto& q : f4) {
    MPoly a = poly::t(q[0]), b = poly::t(q[1]), c = poly::t(q[2]);
    MPoly lhs = det_m3_closed(e.r(q[0], q[1]), e.r(q[0], q[2]), e.r(q[1], q[2]));
    if (!(lhs == 8 * (a + b + c) * (a * b + a * c + b * c))) face_c3 = false;
  }
  j["face_det_m3_form"] = face_c3;

  auto coeffs = poly::to_monomial_basis(lemma2_difference(), poly::t_vars(4));
  json lc = json::object();
  for (const auto& [lambda, v] : coeffs) lc[lambda.label()] = integer_json(v);
  std::map<std::string, int> expected{{"6321", 1}, {"6222", 3}, {"543", 1},  {"5421", 2}, {"5322", 7}, {"5331", 5},
                                      {"444", 3},  {"4431", 7}, {"4422", 8}, {"4332", 8}, {"3333", 3}};
  bool match = coeffs.size() == expected.size();
  for (const auto& [lambda, v] : coeffs) {
    auto it = expected.find(lambda.label());
    if (it == expected.end() || v != it->second) match = false;
  }
  j["lemma2"] = {{"coefficients", lc}, {"matches_display", match}};
  return j;
}

namespace {

struct TangentialValues {
  double e1, e2, e3, e4, m211, faces_sum3, faces_pair, v288;
};

TangentialValues tangential_values(const std::array<double, 4>& t, double v288) {
  TangentialValues v{};
  v.e1 = t[0] + t[1] + t[2] + t[3];
  v.e2 = v.e3 = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      v.e2 += t[i] * t[j];
      for (int k = j + 1; k < 4; ++k) v.e3 += t[i] * t[j] * t[k];
    }
  v.e4 = t[0] * t[1] * t[2] * t[3];
  v.m211 = v.e3 * v.e1 - 4 * v.e4;
  v.faces_sum3 = v.faces_pair = 1;
  const int f[4][3] = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
  for (const auto& q : f) {
    double a = t[q[0]], b = t[q[1]], c = t[q[2]];
    v.faces_sum3 *= a + b + c;
    v.faces_pair *= a * b + a * c + b * c;
  }
  v.v288 = v288;
  return v;
}

std::optional<spinor::cd> geometric_det(const geo::Config& c) {
  try {
    return spinor::det_m(c);
  } catch (const geo::GeometryError&) {
    return std::nullopt;
  }
}

}  // namespace

json tangential_closed(const std::array<double, 4>& t) {
  Edges4<double> e;
  for (double v : t)
    if (!(v > 0)) throw geo::ConstraintViolated("tangential: t_i > 0");
  e = {t[0] + t[1], t[0] + t[2], t[0] + t[3], t[1] + t[2], t[1] + t[3], t[2] + t[3]};
  double v288 = 2 * vol2_144(e);
  json j;
  j["inputs"] = t;
  std::optional<geo::FamilyMember> fam;
  try {
    fam = geo::tangential(t);
  } catch (const geo::NotRealizable& ex) {
    j["realizable"] = false;
    j["not_realizable"] = ex.what();
  }
  if (fam) j["realizable"] = true;
  TangentialValues v = tangential_values(t, v288);
  double em_form = 64 * v.e2 * (2 * v.e4 + v.m211);
  double re = em_form + 4 * v.v288;
  j["re_det_m4_em_form"] = re;
  j["re_det_m4_closed"] = re_det_m4_closed(e, v288);
  j["lemma2_margin"] = v.e2 * v.e2 * (2 * v.e4 + v.m211) * (2 * v.e4 + v.m211) - v.faces_sum3 * v.faces_pair;
  j["remark_first_margin"] = v.faces_sum3 - v.e2 * v.e2;
  j["remark_second_margin"] = (2 * v.e4 + v.m211) * (2 * v.e4 + v.m211) - v.faces_pair;
  double c3_rhs = std::pow(8.0, 4) * v.faces_sum3 * v.faces_pair;
  j["C3_margin"] = em_form * em_form - c3_rhs;
  std::vector<ChainStep> steps;
  if (fam) {
    auto det = geometric_det(fam->config);
    if (det) {
      j["det_m4"] = {det->real(), det->imag()};
      j["C2_margin"] = std::abs(*det) - 64 * e.product();
      add_step(steps, ">=", "|det M4|^2 >= Re(det M4)^2", std::norm(*det), re * re);
    }
  }
  add_step(steps, ">=", "Re(det M4)^2 >= [64 e2 (2 e4 + m211)]^2", re * re, em_form * em_form);
  add_step(steps, ">=", "[64 e2 (2 e4 + m211)]^2 >= 8^4 prod (t+t+t)(tt+tt+tt)", em_form * em_form, c3_rhs);
  add_step(steps, "=", "8^4 prod (t+t+t)(tt+tt+tt) = prod (d3 + 8 rrr)", c3_rhs, face_product(e));
  j["chain"] = chain_json(steps);
  j["chain_ok"] = std::all_of(steps.begin(), steps.end(), [](const ChainStep& s) { return s.ok; });
  return j;
}

json isosceles_identities() {
  MPoly a = poly::sym("a"), b = poly::sym("b"), c = poly::sym("c");
  Edges4<MPoly> e{c, b, a, a, b, c};
  MPoly v288 = MPoly(2) * vol2_144(e);
  MPoly dd = d3(a, b, c), abc = a * b * c;
  MPoly full = MPoly(2) * dd + 8 * abc;
  json j;
  j["zero_identity"] = residual_entry(MPoly(-4) * d3_products(e) + v288);
  j["A4_equals_4(d3+8abc)d3"] = residual_entry(a4_alt(e) - 4 * (dd + 8 * abc) * dd);
  j["A4_equals_(2d3+8abc)^2_as_displayed"] = residual_entry(a4_alt(e) - full * full);
  j["re_det_equals_64a2b2c2_plus_4(d3+8abc)d3"] =
      residual_entry(re_det_m4_closed(e, v288) - (64 * abc * abc + 4 * (dd + 8 * abc) * dd));
  j["re_det_equals_(2d3+8abc)^2"] = residual_entry(re_det_m4_closed(e, v288) - full * full);
  return j;
}

json isosceles_closed(double a, double b, double c) {
  Edges4<double> e{c, b, a, a, b, c};
  json j;
  j["inputs"] = {a, b, c};
  double dd = d3(a, b, c), abc = a * b * c;
  double v288 = 2 * vol2_144(e);
  j["zero_identity_residual"] = -4 * d3_products(e) + v288;
  double re = re_det_m4_closed(e, v288);
  double full = 2 * dd + 8 * abc, face = dd + 8 * abc;
  j["re_det_m4"] = re;
  j["re_det_closed_form"] = full * full;
  j["C3_margin"] = std::pow(full, 4) - std::pow(face, 4);
  std::vector<ChainStep> steps;
  std::optional<geo::FamilyMember> fam;
  try {
    fam = geo::isosceles(a, b, c);
    j["realizable"] = true;
  } catch (const geo::NotRealizable& ex) {
    j["realizable"] = false;
    j["not_realizable"] = ex.what();
  }
  if (fam) {
    auto det = geometric_det(fam->config);
    if (det) {
      j["det_m4"] = {det->real(), det->imag()};
      j["C2_margin"] = std::abs(*det) - 64 * e.product();
      add_step(steps, ">=", "|det M4|^2 >= Re(det M4)^2", std::norm(*det), re * re);
    }
  }
  add_step(steps, "=", "Re(det M4)^2 = (2 d3 + 8abc)^4", re * re, std::pow(full, 4));
  add_step(steps, ">=", "(2 d3 + 8abc)^4 >= (d3 + 8abc)^4", std::pow(full, 4), std::pow(face, 4));
  add_step(steps, "=", "(d3 + 8abc)^4 = prod (d3 + 8 rrr)", std::pow(face, 4), face_product(e));
  j["chain"] = chain_json(steps);
  j["chain_ok"] = std::all_of(steps.begin(), steps.end(), [](const ChainStep& s) { return s.ok; });
  return j;
}

double trig_det_m3(double r12, double r13, double r23) {
  return 4 * r12 * r13 * r23 * geo::halfangle_cos2(r12, r13, r23);
}

json trig_re_det_m4(const geo::Config& c, bool cyclic_chain) {
  geo::QuadAngles q = geo::quad_angle_data(c);
  geo::DistanceSet d = geo::distances(c);
  Edges4<double> e = edges_of(d);
  double pr = e.product();
  double s = 0;
  for (int l = 0; l < 4; ++l) s += q.c_hat[l] * (q.c[l] - 2);
  double trig = 16 * pr * (6 - q.moebius_c + s);
  double closed = re_det_m4_closed(e);
  json j;
  j["c_l"] = q.c;
  j["c_hat_l"] = q.c_hat;
  j["moebius_c"] = q.moebius_c;
  j["moebius_c_from_products"] = q.moebius_c_sides;
  j["moebius_angles"] = q.moebius_angles;
  j["convex"] = q.convex;
  j["convex_order"] = q.convex_order;
  j["trig_re_det_m4"] = trig;
  j["closed_re_det_m4"] = closed;
  j["relative_residual"] = std::abs(trig - closed) / std::max(std::abs(closed), 1e-300);
  j["A4_trig"] = 16 * pr * s;
  j["A4_closed"] = a4_alt(e);
  j["minus4d3_trig"] = -16 * pr * (q.moebius_c - 2);
  j["minus4d3_closed"] = -4 * d3_products(e);
  bool c_range = true;
  for (double v : q.c) c_range = c_range && v >= 2 - 1e-12 && v <= 2.25 + 1e-12;
  j["c_l_in_range"] = c_range;
  if (!cyclic_chain) return j;

  j["ptolemy_residual"] = q.moebius_c - 2;
  j["ptolemy_residual_from_products"] = q.moebius_c_sides - 2;
  std::array<double, 4> chat_res{};
  for (int l = 0; l < 4; ++l) chat_res[l] = q.c_hat[l] - (q.c[l] - std::cos(q.tri[l].Y));
  j["c_hat_relation_residuals"] = chat_res;

  double sum_cm2 = 0, sum_sq = 0, sum_c = 0, prod_c = 1, exact = 0, relaxed = 0;
  for (int l = 0; l < 4; ++l) {
    sum_cm2 += q.c[l] - 2;
    sum_sq += (q.c[l] - 2) * (q.c[l] - 2);
    sum_c += q.c[l];
    prod_c *= q.c[l];
    exact += (q.c[l] - std::cos(q.tri[l].Y)) * (q.c[l] - 2);
    relaxed += (q.c[l] - 1) * (q.c[l] - 2);
  }
  double s0 = pr * (64 + 16 * exact), s1 = pr * (64 + 16 * relaxed), s2 = pr * (64 + 16 * sum_cm2 + 16 * sum_sq),
         s3 = pr * (64 + 16 * sum_cm2 + 4 * sum_cm2 * sum_cm2),
         s4 = pr * ((8 + sum_cm2) * (8 + sum_cm2) + 3 * sum_cm2 * sum_cm2),
         s5 = pr * (sum_c * sum_c + 3 * sum_cm2 * sum_cm2), s6 = pr * sum_c * sum_c, s7 = 16 * std::sqrt(prod_c) * pr;
  std::vector<ChainStep> steps;
  add_step(steps, "=", "Re(det M4) = prod r (64 + 16 sum (c_l - cos Y_l)(c_l - 2))", closed, s0);
  add_step(steps, ">=", "... >= prod r (64 + 16 sum (c_l - 1)(c_l - 2))", s0, s1);
  add_step(steps, "=", "... = prod r (64 + 16 sum (c_l - 2) + 16 sum (c_l - 2)^2)", s1, s2);
  add_step(steps, ">=", "... >= prod r (64 + 16 sum (c_l - 2) + 4 (sum (c_l - 2))^2)", s2, s3);
  add_step(steps, "=", "... = prod r ((8 + sum (c_l - 2))^2 + 3 (sum (c_l - 2))^2)", s3, s4);
  add_step(steps, "=", "... = prod r ((sum c_l)^2 + 3 (sum (c_l - 2))^2)", s4, s5);
  add_step(steps, ">=", "... >= prod r (sum c_l)^2", s5, s6);
  add_step(steps, ">=", "... >= 16 sqrt(c1 c2 c3 c4) prod r", s6, s7);
  double faces = face_product(e);
  add_step(steps, "=", "4^4 c1 c2 c3 c4 prod r^2 = prod (d3 + 8 rrr)", 256 * prod_c * pr * pr, faces);
  auto det = geometric_det(c);
  if (det) {
    j["det_m4"] = {det->real(), det->imag()};
    add_step(steps, ">=", "|det M4|^2 >= prod (d3 + 8 rrr)", std::norm(*det), faces);
  }
  j["chain"] = chain_json(steps);
  j["chain_ok"] = std::all_of(steps.begin(), steps.end(), [](const ChainStep& st) { return st.ok; });
  // the display writes (3 sum (c_l - 2))^2 in the second-to-last equality
  double shown = pr * (sum_c * sum_c + 9 * sum_cm2 * sum_cm2);
  j["displayed_square_of_3sum_equals_previous"] = std::abs(shown - s4) <= 1e-9 * std::max(std::abs(s4), 1e-300);
  return j;
}

json symbolic_suite() {
  Edges4<MPoly> e = edge_symbols();
  json j;
  MPoly sum_plus = a4_sum(e, true), alt = a4_alt(e), sum_minus = a4_sum(e, false);
  j["A4_sum_equals_alt"] = residual_entry(sum_plus - alt);
  j["A4_displayed_minus_sign_equals_alt"] = residual_entry(sum_minus - alt);
  j["e0_identity"] = residual_entry(e0_lhs(e) - MPoly(2) * e0_rhs(e));
  j["e0_identity_as_displayed"] = residual_entry(e0_lhs(e) - e0_rhs(e));
  MPoly a = poly::sym("a"), b = poly::sym("b"), c = poly::sym("c");
  j["d3_plus_8abc_sum_form"] =
      residual_entry(det_m3_closed(a, b, c) -
                     (a * ((b + c) * (b + c) - a * a) + b * ((c + a) * (c + a) - b * b) + c * ((a + b) * (a + b) - c * c)));
  j["tangential"] = tangential_identities();
  j["isosceles"] = isosceles_identities();
  j["upright"] = upright_symbolic();
  return j;
}

}  // namespace atiyah::closed
