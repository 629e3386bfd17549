#pragma once

// Eastwood-Norbury closed forms for three and four points and the
// special-family reductions built on them.  Every formula is a template so
// it runs on doubles and on exact polynomials alike.

#include <array>
#include <cmath>
#include <string>

#include "atiyah/exactpoly.hpp"
#include "atiyah/geometry.hpp"
#include "atiyah/report.hpp"

namespace atiyah::closed {

using poly::MPoly;

template <class T>
T d3(const T& a, const T& b, const T& c) {
  return (a + b - c) * (b + c - a) * (c + a - b);
}

template <class T>
T D3(const T& a, const T& b, const T& c) {
  return (a + b + c) * d3(a, b, c);
}

template <class T>
T det_m3_closed(const T& r12, const T& r13, const T& r23) {
  return d3(r12, r13, r23) + T(8) * r12 * r13 * r23;
}

/// Six edge lengths of a labelled tetrahedron.
template <class T>
struct Edges4 {
  T r12, r13, r14, r23, r24, r34;

  const T& r(int i, int j) const {
    if (i > j) std::swap(i, j);
    switch (i * 10 + j) {
      case 12: return r12;
      case 13: return r13;
      case 14: return r14;
      case 23: return r23;
      case 24: return r24;
      default: return r34;
    }
  }
  T product() const { return r12 * r13 * r14 * r23 * r24 * r34; }
};

Edges4<double> edges_of(const geo::DistanceSet& d);
Edges4<MPoly> edge_symbols();  // r12, ..., r34 as generic symbols

/// 144 V² as a polynomial in the squared edges.
template <class T>
T vol2_144(const Edges4<T>& e) {
  auto s = [&](int i, int j) { return e.r(i, j) * e.r(i, j); };
  const int pairs[3][4] = {{1, 2, 3, 4}, {1, 3, 2, 4}, {1, 4, 2, 3}};
  T v(0);
  for (const auto& p : pairs) {
    T a = s(p[0], p[1]), b = s(p[2], p[3]);
    T rest = s(p[0], p[2]) + s(p[0], p[3]) + s(p[1], p[2]) + s(p[1], p[3]);
    v += a * b * rest - a * a * b - a * b * b;
  }
  const int faces[4][3] = {{1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}};
  for (const auto& f : faces) v -= s(f[0], f[1]) * s(f[0], f[2]) * s(f[1], f[2]);
  return v;
}

template <class T>
T d3_products(const Edges4<T>& e) {
  return d3(e.r12 * e.r34, e.r13 * e.r24, e.r14 * e.r23);
}

/// A4 as the double sum over vertices l and neighbours i; `plus` selects
/// (r_lj + r_lk)², otherwise the (r_lj - r_lk)² of the first display.
template <class T>
T a4_sum(const Edges4<T>& e, bool plus = true) {
  T total(0);
  for (int l = 1; l <= 4; ++l) {
    int face[3], m = 0;
    for (int v = 1; v <= 4; ++v)
      if (v != l) face[m++] = v;
    T inner(0);
    for (int idx = 0; idx < 3; ++idx) {
      int i = face[idx], j = face[(idx + 1) % 3], k = face[(idx + 2) % 3];
      T s = plus ? e.r(l, j) + e.r(l, k) : e.r(l, j) - e.r(l, k);
      inner += e.r(l, i) * (s * s - e.r(j, k) * e.r(j, k));
    }
    total += inner * d3(e.r(face[0], face[1]), e.r(face[0], face[2]), e.r(face[1], face[2]));
  }
  return total;
}

/// A4 in the alternative form with d3 + 8∏r per vertex.
template <class T>
T a4_alt(const Edges4<T>& e) {
  T total(0);
  for (int l = 1; l <= 4; ++l) {
    int f[3], m = 0;
    for (int v = 1; v <= 4; ++v)
      if (v != l) f[m++] = v;
    int i = f[0], j = f[1], k = f[2];
    T ril = e.r(i, l), rjl = e.r(j, l), rkl = e.r(k, l);
    T vertex = d3(ril, rjl, rkl) + T(8) * ril * rjl * rkl + ril * (ril * ril - e.r(j, k) * e.r(j, k)) +
               rjl * (rjl * rjl - e.r(i, k) * e.r(i, k)) + rkl * (rkl * rkl - e.r(i, j) * e.r(i, j));
    total += vertex * d3(e.r(i, j), e.r(i, k), e.r(j, k));
  }
  return total;
}

/// Re det M4 = 64∏r - 4 d3(r12 r34, r13 r24, r14 r23) + A4 + 288 V², with 288 V² = 2 · vol2_144.
template <class T>
T re_det_m4_closed(const Edges4<T>& e, const T& v2_288) {
  return T(64) * e.product() - T(4) * d3_products(e) + a4_alt(e) + v2_288;
}

template <class T>
T re_det_m4_closed(const Edges4<T>& e) {
  return re_det_m4_closed(e, T(2) * vol2_144(e));
}

/// Right-hand side of the displayed rewriting of 288 V² - 4 d3(products); the
/// identity holds with this right-hand side doubled.
template <class T>
T e0_rhs(const Edges4<T>& e) {
  auto sq = [](const T& x) { return x * x; };
  T p12 = sq(e.r12 * e.r34), p13 = sq(e.r13 * e.r24), p14 = sq(e.r14 * e.r23);
  T v = sq(e.r12 - e.r34) * (p13 + p14 - p12) + sq(e.r13 - e.r24) * (p12 + p14 - p13) +
        sq(e.r14 - e.r23) * (p12 + p13 - p14);
  v += T(4) * e.product();
  v -= sq(e.r12 * e.r13 * e.r23) + sq(e.r12 * e.r14 * e.r24) + sq(e.r13 * e.r14 * e.r34) +
       sq(e.r23 * e.r24 * e.r34);
  return v;
}

template <class T>
T e0_lhs(const Edges4<T>& e) {
  return T(2) * vol2_144(e) - T(4) * d3_products(e);
}

struct EnResiduals {
  double e0_residual = 0;            // e0_lhs - 2 e0_rhs
  double e0_displayed_residual = 0;  // e0_lhs - e0_rhs
  double nonpositivity_margin = 0;   // e0_lhs, expected <= 0
};
EnResiduals en_identity_residuals(const Edges4<double>& e);

/// ∏ over faces of (d3 + 8∏r).
template <class T>
T face_product(const Edges4<T>& e) {
  const int f[4][3] = {{1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}};
  T p(1);
  for (const auto& t : f) p *= det_m3_closed(e.r(t[0], t[1]), e.r(t[0], t[2]), e.r(t[1], t[2]));
  return p;
}

// Upright tetrahedra: r23 = a, r13 = b, r12 = c, r14 = r24 = r34 = d.

template <class T>
Edges4<T> upright_edges(const T& a, const T& b, const T& c, const T& d) {
  return {c, b, d, a, d, d};
}

template <class T>
T upright_b1(const T& a, const T& b, const T& c, const T& d) {
  return (T(8) * d * d - a * a - b * b - c * c) * d3(a, b, c);
}

template <class T>
T upright_b2(const T& a, const T& b, const T& c, const T& d) {
  return (a * a * b * b * c + a * a * b * c * c) * (T(2) * d - a) +
         (a * a * b * b * c + a * b * b * c * c) * (T(2) * d - b) +
         (a * a * b * c * c + a * b * b * c * c) * (T(2) * d - c);
}

template <class T>
T upright_b3(const T& a, const T& b, const T& c, const T& d) {
  return (T(4) * b * c + (b + c) * (b + c) - a * a) * a * a * (T(2) * d - a) +
         (T(4) * a * c + (a + c) * (a + c) - b * b) * b * b * (T(2) * d - b) +
         (T(4) * a * b + (a + b) * (a + b) - c * c) * c * c * (T(2) * d - c);
}

/// The displayed expansion of -4 d3(products) + A4 for upright tetrahedra.
template <class T>
T upright_bracketed(const T& a, const T& b, const T& c, const T& d) {
  T v = T(-4) * d * d * d * d3(a, b, c);
  v += (c * (b * b + T(2) * b * d) + b * (c * c + T(2) * c * d) + d * ((b + c) * (b + c) - a * a)) * a * a *
       (T(2) * d - a);
  v += (c * (a * a + T(2) * a * d) + a * (c * c + T(2) * c * d) + d * ((c + a) * (c + a) - b * b)) * b * b *
       (T(2) * d - b);
  v += (b * (a * a + T(2) * a * d) + a * (b * b + T(2) * b * d) + d * ((a + b) * (a + b) - c * c)) * c * c *
       (T(2) * d - c);
  v += (d * (T(4) * d * d - a * a) + d * (T(4) * d * d - b * b) + d * (T(4) * d * d - c * c)) * d3(a, b, c);
  return v;
}

/// Lemma 1: [4abc(2abc + e1 e2) - (a²+b²+c²) D3]² - e1² (Σ a²b)² D3.
template <class T>
T lemma1_difference(const T& a, const T& b, const T& c) {
  T e1 = a + b + c, e2 = a * b + a * c + b * c;
  T big = D3(a, b, c);
  T inner = T(4) * a * b * c * (T(2) * a * b * c + e1 * e2) - (a * a + b * b + c * c) * big;
  T mixed = a * a * b + a * b * b + a * a * c + a * c * c + b * b * c + b * c * c;
  return inner * inner - e1 * e1 * mixed * mixed * big;
}

/// Lemma 1 after a = c + k + h, b = c + k, over the symbols c, h, k.
MPoly lemma1_substituted();

/// Lemma 2: e2² (2e4 + m211)² - ∏_{i<j<k} (t_i+t_j+t_k)(t_i t_j + t_i t_k + t_j t_k), in t1..t4.
MPoly lemma2_difference();

struct UprightReport {
  double b1 = 0, b2 = 0, b3 = 0, b2p = 0, b2pp = 0, R = 0;
  double b1_plus_b2p = 0, lemma1_margin = 0, lemma1_inner = 0;
  double re_det = 0, c2_margin = 0, split_residual = 0;
  json to_json() const;
};
/// Throws geo::ConstraintViolated if d < R.
UprightReport upright_margins(double a, double b, double c, double d);
/// dB1 + B2 + dB3 and the literal dB1 + B2 + B3 against the bracketed display,
/// and the display against -4 d3(products) + A4 under the upright substitution.
json upright_symbolic();

struct ChainStep {
  std::string relation;  // ">=" or "="
  std::string label;
  double lhs = 0, rhs = 0;
  bool ok = false;
};
json chain_json(const std::vector<ChainStep>& steps);
/// Appends a step, judging it with relative tolerance 1e-9 of the larger side.
void add_step(std::vector<ChainStep>& steps, std::string relation, std::string label, double lhs, double rhs,
              double tol = 1e-9);

/// Five displayed symmetric-function identities in t1..t4; true entries mean residual ≡ 0.
json tangential_identities();
json tangential_closed(const std::array<double, 4>& t);

json isosceles_identities();
json isosceles_closed(double a, double b, double c);

double trig_det_m3(double r12, double r13, double r23);
/// Trigonometric Re det M4 of a planar quadrilateral, its comparison with the
/// closed form, and for cyclic quadrilaterals the displayed inequality chain.
json trig_re_det_m4(const geo::Config& c, bool cyclic_chain);

/// Symbolic identity suite; every entry is a residual that must vanish.
json symbolic_suite();

}  // namespace atiyah::closed
