#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "atiyah/spinor.hpp"
#include "atiyah/typea.hpp"

using namespace atiyah;
using namespace atiyah::typea;
using poly::X;
using poly::xi;

namespace {

double at(const MPoly& p, const std::vector<double>& x, const std::vector<double>& z) {
  std::map<Var, double> point;
  for (std::size_t i = 0; i < x.size(); ++i) point[Var::x(static_cast<int>(i) + 1)] = x[i];
  for (std::size_t i = 0; i < z.size(); ++i) point[Var::xi(static_cast<int>(i) + 1)] = z[i];
  return p.evaluate(point);
}

bool coefficientwise_nonneg(const MPoly& p) {
  for (const auto& t : p.terms())
    if (t.coeff < 0) return false;
  return true;
}

Mode numeric(std::size_t samples, std::uint64_t seed = 7) {
  Mode m;
  m.symbolic = false;
  m.samples = samples;
  m.seed = seed;
  return m;
}

}  // namespace

TEST_CASE("Psi polynomials") {
  CHECK(psi({}, {}) == MPoly(1));
  CHECK(psi({2}, {3}) == 1 + xi(3) * X(2));
  MPoly p12 = psi({1, 2}, {1, 2});
  CHECK(at(p12, {3, 2}, {1, 2}) == 22.0);
  CHECK(p12 == psi({1}, {1}) * psi({2}, {2}) + xi(2) * (X(1) - X(2)));
  MPoly e1 = xi(1) + xi(2) + xi(3), e2 = xi(1) * xi(2) + xi(1) * xi(3) + xi(2) * xi(3), e3 = xi(1) * xi(2) * xi(3);
  CHECK(psi({1, 2, 3}, {1, 2, 3}) == 1 + e1 * X(1) + e2 * X(1) * X(2) + e3 * X(1) * X(2) * X(3));
  // repeated indices: e_k taken over the multiset
  CHECK(psi({1, 1}, {2, 2}) == 1 + 2 * xi(2) * X(1) + xi(2) * xi(2) * X(1) * X(1));
  CHECK_THROWS_AS(psi({1, 2}, {1}), IndexError);
  CHECK_THROWS_AS(psi({2, 1}, {1, 2}), IndexError);
}

TEST_CASE("hat polynomials and the two rewritings of the full Psi") {
  CHECK(psi_hat(2, 3) == psi({1, 2}, {1, 3}) + xi(2) * X(2) * psi({1, 3}, {1, 3}));
  for (int n = 2; n <= 5; ++n)
    for (int k = 2; k <= n; ++k) {
      MPoly h = psi_hat(k, n);
      CHECK(coefficientwise_nonneg(h));
      CHECK(psi_full(n) == xi(k) * (X(1) - X(2)) + h);
    }
}

TEST_CASE("type A bridge: det M_{n+1} equals the full Psi at the lambda specialization") {
  for (int n = 1; n <= 5; ++n) {
    std::map<Var, MPoly> sub;
    for (int i = 1; i <= n; ++i) {
      sub[Var::x(i)] = MPoly::variable(spinor::lambda_var(n + 1 - i));
      sub[Var::xi(i)] = MPoly::variable(spinor::lambda_var(i));
    }
    CHECK(psi_full(n).substitute(sub) == spinor::type_a_det_symbolic(n));
  }
}

TEST_CASE("Proposition 1 decomposition") {
  Prop1Result two = prop1_decompose(2);
  CHECK(two.lprime == xi(2));
  for (int n = 2; n <= 5; ++n) {
    Prop1Result r = prop1_decompose(n);
    CHECK(r.residual.is_zero());
    CHECK(r.lprime_nonneg);
  }
}

TEST_CASE("Theorem 1 formulas and the sign dichotomy") {
  for (int n = 2; n <= 4; ++n)
    for (int k = 1; k <= n; ++k)
      for (int r = 1; r <= n; ++r) {
        if (k == r) continue;
        Theorem1Result t = theorem1_delta(n, k, r);
        CHECK(t.equal);
        CHECK_FALSE(t.hat_resolution.empty());
        CHECK(t.case_id == (r < k ? "i" : "ii"));
        for (std::uint64_t s = 0; s < 200; ++s) {
          Stream rng(11, s);
          double v = evaluate(t.lhs, sorted_sample(n, rng));
          if (r < k)
            CHECK(v >= -1e-12);
          else
            CHECK(v <= 1e-12);
        }
      }
}

TEST_CASE("conjecture certificates") {
  Mode symbolic;
  for (int n = 2; n <= 4; ++n) {
    CHECK(conjecture1_check(n, symbolic).ok);
    CHECK(conjecture2_check(n, symbolic).ok);
    CHECK(conjecture22_check(n, symbolic).ok);
  }
  ConjectureReport c2 = conjecture2_check(3, symbolic);
  CHECK(c2.data["L_double_prime_3_matches"].get<bool>());
  CHECK(c2.data["L_prime_3_matches"].get<bool>());
  CHECK(conjecture1_check(6, numeric(300)).ok);
  CHECK(conjecture22_check(6, numeric(300)).ok);
}

TEST_CASE("Conjecture 2.2 for three points has the displayed difference") {
  Inequality q = conjecture22(3);
  CHECK(expand(q.lhs) - expand(q.rhs) == X(1) * (X(1) - X(2)).pow(2) * xi(1) * xi(2) * xi(3));
}

TEST_CASE("symbolic certificates imply nonnegative numeric margins") {
  for (int n = 2; n <= 4; ++n)
    for (const Inequality& q : {conjecture1(n), conjecture2(n), conjecture22(n), evenodd(n)}) {
      MPoly diff = expand(q.lhs) - expand(q.rhs);
      for (std::uint64_t s = 0; s < 1000; ++s) {
        Stream rng(12, s);
        Sample smp = sorted_sample(n, rng);
        double l = evaluate(q.lhs, smp);
        CHECK(evaluate(diff, smp) >= -1e-9 * std::max(1.0, std::abs(l)));
      }
    }
}

TEST_CASE("even/odd conjecture") {
  Mode symbolic;
  for (int n = 2; n <= 4; ++n) CHECK(evenodd_conjecture_check(n, symbolic).ok);
  for (int n = 5; n <= 6; ++n) CHECK(evenodd_conjecture_check(n, numeric(300)).ok);
  for (int n = 2; n <= 6; ++n) {
    Inequality q = evenodd(n);
    Sample s;
    for (int i = 0; i < n; ++i) {
      s.X.push_back(0.8);
      s.xi.push_back(0.3 + 0.2 * i);
    }
    double l = evaluate(q.lhs, s), r = evaluate(q.rhs, s);
    CHECK(std::abs(l - r) <= 1e-12 * std::abs(l));
  }
}

TEST_CASE("reduction chains") {
  Mode symbolic;
  for (int n = 2; n <= 4; ++n) CHECK(corollary_chain(n, symbolic).ok);
}

TEST_CASE("resultant coefficients") {
  ResCoeffs r3 = res_coeffs(3);
  MPoly e1 = xi(1) + xi(2) + xi(3), e2 = xi(1) * xi(2) + xi(1) * xi(3) + xi(2) * xi(3);
  CHECK(r3.a[2] == 1 + X(1) * e1 + X(1) * X(2) * e2);
  CHECK(r3.a[1] == -X(1) - X(1) * X(2) * e1);
  CHECK(r3.a[0] == X(1) * X(2));
  for (int n = 2; n <= 6; ++n) {
    ResCoeffs r = res_coeffs(n);
    CHECK(r.ok);
    for (const MPoly& res : r.residuals) CHECK(res.is_zero());
    MPoly lead = (n - 1) % 2 ? MPoly(-1) : MPoly(1);
    for (int i = 1; i <= n - 1; ++i) lead *= X(i);
    CHECK(r.a[0] == lead);
  }
}

TEST_CASE("Sylvester and Schur-complement reductions") {
  for (int n = 2; n <= 4; ++n) {
    ResultantDelta r = resultant_delta(n);
    CHECK(r.ok);
    CHECK(r.checks["det_sylvester_equals_Rn"].get<bool>());
    CHECK(r.checks["det_delta_prime_equals_det_sylvester"].get<bool>());
    CHECK(r.checks["delta_prime_diagonal_is_psi"].get<bool>());
    CHECK(r.delta_prime.size() == static_cast<std::size_t>(n - 1));
  }
  CHECK(resultant_delta(3).checks["Delta3_display_matches"].get<bool>());
}

TEST_CASE("Hadamard-type margin") {
  for (int n = 3; n <= 4; ++n) {
    ConjectureReport r = hadamard_check(n, numeric(2000));
    CHECK(r.ok);
    CHECK(r.data["exact_equality_all_X_equal"].get<bool>());
  }
}
