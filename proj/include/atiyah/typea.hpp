#pragma once

// Two-alphabet polynomials Psi^I_J for almost-collinear configurations and
// the inequalities, decompositions and resultant reductions built on them.

#include <cstdint>
#include <string>
#include <vector>

#include "atiyah/exactpoly.hpp"
#include "atiyah/report.hpp"
#include "atiyah/rng.hpp"

namespace atiyah::typea {

using poly::Integer;
using poly::MPoly;
using poly::PolyMatrix;
using poly::Var;
using Seq = std::vector<int>;

Seq range(int a, int b);  // a, a+1, ..., b
Seq drop(Seq s, int k);   // removes one occurrence of k

struct PsiIndex {
  Seq I, J;
  std::string label() const;  // e.g. "Psi^{112}_{123}"
};

class IndexError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Σ_k e_k(ξ_{j_1},...,ξ_{j_l}) X_{i_1}...X_{i_k}.
MPoly psi(const Seq& I, const Seq& J);
inline MPoly psi(const PsiIndex& p) { return psi(p.I, p.J); }
MPoly psi_full(int n);          // Psi^{1..n}_{1..n}
MPoly psi_drop(int n, int k);   // Psi^{1..k^..n}_{1..k^..n}
MPoly psi_hat(int k, int n);    // ξ_k(X_2 - X_1) + Psi^{1..n}_{1..n}

/// Free symbol standing for e_k(ξ_1..ξ_n).
Var e_symbol(int k);
/// Psi^I_{1..n} written with the free symbols E_k.
MPoly psi_e(const Seq& I);
/// Replaces every E_k by e_k(ξ_1..ξ_n).
MPoly expand_e(const MPoly& p, int n);

/// A factor of a product inequality: Psi^I_J or a hat polynomial, raised to a power.
struct Factor {
  enum class Kind { Psi, Hat } kind = Kind::Psi;
  PsiIndex index;
  int hat_k = 0, hat_n = 0;
  int power = 1;

  MPoly poly() const;
  std::string label() const;
};

Factor psi_factor(Seq I, Seq J, int power = 1);
Factor hat_factor(int k, int n, int power = 1);

using Side = std::vector<Factor>;

MPoly expand(const Side& side);
json side_json(const Side& side);

struct Sample {
  std::vector<double> X, xi;  // X sorted decreasingly, all entries ≥ 0
};

/// Sorted nonnegative sample; about one coordinate in ten is tied to its neighbour.
Sample sorted_sample(int n, Stream& rng);
double evaluate(const MPoly& p, const Sample& s);
double evaluate(const Side& side, const Sample& s);

struct Inequality {
  std::string id;
  int n = 0;
  Side lhs, rhs;
  poly::VarList cone;  // ordered X-variables for the difference basis
};

Inequality conjecture1(int n);
Inequality conjecture2(int n);
Inequality conjecture22(int n);
Inequality evenodd(int n);

struct Mode {
  bool symbolic = true;
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  double tol = 1e-9;
};

/// Symbolic: difference-basis certificate of lhs - rhs over the cone.
/// Numeric: minimum relative margin over sorted samples.
ConjectureReport check(const Inequality& ineq, const Mode& mode);

ConjectureReport conjecture1_check(int n, const Mode& mode);
ConjectureReport conjecture2_check(int n, const Mode& mode);
ConjectureReport conjecture22_check(int n, const Mode& mode);
ConjectureReport evenodd_conjecture_check(int n, const Mode& mode);

struct Prop1Result {
  MPoly lprime, residual;
  bool lprime_nonneg = false;
};
Prop1Result prop1_decompose(int n);

/// s^{(k)}_{2^i 1^{j-i-1}} as the 2x2 determinant of e's with ξ_k omitted.
MPoly schur_hook2(int i, int j, int n, int k);

struct Theorem1Result {
  int n = 0, k = 0, r = 0;
  std::string case_id;        // "i" (r < k) or "ii" (k < r)
  MPoly lhs;                  // X_k X_r Δ_r from the definition
  MPoly formula;              // X_k X_r times the matching candidate formula
  bool equal = false;
  bool displayed_matches = false;
  std::string hat_resolution;
  json to_json() const;
};
Theorem1Result theorem1_delta(int n, int k, int r);

ConjectureReport corollary_chain(int n, const Mode& mode);

struct ResCoeffs {
  std::vector<MPoly> a;          // a_0..a_{n-1}
  std::vector<MPoly> residuals;  // one per k
  bool ok = false;
};
ResCoeffs res_coeffs(int n);

struct ResultantDelta {
  int n = 0;
  PolyMatrix sylvester, delta, delta_prime;  // entries in X and the symbols E_k
  json checks = json::object();
  json findings = json::array();
  bool ok = false;
};
ResultantDelta resultant_delta(int n);
json matrix_json(const PolyMatrix& m);

/// ∏ δ'_ii - det δ' evaluated at one sample, with its scale ∏ |δ'_ii|.
std::pair<double, double> hadamard_margin(const PolyMatrix& delta_prime, const Sample& s);
ConjectureReport hadamard_check(int n, const Mode& mode);

}  // namespace atiyah::typea
