#pragma once

// The Atiyah determinant: pair directions lifted to unit spinors, row
// polynomials with those roots, and the normalized determinant D.

#include <complex>
#include <vector>

#include "atiyah/geometry.hpp"
#include "atiyah/poly.hpp"
#include "atiyah/report.hpp"

namespace atiyah::spinor {

using cd = std::complex<double>;
using CMatrix = std::vector<std::vector<cd>>;

struct Spinor {
  cd alpha, beta;
};

/// Unit lift of a unit vector with beta/alpha = (x+iy)/(1+z); the antipodal
/// chart is used when 1+z < 1e-6.
Spinor hopf_spinor(const geo::Vec3& v);
/// J(alpha, beta) = (-conj beta, conj alpha).
Spinor conj_antipode(const Spinor& s);
/// Inverse of the Hopf map.
geo::Vec3 direction(const Spinor& s);

/// s[i][j] for i != j; s[j][i] = J(s[i][j]) for i < j.
std::vector<std::vector<Spinor>> pair_spinors(const geo::Config& c);
/// Row i: coefficients of ∏_{j≠i} (alpha_ij t - beta_ij) in ascending powers of t.
CMatrix matrix_from_spinors(const std::vector<std::vector<Spinor>>& s);
CMatrix atiyah_matrix(const geo::Config& c);

/// Partial pivoted LU.
cd determinant(CMatrix m);

cd normalized_det(const geo::Config& c);

/// Global phase aligning 2^{C(n,2)} ∏ r · D with the real Eastwood-Norbury
/// determinant on planar configurations; measured once on the unit square.
cd en_phase(int n);
/// 2^{C(n,2)} (∏ r_ij) D times en_phase(n).
cd det_m(const geo::Config& c);

double energy(const geo::Config& c);

struct TypeADet {
  std::vector<std::vector<double>> matrix;
  double det = 0;
  double formula = 0;          // Σ_k e_k(λ) λ_n λ_{n-1} ... λ_{n-k+1}
  double product_bound = 0;    // ∏ (1 + λ_i²)
  bool increasing = true;
};

TypeADet type_a_det(const std::vector<double>& lambda);
/// det M_{n+1} over the symbols L1..Ln.
poly::MPoly type_a_det_symbolic(int n);
poly::Var lambda_var(int i);
/// λ_i = a_i + sqrt(a_i² + b²).
std::vector<double> type_a_lambdas(const std::vector<double>& a, double b = 1.0);

struct Margins {
  double abs_d = 0;
  double c2 = 0;             // |D| - 1
  double c3 = 0;             // |D|^{n-2} - ∏_k |D^{(k)}|
  double c3_normalized = 0;  // c3 / max(|D|^{n-2}, ∏_k |D^{(k)}|)
};

Margins margins(const geo::Config& c);
/// C1/C2/C3 margins; for n = 4 also the face-product form |det M4|² - ∏ (d3 + 8∏r).
ConjectureReport as_margins(const geo::Config& c);

}  // namespace atiyah::spinor
