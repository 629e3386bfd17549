#pragma once

// Symmetric-function bases, positivity certificates and polynomial matrices
// on top of MPoly.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "atiyah/poly.hpp"

namespace atiyah::poly {

struct Partition {
  std::vector<int> parts;

  Partition() = default;
  /// Validates weak decrease and positivity; throws PolyError otherwise.
  explicit Partition(std::vector<int> p);
  /// Sorts into decreasing order and drops zeros.
  static Partition from_exponents(std::vector<int> e);

  int weight() const;
  int length() const { return static_cast<int>(parts.size()); }
  Partition conjugate() const;
  /// Compact label, e.g. "6321"; parts ≥ 10 are comma separated.
  std::string label() const;

  friend auto operator<=>(const Partition&, const Partition&) = default;
  friend bool operator==(const Partition&, const Partition&) = default;
};

/// All partitions of `weight` with at most `max_len` parts.
std::vector<Partition> partitions(int weight, int max_len);

MPoly elementary(int k, const VarList& vars);
/// e_k of an arbitrary list of polynomials (a multiset of values).
MPoly elementary(int k, const std::vector<MPoly>& values);
MPoly monomial_sym(const Partition& lambda, const VarList& vars);

/// Dual Jacobi-Trudi: s_λ = det(e_{λ'_i - i + j}), with e supplied by `e`.
MPoly schur_jt(const Partition& lambda, const std::function<MPoly(int)>& e);
MPoly schur_jt(const Partition& lambda, const VarList& vars);

class NotSymmetric : public PolyError {
 public:
  NotSymmetric(Var a, Var b);
  Var first, second;
};

/// Coefficients p = Σ c_λ m_λ(vars); coefficients may involve other variables.
std::map<Partition, MPoly> to_monomial_basis_poly(const MPoly& p, const VarList& vars);
/// As above but requires integer coefficients, i.e. p involves only `vars`.
std::map<Partition, Integer> to_monomial_basis(const MPoly& p, const VarList& vars);
MPoly from_monomial_basis(const std::map<Partition, MPoly>& coeffs, const VarList& vars);

struct NonnegCertificate {
  bool ok = true;
  std::optional<Integer> min_coeff, max_coeff;
  std::optional<std::string> witness;  // a term with negative coefficient
  std::size_t terms = 0;
};

NonnegCertificate nonneg_certificate(const MPoly& p);

struct DifferenceCertificate {
  bool ok = true;
  std::optional<std::string> witness;
  std::size_t terms = 0;
  MPoly expanded;  // p rewritten in X_b and the differences d_j
};

/// Substitutes X_i = X_b + d_i + ... + d_{b-1} over `ordered` = (X_a, ..., X_b)
/// and checks coefficientwise nonnegativity; d_j stands for X_j - X_{j+1}.
DifferenceCertificate difference_basis_certificate(const MPoly& p, const VarList& ordered);
/// The inverse substitution d_j -> X_j - X_{j+1}.
MPoly from_difference_basis(const MPoly& q, const VarList& ordered);

using PolyMatrix = std::vector<std::vector<MPoly>>;

/// Exact determinant by Laplace expansion memoized on column subsets.
MPoly determinant(const PolyMatrix& m);

}  // namespace atiyah::poly
