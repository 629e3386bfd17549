#pragma once

// Exact sparse multivariate polynomials with arbitrary-precision integer
// coefficients.  Terms are stored densely over a per-polynomial sorted
// variable set and kept in descending graded-lexicographic order.

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace atiyah::poly {

using Integer = boost::multiprecision::cpp_int;

/// Variable banks.  The enumeration order is the variable order used by the
/// monomial ordering: all xi's come first, then X's, then t's, then
/// difference variables, then generically named symbols.
enum class Bank : std::uint8_t { Xi, X, T, Diff, Generic };

struct Var {
  Bank bank = Bank::Generic;
  int index = 0;
  std::string label;  // only used by Bank::Generic

  static Var xi(int i) { return {Bank::Xi, i, {}}; }
  static Var x(int i) { return {Bank::X, i, {}}; }
  static Var t(int i) { return {Bank::T, i, {}}; }
  static Var diff(int i) { return {Bank::Diff, i, {}}; }
  static Var named(std::string name) { return {Bank::Generic, 0, std::move(name)}; }

  std::string name() const;
  static Var parse(const std::string& name);

  friend auto operator<=>(const Var&, const Var&) = default;
  friend bool operator==(const Var&, const Var&) = default;
};

using VarList = std::vector<Var>;

VarList xi_vars(int n);  // xi1..xin
VarList x_vars(int n);   // X1..Xn
VarList t_vars(int n);   // t1..tn

/// Packed exponent vector: one byte per variable, up to kMaxVars variables.
/// Variable 0 occupies the most significant byte of word 0, so comparing the
/// words numerically is lexicographic comparison of exponent vectors.
struct Monomial {
  static constexpr int kMaxVars = 16;
  std::array<std::uint64_t, 2> w{0, 0};

  int exp(int i) const {
    return static_cast<int>((w[i / 8] >> (8 * (7 - i % 8))) & 0xFFu);
  }
  void set_exp(int i, int e);
  int degree() const;

  Monomial operator*(const Monomial& o) const { return {{w[0] + o.w[0], w[1] + o.w[1]}}; }
  bool divides(const Monomial& o) const;
  Monomial operator/(const Monomial& o) const { return {{w[0] - o.w[0], w[1] - o.w[1]}}; }

  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Graded lexicographic comparison: true when a > b.
bool grlex_greater(const Monomial& a, const Monomial& b);

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept {
    std::uint64_t h = m.w[0] * 0x9E3779B97F4A7C15ULL ^ (m.w[1] + 0x632BE59BD9B4E019ULL);
    h ^= h >> 29;
    h *= 0xBF58476D1CE4E5B9ULL;
    h ^= h >> 32;
    return static_cast<std::size_t>(h);
  }
};

struct Term {
  Monomial mono;
  Integer coeff;
};

/// Sparse exact polynomial.  Immutable value type; all operations return new
/// polynomials.  Zero coefficients are never stored and unused variables are
/// dropped from the variable set, so structural equality is mathematical
/// equality.
class MPoly {
 public:
  MPoly() = default;
  MPoly(long long c);  // NOLINT(google-explicit-constructor)
  explicit MPoly(const Integer& c);

  static MPoly variable(const Var& v);
  /// Build from (exponents over `vars`, coefficient) pairs; duplicates are summed.
  static MPoly from_terms(VarList vars, std::vector<std::pair<std::vector<int>, Integer>> terms);

  const VarList& vars() const { return vars_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Integer constant_term() const;

  int degree() const;
  int degree_in(const Var& v) const;
  /// Exponent vector of a term over vars().
  std::vector<int> exponents(const Term& t) const;
  /// Coefficient of the monomial given as (variable, exponent) pairs.
  Integer coefficient(const std::vector<std::pair<Var, int>>& mono) const;

  MPoly operator-() const;
  friend MPoly operator+(const MPoly& a, const MPoly& b);
  friend MPoly operator-(const MPoly& a, const MPoly& b);
  friend MPoly operator*(const MPoly& a, const MPoly& b);
  MPoly& operator+=(const MPoly& o) { return *this = *this + o; }
  MPoly& operator-=(const MPoly& o) { return *this = *this - o; }
  MPoly& operator*=(const MPoly& o) { return *this = *this * o; }
  friend bool operator==(const MPoly& a, const MPoly& b);

  MPoly pow(unsigned e) const;
  MPoly scaled(const Integer& c) const;
  MPoly derivative(const Var& v) const;

  /// Simultaneous substitution of variables by polynomials.
  MPoly substitute(const std::map<Var, MPoly>& bindings) const;
  /// p(x -> y + d), a Taylor shift used by difference-basis certificates.
  MPoly translate(const Var& x, const Var& y, const Var& d) const;
  /// Swap two variables (used for symmetry checks).
  MPoly swapped(const Var& a, const Var& b) const;
  /// Exact division by a monomial; nullopt if some term is not divisible.
  std::optional<MPoly> divide_by_monomial(const std::vector<std::pair<Var, int>>& mono) const;

  double evaluate(const std::map<Var, double>& point) const;
  long double evaluate_ld(const std::map<Var, long double>& point) const;

  /// Canonical text form: terms in descending grlex order, `coeff*var^exp*...`.
  std::string to_string() const;
  static MPoly parse(const std::string& text);

  /// Split by the exponents of `keys`: returns map from exponent vector over
  /// `keys` to the coefficient polynomial in the remaining variables.
  std::map<std::vector<int>, MPoly> collect(const VarList& keys) const;

 private:
  VarList vars_;
  std::vector<Term> terms_;  // descending grlex

  void canonicalize();  // sort, merge, drop zeros, trim variables
  MPoly remapped(const VarList& target) const;
  int var_position(const Var& v) const;  // -1 if absent
};

VarList merge_vars(const VarList& a, const VarList& b);

MPoly var(const Var& v);
inline MPoly xi(int i) { return MPoly::variable(Var::xi(i)); }
inline MPoly X(int i) { return MPoly::variable(Var::x(i)); }
inline MPoly t(int i) { return MPoly::variable(Var::t(i)); }
inline MPoly sym(const std::string& name) { return MPoly::variable(Var::named(name)); }

MPoly product(std::span<const MPoly> factors);
MPoly sum(std::span<const MPoly> terms);

class PolyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace atiyah::poly
