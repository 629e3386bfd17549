#include "atiyah/exactpoly.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <unordered_map>

namespace atiyah::poly {

Partition::Partition(std::vector<int> p) : parts(std::move(p)) {
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i] < 1) throw PolyError("partition parts must be positive");
    if (i > 0 && parts[i] > parts[i - 1]) throw PolyError("partition must be weakly decreasing");
  }
}

Partition Partition::from_exponents(std::vector<int> e) {
  std::erase(e, 0);
  std::sort(e.begin(), e.end(), std::greater<>());
  return Partition(std::move(e));
}

int Partition::weight() const { return std::accumulate(parts.begin(), parts.end(), 0); }

Partition Partition::conjugate() const {
  std::vector<int> c;
  if (parts.empty()) return Partition{};
  for (int j = 1; j <= parts.front(); ++j) {
    int len = 0;
    for (int p : parts)
      if (p >= j) ++len;
    c.push_back(len);
  }
  return Partition(c);
}

std::string Partition::label() const {
  bool wide = std::any_of(parts.begin(), parts.end(), [](int p) { return p >= 10; });
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (wide && i > 0) s += ',';
    s += std::to_string(parts[i]);
  }
  return s;
}

namespace {

void partitions_rec(int remaining, int max_part, int max_len, std::vector<int>& cur, std::vector<Partition>& out) {
  if (remaining == 0) {
    out.emplace_back(cur);
    return;
  }
  if (static_cast<int>(cur.size()) == max_len) return;
  for (int p = std::min(remaining, max_part); p >= 1; --p) {
    cur.push_back(p);
    partitions_rec(remaining - p, p, max_len, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<Partition> partitions(int weight, int max_len) {
  std::vector<Partition> out;
  std::vector<int> cur;
  partitions_rec(weight, weight, max_len, cur, out);
  return out;
}

MPoly elementary(int k, const VarList& vars) {
  int n = static_cast<int>(vars.size());
  if (k < 0) throw PolyError("elementary: k must be nonnegative");
  if (k == 0) return MPoly(1);
  if (k > n) return MPoly{};
  VarList sorted = vars;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::pair<std::vector<int>, Integer>> terms;
  std::vector<int> mask(n, 0);
  std::fill(mask.end() - k, mask.end(), 1);
  do {
    terms.push_back({mask, Integer(1)});
  } while (std::next_permutation(mask.begin(), mask.end()));
  return MPoly::from_terms(sorted, std::move(terms));
}

MPoly elementary(int k, const std::vector<MPoly>& values) {
  if (k < 0) throw PolyError("elementary: k must be nonnegative");
  if (k > static_cast<int>(values.size())) return MPoly{};
  std::vector<MPoly> e(k + 1);
  e[0] = MPoly(1);
  for (const auto& v : values)
    for (int j = k; j >= 1; --j) e[j] += v * e[j - 1];
  return e[k];
}

MPoly monomial_sym(const Partition& lambda, const VarList& vars) {
  int n = static_cast<int>(vars.size());
  if (lambda.length() > n) throw PolyError("monomial_sym: partition longer than variable list");
  VarList sorted = vars;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> e(n, 0);
  std::copy(lambda.parts.begin(), lambda.parts.end(), e.begin());
  std::sort(e.begin(), e.end());
  std::vector<std::pair<std::vector<int>, Integer>> terms;
  do {
    terms.push_back({e, Integer(1)});
  } while (std::next_permutation(e.begin(), e.end()));
  return MPoly::from_terms(sorted, std::move(terms));
}

MPoly schur_jt(const Partition& lambda, const std::function<MPoly(int)>& e) {
  Partition c = lambda.conjugate();
  int m = c.length();
  if (m == 0) return MPoly(1);
  PolyMatrix a(m, std::vector<MPoly>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      int idx = c.parts[i] - i + j;
      if (idx == 0) a[i][j] = MPoly(1);
      else if (idx > 0) a[i][j] = e(idx);
    }
  return determinant(a);
}

MPoly schur_jt(const Partition& lambda, const VarList& vars) {
  std::map<int, MPoly> cache;
  return schur_jt(lambda, [&](int k) {
    auto it = cache.find(k);
    if (it == cache.end()) it = cache.emplace(k, elementary(k, vars)).first;
    return it->second;
  });
}

NotSymmetric::NotSymmetric(Var a, Var b)
    : PolyError("polynomial is not symmetric under " + a.name() + " <-> " + b.name()),
      first(std::move(a)),
      second(std::move(b)) {}

std::map<Partition, MPoly> to_monomial_basis_poly(const MPoly& p, const VarList& vars) {
  VarList sorted = vars;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
    if (!(p.swapped(sorted[i], sorted[i + 1]) == p)) throw NotSymmetric(sorted[i], sorted[i + 1]);
  std::map<Partition, MPoly> out;
  for (auto& [key, coeff] : p.collect(sorted)) {
    if (!std::is_sorted(key.begin(), key.end(), std::greater<>())) continue;
    out.emplace(Partition::from_exponents(key), coeff);
  }
  return out;
}

std::map<Partition, Integer> to_monomial_basis(const MPoly& p, const VarList& vars) {
  std::map<Partition, Integer> out;
  for (auto& [lambda, c] : to_monomial_basis_poly(p, vars)) {
    if (!c.is_constant()) throw PolyError("to_monomial_basis: coefficients involve other variables");
    out.emplace(lambda, c.constant_term());
  }
  return out;
}

MPoly from_monomial_basis(const std::map<Partition, MPoly>& coeffs, const VarList& vars) {
  MPoly out;
  for (const auto& [lambda, c] : coeffs) out += c * monomial_sym(lambda, vars);
  return out;
}

namespace {

std::string term_string(const MPoly& p, const Term& t) {
  MPoly single = MPoly::from_terms(p.vars(), {{p.exponents(t), t.coeff}});
  return single.to_string();
}

Var difference_var(const Var& v, std::size_t position) {
  return Var::diff(v.bank == Bank::X ? v.index : static_cast<int>(position) + 1);
}

}  // namespace

NonnegCertificate nonneg_certificate(const MPoly& p) {
  NonnegCertificate c;
  c.terms = p.size();
  for (const auto& t : p.terms()) {
    if (!c.min_coeff || t.coeff < *c.min_coeff) c.min_coeff = t.coeff;
    if (!c.max_coeff || t.coeff > *c.max_coeff) c.max_coeff = t.coeff;
    if (t.coeff < 0 && c.ok) {
      c.ok = false;
      c.witness = term_string(p, t);
    }
  }
  return c;
}

DifferenceCertificate difference_basis_certificate(const MPoly& p, const VarList& ordered) {
  MPoly q = p;
  for (std::size_t i = 0; i + 1 < ordered.size(); ++i)
    q = q.translate(ordered[i], ordered[i + 1], difference_var(ordered[i], i));
  DifferenceCertificate c;
  NonnegCertificate nn = nonneg_certificate(q);
  c.ok = nn.ok;
  c.witness = nn.witness;
  c.terms = q.size();
  c.expanded = std::move(q);
  return c;
}

MPoly from_difference_basis(const MPoly& q, const VarList& ordered) {
  std::map<Var, MPoly> bind;
  for (std::size_t i = 0; i + 1 < ordered.size(); ++i)
    bind[difference_var(ordered[i], i)] = var(ordered[i]) - var(ordered[i + 1]);
  return q.substitute(bind);
}

MPoly determinant(const PolyMatrix& m) {
  std::size_t n = m.size();
  if (n == 0) return MPoly(1);
  for (const auto& row : m)
    if (row.size() != n) throw PolyError("determinant: matrix must be square");
  if (n > 24) throw PolyError("determinant: matrix too large");
  std::unordered_map<std::uint32_t, MPoly> memo;
  std::function<MPoly(std::uint32_t)> minor = [&](std::uint32_t used) -> MPoly {
    int row = std::popcount(used);
    if (row == static_cast<int>(n)) return MPoly(1);
    auto it = memo.find(used);
    if (it != memo.end()) return it->second;
    MPoly acc;
    int sign_pos = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (used & (1u << j)) continue;
      if (!m[row][j].is_zero()) {
        MPoly sub = minor(used | (1u << j));
        if (!sub.is_zero()) {
          MPoly term = m[row][j] * sub;
          if (sign_pos % 2) acc -= term;
          else acc += term;
        }
      }
      ++sign_pos;
    }
    memo.emplace(used, acc);
    return acc;
  };
  return minor(0);
}

}  // namespace atiyah::poly
