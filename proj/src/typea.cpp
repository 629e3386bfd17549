#include "atiyah/typea.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace atiyah::typea {

using poly::VarList;

Seq range(int a, int b) {
  Seq s;
  for (int i = a; i <= b; ++i) s.push_back(i);
  return s;
}

Seq drop(Seq s, int k) {
  auto it = std::find(s.begin(), s.end(), k);
  if (it != s.end()) s.erase(it);
  return s;
}

namespace {

std::string seq_str(const Seq& s) {
  bool wide = std::any_of(s.begin(), s.end(), [](int v) { return v >= 10; });
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (wide && i) out += ',';
    out += std::to_string(s[i]);
  }
  return out;
}

void validate(const Seq& I, const Seq& J) {
  if (I.size() != J.size()) throw IndexError("Psi index: |I| != |J|");
  for (const Seq* s : {&I, &J}) {
    for (std::size_t i = 0; i < s->size(); ++i) {
      if ((*s)[i] < 1) throw IndexError("Psi index entries must be positive");
      if (i && (*s)[i] < (*s)[i - 1]) throw IndexError("Psi index must be weakly increasing");
    }
  }
}

MPoly x_prefix(int m) {
  MPoly p(1);
  for (int t = 1; t <= m; ++t) p *= poly::X(t);
  return p;
}

VarList xi_without(int n, int k) {
  VarList v;
  for (int i = 1; i <= n; ++i)
    if (i != k) v.push_back(Var::xi(i));
  return v;
}

MPoly e_full(int i, int n) { return i < 0 ? MPoly{} : poly::elementary(i, poly::xi_vars(n)); }
MPoly e_omit(int i, int n, int k) { return i < 0 ? MPoly{} : poly::elementary(i, xi_without(n, k)); }

}  // namespace

std::string PsiIndex::label() const { return "Psi^{" + seq_str(I) + "}_{" + seq_str(J) + "}"; }

MPoly psi(const Seq& I, const Seq& J) {
  validate(I, J);
  std::size_t l = I.size();
  std::vector<MPoly> vals;
  for (int j : J) vals.push_back(poly::xi(j));
  std::vector<MPoly> e(l + 1);
  e[0] = MPoly(1);
  for (const auto& v : vals)
    for (std::size_t k = l; k >= 1; --k) e[k] += v * e[k - 1];
  MPoly out, prefix(1);
  for (std::size_t k = 0; k <= l; ++k) {
    if (k) prefix *= poly::X(I[k - 1]);
    out += e[k] * prefix;
  }
  return out;
}

MPoly psi_full(int n) { return psi(range(1, n), range(1, n)); }
MPoly psi_drop(int n, int k) { return psi(drop(range(1, n), k), drop(range(1, n), k)); }

MPoly psi_hat(int k, int n) {
  if (k < 2 || k > n) throw IndexError("psi_hat requires 2 <= k <= n");
  return poly::xi(k) * (poly::X(2) - poly::X(1)) + psi_full(n);
}

Var e_symbol(int k) { return Var::named("E" + std::to_string(k)); }

MPoly psi_e(const Seq& I) {
  validate(I, I.empty() ? Seq{} : range(1, static_cast<int>(I.size())));
  MPoly out, prefix(1);
  for (std::size_t k = 0; k <= I.size(); ++k) {
    if (k) prefix *= poly::X(I[k - 1]);
    out += (k == 0 ? MPoly(1) : poly::var(e_symbol(static_cast<int>(k)))) * prefix;
  }
  return out;
}

MPoly expand_e(const MPoly& p, int n) {
  std::map<Var, MPoly> bind;
  for (int k = 1; k <= n; ++k) bind[e_symbol(k)] = e_full(k, n);
  return p.substitute(bind);
}

// ---------------------------------------------------------------------------
// Factors and sides

MPoly Factor::poly() const {
  MPoly base = kind == Kind::Psi ? psi(index) : psi_hat(hat_k, hat_n);
  return base.pow(static_cast<unsigned>(power));
}

std::string Factor::label() const {
  std::string base = kind == Kind::Psi ? index.label()
                                       : "PsiHat^{" + seq_str(range(1, hat_n)) + "}_{k=" + std::to_string(hat_k) + "}";
  return power == 1 ? base : "(" + base + ")^" + std::to_string(power);
}

Factor psi_factor(Seq I, Seq J, int power) {
  Factor f;
  f.index = {std::move(I), std::move(J)};
  f.power = power;
  return f;
}

Factor hat_factor(int k, int n, int power) {
  Factor f;
  f.kind = Factor::Kind::Hat;
  f.hat_k = k;
  f.hat_n = n;
  f.power = power;
  return f;
}

MPoly expand(const Side& side) {
  MPoly out(1);
  for (const auto& f : side) out *= f.poly();
  return out;
}

json side_json(const Side& side) {
  json j = json::array();
  for (const auto& f : side) {
    json e;
    e["label"] = f.label();
    if (f.kind == Factor::Kind::Psi) {
      e["I"] = f.index.I;
      e["J"] = f.index.J;
    } else {
      e["hat_k"] = f.hat_k;
      e["hat_n"] = f.hat_n;
    }
    e["power"] = f.power;
    j.push_back(e);
  }
  return j;
}

Sample sorted_sample(int n, Stream& rng) {
  Sample s;
  s.X.resize(n);
  s.xi.resize(n);
  for (int i = 0; i < n; ++i) s.X[i] = 2.0 * rng.uniform();
  std::sort(s.X.begin(), s.X.end(), std::greater<>());
  for (int i = 1; i < n; ++i)
    if (rng.uniform() < 0.1) s.X[i] = s.X[i - 1];
  for (int i = 0; i < n; ++i) s.xi[i] = 2.0 * rng.uniform();
  return s;
}

double evaluate(const MPoly& p, const Sample& s) {
  std::map<Var, double> point;
  std::vector<double> e(s.xi.size() + 1, 0.0);
  e[0] = 1.0;
  for (double v : s.xi)
    for (std::size_t k = s.xi.size(); k >= 1; --k) e[k] += v * e[k - 1];
  for (const auto& v : p.vars()) {
    if (v.bank == poly::Bank::Xi) point[v] = s.xi.at(v.index - 1);
    else if (v.bank == poly::Bank::X) point[v] = s.X.at(v.index - 1);
    else if (v.bank == poly::Bank::Generic && v.label.size() > 1 && v.label[0] == 'E') {
      std::size_t k = std::stoul(v.label.substr(1));
      point[v] = k < e.size() ? e[k] : 0.0;
    } else {
      throw poly::PolyError("evaluate: unexpected variable " + v.name());
    }
  }
  return p.evaluate(point);
}

double evaluate(const Side& side, const Sample& s) {
  double v = 1.0;
  for (const auto& f : side) {
    Factor base = f;
    base.power = 1;
    v *= std::pow(evaluate(base.poly(), s), f.power);
  }
  return v;
}

// ---------------------------------------------------------------------------
// Inequalities

Inequality conjecture1(int n) {
  Inequality q{"conjecture1", n, {psi_factor(range(1, n), range(1, n), n - 1)}, {}, poly::x_vars(n)};
  for (int k = 1; k <= n; ++k) q.rhs.push_back(psi_factor(drop(range(1, n), k), drop(range(1, n), k)));
  return q;
}

Inequality conjecture2(int n) {
  Inequality q{"conjecture2", n, {}, {}, {}};
  for (int k = 2; k <= n; ++k) q.lhs.push_back(hat_factor(k, n));
  for (int k = 1; k <= n; ++k) q.rhs.push_back(psi_factor(drop(range(1, n), k), drop(range(1, n), k)));
  for (int i = 2; i <= n; ++i) q.cone.push_back(Var::x(i));
  return q;
}

Inequality conjecture22(int n) {
  Inequality q{"conjecture22", n, {}, {}, poly::x_vars(n)};
  for (int k = 1; k <= n - 1; ++k) {
    Seq I = range(1, k);
    for (int v = k; v <= n - 1; ++v) I.push_back(v);
    q.lhs.push_back(psi_factor(I, range(1, n)));
  }
  for (int k = 1; k <= n; ++k) q.rhs.push_back(psi_factor(range(1, n - 1), drop(range(1, n), k)));
  return q;
}

Inequality evenodd(int n) {
  if (n < 2) throw IndexError("evenodd requires n >= 2");
  // Base pattern: doubled even indices 2 2 4 4 ..., closed by a single n when n is even.
  Seq base;
  for (int v = 2; v <= n - 1; v += 2) base.insert(base.end(), {v, v});
  if (n % 2 == 0) base.push_back(n);
  auto with_extra = [&](int v) {
    Seq s = base;
    s.insert(std::upper_bound(s.begin(), s.end(), v), v);
    return s;
  };
  Inequality q{"evenodd", n, {}, {}, {}};
  if (n % 2 == 0) {
    q.lhs.push_back(psi_factor(with_extra(n), range(1, n)));
    for (int k = 1; k <= n / 2 - 1; ++k) q.lhs.push_back(psi_factor(with_extra(2 * k), range(1, n), 2));
  } else {
    for (int k = 1; k <= n / 2; ++k) q.lhs.push_back(psi_factor(with_extra(2 * k), range(1, n), 2));
  }
  for (int k = 1; k <= n; ++k) q.rhs.push_back(psi_factor(base, drop(range(1, n), k)));
  for (int v = 2; v <= n; v += 2) q.cone.push_back(Var::x(v));
  return q;
}

ConjectureReport check(const Inequality& ineq, const Mode& mode) {
  std::int64_t start = now_ns();
  ConjectureReport rep;
  rep.conjecture = ineq.id;
  rep.n = ineq.n;
  rep.mode = mode.symbolic ? "symbolic" : "numeric";
  rep.data["lhs"] = side_json(ineq.lhs);
  rep.data["rhs"] = side_json(ineq.rhs);
  if (mode.symbolic) {
    MPoly diff = expand(ineq.lhs) - expand(ineq.rhs);
    rep.data["difference_terms"] = diff.size();
    json cone = json::array();
    for (const auto& v : ineq.cone) cone.push_back(v.name());
    rep.data["cone"] = cone;
    auto cert = poly::difference_basis_certificate(diff, ineq.cone);
    rep.ok = cert.ok;
    rep.data["certificate_terms"] = cert.terms;
    auto nn = poly::nonneg_certificate(cert.expanded);
    if (nn.min_coeff) rep.data["min_coeff"] = integer_json(*nn.min_coeff);
    if (nn.max_coeff) rep.data["max_coeff"] = integer_json(*nn.max_coeff);
    if (cert.witness) rep.witness = *cert.witness;
  } else {
    double worst = std::numeric_limits<double>::infinity();
    std::size_t worst_index = 0;
    Side lhs = ineq.lhs, rhs = ineq.rhs;
    for (std::size_t i = 0; i < mode.samples; ++i) {
      Stream rng(mode.seed, i);
      Sample s = sorted_sample(ineq.n, rng);
      double l = evaluate(lhs, s), r = evaluate(rhs, s);
      double rel = (l - r) / std::max({std::abs(l), std::abs(r), 1e-300});
      if (rel < worst) {
        worst = rel;
        worst_index = i;
      }
    }
    rep.ok = worst >= -mode.tol;
    rep.data["samples"] = mode.samples;
    rep.data["seed"] = mode.seed;
    rep.data["min_relative_margin"] = worst;
    if (!rep.ok) rep.witness = json{{"seed", mode.seed}, {"sample_index", worst_index}, {"n", ineq.n}};
  }
  rep.elapsed_ms = elapsed_since(start);
  return rep;
}

ConjectureReport conjecture1_check(int n, const Mode& mode) { return check(conjecture1(n), mode); }
ConjectureReport conjecture2_check(int n, const Mode& mode) {
  Inequality q = conjecture2(n);
  ConjectureReport rep = check(q, mode);
  if (n == 3) {
    MPoly l2 = poly::xi(1) * poly::xi(3) * poly::X(1) * psi_hat(3, 3) +
               poly::xi(2) * poly::xi(3) * poly::X(2) * psi({1}, {2}) * psi({1, 3}, {1, 3});
    MPoly l1 = poly::xi(2) * psi_full(3) + poly::xi(3) * psi_hat(2, 3);
    bool l2_ok = expand(q.lhs) - expand(q.rhs) == l2 * (poly::X(2) - poly::X(3));
    bool l1_ok = prop1_decompose(3).lprime == l1;
    rep.data["L_double_prime_3_matches"] = l2_ok;
    rep.data["L_prime_3_matches"] = l1_ok;
    rep.ok = rep.ok && l2_ok && l1_ok;
  }
  return rep;
}
ConjectureReport conjecture22_check(int n, const Mode& mode) { return check(conjecture22(n), mode); }

ConjectureReport evenodd_conjecture_check(int n, const Mode& mode) {
  Inequality q = evenodd(n);
  ConjectureReport rep = check(q, mode);
  rep.data["reading"] = n % 2 == 0 ? "B=(2,2,4,4,...,n-2,n-2,n); lhs = Psi^{B+n} * prod_{k<n/2} (Psi^{B+2k})^2"
                                   : "B=(2,2,4,4,...,n-1,n-1); lhs = prod_{k<=n/2} (Psi^{B+2k})^2";
  return rep;
}

// ---------------------------------------------------------------------------
// Proposition 1

Prop1Result prop1_decompose(int n) {
  if (n < 2) throw IndexError("prop1 requires n >= 2");
  MPoly full = psi_full(n);
  std::vector<MPoly> hats;
  for (int j = 2; j <= n; ++j) hats.push_back(psi_hat(j, n));
  Prop1Result res;
  MPoly hat_prefix(1);
  for (int k = 1; k <= n - 1; ++k) {
    if (k >= 2) hat_prefix *= hats[k - 2];
    res.lprime += poly::xi(k + 1) * hat_prefix * full.pow(static_cast<unsigned>(n - 1 - k));
  }
  MPoly lhat(1);
  for (const auto& h : hats) lhat *= h;
  res.residual = full.pow(static_cast<unsigned>(n - 1)) - (poly::X(1) - poly::X(2)) * res.lprime - lhat;
  res.lprime_nonneg = poly::nonneg_certificate(res.lprime).ok;
  return res;
}

// ---------------------------------------------------------------------------
// Theorem 1

MPoly schur_hook2(int i, int j, int n, int k) {
  return e_omit(j - 1, n, k) * e_omit(i, n, k) - e_omit(j, n, k) * e_omit(i - 1, n, k);
}

json Theorem1Result::to_json() const {
  return json{{"n", n},           {"k", k},
              {"r", r},           {"case", case_id},
              {"equal", equal},   {"displayed_matches", displayed_matches},
              {"hat_resolution", hat_resolution}, {"terms", lhs.size()}};
}

Theorem1Result theorem1_delta(int n, int k, int r) {
  if (k < 1 || k > n || r < 1 || r > n || r == k) throw IndexError("theorem1 requires 1 <= k, r <= n, r != k");
  Theorem1Result res{n, k, r, r < k ? "i" : "ii", {}, {}, false, false, {}};
  MPoly full = psi_full(n), part = psi_drop(n, k);
  Var xr = Var::x(r);
  MPoly delta = full.derivative(xr) * part - full * part.derivative(xr);
  MPoly Xk = poly::X(k), Xr = poly::X(r);
  res.lhs = Xk * Xr * delta;

  std::vector<MPoly> pre(n + 1);
  for (int m = 0; m <= n; ++m) pre[m] = x_prefix(m);
  auto Xj = [&](int j) { return j >= 1 && j <= n ? poly::X(j) : MPoly{}; };

  MPoly s_sum;  // Σ_{0≤i<r≤j≤n} s X_[i] X_[j]
  for (int i = 0; i < r; ++i)
    for (int j = r; j <= n; ++j) s_sum += schur_hook2(i, j, n, k) * pre[i] * pre[j];

  if (r < k) {
    MPoly second;
    for (int i = 0; i < r; ++i)
      for (int j = k; j < n; ++j) second += e_full(i, n) * e_omit(j, n, k) * pre[i] * pre[j] * (Xk - Xj(j + 1));
    MPoly displayed = poly::xi(k) * s_sum * Xr + second;
    MPoly corrected = poly::xi(k) * s_sum * Xk + second;
    res.displayed_matches = displayed == res.lhs;
    bool corrected_matches = corrected == res.lhs;
    res.equal = res.displayed_matches || corrected_matches;
    res.formula = res.displayed_matches ? displayed : corrected;
    res.hat_resolution = res.displayed_matches ? "first sum: hat on X_k as displayed"
                         : corrected_matches   ? "first sum: hat on X_r (displayed hat on X_k does not match)"
                                               : "neither hat placement matches";
  } else {
    MPoly displayed_second, derived_second;
    for (int i = 0; i < k; ++i) {
      for (int j = r; j < n; ++j)
        displayed_second += e_omit(i, n, k) * e_full(j, n) * pre[i] * pre[j] * (Xj(j + 1) - Xk);
      for (int j = r; j <= n; ++j)
        derived_second += e_omit(i, n, k) * e_full(j, n) * pre[i] * pre[j] * (Xj(i + 1) - Xk);
    }
    MPoly displayed = -(s_sum + displayed_second);
    MPoly derived = -(s_sum + derived_second);
    res.displayed_matches = displayed == res.lhs;
    bool derived_matches = derived == res.lhs;
    res.equal = res.displayed_matches || derived_matches;
    res.formula = res.displayed_matches ? displayed : derived;
    res.hat_resolution = res.displayed_matches ? "displayed formula matches"
                         : derived_matches     ? "second sum needs j <= n and factor (X_{i+1} - X_k); hats on X_k, X_r"
                                               : "no candidate matches";
  }
  return res;
}

// ---------------------------------------------------------------------------
// Corollary chains

namespace {

struct Stage {
  Side num, den;
};

struct Chain {
  std::string name;
  std::vector<Stage> stages;
  bool terminal_claims_one = false;
  bool required = true;  // informational chains are reported but do not decide ok
};

Side drops(int n, const Seq& I_template_full, bool drop_I) {
  // ∏_k Psi^{I or I\k}_{J\k}
  Side s;
  for (int k = 1; k <= n; ++k)
    s.push_back(psi_factor(drop_I ? drop(I_template_full, k) : I_template_full, drop(range(1, n), k)));
  return s;
}

std::vector<Chain> chains_for(int n) {
  std::vector<Chain> out;
  auto P = [](Seq I, Seq J, int p = 1) { return psi_factor(std::move(I), std::move(J), p); };
  if (n == 2) {
    out.push_back({"Q2",
                   {{{P({1, 2}, {1, 2})}, {P({1}, {1}), P({2}, {2})}},
                    {{P({2, 2}, {1, 2})}, {P({2}, {1}), P({2}, {2})}}},
                   true});
  } else if (n == 3) {
    Seq a = range(1, 3);
    out.push_back({"Q3-mixed",
                   {{{P(a, a), P(a, a)}, {P({1, 2}, {1, 2}), P({1, 3}, {1, 3}), P({2, 3}, {2, 3})}},
                    {{P({2, 2, 3}, a), P(a, a)}, {P({2, 2}, {1, 2}), P({1, 3}, {1, 3}), P({2, 3}, {2, 3})}},
                    {{P({2, 2, 3}, a), P({2, 2, 3}, a)}, {P({2, 2}, {1, 2}), P({1, 3}, {1, 3}), P({2, 3}, {2, 3})}},
                    {{P({2, 2, 2}, a), P({2, 2, 3}, a)}, {P({2, 2}, {1, 2}), P({2, 2}, {1, 3}), P({2, 3}, {2, 3})}},
                    {{P({2, 2, 2}, a), P({2, 2, 2}, a)}, {P({2, 2}, {1, 2}), P({2, 2}, {1, 3}), P({2, 3}, {2, 3})}}},
                   true, false});
    out.push_back({"Q3-steps-ii",
                   {{{P(a, a), P(a, a)}, {P({1, 2}, {1, 2}), P({1, 3}, {1, 3}), P({2, 3}, {2, 3})}},
                    {{P({1, 1, 3}, a), P(a, a)}, {P({1, 2}, {1, 2}), P({1, 3}, {1, 3}), P({1, 3}, {2, 3})}},
                    {{P({1, 1, 2}, a), P(a, a)}, {P({1, 2}, {1, 2}), P({1, 2}, {1, 3}), P({1, 3}, {2, 3})}},
                    {{P({1, 1, 2}, a), P({1, 2, 2}, a)}, {P({1, 2}, {1, 2}), P({1, 2}, {1, 3}), P({1, 2}, {2, 3})}}},
                   false});
  } else if (n == 4) {
    Seq a = range(1, 4);
    out.push_back({"Q4",
                   {{{P(a, a, 3)}, drops(4, a, true)},
                    {{P({2, 2, 4, 4}, a), P({2, 2, 2, 4}, a, 2)}, drops(4, {2, 2, 4}, false)}},
                   false});
  } else if (n == 5) {
    Seq a = range(1, 5);
    out.push_back({"Q5",
                   {{{P(a, a, 4)}, drops(5, a, true)},
                    {{P({2, 2, 2, 4, 4}, a, 2), P({2, 2, 4, 4, 4}, a, 2)}, drops(5, {2, 2, 4, 4}, false)}},
                   false});
  } else {
    throw IndexError("corollary_chain supports 2 <= n <= 5");
  }
  return out;
}

MPoly expected_q4_terminal() {
  using poly::Partition;
  MPoly X2 = poly::X(2), X4 = poly::X(4);
  std::map<Partition, MPoly> c{
      {Partition({2, 2, 2, 2}), X2 * X2 * X4.pow(4)},
      {Partition({2, 2, 2, 1}), 2 * X2 * X2 * X4.pow(3)},
      {Partition({2, 2, 2}), X2 * X2 * X4 * X4},
      {Partition({2, 2, 1, 1}), 3 * X2 * X2 * X4 * X4},
      {Partition({2, 2, 1}), X2 * X2 * X4},
      {Partition({2, 1, 1, 1}), 4 * X2 * X2 * X4},
      {Partition({2, 1, 1}), X2 * X2},
      {Partition({1, 1, 1, 1}), X2 * (3 * X2 + 2 * X4)},
      {Partition({1, 1, 1}), X2},
  };
  return poly::from_monomial_basis(c, poly::xi_vars(4));
}

// ξ_j -> 1/ξ_j, X_2 -> 1/X_4, X_4 -> 1/X_2, denominators cleared by (ξ_1...ξ_4)^3 X_2^6 X_4^2.
MPoly q4_reciprocal(const MPoly& p) {
  VarList vars = poly::xi_vars(4);
  vars.push_back(Var::x(2));
  vars.push_back(Var::x(4));
  std::sort(vars.begin(), vars.end());
  std::vector<std::pair<std::vector<int>, Integer>> terms;
  for (const auto& t : p.terms()) {
    std::map<Var, int> e;
    auto ex = p.exponents(t);
    for (std::size_t i = 0; i < p.vars().size(); ++i) e[p.vars()[i]] = ex[i];
    std::map<Var, int> r;
    for (int j = 1; j <= 4; ++j) r[Var::xi(j)] = 3 - e[Var::xi(j)];
    r[Var::x(2)] = 6 - e[Var::x(4)];
    r[Var::x(4)] = 2 - e[Var::x(2)];
    std::vector<int> ne;
    for (const auto& v : vars) ne.push_back(r[v]);
    terms.push_back({ne, t.coeff});
  }
  return MPoly::from_terms(vars, std::move(terms));
}

}  // namespace

ConjectureReport corollary_chain(int n, const Mode& mode) {
  std::int64_t start = now_ns();
  ConjectureReport rep;
  rep.conjecture = "corollary_chain";
  rep.n = n;
  rep.mode = "symbolic";
  rep.data["chains"] = json::array();
  for (const auto& chain : chains_for(n)) {
    json cj;
    cj["name"] = chain.name;
    json stages = json::array();
    for (const auto& st : chain.stages) stages.push_back({{"num", side_json(st.num)}, {"den", side_json(st.den)}});
    cj["stages"] = stages;

    // numeric replay of every displayed step
    json steps = json::array();
    bool steps_ok = true;
    for (std::size_t s = 0; s + 1 < chain.stages.size(); ++s) {
      double worst = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < mode.samples; ++i) {
        Stream rng(mode.seed, i);
        Sample smp = sorted_sample(n, rng);
        double a = evaluate(chain.stages[s].num, smp) / evaluate(chain.stages[s].den, smp);
        double b = evaluate(chain.stages[s + 1].num, smp) / evaluate(chain.stages[s + 1].den, smp);
        worst = std::min(worst, (a - b) / std::max(std::abs(a), std::abs(b)));
      }
      bool ok = worst >= -mode.tol;
      steps_ok = steps_ok && ok;
      steps.push_back({{"step", s + 1}, {"min_relative_margin", worst}, {"ok", ok}});
    }
    cj["steps"] = steps;

    // exact terminal: num - den
    const Stage& last = chain.stages.back();
    MPoly diff = expand(last.num) - expand(last.den);
    json term;
    term["difference_terms"] = diff.size();
    term["equals_one"] = diff.is_zero();
    if (chain.terminal_claims_one) term["claimed_equal_one"] = true;
    VarList cone;
    for (const auto& v : diff.vars())
      if (v.bank == poly::Bank::X) cone.push_back(v);
    bool coeffs_ok = true;
    try {
      auto basis = poly::to_monomial_basis_poly(diff, poly::xi_vars(n));
      json coeffs = json::object();
      for (const auto& [lambda, c] : basis) {
        coeffs[lambda.label()] = c.to_string();
        if (!poly::difference_basis_certificate(c, cone).ok) coeffs_ok = false;
      }
      term["symmetric"] = true;
      term["monomial_basis"] = coeffs;
    } catch (const poly::NotSymmetric& e) {
      term["symmetric"] = false;
      term["asymmetry"] = e.what();
      coeffs_ok = poly::difference_basis_certificate(diff, cone).ok;
    }
    term["nonnegative"] = coeffs_ok;
    bool terminal_ok = coeffs_ok;
    if (chain.name == "Q3-steps-ii") {
      MPoly expected = poly::X(1) * (poly::X(1) - poly::X(2)).pow(2) * poly::xi(1) * poly::xi(2) * poly::xi(3);
      term["matches_expected"] = diff == expected;
      terminal_ok = terminal_ok && diff == expected;
    } else if (chain.name == "Q4") {
      MPoly shown = expected_q4_terminal();
      MPoly d = poly::X(2) - poly::X(4);
      bool normalized = diff == d * d * q4_reciprocal(shown);
      term["matches_display_literal"] = diff == shown;
      term["matches_display_reciprocal_times_d24_squared"] = normalized;
      term["vanishes_at_X2_eq_X4"] = diff.substitute({{Var::x(4), poly::X(2)}}).is_zero();
      terminal_ok = terminal_ok && normalized;
    }
    cj["terminal"] = term;
    cj["ok"] = steps_ok && terminal_ok;
    cj["required"] = chain.required;
    if (chain.required) rep.ok = rep.ok && steps_ok && terminal_ok;
    rep.data["chains"].push_back(cj);
  }
  rep.elapsed_ms = elapsed_since(start);
  return rep;
}

// ---------------------------------------------------------------------------
// Resultant machinery

namespace {

std::vector<MPoly> a_coeffs(int n, const std::function<MPoly(int)>& e) {
  std::vector<MPoly> a(n);
  for (int j = 0; j <= n - 1; ++j) {
    MPoly s;
    for (int i = j; i <= n - 1; ++i) s += x_prefix(i) * e(i - j);
    a[n - 1 - j] = (j % 2 ? -s : s);
  }
  return a;
}

MPoly e_sym(int k) { return k == 0 ? MPoly(1) : (k < 0 ? MPoly{} : poly::var(e_symbol(k))); }

PolyMatrix matmul(const PolyMatrix& a, const PolyMatrix& b) {
  std::size_t r = a.size(), m = b.size(), c = b.empty() ? 0 : b[0].size();
  PolyMatrix out(r, std::vector<MPoly>(c));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t k = 0; k < m; ++k)
      if (!a[i][k].is_zero())
        for (std::size_t j = 0; j < c; ++j) out[i][j] += a[i][k] * b[k][j];
  return out;
}

}  // namespace

json matrix_json(const PolyMatrix& m) {
  json j = json::array();
  for (const auto& row : m) {
    json r = json::array();
    for (const auto& v : row) r.push_back(v.to_string());
    j.push_back(r);
  }
  return j;
}

namespace {

// X_[m] with the conventions X_[0] = 1 and X_[m] = 0 for m < 0.
MPoly xp(int m) { return m < 0 ? MPoly{} : x_prefix(m); }
MPoly xv(int i) { return i >= 1 ? poly::X(i) : MPoly{}; }

void compare_matrix(const std::string& name, const PolyMatrix& displayed, const PolyMatrix& computed,
                    json& findings, bool& all_equal) {
  all_equal = true;
  for (std::size_t i = 0; i < computed.size(); ++i)
    for (std::size_t j = 0; j < computed.size(); ++j)
      if (!(displayed[i][j] == computed[i][j])) {
        all_equal = false;
        findings.push_back({{"matrix", name},
                            {"entry", {i, j}},
                            {"displayed", displayed[i][j].to_string()},
                            {"computed", computed[i][j].to_string()}});
      }
}

}  // namespace

ResCoeffs res_coeffs(int n) {
  ResCoeffs res;
  res.a = a_coeffs(n, [&](int k) { return e_full(k, n); });
  res.ok = true;
  for (int k = 1; k <= n; ++k) {
    MPoly f;
    for (int j = 0; j <= n - 1; ++j) f += res.a[j] * poly::xi(k).pow(static_cast<unsigned>(n - 1 - j));
    MPoly r = psi(range(1, n - 1), drop(range(1, n), k)) - f;
    res.ok = res.ok && r.is_zero();
    res.residuals.push_back(r);
  }
  return res;
}

ResultantDelta resultant_delta(int n) {
  if (n < 2 || n > 6) throw IndexError("resultant_delta requires 2 <= n <= 6");
  ResultantDelta res;
  res.n = n;
  std::vector<MPoly> a = a_coeffs(n, e_sym);
  int N = 2 * n - 1;
  PolyMatrix S(N, std::vector<MPoly>(N));
  for (int r = 0; r <= n - 2; ++r)
    for (int j = 0; j <= n; ++j) S[r][r + j] = j % 2 ? -e_sym(j) : e_sym(j);
  for (int s = 0; s <= n - 1; ++s)
    for (int j = 0; j <= n - 1; ++j) S[n - 1 + s][s + j] = a[j];
  res.sylvester = S;

  int m = n - 1;
  PolyMatrix A(m, std::vector<MPoly>(m)), B(m, std::vector<MPoly>(n)), C(n, std::vector<MPoly>(m)),
      D(n, std::vector<MPoly>(n));
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      if (i < m && j < m) A[i][j] = S[i][j];
      else if (i < m) B[i][j - m] = S[i][j];
      else if (j < m) C[i - m][j] = S[i][j];
      else D[i - m][j - m] = S[i][j];
    }
  // A is unit upper triangular; invert by back substitution.
  PolyMatrix Ainv(m, std::vector<MPoly>(m));
  for (int c = 0; c < m; ++c)
    for (int i = m - 1; i >= 0; --i) {
      MPoly v = i == c ? MPoly(1) : MPoly{};
      for (int j = i + 1; j < m; ++j) v -= A[i][j] * Ainv[j][c];
      Ainv[i][c] = v;
    }
  PolyMatrix CAB = matmul(matmul(C, Ainv), B);
  PolyMatrix delta = D;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) delta[i][j] -= CAB[i][j];
  res.delta = delta;

  // Row operations r_i += X_i r_{i-1}, descending, clear the first column.
  PolyMatrix t = delta;
  for (int i = n - 1; i >= 1; --i)
    for (int j = 0; j < n; ++j) t[i][j] += poly::X(i) * t[i - 1][j];
  bool first_col_unit = t[0][0] == MPoly(1);
  for (int i = 1; i < n; ++i) first_col_unit = first_col_unit && t[i][0].is_zero();
  PolyMatrix dp(m, std::vector<MPoly>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) dp[i][j] = t[i + 1][j + 1];
  res.delta_prime = dp;

  MPoly det_s = poly::determinant(S);
  MPoly det_d = poly::determinant(delta);
  MPoly det_dp = poly::determinant(dp);
  MPoly rn;
  {
    rn = MPoly(1);
    for (int k = 1; k <= n; ++k) rn *= psi(range(1, n - 1), drop(range(1, n), k));
  }
  bool syl_eq = expand_e(det_s, n) == rn;
  res.checks["det_sylvester_equals_Rn"] = syl_eq;
  {
    std::vector<MPoly> af = a_coeffs(n, [&](int k) { return e_full(k, n); });
    MPoly prod(1);
    for (int k = 1; k <= n; ++k) {
      MPoly f;
      for (int j = 0; j <= n - 1; ++j) f += af[j] * poly::xi(k).pow(static_cast<unsigned>(n - 1 - j));
      prod *= f;
    }
    res.checks["prod_f_equals_Rn"] = prod == rn;
  }
  res.checks["det_delta_equals_det_sylvester"] = det_d == det_s;
  res.checks["first_column_cleared"] = first_col_unit;
  res.checks["det_delta_prime_equals_det_sylvester"] = det_dp == det_s;
  bool diag_ok = true;
  for (int i = 1; i <= m; ++i) {
    Seq I = range(1, i);
    for (int v = i; v <= n - 1; ++v) I.push_back(v);
    diag_ok = diag_ok && dp[i - 1][i - 1] == psi_e(I);
  }
  res.checks["delta_prime_diagonal_is_psi"] = diag_ok;
  res.checks["sylvester_terms"] = det_s.size();

  // Displayed entry formulas, compared against the Schur complement.
  auto ecap = [n](int k) { return k > n ? MPoly{} : e_sym(k); };
  PolyMatrix shown_delta(n, std::vector<MPoly>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      MPoly v;
      if (i >= j) {
        for (int k = 0; k <= i - j; ++k) v += xp(i - k) * ecap(j - k);
        if ((i + j) % 2) v = -v;
      } else {
        for (int k = 0; k <= n; ++k) v += xp(j - i + k) * ecap(j - i + k + 1);
        if ((j - i) % 2) v = -v;
      }
      shown_delta[i][j] = v;
    }
  bool eq = false;
  compare_matrix("delta_formula", shown_delta, delta, res.findings, eq);
  res.checks["displayed_delta_formula_matches"] = eq;

  PolyMatrix shown_dp(m, std::vector<MPoly>(m));
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= m; ++j) {
      MPoly v;
      if (i < j) {
        for (int k = j + 1; k <= n - 1; ++k) v += xp(k - 1) * (xv(k) - xv(i)) * ecap(k + 1);
        if ((i + j + 1) % 2) v = -v;
      } else if (i == j) {
        Seq I = range(1, i);
        for (int w = i; w <= n - 1; ++w) I.push_back(w);
        v = psi_e(I);
      } else {
        for (int k = 0; k <= j - 1; ++k) v += xp(i - k - 2) * (xv(i - k - 1) - xv(i)) * ecap(k);
        if ((i + j) % 2) v = -v;
      }
      shown_dp[i - 1][j - 1] = v;
    }
  compare_matrix("delta_prime_formula", shown_dp, dp, res.findings, eq);
  res.checks["displayed_delta_prime_formula_matches"] = eq;

  MPoly X1 = poly::X(1), X2 = poly::X(2), X3 = poly::X(3);
  const auto& E = ecap;
  if (n == 3) {
    PolyMatrix shown{{MPoly(1), X1 * E(2) + X1 * X2 * E(3), -X1 * E(3)},
                     {-X1, 1 + X1 * E(1), X1 * X2 * E(3)},
                     {X1 * X2, -X1 - X1 * X2 * E(1), 1 + X1 * E(1) + X1 * X2 * E(2)}};
    compare_matrix("Delta3_display", shown, delta, res.findings, eq);
    res.checks["Delta3_display_matches"] = eq;
    PolyMatrix reduced{{psi_e({1, 1, 2}), X1 * (X2 - X1) * E(3)}, {X2 - X1, psi_e({1, 2, 2})}};
    compare_matrix("Delta3_reduced_display", reduced, dp, res.findings, eq);
    res.checks["Delta3_reduced_display_matches"] = eq;
  } else if (n == 4) {
    PolyMatrix shown{
        {psi_e({1, 1, 2, 3}), -X1 * (X1 - X2) * E(3) - X1 * X2 * (X1 - X3) * E(4), X1 * (X1 - X2) * E(4)},
        {-(X1 - X2), psi_e({1, 2, 2, 3}), -X1 * X2 * (X2 - X3) * E(4)},
        {X1 * (X2 - X3), -(X1 - X3) - X1 * (X2 - X3) * E(1), psi_e({1, 2, 3, 3})}};
    compare_matrix("Delta4_display", shown, dp, res.findings, eq);
    res.checks["Delta4_display_matches"] = eq;
  }
  res.ok = syl_eq && res.checks["prod_f_equals_Rn"].get<bool>() && det_d == det_s && first_col_unit &&
           det_dp == det_s && diag_ok;
  return res;
}

std::pair<double, double> hadamard_margin(const PolyMatrix& dp, const Sample& s) {
  std::size_t m = dp.size();
  std::vector<std::vector<double>> a(m, std::vector<double>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) a[i][j] = evaluate(dp[i][j], s);
  double diag = 1.0;
  for (std::size_t i = 0; i < m; ++i) diag *= a[i][i];
  double det = 1.0;
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < m; ++r)
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    if (a[p][c] == 0.0) {
      det = 0.0;
      break;
    }
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < m; ++r) {
      double f = a[r][c] / a[c][c];
      for (std::size_t j = c; j < m; ++j) a[r][j] -= f * a[c][j];
    }
  }
  return {diag - det, std::max(std::abs(diag), std::abs(det))};
}

ConjectureReport hadamard_check(int n, const Mode& mode) {
  std::int64_t start = now_ns();
  ConjectureReport rep;
  rep.conjecture = "hadamard";
  rep.n = n;
  rep.mode = "numeric";
  ResultantDelta rd = resultant_delta(n);
  double worst = std::numeric_limits<double>::infinity();
  std::size_t worst_index = 0;
  for (std::size_t i = 0; i < mode.samples; ++i) {
    Stream rng(mode.seed, i);
    Sample s = sorted_sample(n, rng);
    auto [margin, scale] = hadamard_margin(rd.delta_prime, s);
    double rel = margin / std::max(scale, 1e-300);
    if (rel < worst) {
      worst = rel;
      worst_index = i;
    }
  }
  // exact equality when all X coincide
  std::map<Var, MPoly> tie;
  for (int i = 2; i <= n; ++i) tie[Var::x(i)] = poly::X(1);
  PolyMatrix tied = rd.delta_prime;
  MPoly diag(1);
  for (std::size_t i = 0; i < tied.size(); ++i) {
    for (auto& v : tied[i]) v = v.substitute(tie);
    diag *= tied[i][i];
  }
  bool equal_at_tie = poly::determinant(tied) == diag;
  rep.ok = worst >= -mode.tol && equal_at_tie;
  rep.data["samples"] = mode.samples;
  rep.data["seed"] = mode.seed;
  rep.data["min_relative_margin"] = worst;
  rep.data["exact_equality_all_X_equal"] = equal_at_tie;
  if (worst < -mode.tol) rep.witness = json{{"seed", mode.seed}, {"sample_index", worst_index}, {"n", n}};
  rep.elapsed_ms = elapsed_since(start);
  return rep;
}

}  // namespace atiyah::typea
