#include "atiyah/poly.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <sstream>
#include <unordered_map>

namespace atiyah::poly {

namespace {

constexpr std::uint64_t kLow8 = 0x00FF00FF00FF00FFULL;

int byte_sum(std::uint64_t w) {
  std::uint64_t pairs = (w & kLow8) + ((w >> 8) & kLow8);
  return static_cast<int>((pairs * 0x0001000100010001ULL) >> 48);
}

using i128 = __int128;

Integer from_i128(i128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  Integer r = static_cast<std::uint64_t>(u >> 64);
  r <<= 64;
  r += static_cast<std::uint64_t>(u);
  return neg ? Integer(-r) : r;
}

std::size_t bit_length(const Integer& x) {
  if (x == 0) return 0;
  return boost::multiprecision::msb(boost::multiprecision::abs(x)) + 1;
}

// Open-addressing accumulator keyed by monomial.
template <class Acc>
class Accumulator {
 public:
  explicit Accumulator(std::size_t expected) {
    std::size_t cap = 16;
    while (cap < 2 * expected) cap <<= 1;
    slots_.assign(cap, -1);
    entries_.reserve(expected);
  }

  Acc& at(const Monomial& m) {
    if (2 * (entries_.size() + 1) > slots_.size()) grow();
    std::size_t mask = slots_.size() - 1;
    std::size_t h = MonomialHash{}(m) & mask;
    while (true) {
      int s = slots_[h];
      if (s < 0) {
        slots_[h] = static_cast<int>(entries_.size());
        entries_.push_back({m, Acc{}});
        return entries_.back().second;
      }
      if (entries_[s].first == m) return entries_[s].second;
      h = (h + 1) & mask;
    }
  }

  std::vector<std::pair<Monomial, Acc>>& entries() { return entries_; }

 private:
  void grow() {
    std::vector<int> fresh(slots_.size() * 2, -1);
    std::size_t mask = fresh.size() - 1;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      std::size_t h = MonomialHash{}(entries_[i].first) & mask;
      while (fresh[h] >= 0) h = (h + 1) & mask;
      fresh[h] = static_cast<int>(i);
    }
    slots_.swap(fresh);
  }

  std::vector<int> slots_;
  std::vector<std::pair<Monomial, Acc>> entries_;
};

std::vector<Term> drain(Accumulator<Integer>& acc) {
  std::vector<Term> out;
  out.reserve(acc.entries().size());
  for (auto& [m, c] : acc.entries())
    if (c != 0) out.push_back({m, std::move(c)});
  return out;
}

std::vector<Term> drain(Accumulator<i128>& acc) {
  std::vector<Term> out;
  out.reserve(acc.entries().size());
  for (auto& [m, c] : acc.entries())
    if (c != 0) out.push_back({m, from_i128(c)});
  return out;
}

void sort_terms(std::vector<Term>& terms) {
  std::vector<std::pair<int, std::size_t>> keys(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) keys[i] = {terms[i].mono.degree(), i};
  std::sort(keys.begin(), keys.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    const Monomial& ma = terms[a.second].mono;
    const Monomial& mb = terms[b.second].mono;
    if (ma.w[0] != mb.w[0]) return ma.w[0] > mb.w[0];
    return ma.w[1] > mb.w[1];
  });
  std::vector<Term> sorted;
  sorted.reserve(terms.size());
  for (auto& k : keys) sorted.push_back(std::move(terms[k.second]));
  terms.swap(sorted);
}

Integer binomial(int n, int k) {
  Integer r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Var

std::string Var::name() const {
  switch (bank) {
    case Bank::Xi: return "xi" + std::to_string(index);
    case Bank::X: return "X" + std::to_string(index);
    case Bank::T: return "t" + std::to_string(index);
    case Bank::Diff: return "d" + std::to_string(index);
    case Bank::Generic: return label;
  }
  return label;
}

Var Var::parse(const std::string& name) {
  auto numeric_suffix = [&](std::size_t from) -> std::optional<int> {
    if (from >= name.size()) return std::nullopt;
    for (std::size_t i = from; i < name.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(name[i]))) return std::nullopt;
    return std::stoi(name.substr(from));
  };
  if (name.rfind("xi", 0) == 0)
    if (auto i = numeric_suffix(2)) return xi(*i);
  if (name.rfind('X', 0) == 0)
    if (auto i = numeric_suffix(1)) return x(*i);
  if (name.rfind('t', 0) == 0)
    if (auto i = numeric_suffix(1)) return t(*i);
  if (name.rfind('d', 0) == 0)
    if (auto i = numeric_suffix(1)) return diff(*i);
  return named(name);
}

VarList xi_vars(int n) {
  VarList v;
  for (int i = 1; i <= n; ++i) v.push_back(Var::xi(i));
  return v;
}
VarList x_vars(int n) {
  VarList v;
  for (int i = 1; i <= n; ++i) v.push_back(Var::x(i));
  return v;
}
VarList t_vars(int n) {
  VarList v;
  for (int i = 1; i <= n; ++i) v.push_back(Var::t(i));
  return v;
}

VarList merge_vars(const VarList& a, const VarList& b) {
  VarList out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// ---------------------------------------------------------------------------
// Monomial

void Monomial::set_exp(int i, int e) {
  if (e < 0 || e > 255) throw PolyError("exponent out of range");
  int shift = 8 * (7 - i % 8);
  w[i / 8] = (w[i / 8] & ~(0xFFULL << shift)) | (static_cast<std::uint64_t>(e) << shift);
}

int Monomial::degree() const { return byte_sum(w[0]) + byte_sum(w[1]); }

bool Monomial::divides(const Monomial& o) const {
  for (int i = 0; i < kMaxVars; ++i)
    if (exp(i) > o.exp(i)) return false;
  return true;
}

bool grlex_greater(const Monomial& a, const Monomial& b) {
  int da = a.degree(), db = b.degree();
  if (da != db) return da > db;
  if (a.w[0] != b.w[0]) return a.w[0] > b.w[0];
  return a.w[1] > b.w[1];
}

// ---------------------------------------------------------------------------
// MPoly basics

MPoly::MPoly(long long c) {
  if (c != 0) terms_.push_back({Monomial{}, Integer(c)});
}

MPoly::MPoly(const Integer& c) {
  if (c != 0) terms_.push_back({Monomial{}, c});
}

MPoly MPoly::variable(const Var& v) {
  MPoly p;
  p.vars_ = {v};
  Monomial m;
  m.set_exp(0, 1);
  p.terms_.push_back({m, Integer(1)});
  return p;
}

MPoly var(const Var& v) { return MPoly::variable(v); }

MPoly MPoly::from_terms(VarList vars, std::vector<std::pair<std::vector<int>, Integer>> terms) {
  if (!std::is_sorted(vars.begin(), vars.end()) ||
      std::adjacent_find(vars.begin(), vars.end()) != vars.end())
    throw PolyError("from_terms: variable list must be sorted and unique");
  if (vars.size() > Monomial::kMaxVars) throw PolyError("too many variables");
  MPoly p;
  p.vars_ = std::move(vars);
  for (auto& [exps, c] : terms) {
    if (exps.size() != p.vars_.size()) throw PolyError("from_terms: exponent length mismatch");
    Monomial m;
    for (std::size_t i = 0; i < exps.size(); ++i) m.set_exp(static_cast<int>(i), exps[i]);
    p.terms_.push_back({m, std::move(c)});
  }
  p.canonicalize();
  return p;
}

bool MPoly::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.degree() == 0); }

Integer MPoly::constant_term() const {
  if (!terms_.empty() && terms_.back().mono.degree() == 0) return terms_.back().coeff;
  return 0;
}

int MPoly::degree() const { return terms_.empty() ? -1 : terms_.front().mono.degree(); }

int MPoly::var_position(const Var& v) const {
  auto it = std::lower_bound(vars_.begin(), vars_.end(), v);
  if (it == vars_.end() || !(*it == v)) return -1;
  return static_cast<int>(it - vars_.begin());
}

int MPoly::degree_in(const Var& v) const {
  int pos = var_position(v);
  if (pos < 0) return 0;
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, t.mono.exp(pos));
  return d;
}

std::vector<int> MPoly::exponents(const Term& t) const {
  std::vector<int> e(vars_.size());
  for (std::size_t i = 0; i < vars_.size(); ++i) e[i] = t.mono.exp(static_cast<int>(i));
  return e;
}

Integer MPoly::coefficient(const std::vector<std::pair<Var, int>>& mono) const {
  Monomial target;
  for (const auto& [v, e] : mono) {
    if (e == 0) continue;
    int pos = var_position(v);
    if (pos < 0) return 0;
    target.set_exp(pos, target.exp(pos) + e);
  }
  for (const auto& t : terms_)
    if (t.mono == target) return t.coeff;
  return 0;
}

void MPoly::canonicalize() {
  // merge duplicates
  if (!terms_.empty()) {
    Accumulator<Integer> acc(terms_.size());
    for (auto& t : terms_) acc.at(t.mono) += t.coeff;
    terms_ = drain(acc);
    sort_terms(terms_);
  }
  // trim unused variables
  std::array<std::uint64_t, 2> used{0, 0};
  for (const auto& t : terms_) {
    used[0] |= t.mono.w[0];
    used[1] |= t.mono.w[1];
  }
  std::vector<int> keep;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    int shift = 8 * (7 - static_cast<int>(i) % 8);
    if ((used[i / 8] >> shift) & 0xFFu) keep.push_back(static_cast<int>(i));
  }
  if (keep.size() == vars_.size()) return;
  VarList nv;
  for (int i : keep) nv.push_back(vars_[i]);
  for (auto& t : terms_) {
    Monomial m;
    for (std::size_t j = 0; j < keep.size(); ++j) m.set_exp(static_cast<int>(j), t.mono.exp(keep[j]));
    t.mono = m;
  }
  vars_ = std::move(nv);
  // relative order of kept variables is unchanged, so sort order is preserved
}

MPoly MPoly::remapped(const VarList& target) const {
  if (target == vars_) return *this;
  if (target.size() > Monomial::kMaxVars) throw PolyError("too many variables (max 16)");
  std::vector<int> pos(vars_.size());
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    auto it = std::lower_bound(target.begin(), target.end(), vars_[i]);
    pos[i] = static_cast<int>(it - target.begin());
  }
  MPoly r;
  r.vars_ = target;
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) {
    Monomial m;
    for (std::size_t i = 0; i < vars_.size(); ++i) m.set_exp(pos[i], t.mono.exp(static_cast<int>(i)));
    r.terms_.push_back({m, t.coeff});
  }
  // embedding preserves lexicographic order of exponent vectors and degrees
  return r;
}

bool operator==(const MPoly& a, const MPoly& b) {
  if (a.vars_ != b.vars_ || a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i)
    if (!(a.terms_[i].mono == b.terms_[i].mono) || a.terms_[i].coeff != b.terms_[i].coeff) return false;
  return true;
}

MPoly MPoly::operator-() const {
  MPoly r = *this;
  for (auto& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

MPoly operator+(const MPoly& a, const MPoly& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return b;
  VarList vars = merge_vars(a.vars_, b.vars_);
  MPoly x = a.remapped(vars), y = b.remapped(vars);
  MPoly r;
  r.vars_ = vars;
  r.terms_.reserve(x.terms_.size() + y.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < x.terms_.size() || j < y.terms_.size()) {
    if (j == y.terms_.size() || (i < x.terms_.size() && grlex_greater(x.terms_[i].mono, y.terms_[j].mono))) {
      r.terms_.push_back(x.terms_[i++]);
    } else if (i == x.terms_.size() || grlex_greater(y.terms_[j].mono, x.terms_[i].mono)) {
      r.terms_.push_back(y.terms_[j++]);
    } else {
      Integer c = x.terms_[i].coeff + y.terms_[j].coeff;
      if (c != 0) r.terms_.push_back({x.terms_[i].mono, std::move(c)});
      ++i;
      ++j;
    }
  }
  // trim (sorting is already correct); canonicalize re-merges cheaply
  std::array<std::uint64_t, 2> used{0, 0};
  for (const auto& t : r.terms_) {
    used[0] |= t.mono.w[0];
    used[1] |= t.mono.w[1];
  }
  bool all_used = true;
  for (std::size_t k = 0; k < vars.size(); ++k)
    if (!((used[k / 8] >> (8 * (7 - k % 8))) & 0xFFu)) all_used = false;
  if (!all_used) r.canonicalize();
  return r;
}

MPoly operator-(const MPoly& a, const MPoly& b) { return a + (-b); }

MPoly operator*(const MPoly& a, const MPoly& b) {
  if (a.is_zero() || b.is_zero()) return MPoly{};
  VarList vars = merge_vars(a.vars_, b.vars_);
  MPoly x = a.remapped(vars), y = b.remapped(vars);
  for (std::size_t k = 0; k < vars.size(); ++k) {
    Var v = vars[k];
    if (x.degree_in(v) + y.degree_in(v) > 255) throw PolyError("exponent overflow in product");
  }
  const MPoly& big = x.terms_.size() >= y.terms_.size() ? x : y;
  const MPoly& small = x.terms_.size() >= y.terms_.size() ? y : x;

  std::size_t bits_x = 0, bits_y = 0;
  for (const auto& t : x.terms_) bits_x = std::max(bits_x, bit_length(t.coeff));
  for (const auto& t : y.terms_) bits_y = std::max(bits_y, bit_length(t.coeff));
  std::size_t fan = std::bit_width(small.terms_.size());

  MPoly r;
  r.vars_ = vars;
  std::size_t expected = std::min<std::size_t>(x.terms_.size() * y.terms_.size(), 1u << 22);
  if (bits_x <= 62 && bits_y <= 62 && bits_x + bits_y + fan <= 125) {
    std::vector<long long> cs(small.terms_.size()), cb(big.terms_.size());
    for (std::size_t i = 0; i < small.terms_.size(); ++i) cs[i] = small.terms_[i].coeff.convert_to<long long>();
    for (std::size_t i = 0; i < big.terms_.size(); ++i) cb[i] = big.terms_[i].coeff.convert_to<long long>();
    Accumulator<i128> acc(expected);
    for (std::size_t i = 0; i < small.terms_.size(); ++i)
      for (std::size_t j = 0; j < big.terms_.size(); ++j)
        acc.at(small.terms_[i].mono * big.terms_[j].mono) += static_cast<i128>(cs[i]) * cb[j];
    r.terms_ = drain(acc);
  } else {
    Accumulator<Integer> acc(expected);
    for (const auto& s : small.terms_)
      for (const auto& bt : big.terms_) acc.at(s.mono * bt.mono) += s.coeff * bt.coeff;
    r.terms_ = drain(acc);
  }
  sort_terms(r.terms_);
  return r;
}

MPoly MPoly::pow(unsigned e) const {
  MPoly result(1), base = *this;
  while (e) {
    if (e & 1u) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}

MPoly MPoly::scaled(const Integer& c) const {
  if (c == 0) return MPoly{};
  MPoly r = *this;
  for (auto& t : r.terms_) t.coeff *= c;
  return r;
}

MPoly MPoly::derivative(const Var& v) const {
  int pos = var_position(v);
  if (pos < 0) return MPoly{};
  MPoly r;
  r.vars_ = vars_;
  for (const auto& t : terms_) {
    int e = t.mono.exp(pos);
    if (e == 0) continue;
    Monomial m = t.mono;
    m.set_exp(pos, e - 1);
    r.terms_.push_back({m, t.coeff * e});
  }
  r.canonicalize();
  return r;
}

MPoly MPoly::substitute(const std::map<Var, MPoly>& bindings) const {
  std::vector<int> bound_pos;
  std::vector<const MPoly*> images;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    auto it = bindings.find(vars_[i]);
    if (it != bindings.end()) {
      bound_pos.push_back(static_cast<int>(i));
      images.push_back(&it->second);
    }
  }
  if (bound_pos.empty()) return *this;

  // group terms by the exponent pattern of the bound variables
  std::map<std::vector<int>, MPoly> groups;
  for (const auto& t : terms_) {
    std::vector<int> key(bound_pos.size());
    Monomial rest = t.mono;
    for (std::size_t b = 0; b < bound_pos.size(); ++b) {
      key[b] = t.mono.exp(bound_pos[b]);
      rest.set_exp(bound_pos[b], 0);
    }
    MPoly& g = groups[key];
    g.vars_ = vars_;
    g.terms_.push_back({rest, t.coeff});
  }
  std::vector<std::map<int, MPoly>> power_cache(bound_pos.size());
  auto power = [&](std::size_t b, int e) -> const MPoly& {
    auto& cache = power_cache[b];
    auto it = cache.find(e);
    if (it != cache.end()) return it->second;
    return cache.emplace(e, images[b]->pow(static_cast<unsigned>(e))).first->second;
  };
  MPoly out;
  for (auto& [key, g] : groups) {
    g.canonicalize();
    MPoly piece = g;
    for (std::size_t b = 0; b < bound_pos.size(); ++b)
      if (key[b] > 0) piece *= power(b, key[b]);
    out += piece;
  }
  return out;
}

MPoly MPoly::translate(const Var& x, const Var& y, const Var& d) const {
  int px = var_position(x);
  if (px < 0) return *this;
  VarList vars = merge_vars(vars_, {y});
  vars = merge_vars(vars, {d});
  std::erase(vars, x);
  if (std::find(vars.begin(), vars.end(), x) != vars.end()) throw PolyError("translate: x must differ from y, d");
  MPoly src = remapped(merge_vars(vars, {x}));
  int sx = src.var_position(x);
  std::vector<int> to_new(src.vars_.size(), -1);
  for (std::size_t i = 0; i < src.vars_.size(); ++i)
    if (static_cast<int>(i) != sx)
      to_new[i] = static_cast<int>(std::lower_bound(vars.begin(), vars.end(), src.vars_[i]) - vars.begin());
  int py = static_cast<int>(std::lower_bound(vars.begin(), vars.end(), y) - vars.begin());
  int pd = static_cast<int>(std::lower_bound(vars.begin(), vars.end(), d) - vars.begin());

  int max_e = src.degree_in(x);
  std::vector<std::vector<Integer>> binom(max_e + 1);
  for (int e = 0; e <= max_e; ++e)
    for (int m = 0; m <= e; ++m) binom[e].push_back(binomial(e, m));

  Accumulator<Integer> acc(src.terms_.size() * 4);
  for (const auto& t : src.terms_) {
    Monomial base;
    for (std::size_t i = 0; i < src.vars_.size(); ++i)
      if (static_cast<int>(i) != sx) base.set_exp(to_new[i], t.mono.exp(static_cast<int>(i)));
    int e = t.mono.exp(sx);
    for (int m = 0; m <= e; ++m) {
      Monomial mm = base;
      mm.set_exp(py, mm.exp(py) + e - m);
      mm.set_exp(pd, mm.exp(pd) + m);
      acc.at(mm) += t.coeff * binom[e][m];
    }
  }
  MPoly r;
  r.vars_ = vars;
  r.terms_ = drain(acc);
  r.canonicalize();
  return r;
}

MPoly MPoly::swapped(const Var& a, const Var& b) const {
  if (a == b) return *this;
  VarList renamed = vars_;
  for (auto& v : renamed) {
    if (v == a) v = b;
    else if (v == b) v = a;
  }
  VarList sorted = renamed;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> pos(vars_.size());
  for (std::size_t i = 0; i < renamed.size(); ++i)
    pos[i] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), renamed[i]) - sorted.begin());
  MPoly r;
  r.vars_ = sorted;
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) {
    Monomial m;
    for (std::size_t i = 0; i < vars_.size(); ++i) m.set_exp(pos[i], t.mono.exp(static_cast<int>(i)));
    r.terms_.push_back({m, t.coeff});
  }
  sort_terms(r.terms_);
  return r;
}

std::optional<MPoly> MPoly::divide_by_monomial(const std::vector<std::pair<Var, int>>& mono) const {
  Monomial divisor;
  for (const auto& [v, e] : mono) {
    if (e == 0) continue;
    int pos = var_position(v);
    if (pos < 0) {
      if (is_zero()) return MPoly{};
      return std::nullopt;
    }
    divisor.set_exp(pos, divisor.exp(pos) + e);
  }
  MPoly r;
  r.vars_ = vars_;
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) {
    if (!divisor.divides(t.mono)) return std::nullopt;
    r.terms_.push_back({t.mono / divisor, t.coeff});
  }
  r.canonicalize();
  return r;
}

namespace {

template <class Real>
Real evaluate_impl(const MPoly& p, const std::map<Var, Real>& point) {
  const auto& vars = p.vars();
  std::vector<std::vector<Real>> powers(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) {
    auto it = point.find(vars[i]);
    if (it == point.end()) throw PolyError("evaluate: no value for " + vars[i].name());
    int d = p.degree_in(vars[i]);
    powers[i].resize(d + 1);
    powers[i][0] = 1;
    for (int e = 1; e <= d; ++e) powers[i][e] = powers[i][e - 1] * it->second;
  }
  Real total = 0;
  for (const auto& t : p.terms()) {
    Real v = t.coeff.template convert_to<Real>();
    for (std::size_t i = 0; i < vars.size(); ++i) {
      int e = t.mono.exp(static_cast<int>(i));
      if (e) v *= powers[i][e];
    }
    total += v;
  }
  return total;
}

}  // namespace

double MPoly::evaluate(const std::map<Var, double>& point) const { return evaluate_impl(*this, point); }

long double MPoly::evaluate_ld(const std::map<Var, long double>& point) const {
  return evaluate_impl(*this, point);
}

std::string MPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) os << " + ";
    first = false;
    os << t.coeff;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      int e = t.mono.exp(static_cast<int>(i));
      if (e == 0) continue;
      os << '*' << vars_[i].name();
      if (e > 1) os << '^' << e;
    }
  }
  return os.str();
}

MPoly MPoly::parse(const std::string& text) {
  // Accepts the canonical form plus optional whitespace and '-' separators.
  MPoly out;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto fail = [&](const std::string& why) { throw PolyError("parse error at " + std::to_string(i) + ": " + why); };
  skip_ws();
  if (text.substr(i) == "0") return out;
  int sign = 1;
  while (i < text.size()) {
    skip_ws();
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      if (text[i] == '-') sign = -sign;
      ++i;
      skip_ws();
    }
    std::size_t start = i;
    if (i < text.size() && text[i] == '-') {
      sign = -sign;
      ++i;
      start = i;
    }
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    Integer coeff = 1;
    bool has_coeff = i > start;
    if (has_coeff) coeff = Integer(text.substr(start, i - start));
    MPoly term(coeff * sign);
    sign = 1;
    bool expect_factor = !has_coeff;
    while (i < text.size()) {
      if (text[i] == '*') {
        ++i;
        expect_factor = true;
        continue;
      }
      if (!expect_factor) break;
      std::size_t ns = i;
      while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) ++i;
      if (i == ns) fail("expected variable name");
      Var v = Var::parse(text.substr(ns, i - ns));
      int e = 1;
      if (i < text.size() && text[i] == '^') {
        ++i;
        std::size_t es = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (i == es) fail("expected exponent");
        e = std::stoi(text.substr(es, i - es));
      }
      term *= MPoly::variable(v).pow(static_cast<unsigned>(e));
      expect_factor = false;
    }
    out += term;
    skip_ws();
    if (i < text.size() && text[i] != '+' && text[i] != '-') fail("unexpected character");
  }
  return out;
}

std::map<std::vector<int>, MPoly> MPoly::collect(const VarList& keys) const {
  std::vector<int> kpos(keys.size());
  for (std::size_t k = 0; k < keys.size(); ++k) kpos[k] = var_position(keys[k]);
  std::map<std::vector<int>, MPoly> out;
  for (const auto& t : terms_) {
    std::vector<int> key(keys.size(), 0);
    Monomial rest = t.mono;
    for (std::size_t k = 0; k < keys.size(); ++k) {
      if (kpos[k] < 0) continue;
      key[k] = t.mono.exp(kpos[k]);
      rest.set_exp(kpos[k], 0);
    }
    MPoly& g = out[key];
    g.vars_ = vars_;
    g.terms_.push_back({rest, t.coeff});
  }
  for (auto& [k, g] : out) g.canonicalize();
  return out;
}

MPoly product(std::span<const MPoly> factors) {
  MPoly r(1);
  for (const auto& f : factors) r *= f;
  return r;
}

MPoly sum(std::span<const MPoly> terms) {
  MPoly r;
  for (const auto& t : terms) r += t;
  return r;
}

}  // namespace atiyah::poly
