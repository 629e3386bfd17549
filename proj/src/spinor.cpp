#include "atiyah/spinor.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include <Eigen/Dense>

#include "atiyah/exactpoly.hpp"

namespace atiyah::spinor {

namespace {
constexpr double kChartEps = 1e-6;
}

Spinor hopf_spinor(const geo::Vec3& v) {
  double x = v[0], y = v[1], z = v[2];
  if (1 + z >= kChartEps) {
    double s = std::sqrt(2 * (1 + z));
    cd alpha(std::sqrt((1 + z) / 2), 0), beta = cd(x, y) / s;
    double len = std::sqrt(std::norm(alpha) + std::norm(beta));
    return {alpha / len, beta / len};
  }
  return conj_antipode(hopf_spinor({-x, -y, -z}));
}

Spinor conj_antipode(const Spinor& s) { return {-std::conj(s.beta), std::conj(s.alpha)}; }

geo::Vec3 direction(const Spinor& s) {
  cd ab = 2.0 * std::conj(s.alpha) * s.beta;
  return {ab.real(), ab.imag(), std::norm(s.alpha) - std::norm(s.beta)};
}

std::vector<std::vector<Spinor>> pair_spinors(const geo::Config& c) {
  geo::distances(c);
  int n = c.n();
  std::vector<std::vector<Spinor>> s(n, std::vector<Spinor>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      geo::Vec3 d = geo::sub(c.points[j], c.points[i]);
      double len = geo::norm(d);
      s[i][j] = hopf_spinor({d[0] / len, d[1] / len, d[2] / len});
      s[j][i] = conj_antipode(s[i][j]);
    }
  return s;
}

CMatrix matrix_from_spinors(const std::vector<std::vector<Spinor>>& s) {
  int n = static_cast<int>(s.size());
  CMatrix m(n, std::vector<cd>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    std::vector<cd> row{1.0};
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      // multiply by (alpha t - beta)
      std::vector<cd> next(row.size() + 1, 0.0);
      for (std::size_t k = 0; k < row.size(); ++k) {
        next[k] -= s[i][j].beta * row[k];
        next[k + 1] += s[i][j].alpha * row[k];
      }
      row = std::move(next);
    }
    m[i] = row;
  }
  return m;
}

CMatrix atiyah_matrix(const geo::Config& c) { return matrix_from_spinors(pair_spinors(c)); }

cd determinant(CMatrix m) {
  int n = static_cast<int>(m.size());
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = m[i][j];
  return a.partialPivLu().determinant();
}

cd normalized_det(const geo::Config& c) { return determinant(atiyah_matrix(c)); }

namespace {

double edge_product(const geo::Config& c) {
  double p = 1;
  for (int i = 0; i < c.n(); ++i)
    for (int j = i + 1; j < c.n(); ++j) p *= geo::norm(geo::sub(c.points[i], c.points[j]));
  return p;
}

}  // namespace

cd en_phase(int n) {
  static std::mutex mu;
  static std::map<int, cd> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  // unit square for n = 4, the regular n-gon otherwise (a segment for n = 2)
  geo::Config ref;
  for (int k = 0; k < n; ++k) {
    double a = 2 * std::numbers::pi * k / n;
    ref.points.push_back({std::cos(a), std::sin(a), 0.0});
  }
  cd d = normalized_det(ref);
  cd phase = std::conj(d) / std::abs(d);
  cache.emplace(n, phase);
  return phase;
}

cd det_m(const geo::Config& c) {
  int n = c.n();
  return std::ldexp(1.0, n * (n - 1) / 2) * edge_product(c) * normalized_det(c) * en_phase(n);
}

double energy(const geo::Config& c) { return -std::log(std::abs(normalized_det(c))); }

poly::Var lambda_var(int i) { return poly::Var::named("L" + std::to_string(i)); }

TypeADet type_a_det(const std::vector<double>& lambda) {
  int n = static_cast<int>(lambda.size());
  TypeADet r;
  for (int i = 0; i + 1 < n; ++i)
    if (!(lambda[i] < lambda[i + 1])) r.increasing = false;
  std::vector<double> e(n + 1, 0.0);
  e[0] = 1;
  for (double l : lambda)
    for (int k = n; k >= 1; --k) e[k] += l * e[k - 1];
  r.matrix.assign(n + 1, std::vector<double>(n + 1, 0.0));
  for (int i = 0; i < n; ++i) {
    r.matrix[i][i] = 1;
    r.matrix[i][i + 1] = lambda[i];
  }
  for (int j = 0; j <= n; ++j) r.matrix[n][j] = ((n - j) % 2 ? -1.0 : 1.0) * e[n - j];
  Eigen::MatrixXd m(n + 1, n + 1);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) m(i, j) = r.matrix[i][j];
  r.det = m.partialPivLu().determinant();
  double prefix = 1;
  r.formula = 0;
  for (int k = 0; k <= n; ++k) {
    if (k > 0) prefix *= lambda[n - k];
    r.formula += e[k] * prefix;
  }
  r.product_bound = 1;
  for (double l : lambda) r.product_bound *= 1 + l * l;
  return r;
}

poly::MPoly type_a_det_symbolic(int n) {
  poly::VarList vars;
  for (int i = 1; i <= n; ++i) vars.push_back(lambda_var(i));
  poly::PolyMatrix m(n + 1, std::vector<poly::MPoly>(n + 1));
  for (int i = 0; i < n; ++i) {
    m[i][i] = poly::MPoly(1);
    m[i][i + 1] = poly::var(lambda_var(i + 1));
  }
  for (int j = 0; j <= n; ++j) {
    poly::MPoly e = poly::elementary(n - j, vars);
    m[n][j] = (n - j) % 2 ? -e : e;
  }
  return poly::determinant(m);
}

std::vector<double> type_a_lambdas(const std::vector<double>& a, double b) {
  std::vector<double> l;
  for (double v : a) l.push_back(v + std::sqrt(v * v + b * b));
  return l;
}

namespace {

geo::Config drop_point(const geo::Config& c, int k) {
  geo::Config out;
  for (int i = 0; i < c.n(); ++i)
    if (i != k) out.points.push_back(c.points[i]);
  return out;
}

double d3(double a, double b, double c) { return (a + b - c) * (b + c - a) * (c + a - b); }

}  // namespace

Margins margins(const geo::Config& c) {
  int n = c.n();
  Margins m;
  m.abs_d = std::abs(normalized_det(c));
  m.c2 = m.abs_d - 1;
  double lhs = std::pow(m.abs_d, n - 2), rhs = 1;
  for (int k = 0; k < n; ++k) rhs *= n - 1 >= 2 ? std::abs(normalized_det(drop_point(c, k))) : 1.0;
  m.c3 = lhs - rhs;
  m.c3_normalized = m.c3 / std::max(lhs, rhs);
  return m;
}

ConjectureReport as_margins(const geo::Config& c) {
  std::int64_t start = now_ns();
  if (c.n() < 3) throw geo::GeometryError("as_margins needs n >= 3");
  ConjectureReport rep;
  rep.conjecture = "atiyah_sutcliffe";
  rep.mode = "numeric";
  rep.n = c.n();
  Margins m = margins(c);
  rep.data["abs_D"] = m.abs_d;
  rep.data["C1"] = {{"abs_D", m.abs_d}, {"ok", m.abs_d > 0}};
  rep.data["C2_margin"] = m.c2;
  rep.data["C3_margin"] = m.c3;
  rep.data["C3_normalized_margin"] = m.c3_normalized;
  if (c.n() == 4) {
    geo::DistanceSet d = geo::distances(c);
    double faces = 1;
    const int f[4][3] = {{1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}};
    for (const auto& t : f) {
      double a = d.r(t[0], t[1]), b = d.r(t[0], t[2]), e = d.r(t[1], t[2]);
      faces *= d3(a, b, e) + 8 * a * b * e;
    }
    double lhs = std::norm(det_m(c));
    rep.data["C3_face_form"] = {{"abs_det_m4_sq", lhs}, {"face_product", faces}, {"margin", lhs - faces}};
  }
  rep.ok = m.abs_d > 0 && m.c2 >= -1e-9 && m.c3_normalized >= -1e-9;
  rep.elapsed_ms = elapsed_since(start);
  return rep;
}

}  // namespace atiyah::spinor
