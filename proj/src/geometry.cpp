#include "atiyah/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <Eigen/Dense>

#include "atiyah/rng.hpp"

namespace atiyah::geo {

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double DistanceSet::diameter() const {
  double best = 0;
  for (const auto& row : m)
    for (double v : row) best = std::max(best, v);
  return best;
}

double diameter(const Config& c) {
  double best = 0;
  for (int i = 0; i < c.n(); ++i)
    for (int j = i + 1; j < c.n(); ++j) best = std::max(best, norm(sub(c.points[i], c.points[j])));
  return best;
}

DistanceSet distances(const Config& c) {
  if (c.n() < 2) throw DegenerateConfig("configuration needs at least two points");
  DistanceSet d(c.n());
  for (int i = 0; i < c.n(); ++i)
    for (int j = i + 1; j < c.n(); ++j) d.set(i + 1, j + 1, norm(sub(c.points[i], c.points[j])));
  double diam = d.diameter();
  for (int i = 1; i <= c.n(); ++i)
    for (int j = i + 1; j <= c.n(); ++j)
      if (!(d.r(i, j) > 1e-12 * diam))
        throw DegenerateConfig("points " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
  return d;
}

namespace {

void require_four(const DistanceSet& d) {
  if (d.n != 4) throw GeometryError("vol2 needs exactly four points");
}

}  // namespace

double vol2_expansion(const DistanceSet& d) {
  require_four(d);
  auto s = [&](int i, int j) { return d.r(i, j) * d.r(i, j); };
  // opposite edge pairs and the four remaining edges of each
  const int pairs[3][4] = {{1, 2, 3, 4}, {1, 3, 2, 4}, {1, 4, 2, 3}};
  double v = 0;
  for (const auto& p : pairs) {
    double a = s(p[0], p[1]), b = s(p[2], p[3]);
    double rest = s(p[0], p[2]) + s(p[0], p[3]) + s(p[1], p[2]) + s(p[1], p[3]);
    v += -(a * a * b + a * b * b) + a * b * rest;
  }
  const int faces[4][3] = {{1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}};
  for (const auto& f : faces) v -= s(f[0], f[1]) * s(f[0], f[2]) * s(f[1], f[2]);
  return v / 144.0;
}

double vol2_cayley_menger(const DistanceSet& d) {
  require_four(d);
  Eigen::Matrix<double, 5, 5> cm;
  cm.setOnes();
  cm(0, 0) = 0;
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 4; ++j) cm(i, j) = d.r(i, j) * d.r(i, j);
  return cm.determinant() / 288.0;
}

double vol2(const DistanceSet& d) {
  double a = vol2_expansion(d), b = vol2_cayley_menger(d);
  double scale = std::pow(d.diameter(), 6);
  if (std::abs(a - b) > 1e-12 * scale)
    throw FormulaMismatch("vol2: expansion " + std::to_string(a) + " vs Cayley-Menger " + std::to_string(b));
  return b;
}

Config embed(const DistanceSet& d) {
  if (d.n > 8) throw GeometryError("embed supports at most 8 points");
  double diam = d.diameter();
  double tol = 1e-9 * diam * diam;
  Config c;
  c.points.push_back({0, 0, 0});
  int dim = 0;  // dimension of the affine span so far
  for (int k = 2; k <= d.n; ++k) {
    Vec3 p{0, 0, 0};
    if (dim > 0) {
      // |p - x_j|^2 = r_jk^2  =>  2 x_j . p = |x_j|^2 + r_1k^2 - r_jk^2, with p in the current span
      int rows = k - 2;
      Eigen::MatrixXd A(rows, dim);
      Eigen::VectorXd rhs(rows);
      for (int j = 2; j < k; ++j) {
        const Vec3& x = c.points[j - 1];
        for (int t = 0; t < dim; ++t) A(j - 2, t) = 2 * x[t];
        rhs(j - 2) = dot(x, x) + d.r(1, k) * d.r(1, k) - d.r(j, k) * d.r(j, k);
      }
      Eigen::VectorXd sol = A.colPivHouseholderQr().solve(rhs);
      for (int t = 0; t < dim; ++t) p[t] = sol(t);
    }
    double h2 = d.r(1, k) * d.r(1, k) - dot(p, p);
    if (h2 < -tol) throw NotRealizable("point " + std::to_string(k) + " has negative squared height");
    if (h2 > tol && dim < 3) {
      p[dim] = std::sqrt(h2);
      ++dim;
    } else if (h2 > tol) {
      throw NotRealizable("point " + std::to_string(k) + " does not fit in three dimensions");
    }
    c.points.push_back(p);
  }
  for (int i = 1; i <= d.n; ++i)
    for (int j = i + 1; j <= d.n; ++j) {
      double got = norm(sub(c.points[i - 1], c.points[j - 1]));
      if (std::abs(got - d.r(i, j)) > 1e-9 * diam)
        throw NotRealizable("distance r" + std::to_string(i) + std::to_string(j) + " is not reproduced");
    }
  return c;
}

double circumradius(double a, double b, double c) {
  double d3 = (a + b - c) * (b + c - a) * (c + a - b);
  return a * b * c / std::sqrt((a + b + c) * d3);
}

namespace {

FamilyMember realize(std::string kind, DistanceSet d) {
  FamilyMember f{std::move(kind), {}, d};
  f.config = embed(d);
  return f;
}

}  // namespace

FamilyMember upright(double a, double b, double c, double d) {
  if (!(a > 0 && b > 0 && c > 0 && d > 0)) throw ConstraintViolated("upright: lengths must be positive");
  if (!((a + b - c) > 0 && (b + c - a) > 0 && (c + a - b) > 0))
    throw ConstraintViolated("upright: base triangle a, b, c is degenerate or invalid");
  double R = circumradius(a, b, c);
  if (d < R) throw ConstraintViolated("upright: d >= R (circumradius " + std::to_string(R) + ")");
  DistanceSet s(4);
  s.set(2, 3, a);
  s.set(1, 3, b);
  s.set(1, 2, c);
  s.set(1, 4, d);
  s.set(2, 4, d);
  s.set(3, 4, d);
  return realize("upright", s);
}

FamilyMember tangential(const std::array<double, 4>& t) {
  for (double v : t)
    if (!(v > 0)) throw ConstraintViolated("tangential: t_i > 0");
  DistanceSet s(4);
  for (int i = 1; i <= 4; ++i)
    for (int j = i + 1; j <= 4; ++j) s.set(i, j, t[i - 1] + t[j - 1]);
  return realize("tangential", s);
}

FamilyMember isosceles(double a, double b, double c) {
  if (!(a > 0 && b > 0 && c > 0)) throw ConstraintViolated("isosceles: lengths must be positive");
  DistanceSet s(4);
  s.set(2, 3, a);
  s.set(1, 4, a);
  s.set(1, 3, b);
  s.set(2, 4, b);
  s.set(1, 2, c);
  s.set(3, 4, c);
  return realize("isosceles", s);
}

FamilyMember cyclic(const std::array<double, 4>& phi) {
  for (int i = 0; i < 3; ++i)
    if (!(phi[i] < phi[i + 1])) throw ConstraintViolated("cyclic: phi1 < phi2 < phi3 < phi4");
  if (!(phi[3] - phi[0] < 2 * std::numbers::pi)) throw ConstraintViolated("cyclic: angles span less than 2 pi");
  Config c;
  for (double p : phi) c.points.push_back({std::cos(p), std::sin(p), 0.0});
  return {"cyclic", c, distances(c)};
}

FamilyMember type_a(const std::vector<double>& a, double b) {
  for (std::size_t i = 0; i + 1 < a.size(); ++i)
    if (!(a[i] < a[i + 1])) throw ConstraintViolated("type_a: a_1 < a_2 < ... < a_n");
  if (b == 0) throw ConstraintViolated("type_a: b != 0");
  Config c;
  for (double v : a) c.points.push_back({v, 0.0, 0.0});
  c.points.push_back({0.0, b, 0.0});
  return {"type_a", c, distances(c)};
}

FamilyMember family(const std::string& kind, const std::map<std::string, double>& params) {
  auto get = [&](const std::string& k) {
    auto it = params.find(k);
    if (it == params.end()) throw ConstraintViolated(kind + ": missing parameter " + k);
    return it->second;
  };
  if (kind == "upright") return upright(get("a"), get("b"), get("c"), get("d"));
  if (kind == "tangential") return tangential({get("t1"), get("t2"), get("t3"), get("t4")});
  if (kind == "isosceles") return isosceles(get("a"), get("b"), get("c"));
  if (kind == "cyclic") return cyclic({get("phi1"), get("phi2"), get("phi3"), get("phi4")});
  if (kind == "type_a") {
    std::vector<double> a;
    for (int i = 1; params.count("a" + std::to_string(i)); ++i) a.push_back(get("a" + std::to_string(i)));
    double b = params.count("b") ? get("b") : 1.0;
    return type_a(a, b);
  }
  throw ConstraintViolated("unknown family " + kind);
}

double halfangle_cos2(double a, double b, double c) {
  // cos²(A/2) = ((b+c)² - a²) / (4bc)
  return ((b + c) * (b + c) - a * a) / (4 * b * c) + ((c + a) * (c + a) - b * b) / (4 * c * a) +
         ((a + b) * (a + b) - c * c) / (4 * a * b);
}

namespace {

double angle_at(const Config& c, int p, int q, int r) {
  Vec3 u = sub(c.points[q - 1], c.points[p - 1]), v = sub(c.points[r - 1], c.points[p - 1]);
  double cosv = dot(u, v) / (norm(u) * norm(v));
  return std::acos(std::clamp(cosv, -1.0, 1.0));
}

double half_cos2(double angle) {
  double h = std::cos(angle / 2);
  return h * h;
}

}  // namespace

TriangleAngles triangle_angles(const Config& c, int i, int j, int k) {
  return {angle_at(c, i, j, k), angle_at(c, j, k, i), angle_at(c, k, i, j)};
}

double relative_volume(const Config& c) {
  if (c.n() != 4) throw GeometryError("relative_volume needs four points");
  Vec3 a = sub(c.points[1], c.points[0]), b = sub(c.points[2], c.points[0]), e = sub(c.points[3], c.points[0]);
  double diam = diameter(c);
  return dot(a, cross(b, e)) / 6.0 / (diam * diam * diam);
}

QuadAngles quad_angle_data(const Config& c) {
  if (c.n() != 4) throw GeometryError("quad_angle_data needs four points");
  distances(c);
  if (std::abs(relative_volume(c)) > 1e-9) throw NotPlanar("quadrilateral is not planar");
  QuadAngles q;
  auto fill = [](const Config& cfg, std::array<TriangleAngles, 4>& tri) {
    tri[0] = triangle_angles(cfg, 2, 3, 4);
    tri[1] = triangle_angles(cfg, 3, 4, 1);
    tri[2] = triangle_angles(cfg, 4, 1, 2);
    tri[3] = triangle_angles(cfg, 1, 2, 3);
  };
  fill(c, q.tri);
  for (int l = 0; l < 4; ++l) q.c[l] = half_cos2(q.tri[l].X) + half_cos2(q.tri[l].Y) + half_cos2(q.tri[l].Z);
  const auto& t = q.tri;
  q.c_hat[0] = half_cos2(t[1].Z) + half_cos2(t[2].Y) + half_cos2(t[3].X);
  q.c_hat[1] = half_cos2(t[2].Z) + half_cos2(t[3].Y) + half_cos2(t[0].X);
  q.c_hat[2] = half_cos2(t[3].Z) + half_cos2(t[0].Y) + half_cos2(t[1].X);
  q.c_hat[3] = half_cos2(t[0].Z) + half_cos2(t[1].Y) + half_cos2(t[2].X);

  DistanceSet d = distances(c);
  q.moebius_c_sides = halfangle_cos2(d.r(1, 2) * d.r(3, 4), d.r(1, 3) * d.r(2, 4), d.r(1, 4) * d.r(2, 3));

  // Convex cyclic order in the plane of the points, starting at label 1.
  Vec3 normal{0, 0, 0};
  for (int i = 1; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      Vec3 cr = cross(sub(c.points[i], c.points[0]), sub(c.points[j], c.points[0]));
      if (norm(cr) > norm(normal)) normal = cr;
    }
  Vec3 e1 = sub(c.points[1], c.points[0]);
  e1 = {e1[0] / norm(e1), e1[1] / norm(e1), e1[2] / norm(e1)};
  double nn = norm(normal);
  Vec3 nz = {normal[0] / nn, normal[1] / nn, normal[2] / nn};
  Vec3 e2 = cross(nz, e1);
  std::array<std::array<double, 2>, 4> xy;
  for (int i = 0; i < 4; ++i) {
    Vec3 p = sub(c.points[i], c.points[0]);
    xy[i] = {dot(p, e1), dot(p, e2)};
  }
  auto orient = [&](int a, int b, int e) {
    return (xy[b][0] - xy[a][0]) * (xy[e][1] - xy[a][1]) - (xy[b][1] - xy[a][1]) * (xy[e][0] - xy[a][0]);
  };
  // convex iff no point lies inside the triangle of the other three
  for (int i = 0; i < 4 && q.convex; ++i) {
    int o[3], m = 0;
    for (int j = 0; j < 4; ++j)
      if (j != i) o[m++] = j;
    double s1 = orient(o[0], o[1], i), s2 = orient(o[1], o[2], i), s3 = orient(o[2], o[0], i);
    if ((s1 > 0 && s2 > 0 && s3 > 0) || (s1 < 0 && s2 < 0 && s3 < 0)) q.convex = false;
  }
  double cx = 0, cy = 0;
  for (const auto& p : xy) cx += p[0] / 4, cy += p[1] / 4;
  std::vector<int> order{0, 1, 2, 3};
  std::vector<double> ang(4);
  for (int i = 0; i < 4; ++i) ang[i] = std::atan2(xy[i][1] - cy, xy[i][0] - cx);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return ang[a] < ang[b]; });
  std::rotate(order.begin(), std::find(order.begin(), order.end(), 0), order.end());
  Config relabeled;
  for (int i : order) {
    relabeled.points.push_back(c.points[i]);
    q.convex_order.push_back(i + 1);
  }
  std::array<TriangleAngles, 4> rt;
  fill(relabeled, rt);
  double X = rt[3].X - rt[0].Z, Y = rt[1].Y + rt[3].Y, Z = rt[3].Z - rt[2].X;
  if (!q.convex) {
    // no convex order: read the angles off the image of 1, 2, 3 under inversion at 4
    Config inv;
    for (int i = 0; i < 3; ++i) {
      Vec3 v = sub(c.points[i], c.points[3]);
      double s = dot(v, v);
      inv.points.push_back({v[0] / s, v[1] / s, v[2] / s});
    }
    TriangleAngles ta = triangle_angles(inv, 1, 2, 3);
    X = ta.X, Y = ta.Y, Z = ta.Z;
  }
  q.moebius_angles = {X, Y, Z};
  q.moebius_c = half_cos2(X) + half_cos2(Y) + half_cos2(Z);
  return q;
}

Distribution parse_distribution(const std::string& s) {
  if (s == "ball") return Distribution::Ball;
  if (s == "sphere") return Distribution::Sphere;
  if (s == "gaussian") return Distribution::Gaussian;
  throw std::invalid_argument("unknown distribution " + s);
}

std::string to_string(Distribution d) {
  switch (d) {
    case Distribution::Ball: return "ball";
    case Distribution::Sphere: return "sphere";
    case Distribution::Gaussian: return "gaussian";
  }
  return "?";
}

Config random_config(int n, std::uint64_t seed, Distribution dist, std::uint64_t index, double min_separation,
                     int* resamples) {
  Stream rng(seed, index);
  for (;;) {
    Config c;
    for (int i = 0; i < n; ++i) {
      Vec3 p;
      switch (dist) {
        case Distribution::Ball:
          do {
            p = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
          } while (dot(p, p) > 1.0);
          break;
        case Distribution::Sphere: {
          double len;
          do {
            p = {rng.gaussian(), rng.gaussian(), rng.gaussian()};
            len = norm(p);
          } while (len < 1e-300);
          p = {p[0] / len, p[1] / len, p[2] / len};
          break;
        }
        case Distribution::Gaussian:
          p = {rng.gaussian(), rng.gaussian(), rng.gaussian()};
          break;
      }
      c.points.push_back(p);
    }
    double diam = diameter(c), closest = diam;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) closest = std::min(closest, norm(sub(c.points[i], c.points[j])));
    if (n < 2 || closest >= min_separation * diam) return c;
    if (resamples) ++*resamples;
  }
}

json to_json(const Config& c) {
  json j = json::array();
  for (const auto& p : c.points) j.push_back({p[0], p[1], p[2]});
  return j;
}

Config config_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("config must be a JSON array of [x,y,z]");
  Config c;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 3) throw std::invalid_argument("each point must be [x,y,z]");
    c.points.push_back({p[0].get<double>(), p[1].get<double>(), p[2].get<double>()});
  }
  return c;
}

json to_json(const DistanceSet& d) { return {{"n", d.n}, {"r", d.m}}; }

DistanceSet distances_from_json(const json& j) {
  DistanceSet d(j.at("n").get<int>());
  auto r = j.at("r").get<std::vector<std::vector<double>>>();
  if (static_cast<int>(r.size()) != d.n) throw std::invalid_argument("distance matrix has wrong size");
  for (int i = 0; i < d.n; ++i) {
    if (static_cast<int>(r[i].size()) != d.n) throw std::invalid_argument("distance matrix has wrong size");
    for (int k = 0; k < d.n; ++k)
      if (r[i][k] != r[k][i]) throw std::invalid_argument("distance matrix must be symmetric");
  }
  d.m = r;
  return d;
}

}  // namespace atiyah::geo
