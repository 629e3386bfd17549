#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "atiyah/geometry.hpp"
#include "atiyah/rng.hpp"

using namespace atiyah;
using namespace atiyah::geo;

namespace {

Config regular_tetrahedron() {
  double s = 1 / std::sqrt(8.0);
  return {{{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}}};
}

double max_rel_diff(const DistanceSet& a, const DistanceSet& b) {
  double m = 0;
  for (int i = 1; i <= a.n; ++i)
    for (int j = i + 1; j <= a.n; ++j) m = std::max(m, std::abs(a.r(i, j) - b.r(i, j)) / b.diameter());
  return m;
}

// Rotation from a random unit quaternion, then scale and shift.
Config random_similarity(const Config& c, Stream& rng) {
  double q[4], n = 0;
  for (double& x : q) x = rng.gaussian(), n += x * x;
  n = std::sqrt(n);
  for (double& x : q) x /= n;
  double w = q[0], x = q[1], y = q[2], z = q[3];
  double R[3][3] = {{1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)},
                    {2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)},
                    {2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)}};
  double s = rng.uniform(0.2, 5.0);
  Vec3 t{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
  Config out;
  for (const Vec3& p : c.points) {
    Vec3 q2{};
    for (int i = 0; i < 3; ++i) q2[i] = s * (R[i][0] * p[0] + R[i][1] * p[1] + R[i][2] * p[2]) + t[i];
    out.points.push_back(q2);
  }
  return out;
}

}  // namespace

TEST_CASE("distances of simple configurations") {
  Config square{{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}};
  DistanceSet d = distances(square);
  CHECK(d.r(1, 2) == doctest::Approx(1.0));
  CHECK(d.r(1, 3) == doctest::Approx(std::sqrt(2.0)));
  DistanceSet t = distances(regular_tetrahedron());
  for (int i = 1; i <= 4; ++i)
    for (int j = i + 1; j <= 4; ++j) CHECK(t.r(i, j) == doctest::Approx(1.0).epsilon(1e-14));
  Config twice{{{0, 0, 0}, {1, 2, 3}, {1, 2, 3}}};
  CHECK_THROWS_AS(distances(twice), DegenerateConfig);
}

TEST_CASE("distances are invariant under similarities up to scale") {
  Stream rng(5, 0);
  for (int k = 0; k < 50; ++k) {
    Config c = random_config(6, 11, Distribution::Gaussian, k);
    Config m = random_similarity(c, rng);
    DistanceSet a = distances(c), b = distances(m);
    double s = b.r(1, 2) / a.r(1, 2);
    for (int i = 1; i <= 6; ++i)
      for (int j = i + 1; j <= 6; ++j) CHECK(std::abs(b.r(i, j) - s * a.r(i, j)) <= 1e-12 * b.diameter());
  }
}

TEST_CASE("squared volume: expansion against Cayley-Menger") {
  CHECK(vol2(distances(regular_tetrahedron())) == doctest::Approx(1.0 / 72).epsilon(1e-12));
  DistanceSet two(4);
  for (int i = 1; i <= 4; ++i)
    for (int j = i + 1; j <= 4; ++j) two.set(i, j, 2.0);
  CHECK(vol2(two) == doctest::Approx(8.0 / 9).epsilon(1e-12));
  Config planar{{{0, 0, 0}, {2, 0, 0}, {1.5, 1.2, 0}, {-0.3, 0.8, 0}}};
  CHECK(std::abs(vol2(distances(planar))) < 1e-12);
  for (std::uint64_t k = 0; k < 2000; ++k) {
    DistanceSet d = distances(random_config(4, 3, Distribution::Ball, k));
    double a = vol2_expansion(d), b = vol2_cayley_menger(d);
    CHECK(std::abs(a - b) <= 1e-10 * std::pow(d.diameter(), 6));
  }
}

TEST_CASE("embed realizes distance sets") {
  DistanceSet ones(4);
  for (int i = 1; i <= 4; ++i)
    for (int j = i + 1; j <= 4; ++j) ones.set(i, j, 1.0);
  CHECK(max_rel_diff(distances(embed(ones)), ones) < 1e-9);

  DistanceSet bad(3);
  bad.set(1, 2, 1);
  bad.set(2, 3, 1);
  bad.set(1, 3, 3);
  CHECK_THROWS_AS(embed(bad), NotRealizable);

  // opposite edges equal: realizable exactly when the face triangle is acute
  CHECK_THROWS_AS(isosceles(2, 3, 4), NotRealizable);
  FamilyMember iso = isosceles(3, 4, 4.5);
  CHECK(max_rel_diff(distances(embed(iso.d)), iso.d) < 1e-9);

  for (int n = 3; n <= 8; ++n)
    for (std::uint64_t k = 0; k < 20; ++k) {
      DistanceSet d = distances(random_config(n, 17, Distribution::Ball, k));
      Config e = embed(d);
      CHECK(max_rel_diff(distances(e), d) < 1e-9);
      CHECK(max_rel_diff(distances(embed(distances(e))), d) < 1e-9);
    }
}

TEST_CASE("families: upright, tangential, isosceles, type A") {
  FamilyMember u = upright(1, 1, 1, 1);
  for (int i = 1; i <= 3; ++i) CHECK(u.d.r(i, 4) == doctest::Approx(1.0));
  CHECK(circumradius(1, 1, 1) == doctest::Approx(1 / std::sqrt(3.0)));
  CHECK_THROWS_AS(upright(1, 1, 1, 0.5), ConstraintViolated);

  FamilyMember t = tangential({1, 1, 1, 1});
  for (int i = 1; i <= 4; ++i)
    for (int j = i + 1; j <= 4; ++j) CHECK(t.d.r(i, j) == 2.0);
  std::array<double, 4> tl{0.7, 1.3, 0.9, 1.1};
  FamilyMember t2 = tangential(tl);
  for (int i = 1; i <= 4; ++i)
    for (int j = i + 1; j <= 4; ++j) CHECK(t2.d.r(i, j) == tl[i - 1] + tl[j - 1]);

  FamilyMember reg = isosceles(1, 1, 1);
  CHECK(max_rel_diff(distances(reg.config), distances(regular_tetrahedron())) < 1e-12);

  FamilyMember a = type_a({-1, 0.5, 2});
  CHECK(a.config.n() == 4);
  for (int i = 0; i < 3; ++i) {
    CHECK(a.config.points[i][1] == 0.0);
    CHECK(a.config.points[i][2] == 0.0);
  }
  CHECK(a.config.points[3][1] == 1.0);
  CHECK_THROWS_AS(type_a({1, 0.5}), ConstraintViolated);
}

TEST_CASE("half-angle cosine sums") {
  CHECK(halfangle_cos2(1, 1, 1) == doctest::Approx(2.25).epsilon(1e-14));
  CHECK(halfangle_cos2(1, 1, 2) == doctest::Approx(2.0).epsilon(1e-14));
  Stream rng(9, 0);
  for (int k = 0; k < 10000; ++k) {
    double a = rng.uniform(0.1, 1), b = rng.uniform(0.1, 1);
    double c = rng.uniform(std::abs(a - b), a + b);
    double v = halfangle_cos2(a, b, c);
    CHECK(v >= 2 - 1e-12);
    CHECK(v <= 2.25 + 1e-12);
  }
}

TEST_CASE("quadrilateral angle data") {
  Config square{{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}};
  QuadAngles q = quad_angle_data(square);
  for (double c : q.c) CHECK(c == doctest::Approx(1.5 + std::cos(std::numbers::pi / 4)).epsilon(1e-12));

  FamilyMember cyc = cyclic({0.3, 1.4, 3.0, 4.9});
  CHECK(std::abs(quad_angle_data(cyc.config).moebius_c - 2) < 1e-9);

  CHECK_THROWS_AS(quad_angle_data(regular_tetrahedron()), NotPlanar);
}

TEST_CASE("Moebius angle sum matches the side-length triangle on planar quads") {
  for (std::uint64_t k = 0; k < 500; ++k) {
    Config c = random_config(4, 23, Distribution::Ball, k, 1e-2);
    for (Vec3& p : c.points) p[2] = 0;
    QuadAngles q = quad_angle_data(c);
    CHECK(q.moebius_c == doctest::Approx(q.moebius_c_sides).epsilon(1e-8));
  }
}

TEST_CASE("random configurations") {
  Config a = random_config(4, 42, Distribution::Ball), b = random_config(4, 42, Distribution::Ball);
  CHECK(a.points == b.points);
  CHECK(a.points != random_config(4, 43, Distribution::Ball).points);
  for (std::uint64_t k = 0; k < 100; ++k) {
    Config s = random_config(3, 5, Distribution::Sphere, k);
    for (const Vec3& p : s.points) CHECK(std::abs(norm(p) - 1) <= 1e-12);
    for (const Vec3& p : random_config(5, 5, Distribution::Ball, k).points) CHECK(norm(p) <= 1.0);
  }
  Config g = random_config(8, 7, Distribution::Gaussian);
  CHECK(g.n() == 8);
  CHECK_NOTHROW(distances(g));
}

TEST_CASE("JSON round trip") {
  Config c = random_config(5, 1, Distribution::Gaussian);
  CHECK(config_from_json(to_json(c)).points == c.points);
  DistanceSet d = distances(c);
  CHECK(distances_from_json(to_json(d)).m == d.m);
  CHECK(parse_distribution(to_string(Distribution::Sphere)) == Distribution::Sphere);
}
