#pragma once

// Point configurations in 3-space, distance geometry and the special
// tetrahedron and quadrilateral families.

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "atiyah/report.hpp"

namespace atiyah::geo {

using Vec3 = std::array<double, 3>;

struct Config {
  std::vector<Vec3> points;
  int n() const { return static_cast<int>(points.size()); }
};

/// Symmetric distance matrix, 0-based storage; r(i, j) takes 1-based labels.
struct DistanceSet {
  int n = 0;
  std::vector<std::vector<double>> m;

  explicit DistanceSet(int size = 0) : n(size), m(size, std::vector<double>(size, 0.0)) {}
  double r(int i, int j) const { return m[i - 1][j - 1]; }
  void set(int i, int j, double v) { m[i - 1][j - 1] = m[j - 1][i - 1] = v; }
  double diameter() const;
};

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class DegenerateConfig : public GeometryError {
 public:
  using GeometryError::GeometryError;
};
class NotRealizable : public GeometryError {
 public:
  using GeometryError::GeometryError;
};
class FormulaMismatch : public GeometryError {
 public:
  using GeometryError::GeometryError;
};
class ConstraintViolated : public GeometryError {
 public:
  using GeometryError::GeometryError;
};
class NotPlanar : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

Vec3 sub(const Vec3& a, const Vec3& b);
double dot(const Vec3& a, const Vec3& b);
double norm(const Vec3& a);
Vec3 cross(const Vec3& a, const Vec3& b);

double diameter(const Config& c);
/// Throws DegenerateConfig if two points lie within 1e-12 of the diameter.
DistanceSet distances(const Config& c);

/// 144 V^2 written out monomial by monomial.
double vol2_expansion(const DistanceSet& d);
/// 288 V^2 as the bordered Cayley-Menger determinant.
double vol2_cayley_menger(const DistanceSet& d);
/// V^2; both evaluations must agree to relative 1e-12 of the scale r^6.
double vol2(const DistanceSet& d);

/// Point 1 at the origin, point 2 on the first axis, point 3 in the first
/// coordinate plane, later points by least squares trilateration.
Config embed(const DistanceSet& d);

struct FamilyMember {
  std::string kind;
  Config config;
  DistanceSet d;
};

FamilyMember upright(double a, double b, double c, double d);
FamilyMember tangential(const std::array<double, 4>& t);
FamilyMember isosceles(double a, double b, double c);
FamilyMember cyclic(const std::array<double, 4>& phi);
FamilyMember type_a(const std::vector<double>& a, double b = 1.0);
/// Dispatch by name with keyword parameters (a,b,c,d / t1..t4 / phi1..phi4 / a1..an).
FamilyMember family(const std::string& kind, const std::map<std::string, double>& params);

/// Circumradius abc / sqrt((a+b+c) d3(a,b,c)).
double circumradius(double a, double b, double c);

/// Σ cos²(angle/2) of the triangle with sides a, b, c.
double halfangle_cos2(double a, double b, double c);

struct TriangleAngles {
  double X = 0, Y = 0, Z = 0;  // at the first, second and third listed vertex
};
TriangleAngles triangle_angles(const Config& c, int i, int j, int k);

struct QuadAngles {
  std::array<TriangleAngles, 4> tri;  // triangles 234, 341, 412, 123
  std::array<double, 4> c{}, c_hat{};
  double moebius_c = 0;        // displayed difference angles; inversion at 4 when not convex
  double moebius_c_sides = 0;  // from the triangle with sides r12 r34, r13 r24, r14 r23
  std::array<double, 3> moebius_angles{};
  std::vector<int> convex_order;  // labels in convex cyclic order used for the angles
  bool convex = true;
};

/// Signed volume of the tetrahedron over its diameter cubed.
double relative_volume(const Config& c);
QuadAngles quad_angle_data(const Config& c);

enum class Distribution { Ball, Sphere, Gaussian };
Distribution parse_distribution(const std::string& s);
std::string to_string(Distribution d);

/// Deterministic in (n, seed, index, distribution); resamples while some pair is
/// closer than `min_separation` times the diameter, counting redraws in `resamples`.
Config random_config(int n, std::uint64_t seed, Distribution dist, std::uint64_t index = 0,
                     double min_separation = 1e-6, int* resamples = nullptr);

json to_json(const Config& c);
Config config_from_json(const json& j);
json to_json(const DistanceSet& d);
DistanceSet distances_from_json(const json& j);

}  // namespace atiyah::geo
