#pragma once

// Obstacle surfaces as unions of parametrized patches, and tensor-product
// Simpson quadrature grids on them.
//
// Parameter conventions per patch kind:
//   StarRadial      t1 = phi in [0, 2pi], t2 = theta in [0, pi] (local
//                   spherical angles about the patch origin)
//   CartesianPlane  t1, t2 = the two free Cartesian coordinates, in cyclic
//                   order after the fixed axis (z-face: t1 = x, t2 = y)
//   Cylinder        t1 = phi in [0, 2pi], t2 = z (axis along e_z)

#include <Eigen/Core>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace mrc::geometry {

using Vec3 = Eigen::Vector3d;

struct SphericalCoords {
  double r = 0.0;
  double theta = 0.0;  // [0, pi]
  double phi = 0.0;    // [0, 2pi)
};

/// Local spherical coordinates of (point - origin). phi = 0 on the axis.
/// Throws DegenerateError when point == origin.
SphericalCoords to_spherical(const Vec3& point, const Vec3& origin = Vec3::Zero());
Vec3 from_spherical(const SphericalCoords& s, const Vec3& origin = Vec3::Zero());

/// sin/cos of a polar angle, exact at theta = 0 and theta = pi.
struct PolarTrig {
  double sin;
  double cos;
};
PolarTrig polar_trig(double theta);

struct ParamRange {
  double lo = 0.0;
  double hi = 1.0;
  [[nodiscard]] double length() const { return hi - lo; }
  [[nodiscard]] bool contains(double t, double tol = 1e-12) const {
    return t >= lo - tol && t <= hi + tol;
  }
  friend bool operator==(const ParamRange&, const ParamRange&) = default;
};

/// Radial function r(theta, phi) of a starshaped patch, with its partials.
class RadialShape {
 public:
  enum class Kind { Sphere, Ellipsoid, Custom };
  struct Partials {
    double r_theta = 0.0;
    double r_phi = 0.0;
  };
  using RadiusFn = std::function<double(double theta, double phi)>;
  using PartialsFn = std::function<Partials(double theta, double phi)>;

  static RadialShape sphere(double radius);
  /// Spheroid x^2 + y^2 + z^2/b^2 = 1.
  static RadialShape ellipsoid(double b);
  /// User-supplied r(theta, phi). Without `partials`, central differences
  /// with step 1e-6 are used.
  static RadialShape custom(RadiusFn radius, PartialsFn partials = {});

  [[nodiscard]] double radius(double theta, double phi) const;
  [[nodiscard]] Partials partials(double theta, double phi) const;
  [[nodiscard]] Kind kind() const { return kind_; }
  /// Sphere radius or ellipsoid b; 0 for custom shapes.
  [[nodiscard]] double parameter() const { return parameter_; }

 private:
  RadialShape(Kind kind, double parameter, RadiusFn r, PartialsFn p)
      : kind_(kind), parameter_(parameter), radius_(std::move(r)),
        partials_(std::move(p)) {}

  Kind kind_;
  double parameter_;
  RadiusFn radius_;
  PartialsFn partials_;
};

struct StarRadialPatch {
  RadialShape shape;
  Vec3 origin = Vec3::Zero();
  ParamRange phi{0.0, 2.0 * std::numbers::pi};
  ParamRange theta{0.0, std::numbers::pi};
};

struct PlanePatch {
  int axis = 2;  // fixed coordinate index
  double offset = 1.0;
  ParamRange u{-1.0, 1.0};
  ParamRange v{-1.0, 1.0};
};

struct CylinderPatch {
  double radius = 1.0;
  Vec3 origin = Vec3::Zero();
  ParamRange phi{0.0, 2.0 * std::numbers::pi};
  ParamRange z{-1.0, 1.0};
};

enum class PatchKind { StarRadial, CartesianPlane, Cylinder };

class Patch {
 public:
  using Data = std::variant<StarRadialPatch, PlanePatch, CylinderPatch>;

  /// Validates ranges and shape parameters; throws std::invalid_argument.
  explicit Patch(Data data);

  [[nodiscard]] PatchKind kind() const;
  [[nodiscard]] const Data& data() const { return data_; }
  [[nodiscard]] ParamRange range1() const;
  [[nodiscard]] ParamRange range2() const;
  /// Local origin r0_n (zero for planes).
  [[nodiscard]] Vec3 local_origin() const;

  [[nodiscard]] Vec3 point(double t1, double t2) const;
  /// True if p lies strictly inside the solid this patch bounds (ball-like
  /// region of a radial patch, finite cylinder). Planes bound nothing.
  [[nodiscard]] bool encloses(const Vec3& p) const;

 private:
  Data data_;
};

/// Surface area element of the patch parametrization at (t1, t2).
/// Throws DomainError outside the parameter ranges.
double area_weight(const Patch& patch, double t1, double t2);

class Surface {
 public:
  using InteriorFn = std::function<bool(const Vec3&)>;

  explicit Surface(std::vector<Patch> patches, InteriorFn interior = {},
                   bool trim = false);

  [[nodiscard]] const std::vector<Patch>& patches() const { return patches_; }
  [[nodiscard]] std::size_t size() const { return patches_.size(); }
  /// Whether quadrature drops nodes lying inside another patch's solid.
  [[nodiscard]] bool trimmed() const { return trim_; }
  /// Point-in-obstacle test when the solid is known.
  [[nodiscard]] std::optional<bool> contains(const Vec3& p) const;

 private:
  std::vector<Patch> patches_;
  InteriorFn interior_;
  bool trim_;
};

// Obstacle descriptors.
struct SphereSpec {
  double radius = 1.0;
  friend bool operator==(const SphereSpec&, const SphereSpec&) = default;
};
struct EllipsoidSpec {
  double b = 2.0;
  friend bool operator==(const EllipsoidSpec&, const EllipsoidSpec&) = default;
};
struct CubeSpec {
  double half_side = 1.0;
  friend bool operator==(const CubeSpec&, const CubeSpec&) = default;
};
struct DumbbellSpec {
  double sphere_radius = 1.5;
  double center_offset = 1.0;
  double neck_radius = 1.0;
  double neck_halfheight = 1.0;
  bool trim = false;
  friend bool operator==(const DumbbellSpec&, const DumbbellSpec&) = default;
};
/// Serializable patch description for custom patch lists.
struct PatchSpec {
  enum class Kind { SpherePatch, EllipsoidPatch, Plane, Cylinder } kind = Kind::SpherePatch;
  double parameter = 1.0;  // sphere radius, ellipsoid b, cylinder radius, plane offset
  int axis = 2;            // planes only
  Vec3 origin = Vec3::Zero();
  ParamRange range1{0.0, 0.0};  // zero-length means "kind default"
  ParamRange range2{0.0, 0.0};
  friend bool operator==(const PatchSpec& a, const PatchSpec& b) {
    return a.kind == b.kind && a.parameter == b.parameter && a.axis == b.axis &&
           a.origin == b.origin && a.range1 == b.range1 && a.range2 == b.range2;
  }
};
struct PatchListSpec {
  std::vector<PatchSpec> patches;
  bool trim = false;
  friend bool operator==(const PatchListSpec&, const PatchListSpec&) = default;
};

using ObstacleDescriptor =
    std::variant<SphereSpec, EllipsoidSpec, CubeSpec, DumbbellSpec, PatchListSpec>;

/// Throws std::invalid_argument on nonpositive radii or semi-axes.
Surface build_surface(const ObstacleDescriptor& descriptor);
Patch make_patch(const PatchSpec& spec);

enum class QuadratureScheme { StandardSimpson, PaperTable };

struct GridResolution {
  int n1 = 20;
  int n2 = 10;
  friend bool operator==(const GridResolution&, const GridResolution&) = default;
};

/// Nodes and combined weights of one patch; node (i1, i2) lives at
/// index i1 * (n2 + 1) + i2.
struct PatchGrid {
  int n1 = 0;
  int n2 = 0;
  std::vector<double> t1;
  std::vector<double> t2;
  std::vector<Vec3> points;
  std::vector<double> weights;

  [[nodiscard]] std::size_t node_count() const { return points.size(); }
};

struct QuadratureGrid {
  std::vector<PatchGrid> patches;
  QuadratureScheme scheme = QuadratureScheme::StandardSimpson;

  [[nodiscard]] std::size_t node_count() const;
  [[nodiscard]] double total_weight() const;
  /// All nodes and weights, patches concatenated in order.
  [[nodiscard]] std::vector<Vec3> points() const;
  [[nodiscard]] std::vector<double> weights() const;
};

/// 1-D composite Simpson coefficients 1, 4, 2, ..., 2, 4, 1 for n even
/// (multiply by h/3 for the rule).
std::vector<double> simpson_coefficients(int n);

/// Tensor-product Simpson grid. `per_patch`, when nonempty, overrides the
/// global resolution patch by patch and must match the patch count.
QuadratureGrid quad_grid(const Surface& surface, int n1, int n2,
                         QuadratureScheme scheme,
                         std::span<const GridResolution> per_patch = {});

std::string to_string(QuadratureScheme scheme);

}  // namespace mrc::geometry
