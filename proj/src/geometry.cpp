#include "mrc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "mrc/errors.hpp"

namespace mrc::geometry {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFdStep = 1e-6;
// relative margin for strict-interior tests used by trimming
constexpr double kInsideMargin = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double v, const std::string& what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(what + " must be positive (got " +
                                std::to_string(v) + ")");
  }
}

void require_range(const ParamRange& r, const std::string& what) {
  if (!(r.hi > r.lo)) throw std::invalid_argument(what + " parameter range is empty");
}

int other_axis(int axis, int which) { return (axis + 1 + which) % 3; }

}  // namespace

PolarTrig polar_trig(double theta) {
  if (theta == 0.0) return {0.0, 1.0};
  if (theta == kPi) return {0.0, -1.0};
  return {std::sin(theta), std::cos(theta)};
}

SphericalCoords to_spherical(const Vec3& point, const Vec3& origin) {
  const Vec3 d = point - origin;
  const double rho = std::hypot(d.x(), d.y());
  const double r = std::hypot(rho, d.z());
  if (r == 0.0) throw DegenerateError("to_spherical: point coincides with origin");
  SphericalCoords s;
  s.r = r;
  s.theta = std::atan2(rho, d.z());
  if (rho == 0.0) {
    s.phi = 0.0;
  } else {
    s.phi = std::atan2(d.y(), d.x());
    if (s.phi < 0.0) s.phi += 2.0 * kPi;
    if (s.phi >= 2.0 * kPi) s.phi = 0.0;
  }
  return s;
}

Vec3 from_spherical(const SphericalCoords& s, const Vec3& origin) {
  const PolarTrig t = polar_trig(s.theta);
  return origin + s.r * Vec3(std::cos(s.phi) * t.sin, std::sin(s.phi) * t.sin, t.cos);
}

// ---------------------------------------------------------------------------
// RadialShape

RadialShape RadialShape::sphere(double radius) {
  require_positive(radius, "sphere radius");
  return RadialShape(
      Kind::Sphere, radius, [radius](double, double) { return radius; },
      [](double, double) { return Partials{}; });
}

RadialShape RadialShape::ellipsoid(double b) {
  require_positive(b, "ellipsoid semi-axis b");
  const double inv_b2 = 1.0 / (b * b);
  auto q = [inv_b2](double theta) {
    const PolarTrig t = polar_trig(theta);
    return t.sin * t.sin + t.cos * t.cos * inv_b2;
  };
  return RadialShape(
      Kind::Ellipsoid, b, [q](double theta, double) { return 1.0 / std::sqrt(q(theta)); },
      [q, inv_b2](double theta, double) {
        const PolarTrig t = polar_trig(theta);
        const double qq = q(theta);
        return Partials{-t.sin * t.cos * (1.0 - inv_b2) / (qq * std::sqrt(qq)), 0.0};
      });
}

RadialShape RadialShape::custom(RadiusFn radius, PartialsFn partials) {
  if (!radius) throw std::invalid_argument("custom radial shape needs a radius function");
  if (!partials) {
    partials = [radius](double theta, double phi) {
      const double h = kFdStep;
      return Partials{(radius(theta + h, phi) - radius(theta - h, phi)) / (2.0 * h),
                      (radius(theta, phi + h) - radius(theta, phi - h)) / (2.0 * h)};
    };
  }
  return RadialShape(Kind::Custom, 0.0, std::move(radius), std::move(partials));
}

double RadialShape::radius(double theta, double phi) const {
  return radius_(theta, phi);
}

RadialShape::Partials RadialShape::partials(double theta, double phi) const {
  return partials_(theta, phi);
}

// ---------------------------------------------------------------------------
// Patch

Patch::Patch(Data data) : data_(std::move(data)) {
  std::visit(overloaded{
                 [](const StarRadialPatch& p) {
                   require_range(p.phi, "radial patch phi");
                   require_range(p.theta, "radial patch theta");
                   if (p.theta.lo < 0.0 || p.theta.hi > kPi) {
                     throw std::invalid_argument("radial patch theta range must lie in [0, pi]");
                   }
                 },
                 [](const PlanePatch& p) {
                   if (p.axis < 0 || p.axis > 2) {
                     throw std::invalid_argument("plane axis must be 0, 1 or 2");
                   }
                   require_range(p.u, "plane u");
                   require_range(p.v, "plane v");
                 },
                 [](const CylinderPatch& p) {
                   require_positive(p.radius, "cylinder radius");
                   require_range(p.phi, "cylinder phi");
                   require_range(p.z, "cylinder z");
                 },
             },
             data_);
}

PatchKind Patch::kind() const {
  return std::visit(overloaded{
                        [](const StarRadialPatch&) { return PatchKind::StarRadial; },
                        [](const PlanePatch&) { return PatchKind::CartesianPlane; },
                        [](const CylinderPatch&) { return PatchKind::Cylinder; },
                    },
                    data_);
}

ParamRange Patch::range1() const {
  return std::visit(overloaded{
                        [](const StarRadialPatch& p) { return p.phi; },
                        [](const PlanePatch& p) { return p.u; },
                        [](const CylinderPatch& p) { return p.phi; },
                    },
                    data_);
}

ParamRange Patch::range2() const {
  return std::visit(overloaded{
                        [](const StarRadialPatch& p) { return p.theta; },
                        [](const PlanePatch& p) { return p.v; },
                        [](const CylinderPatch& p) { return p.z; },
                    },
                    data_);
}

Vec3 Patch::local_origin() const {
  return std::visit(overloaded{
                        [](const StarRadialPatch& p) -> Vec3 { return p.origin; },
                        [](const PlanePatch&) -> Vec3 { return Vec3::Zero(); },
                        [](const CylinderPatch& p) -> Vec3 { return p.origin; },
                    },
                    data_);
}

Vec3 Patch::point(double t1, double t2) const {
  return std::visit(
      overloaded{
          [&](const StarRadialPatch& p) -> Vec3 {
            const double r = p.shape.radius(t2, t1);
            return from_spherical({r, t2, t1}, p.origin);
          },
          [&](const PlanePatch& p) -> Vec3 {
            Vec3 x;
            x[p.axis] = p.offset;
            x[other_axis(p.axis, 0)] = t1;
            x[other_axis(p.axis, 1)] = t2;
            return x;
          },
          [&](const CylinderPatch& p) -> Vec3 {
            return p.origin + Vec3(p.radius * std::cos(t1), p.radius * std::sin(t1), t2);
          },
      },
      data_);
}

bool Patch::encloses(const Vec3& x) const {
  return std::visit(
      overloaded{
          [&](const StarRadialPatch& p) {
            const Vec3 d = x - p.origin;
            const double r = d.norm();
            if (r == 0.0) return true;
            const SphericalCoords s = to_spherical(x, p.origin);
            return r < p.shape.radius(s.theta, s.phi) * (1.0 - kInsideMargin);
          },
          [](const PlanePatch&) { return false; },
          [&](const CylinderPatch& p) {
            const Vec3 d = x - p.origin;
            const double tol = kInsideMargin * std::max(1.0, p.z.length());
            return std::hypot(d.x(), d.y()) < p.radius * (1.0 - kInsideMargin) &&
                   d.z() > p.z.lo + tol && d.z() < p.z.hi - tol;
          },
      },
      data_);
}

double area_weight(const Patch& patch, double t1, double t2) {
  if (!patch.range1().contains(t1) || !patch.range2().contains(t2)) {
    throw DomainError("area_weight: parameters outside patch ranges");
  }
  return std::visit(
      overloaded{
          [&](const StarRadialPatch& p) {
            const double theta = t2;
            const double phi = t1;
            const double r = p.shape.radius(theta, phi);
            const auto d = p.shape.partials(theta, phi);
            const double s = polar_trig(theta).sin;
            return std::sqrt(r * r * d.r_phi * d.r_phi +
                             r * r * d.r_theta * d.r_theta * s * s + r * r * r * r * s * s);
          },
          [](const PlanePatch&) { return 1.0; },
          [](const CylinderPatch& p) { return p.radius; },
      },
      patch.data());
}

// ---------------------------------------------------------------------------
// Surface

Surface::Surface(std::vector<Patch> patches, InteriorFn interior, bool trim)
    : patches_(std::move(patches)), interior_(std::move(interior)), trim_(trim) {
  if (patches_.empty()) throw std::invalid_argument("surface needs at least one patch");
}

std::optional<bool> Surface::contains(const Vec3& p) const {
  if (!interior_) return std::nullopt;
  return interior_(p);
}

Patch make_patch(const PatchSpec& spec) {
  const bool default1 = spec.range1.length() == 0.0;
  const bool default2 = spec.range2.length() == 0.0;
  switch (spec.kind) {
    case PatchSpec::Kind::SpherePatch:
    case PatchSpec::Kind::EllipsoidPatch: {
      StarRadialPatch p{spec.kind == PatchSpec::Kind::SpherePatch
                            ? RadialShape::sphere(spec.parameter)
                            : RadialShape::ellipsoid(spec.parameter),
                        spec.origin};
      if (!default1) p.phi = spec.range1;
      if (!default2) p.theta = spec.range2;
      return Patch(p);
    }
    case PatchSpec::Kind::Plane: {
      PlanePatch p;
      p.axis = spec.axis;
      p.offset = spec.parameter;
      if (!default1) p.u = spec.range1;
      if (!default2) p.v = spec.range2;
      return Patch(p);
    }
    case PatchSpec::Kind::Cylinder: {
      CylinderPatch p;
      p.radius = spec.parameter;
      p.origin = spec.origin;
      if (!default1) p.phi = spec.range1;
      if (!default2) p.z = spec.range2;
      return Patch(p);
    }
  }
  throw std::invalid_argument("unknown patch kind");
}

Surface build_surface(const ObstacleDescriptor& descriptor) {
  return std::visit(
      overloaded{
          [](const SphereSpec& s) {
            const double a = s.radius;
            std::vector<Patch> patches{Patch(StarRadialPatch{RadialShape::sphere(a)})};
            return Surface(std::move(patches), [a](const Vec3& x) { return x.norm() < a; });
          },
          [](const EllipsoidSpec& e) {
            const double b = e.b;
            std::vector<Patch> patches{Patch(StarRadialPatch{RadialShape::ellipsoid(b)})};
            return Surface(std::move(patches), [b](const Vec3& x) {
              return x.x() * x.x() + x.y() * x.y() + x.z() * x.z() / (b * b) < 1.0;
            });
          },
          [](const CubeSpec& c) {
            const double a = c.half_side;
            require_positive(a, "cube half side");
            std::vector<Patch> patches;
            for (int axis : {2, 0, 1}) {
              for (double sign : {1.0, -1.0}) {
                PlanePatch p;
                p.axis = axis;
                p.offset = sign * a;
                p.u = {-a, a};
                p.v = {-a, a};
                patches.emplace_back(p);
              }
            }
            return Surface(std::move(patches),
                           [a](const Vec3& x) { return x.cwiseAbs().maxCoeff() < a; });
          },
          [](const DumbbellSpec& d) {
            require_positive(d.sphere_radius, "dumbbell sphere radius");
            require_positive(d.center_offset, "dumbbell center offset");
            require_positive(d.neck_radius, "dumbbell neck radius");
            require_positive(d.neck_halfheight, "dumbbell neck half-height");
            std::vector<Patch> patches;
            patches.emplace_back(StarRadialPatch{RadialShape::sphere(d.sphere_radius),
                                                 Vec3(0.0, 0.0, d.center_offset)});
            patches.emplace_back(StarRadialPatch{RadialShape::sphere(d.sphere_radius),
                                                 Vec3(0.0, 0.0, -d.center_offset)});
            CylinderPatch neck;
            neck.radius = d.neck_radius;
            neck.z = {-d.neck_halfheight, d.neck_halfheight};
            patches.emplace_back(neck);
            const DumbbellSpec dd = d;
            return Surface(
                std::move(patches),
                [dd](const Vec3& x) {
                  const Vec3 up(0.0, 0.0, dd.center_offset);
                  return (x - up).norm() < dd.sphere_radius ||
                         (x + up).norm() < dd.sphere_radius ||
                         (std::hypot(x.x(), x.y()) < dd.neck_radius &&
                          std::abs(x.z()) < dd.neck_halfheight);
                },
                d.trim);
          },
          [](const PatchListSpec& list) {
            std::vector<Patch> patches;
            patches.reserve(list.patches.size());
            bool has_plane = false;
            for (const auto& spec : list.patches) {
              patches.push_back(make_patch(spec));
              has_plane = has_plane || spec.kind == PatchSpec::Kind::Plane;
            }
            if (patches.empty()) throw std::invalid_argument("patch list is empty");
            Surface::InteriorFn interior;
            if (!has_plane) {
              interior = [patches](const Vec3& x) {
                return std::any_of(patches.begin(), patches.end(),
                                   [&](const Patch& p) { return p.encloses(x); });
              };
            }
            return Surface(std::move(patches), std::move(interior), list.trim);
          },
      },
      descriptor);
}

// ---------------------------------------------------------------------------
// Quadrature

std::vector<double> simpson_coefficients(int n) {
  if (n < 2 || n % 2 != 0) {
    throw std::invalid_argument("Simpson rule needs an even number of intervals >= 2 (got " +
                                std::to_string(n) + ")");
  }
  std::vector<double> c(n + 1);
  for (int i = 0; i <= n; ++i) c[i] = (i % 2 == 1) ? 4.0 : 2.0;
  c.front() = 1.0;
  c.back() = 1.0;
  return c;
}

std::size_t QuadratureGrid::node_count() const {
  std::size_t n = 0;
  for (const auto& p : patches) n += p.node_count();
  return n;
}

double QuadratureGrid::total_weight() const {
  double s = 0.0;
  for (const auto& p : patches) {
    for (double w : p.weights) s += w;
  }
  return s;
}

std::vector<Vec3> QuadratureGrid::points() const {
  std::vector<Vec3> out;
  out.reserve(node_count());
  for (const auto& p : patches) out.insert(out.end(), p.points.begin(), p.points.end());
  return out;
}

std::vector<double> QuadratureGrid::weights() const {
  std::vector<double> out;
  out.reserve(node_count());
  for (const auto& p : patches) out.insert(out.end(), p.weights.begin(), p.weights.end());
  return out;
}

QuadratureGrid quad_grid(const Surface& surface, int n1, int n2, QuadratureScheme scheme,
                         std::span<const GridResolution> per_patch) {
  if (!per_patch.empty() && per_patch.size() != surface.size()) {
    throw std::invalid_argument("per-patch grid list must match the patch count");
  }
  QuadratureGrid grid;
  grid.scheme = scheme;
  const double table_scale = (scheme == QuadratureScheme::StandardSimpson) ? 1.0 / 9.0 : 1.0;

  const auto& patches = surface.patches();
  for (std::size_t ip = 0; ip < patches.size(); ++ip) {
    const Patch& patch = patches[ip];
    const int m1 = per_patch.empty() ? n1 : per_patch[ip].n1;
    const int m2 = per_patch.empty() ? n2 : per_patch[ip].n2;
    const auto c1 = simpson_coefficients(m1);
    const auto c2 = simpson_coefficients(m2);

    const ParamRange r1 = patch.range1();
    const ParamRange r2 = patch.range2();
    const double h1 = r1.length() / m1;
    const double h2 = r2.length() / m2;

    PatchGrid pg;
    pg.n1 = m1;
    pg.n2 = m2;
    pg.t1.resize(m1 + 1);
    pg.t2.resize(m2 + 1);
    // endpoints are hit exactly so pole snapping in polar_trig applies
    for (int i = 0; i <= m1; ++i) pg.t1[i] = (i == m1) ? r1.hi : r1.lo + i * h1;
    for (int i = 0; i <= m2; ++i) pg.t2[i] = (i == m2) ? r2.hi : r2.lo + i * h2;

    const std::size_t count = static_cast<std::size_t>(m1 + 1) * (m2 + 1);
    pg.points.reserve(count);
    pg.weights.reserve(count);
    for (int i1 = 0; i1 <= m1; ++i1) {
      for (int i2 = 0; i2 <= m2; ++i2) {
        const double t1 = pg.t1[i1];
        const double t2 = pg.t2[i2];
        const Vec3 x = patch.point(t1, t2);
        double w = table_scale * c1[i1] * c2[i2] * area_weight(patch, t1, t2) * h1 * h2;
        if (surface.trimmed()) {
          for (std::size_t jp = 0; jp < patches.size(); ++jp) {
            if (jp != ip && patches[jp].encloses(x)) {
              w = 0.0;
              break;
            }
          }
        }
        pg.points.push_back(x);
        pg.weights.push_back(w);
      }
    }
    grid.patches.push_back(std::move(pg));
  }
  return grid;
}

std::string to_string(QuadratureScheme scheme) {
  return scheme == QuadratureScheme::StandardSimpson ? "standard" : "paper";
}

}  // namespace mrc::geometry
