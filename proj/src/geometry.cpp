#include "lsint/geometry.hpp"

#include "lsint/errors.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace lsint {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double norm(const Point& x, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i)
    s += x[i] * x[i];
  return std::sqrt(s);
}

double signum(double v) { return (v > 0.0) - (v < 0.0); }

double int_power(double base, int q) {
  double out = 1.0;
  for (int i = 0; i < q; ++i)
    out *= base;
  return out;
}

void require_radius(double r0, double upper, std::string_view what) {
  if (!(r0 > 0.0 && r0 <= upper))
    throw std::invalid_argument(fmt::format("{}: radius {} out of range", what, r0));
}

// Distance from p to the quarter circle centred at (sx r0, sy r0) that faces
// the origin. The arc runs from (sx r0, 0) to (0, sy r0).
double distance_to_star_arc(double x, double y, double sx, double sy, double r0) {
  const double vx = x - sx * r0;
  const double vy = y - sy * r0;
  const double len = std::hypot(vx, vy);
  if (vx * sx <= 0.0 && vy * sy <= 0.0)
    return std::abs(len - r0);
  const double to_first = std::hypot(x - sx * r0, y);
  const double to_second = std::hypot(x, y - sy * r0);
  return std::min(to_first, to_second);
}

} // namespace

double polar_angle(double x, double y) {
  double theta = std::atan2(y, x);
  if (theta < 0.0)
    theta += 2.0 * std::numbers::pi;
  if (theta >= 2.0 * std::numbers::pi)
    theta = 0.0;
  return theta;
}

ImplicitField make_circle_quadratic(double r0) {
  require_radius(r0, 1.0, "make_circle_quadratic");
  ImplicitField field;
  field.dim = 2;
  field.phi = [r0](const Point& x) { return x[0] * x[0] + x[1] * x[1] - r0 * r0; };
  field.grad_norm = [](const Point& x) { return 2.0 * std::hypot(x[0], x[1]); };
  field.gradient = [](const Point& x) { return Point{2.0 * x[0], 2.0 * x[1], 0.0}; };
  field.name = "circle-quadratic";
  return field;
}

ImplicitField make_ball_sdf(int dim, double r0) {
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("make_ball_sdf: dim must be 2 or 3");
  require_radius(r0, 1.0, "make_ball_sdf");
  ImplicitField field;
  field.dim = dim;
  field.phi = [dim, r0](const Point& x) { return norm(x, dim) - r0; };
  field.grad_norm = [](const Point&) { return 1.0; };
  field.is_distance = true;
  field.constant_grad_norm = 1.0;
  field.gradient = [dim](const Point& x) {
    const double len = norm(x, dim);
    if (len == 0.0)
      return Point{kNaN, kNaN, kNaN};
    Point g{0.0, 0.0, 0.0};
    for (int i = 0; i < dim; ++i)
      g[i] = x[i] / len;
    return g;
  };
  field.name = dim == 2 ? "circle-sdf" : "sphere-sdf";
  return field;
}

ImplicitField make_circle_sdf(double r0) { return make_ball_sdf(2, r0); }

ImplicitField make_cusp_star_sdf(double r0) {
  if (!(r0 > 0.0) || !std::isfinite(r0))
    throw DegenerateArc("make_cusp_star_sdf: arc endpoints coincide for r0 <= 0");
  if (r0 >= 1.0)
    throw std::invalid_argument("make_cusp_star_sdf: star must fit inside [-1, 1]^2");

  ImplicitField field;
  field.dim = 2;
  field.phi = [r0](const Point& p) {
    const double x = p[0];
    const double y = p[1];
    double dist = std::numeric_limits<double>::infinity();
    bool inside = std::abs(x) < r0 && std::abs(y) < r0;
    for (double sx : {1.0, -1.0}) {
      for (double sy : {1.0, -1.0}) {
        dist = std::min(dist, distance_to_star_arc(x, y, sx, sy, r0));
        if (std::hypot(x - sx * r0, y - sy * r0) <= r0)
          inside = false;
      }
    }
    return inside ? -dist : dist;
  };
  field.grad_norm = [](const Point&) { return 1.0; };
  field.is_distance = true;
  field.constant_grad_norm = 1.0;
  field.name = "cusp-star";
  return field;
}

ImplicitField make_l1_ball(int dim, double r0) {
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("make_l1_ball: dim must be 2 or 3");
  require_radius(r0, 1.0, "make_l1_ball");
  const double g = std::sqrt(static_cast<double>(dim));
  ImplicitField field;
  field.dim = dim;
  field.phi = [dim, r0](const Point& x) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i)
      s += std::abs(x[i]);
    return s - r0;
  };
  field.grad_norm = [g](const Point&) { return g; };
  field.constant_grad_norm = g;
  field.name = dim == 2 ? "l1-2d" : "l1-3d";
  return field;
}

ImplicitField make_squared_variant(const ImplicitField& base) {
  ImplicitField field;
  field.dim = base.dim;
  field.phi = [phi = base.phi](const Point& x) {
    const double b = phi(x);
    return signum(b) * b * b;
  };
  if (base.constant_grad_norm) {
    // |grad (sgn(b) b^2)| = 2 |b| c = sqrt(4 c^2 |phi|).
    double c2 = *base.constant_grad_norm * *base.constant_grad_norm;
    // sqrt(dim)^2 should be dim exactly.
    if (std::abs(c2 - std::round(c2)) < 1e-14 * c2)
      c2 = std::round(c2);
    const double scale = 4.0 * c2;
    field.grad_norm = [phi = field.phi, scale](const Point& x) {
      return std::sqrt(scale * std::abs(phi(x)));
    };
  } else {
    field.grad_norm = [phi = base.phi, grad = base.grad_norm](const Point& x) {
      return 2.0 * std::abs(phi(x)) * grad(x);
    };
  }
  field.name = base.name + "-squared";
  return field;
}

ImplicitField make_power_of_distance(const ImplicitField& base_sdf, int q,
                                     bool signed_power) {
  if (!base_sdf.is_distance)
    throw std::invalid_argument("make_power_of_distance: base must be a distance field");
  if (q < 1)
    throw std::invalid_argument("make_power_of_distance: exponent must be >= 1");
  if (q == 1)
    return base_sdf;

  const bool sign_fix = (q % 2 == 0) && signed_power;
  ImplicitField field;
  field.dim = base_sdf.dim;
  field.phi = [d = base_sdf.phi, q, sign_fix](const Point& x) {
    const double v = d(x);
    const double p = int_power(v, q);
    return sign_fix ? signum(v) * p : p;
  };
  field.grad_norm = [d = base_sdf.phi, q](const Point& x) {
    return q * int_power(std::abs(d(x)), q - 1);
  };
  field.name = fmt::format("{}-pow{}", base_sdf.name, q);
  return field;
}

ImplicitField shifted(const ImplicitField& field, double eta0) {
  if (eta0 == 0.0)
    return field;
  ImplicitField out = field;
  out.phi = [phi = field.phi, eta0](const Point& x) { return phi(x) - eta0; };
  return out;
}

Point closest_point(const ImplicitField& field, const VectorFn& grad, const Point& x) {
  if (!field.is_distance)
    throw std::invalid_argument("closest_point: field is not a distance function");
  if (!grad)
    throw UndefinedGradient("closest_point: no gradient available");
  const Point g = grad(x);
  const double len = norm(g, field.dim);
  if (!std::isfinite(len) || std::abs(len - 1.0) > 1e-6)
    throw UndefinedGradient(fmt::format(
        "closest_point: |grad d| = {} at ({}, {}, {})", len, x[0], x[1], x[2]));
  const double d = field.phi(x);
  Point out = x;
  for (int i = 0; i < field.dim; ++i)
    out[i] = x[i] - d * g[i];
  return out;
}

Point closest_point(const ImplicitField& field, const Point& x) {
  return closest_point(field, field.gradient, x);
}

Integrand make_integrand(IntegrandKind kind, const Point& center) {
  Integrand integrand;
  switch (kind) {
  case IntegrandKind::ConstantOne:
    integrand.f = [](const Point&) { return 1.0; };
    integrand.name = "one";
    break;
  case IntegrandKind::ThetaSawtooth:
    integrand.f = [](const Point& x) {
      const double theta = polar_angle(x[0], x[1]);
      return std::min(std::abs(theta - 0.3),
                      std::abs(theta - 2.0 * std::numbers::pi - 0.3));
    };
    integrand.name = "theta-sawtooth";
    break;
  case IntegrandKind::InverseSqrtAt:
    integrand.f = [center](const Point& x) {
      const double r = std::sqrt((x[0] - center[0]) * (x[0] - center[0]) +
                                 (x[1] - center[1]) * (x[1] - center[1]) +
                                 (x[2] - center[2]) * (x[2] - center[2]));
      return r == 0.0 ? 1e9 : 1.0 / std::sqrt(r);
    };
    integrand.singular_points.push_back(center);
    integrand.name = "inverse-sqrt";
    break;
  }
  return integrand;
}

int shape_dim(ShapeKind kind) {
  return (kind == ShapeKind::L1Ball3D || kind == ShapeKind::SphereSDF) ? 3 : 2;
}

ImplicitField make_field(const ShapeDescriptor& shape) {
  switch (shape.kind) {
  case ShapeKind::CircleQuadratic:
    return make_circle_quadratic(shape.r0);
  case ShapeKind::CircleSDF:
    return make_circle_sdf(shape.r0);
  case ShapeKind::SphereSDF:
    return make_ball_sdf(3, shape.r0);
  case ShapeKind::CuspStarSDF:
    return make_cusp_star_sdf(shape.r0);
  case ShapeKind::L1Ball2D:
    return make_l1_ball(2, shape.r0);
  case ShapeKind::L1Ball3D:
    return make_l1_ball(3, shape.r0);
  case ShapeKind::SquaredL1:
    return make_squared_variant(make_l1_ball(2, shape.r0));
  case ShapeKind::PowerOfDistance:
    return make_power_of_distance(make_circle_sdf(shape.r0), shape.exponent,
                                  shape.signed_power);
  }
  throw std::invalid_argument("make_field: unknown shape");
}

namespace {
struct ShapeEntry {
  ShapeKind kind;
  std::string_view name;
};
constexpr ShapeEntry kShapes[] = {
    {ShapeKind::CircleQuadratic, "circle-quadratic"},
    {ShapeKind::CircleSDF, "circle-sdf"},
    {ShapeKind::SphereSDF, "sphere-sdf"},
    {ShapeKind::CuspStarSDF, "cusp-star"},
    {ShapeKind::L1Ball2D, "l1-2d"},
    {ShapeKind::L1Ball3D, "l1-3d"},
    {ShapeKind::SquaredL1, "l1-squared"},
    {ShapeKind::PowerOfDistance, "power-of-distance"},
};
} // namespace

std::string_view shape_name(ShapeKind kind) {
  for (const auto& entry : kShapes)
    if (entry.kind == kind)
      return entry.name;
  return "unknown";
}

ShapeKind parse_shape_name(std::string_view name) {
  for (const auto& entry : kShapes)
    if (entry.name == name)
      return entry.kind;
  throw std::invalid_argument(fmt::format("unknown shape '{}'", name));
}

ShapeDescriptor default_shape(ShapeKind kind) {
  ShapeDescriptor shape;
  shape.kind = kind;
  switch (kind) {
  case ShapeKind::CircleQuadratic:
  case ShapeKind::CircleSDF:
  case ShapeKind::PowerOfDistance:
    shape.r0 = 0.501;
    break;
  case ShapeKind::CuspStarSDF:
    shape.r0 = 0.75;
    break;
  case ShapeKind::SphereSDF:
  case ShapeKind::L1Ball3D:
  case ShapeKind::L1Ball2D:
    shape.r0 = 0.65;
    break;
  case ShapeKind::SquaredL1:
    shape.r0 = 1.0;
    break;
  }
  return shape;
}

std::string_view integrand_name(IntegrandKind kind) {
  switch (kind) {
  case IntegrandKind::ConstantOne:
    return "one";
  case IntegrandKind::ThetaSawtooth:
    return "theta-sawtooth";
  case IntegrandKind::InverseSqrtAt:
    return "inverse-sqrt";
  }
  return "unknown";
}

IntegrandKind parse_integrand_name(std::string_view name) {
  if (name == "one")
    return IntegrandKind::ConstantOne;
  if (name == "theta-sawtooth")
    return IntegrandKind::ThetaSawtooth;
  if (name == "inverse-sqrt")
    return IntegrandKind::InverseSqrtAt;
  throw std::invalid_argument(fmt::format("unknown integrand '{}'", name));
}

} // namespace lsint
