#include "lsint/reference.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lsint {

using std::numbers::pi;

double circle_length(double r) { return 2.0 * pi * r; }

double sphere_area(double r) { return 4.0 * pi * r * r; }

double l1_perimeter_2d(double r0) { return 4.0 * std::sqrt(2.0) * r0; }

double l1_area_3d(double r0) {
  // Eight equilateral triangles with side r0 sqrt(2).
  return 4.0 * std::sqrt(3.0) * r0 * r0;
}

double cusp_star_level_length(double r0, double eta) {
  if (eta >= 0.0)
    return 2.0 * pi * (r0 + eta);
  const double radius = r0 - eta;
  const double chord = std::sqrt(radius * radius - r0 * r0);
  const double sweep = 0.5 * pi - 2.0 * std::atan(chord / r0);
  if (sweep <= 0.0)
    throw std::invalid_argument("cusp_star_level_length: level set is empty");
  return 4.0 * radius * sweep;
}

double polygon_line_integral(std::span<const Point> vertices, const ScalarFn& f) {
  if (vertices.size() < 2)
    throw std::invalid_argument("polygon_line_integral: need at least two vertices");
  boost::math::quadrature::tanh_sinh<double> rule;
  double total = 0.0;
  for (std::size_t e = 0; e < vertices.size(); ++e) {
    const Point& a = vertices[e];
    const Point& b = vertices[(e + 1) % vertices.size()];
    const Point delta{b[0] - a[0], b[1] - a[1], b[2] - a[2]};
    const double length =
        std::sqrt(delta[0] * delta[0] + delta[1] * delta[1] + delta[2] * delta[2]);
    // tanh-sinh passes the signed distance to the nearer endpoint as the
    // second argument; stepping from that endpoint keeps tiny offsets exact.
    auto edge = [&](double t, double tc) {
      const double s = std::abs(tc);
      Point x;
      for (int i = 0; i < 3; ++i)
        x[i] = (t < 0.5) ? a[i] + s * delta[i] : b[i] - s * delta[i];
      return f(x) * length;
    };
    total += rule.integrate(edge, 0.0, 1.0);
  }
  return total;
}

double polygon_radial_integral(std::span<const Point> vertices, const Point& center,
                               const std::function<double(double)>& g) {
  if (vertices.size() < 2)
    throw std::invalid_argument("polygon_radial_integral: need at least two vertices");
  boost::math::quadrature::tanh_sinh<double> rule;
  double total = 0.0;
  for (std::size_t e = 0; e < vertices.size(); ++e) {
    const Point& a = vertices[e];
    const Point& b = vertices[(e + 1) % vertices.size()];
    Point delta, from_a, from_b;
    for (int i = 0; i < 3; ++i) {
      delta[i] = b[i] - a[i];
      from_a[i] = a[i] - center[i];
      from_b[i] = b[i] - center[i];
    }
    const double length =
        std::sqrt(delta[0] * delta[0] + delta[1] * delta[1] + delta[2] * delta[2]);
    auto edge = [&](double t, double tc) {
      const double s = std::abs(tc);
      Point c;
      for (int i = 0; i < 3; ++i)
        c[i] = (t < 0.5) ? from_a[i] + s * delta[i] : from_b[i] - s * delta[i];
      return g(std::hypot(c[0], c[1], c[2])) * length;
    };
    total += rule.integrate(edge, 0.0, 1.0);
  }
  return total;
}

double singular_diamond_reference() {
  const Point diamond[] = {{0.0, 1.0, 0.0}, {1.0, 0.0, 0.0}, {0.0, -1.0, 0.0},
                           {-1.0, 0.0, 0.0}};
  return polygon_radial_integral(diamond, {0.0, 1.0, 0.0},
                                 [](double r) { return 1.0 / std::sqrt(r); });
}

std::optional<double> reference_value(const ShapeDescriptor& shape, IntegrandKind integrand,
                                      double eta0) {
  // Every supported integrand is constant along normals for these shapes except
  // the singular one, which only has a reference on the unit diamond.
  double length = 0.0;
  double radius = shape.r0;
  switch (shape.kind) {
  case ShapeKind::CircleQuadratic:
    // phi = r^2 - r0^2, so the eta level is a circle of radius sqrt(r0^2 + eta).
    radius = std::sqrt(shape.r0 * shape.r0 + eta0);
    length = circle_length(radius);
    break;
  case ShapeKind::CircleSDF:
    radius = shape.r0 + eta0;
    length = circle_length(radius);
    break;
  case ShapeKind::PowerOfDistance: {
    const double root = std::copysign(std::pow(std::abs(eta0), 1.0 / shape.exponent), eta0);
    radius = shape.r0 + root;
    length = circle_length(radius);
    break;
  }
  case ShapeKind::SphereSDF:
    radius = shape.r0 + eta0;
    length = sphere_area(radius);
    break;
  case ShapeKind::CuspStarSDF:
    length = cusp_star_level_length(shape.r0, eta0);
    break;
  case ShapeKind::L1Ball2D:
    length = l1_perimeter_2d(shape.r0 + eta0);
    break;
  case ShapeKind::L1Ball3D:
    length = l1_area_3d(shape.r0 + eta0);
    break;
  case ShapeKind::SquaredL1: {
    const double level = std::copysign(std::sqrt(std::abs(eta0)), eta0);
    length = l1_perimeter_2d(shape.r0 + level);
    break;
  }
  }

  switch (integrand) {
  case IntegrandKind::ConstantOne:
    return length;
  case IntegrandKind::ThetaSawtooth:
    // f depends on the polar angle only; its mean over a full turn is pi / 2.
    if (shape.kind == ShapeKind::CircleSDF || shape.kind == ShapeKind::CircleQuadratic ||
        shape.kind == ShapeKind::PowerOfDistance)
      return radius * pi * pi;
    return std::nullopt;
  case IntegrandKind::InverseSqrtAt:
    if ((shape.kind == ShapeKind::L1Ball2D || shape.kind == ShapeKind::SquaredL1) &&
        shape.r0 == 1.0 && eta0 == 0.0)
      return singular_diamond_reference();
    return std::nullopt;
  }
  return std::nullopt;
}

} // namespace lsint
