#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lsint {

/// Ambient point; only the first `dim` components are meaningful.
using Point = std::array<double, 3>;

using ScalarFn = std::function<double(const Point&)>;
using VectorFn = std::function<Point(const Point&)>;

/// A level-set function together with an analytic gradient-norm provider.
struct ImplicitField {
  int dim = 2;
  ScalarFn phi;
  ScalarFn grad_norm;
  bool is_distance = false;
  /// Set when |grad phi| is the same constant everywhere (distance fields, l1 balls).
  std::optional<double> constant_grad_norm;
  /// Analytic gradient where available; required by closest_point.
  VectorFn gradient;
  std::string name;
};

struct Integrand {
  ScalarFn f;
  std::vector<Point> singular_points;
  std::string name;
};

enum class IntegrandKind { ConstantOne, ThetaSawtooth, InverseSqrtAt };

enum class ShapeKind {
  CircleQuadratic,
  CircleSDF,
  SphereSDF,
  CuspStarSDF,
  L1Ball2D,
  L1Ball3D,
  SquaredL1,
  PowerOfDistance,
};

/// Registry entry: shape kind plus its radius and auxiliary parameter.
struct ShapeDescriptor {
  ShapeKind kind = ShapeKind::CircleSDF;
  double r0 = 0.501;
  /// psi exponent q for PowerOfDistance; ignored otherwise.
  int exponent = 3;
  bool signed_power = true;
};

// phi = x^2 + y^2 - r0^2, |grad phi| = 2 |x|.
ImplicitField make_circle_quadratic(double r0);
// phi = |x| - r0 in two dimensions.
ImplicitField make_circle_sdf(double r0);
// phi = |x| - r0 in `dim` dimensions.
ImplicitField make_ball_sdf(int dim, double r0);

/// Signed distance to the closed curve made of four quarter circles of radius
/// r0 centred at (+-r0, +-r0). Adjacent arcs meet tangentially at the four
/// cusps (+-r0, 0), (0, +-r0). Negative inside.
ImplicitField make_cusp_star_sdf(double r0);

/// phi = sum |x_i| - r0 with the global gradient norm sqrt(dim).
ImplicitField make_l1_ball(int dim, double r0);

/// phi = sgn(b) b^2 for base level set b.
ImplicitField make_squared_variant(const ImplicitField& base);

/// phi = psi(d) with psi(d) = d^q, or sgn(d)|d|^q for even q when `signed_power`.
ImplicitField make_power_of_distance(const ImplicitField& base_sdf, int q,
                                     bool signed_power = true);

/// phi - eta0; the zero set of the result is the eta0-level set of `field`.
ImplicitField shifted(const ImplicitField& field, double eta0);

/// x - d(x) grad d(x). Throws UndefinedGradient when |grad d| is not 1 at x.
Point closest_point(const ImplicitField& field, const VectorFn& grad, const Point& x);
Point closest_point(const ImplicitField& field, const Point& x);

Integrand make_integrand(IntegrandKind kind, const Point& center = {0.0, 0.0, 0.0});

/// 0 <= theta < 2 pi.
double polar_angle(double x, double y);

ImplicitField make_field(const ShapeDescriptor& shape);
int shape_dim(ShapeKind kind);

std::string_view shape_name(ShapeKind kind);
ShapeKind parse_shape_name(std::string_view name);
/// Paper-default parameters for a registry name.
ShapeDescriptor default_shape(ShapeKind kind);

std::string_view integrand_name(IntegrandKind kind);
IntegrandKind parse_integrand_name(std::string_view name);

} // namespace lsint
