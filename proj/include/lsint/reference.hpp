#pragma once

#include "lsint/geometry.hpp"

#include <functional>
#include <optional>
#include <span>

namespace lsint {

// Exact lengths and areas of the test shapes.

double circle_length(double r);
double sphere_area(double r);
double l1_perimeter_2d(double r0);
double l1_area_3d(double r0);

/// Length of the eta-level set of the cusp-star distance function.
/// Outside (eta >= 0) the level set is four offset arcs joined by half-circle
/// caps around the cusps, giving 2 pi (r0 + eta). Inside it is four arcs of
/// radius r0 + |eta| meeting at corners on the axes.
double cusp_star_level_length(double r0, double eta);

/// Line integral of f over the closed polygon through `vertices`, one
/// tanh-sinh rule per edge. Integrable singularities at vertices are allowed.
double polygon_line_integral(std::span<const Point> vertices, const ScalarFn& f);

/// Line integral of g(|x - center|) over the closed polygon. Distances are
/// measured from each edge's endpoints, so singularities of g at a vertex
/// that coincides with `center` keep full relative accuracy.
double polygon_radial_integral(std::span<const Point> vertices, const Point& center,
                               const std::function<double(double)>& g);

/// Integral of 1/sqrt(|x - (0,1)|) over the diamond |x| + |y| = 1.
double singular_diamond_reference();

/// Exact value of the integral of `integrand` over the eta0-level set of the
/// shape, when one is known.
std::optional<double> reference_value(const ShapeDescriptor& shape, IntegrandKind integrand,
                                      double eta0 = 0.0);

} // namespace lsint
