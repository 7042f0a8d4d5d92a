#include "lsint/errors.hpp"
#include "lsint/geometry.hpp"
#include "lsint/quadrature.hpp"
#include "lsint/reference.hpp"

#include "doctest.h"

#include <cmath>
#include <numbers>

using namespace lsint;
using std::numbers::pi;

namespace {

QuadratureJob circle_job(int n, int moments, EpsilonPolicy policy) {
  QuadratureJob job;
  job.field = make_circle_quadratic(0.501);
  job.integrand = make_integrand(IntegrandKind::ConstantOne);
  job.kernel = build_kernel(WeightFamily::Bump, moments);
  job.policy = policy;
  job.grid = GridSpec{2, n};
  return job;
}

std::vector<double> symmetric_etas(double step, int count) {
  std::vector<double> etas;
  for (int i = -count; i <= count; ++i)
    etas.push_back(step * i);
  return etas;
}

} // namespace

TEST_SUITE("quadrature") {

TEST_CASE("epsilon policy parsing") {
  const auto a = EpsilonPolicy::parse("2*h^0.5");
  CHECK(a.form == EpsilonPolicy::Form::PowerOfH);
  CHECK(a.coefficient == 2.0);
  CHECK(a.exponent == 0.5);
  const auto b = EpsilonPolicy::parse("3.4*N^-2/3");
  CHECK(b.form == EpsilonPolicy::Form::PowerOfN);
  CHECK(b.exponent == doctest::Approx(-2.0 / 3.0));
  const auto c = EpsilonPolicy::parse("N^(-0.475)");
  CHECK(c.coefficient == 1.0);
  CHECK(c.exponent == -0.475);
  const auto d = EpsilonPolicy::parse(" 0.05 ");
  CHECK(d.form == EpsilonPolicy::Form::Constant);
  CHECK(d.evaluate(GridSpec{2, 100}) == 0.05);
  CHECK(a.evaluate(GridSpec{2, 200}) == doctest::Approx(0.2));
  CHECK(b.evaluate(GridSpec{2, 1000}) == doctest::Approx(0.034));
  CHECK(EpsilonPolicy::parse(a.to_string()).exponent == a.exponent);
  for (const char* bad : {"", "x^2", "2h^1", "*h^1", "2*h^", "2*h^1/0", "-1*h^1", "abc", "^2"})
    CHECK_THROWS_AS(EpsilonPolicy::parse(bad), std::invalid_argument);
  CHECK_THROWS_AS(EpsilonPolicy::constant(0.0).evaluate(GridSpec{}), std::invalid_argument);
}

TEST_CASE("circle with a single vanishing moment") {
  const auto r = integrate(circle_job(100, 1, EpsilonPolicy::power_of_h(2.0, 0.5)));
  const double exact = circle_length(0.501);
  CHECK(r.eps == doctest::Approx(2.0 * std::sqrt(0.02)));
  CHECK(r.h == 0.02);
  CHECK_FALSE(r.under_resolved);
  CHECK(r.band_count > 0);
  CHECK(std::abs(r.value - exact) / exact == doctest::Approx(2.11159e-2).epsilon(1e-5));
}

TEST_CASE("bitwise identical across worker counts") {
  auto job = circle_job(400, 2, EpsilonPolicy::power_of_h(2.0, 0.5));
  const auto one = integrate(job);
  job.workers = 3;
  const auto three = integrate(job);
  CHECK(one.value == three.value);
  CHECK(one.band_count == three.band_count);
}

TEST_CASE("empty band") {
  auto job = circle_job(100, 1, EpsilonPolicy::constant(1e-9));
  CHECK_THROWS_AS(integrate(job), EmptyBand);
}

TEST_CASE("under resolved flag") {
  const auto r = integrate(circle_job(100, 1, EpsilonPolicy::constant(0.03)));
  CHECK(r.under_resolved);
}

TEST_CASE("job validation") {
  auto job = circle_job(100, 1, EpsilonPolicy::constant(0.1));
  job.side = BandSide::Both;
  CHECK_THROWS_AS(integrate(job), std::invalid_argument);
  job.side = BandSide::Positive;
  job.grid.dim = 3;
  CHECK_THROWS_AS(integrate(job), std::invalid_argument);
  job.grid.dim = 2;
  CHECK_THROWS_AS(integrate_3d_surface(job), std::invalid_argument);
  CHECK_THROWS_AS(integrate_singular(job), std::invalid_argument);
}

TEST_CASE("singular integrand on the band") {
  QuadratureJob job;
  job.field = make_l1_ball(2, 1.0);
  job.integrand = make_integrand(IntegrandKind::InverseSqrtAt, {0.0, 1.0, 0.0});
  job.policy = EpsilonPolicy::constant(2.973046248 * std::pow(200.0, -0.475));
  job.grid = GridSpec{2, 200, 2};
  job.kernel = build_kernel(WeightFamily::Bump, 1);
  // (0, 1) sits on the zero level, which the closed band of a rho = 0 kernel reaches.
  CHECK_THROWS_AS(integrate(job), SingularOnBand);
  job.kernel = build_kernel(WeightFamily::ShiftedBump, 1, 0.1);
  const auto r = integrate_singular(job);
  CHECK(std::isfinite(r.value));
  const double exact = singular_diamond_reference();
  CHECK(std::abs(r.value - exact) / exact == doctest::Approx(1.01552e-2).epsilon(1e-4));
}

TEST_CASE("non-finite gradient on the band") {
  QuadratureJob job = circle_job(100, 1, EpsilonPolicy::constant(0.1));
  job.field.grad_norm = [](const Point&) { return std::nan(""); };
  CHECK_THROWS_AS(integrate(job), UndefinedGradient);
}

TEST_CASE("either side approximates the zero level") {
  QuadratureJob job;
  job.field = make_circle_sdf(0.501);
  job.integrand = make_integrand(IntegrandKind::ConstantOne);
  job.kernel = build_kernel(WeightFamily::Bump, 2);
  job.policy = EpsilonPolicy::constant(0.16);
  job.grid = GridSpec{2, 400};
  const double plus = integrate(job).value;
  job.side = BandSide::Negative;
  const double minus = integrate(job).value;
  const double exact = circle_length(0.501);
  CHECK(std::abs(plus - exact) / exact < 5e-6);
  CHECK(std::abs(minus - exact) / exact < 5e-6);
}

TEST_CASE("shift selects a level set") {
  QuadratureJob job;
  job.field = make_circle_sdf(0.5);
  job.integrand = make_integrand(IntegrandKind::ConstantOne);
  job.kernel = build_kernel(WeightFamily::Bump, 2);
  job.policy = EpsilonPolicy::constant(0.08);
  job.grid = GridSpec{2, 200};
  job.shift = 0.125;
  const double shifted_value = integrate(job).value;
  job.field = make_circle_sdf(0.625);
  job.shift = 0.0;
  CHECK(shifted_value == doctest::Approx(integrate(job).value).epsilon(1e-9));
  CHECK(shifted_value == doctest::Approx(circle_length(0.625)).epsilon(2e-3));
}

TEST_CASE("sphere surface") {
  QuadratureJob job;
  job.field = make_ball_sdf(3, 0.65);
  job.integrand = make_integrand(IntegrandKind::ConstantOne);
  job.kernel = build_kernel(WeightFamily::Bump, 2);
  job.policy = EpsilonPolicy::constant(0.2);
  job.grid = GridSpec{3, 100};
  const auto r = integrate_3d_surface(job);
  CHECK(r.value == doctest::Approx(sphere_area(0.65)).epsilon(1e-3));
}

}

TEST_SUITE("family") {

TEST_CASE("circle family is linear with slope 2 pi") {
  const GridSpec g{2, 400};
  const auto field = make_circle_sdf(0.501);
  const auto samples = sample_family(field, make_integrand(IntegrandKind::ConstantOne), g,
                                     default_family_probe(), symmetric_etas(0.02, 3));
  const auto fit = fit_family(samples, FitModel::Polynomial, 1);
  REQUIRE(fit.coefficients.size() == 2);
  CHECK(fit.coefficients[0] == doctest::Approx(circle_length(0.501)).epsilon(1e-5));
  CHECK(fit.coefficients[1] == doctest::Approx(2 * pi).epsilon(1e-6));
  CHECK(fit.max_residual <= 1e-6);
}

TEST_CASE("sphere family is quadratic") {
  const GridSpec g{3, 200};
  FamilyProbe probe = default_family_probe();
  probe.eps_over_h = 16;
  const auto samples = sample_family(make_ball_sdf(3, 0.5),
                                     make_integrand(IntegrandKind::ConstantOne), g, probe,
                                     symmetric_etas(0.02, 2));
  const auto fit = fit_family(samples, FitModel::Polynomial, 2);
  REQUIRE(fit.coefficients.size() == 3);
  CHECK(fit.coefficients[0] == doctest::Approx(pi).epsilon(1e-4));
  CHECK(fit.coefficients[1] == doctest::Approx(4 * pi).epsilon(1e-3));
  CHECK(fit.coefficients[2] == doctest::Approx(4 * pi).epsilon(1e-3));
}

TEST_CASE("cube of the distance gives a cube root law") {
  const GridSpec g{2, 800};
  const auto field = make_power_of_distance(make_circle_sdf(0.501), 3);
  FamilyProbe probe = default_family_probe();
  probe.relative_width = 0.4;
  std::vector<double> etas;
  for (double e : {0.004, 0.008, 0.016, 0.032, 0.064}) {
    etas.push_back(-e);
    etas.push_back(e);
  }
  const auto samples =
      sample_family(field, make_integrand(IntegrandKind::ConstantOne), g, probe, etas);
  const auto fit = fit_family(samples, FitModel::PowerLaw);
  CHECK(fit.exponent == doctest::Approx(1.0 / 3.0).epsilon(2e-3));
  CHECK(fit.coefficients[0] == doctest::Approx(circle_length(0.501)).epsilon(1e-4));
  CHECK(fit.coefficients[1] == doctest::Approx(2 * pi).epsilon(1e-3));
}

TEST_CASE("power law fit recovers a synthetic exponent") {
  FamilyIntegralSamples s;
  for (double e : {-0.3, -0.2, -0.1, -0.05, 0.05, 0.1, 0.2, 0.3}) {
    s.etas.push_back(e);
    s.values.push_back(1.5 + 0.7 * std::copysign(std::pow(std::abs(e), 0.6), e));
  }
  const auto fit = fit_family(s, FitModel::PowerLaw);
  CHECK(fit.exponent == doctest::Approx(0.6).epsilon(1e-6));
  CHECK(fit.coefficients[0] == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(fit.coefficients[1] == doctest::Approx(0.7).epsilon(1e-6));
  CHECK(fit.max_residual < 1e-9);
  s.etas[0] = 0.0;
  CHECK_THROWS_AS(fit_family(s, FitModel::PowerLaw), std::invalid_argument);
}

TEST_CASE("cusp family loses smoothness below zero") {
  const GridSpec g{2, 400};
  const auto field = make_cusp_star_sdf(0.75);
  const auto one = make_integrand(IntegrandKind::ConstantOne);
  FamilyProbe probe = default_family_probe();
  probe.eps_over_h = 16;
  probe.side = BandSide::Positive;
  const auto outside = sample_family(field, one, g, probe, {0.02, 0.04, 0.06, 0.08, 0.1});
  probe.side = BandSide::Negative;
  const auto inside = sample_family(field, one, g, probe, {-0.1, -0.08, -0.06, -0.04, -0.02});
  const auto fit_out = fit_family(outside, FitModel::Polynomial, 1);
  const auto fit_in = fit_family(inside, FitModel::Polynomial, 1);
  CHECK(fit_out.coefficients[1] == doctest::Approx(2 * pi).epsilon(1e-3));
  CHECK(fit_out.max_residual < 1e-4);
  CHECK(fit_in.max_residual > 1000 * fit_out.max_residual);
}

TEST_CASE("fit validation") {
  FamilyIntegralSamples s{{1e-9, 2e-9, 3e-9, 4e-9, 5e-9}, {1, 2, 3, 4, 5}};
  CHECK_THROWS_AS(fit_family(s, FitModel::Polynomial, 3), IllConditionedFit);
  CHECK_THROWS_AS(fit_family(s, FitModel::Polynomial, 4), std::invalid_argument);
  CHECK_THROWS_AS(fit_family(s, FitModel::Polynomial, -1), std::invalid_argument);
  s.values.pop_back();
  CHECK_THROWS_AS(fit_family(s, FitModel::Polynomial, 1), std::invalid_argument);
  FamilyIntegralSamples three{{-1, 0.5, 1}, {0, 1, 2}};
  CHECK_THROWS_AS(fit_family(three, FitModel::PowerLaw), std::invalid_argument);
}

TEST_CASE("relative probe needs a non-zero level") {
  FamilyProbe probe = default_family_probe();
  probe.relative_width = 0.4;
  CHECK_THROWS_AS(family_integral(make_circle_sdf(0.5), make_integrand(IntegrandKind::ConstantOne),
                                  GridSpec{2, 50}, probe, 0.0),
                  std::invalid_argument);
}

TEST_CASE("observed order") {
  CHECK(observed_order(4e-3, 1e-3) == doctest::Approx(2.0));
  CHECK(std::isnan(observed_order(0.0, 1e-3)));
  CHECK(std::isnan(observed_order(1e-3, -1.0)));
}

}
