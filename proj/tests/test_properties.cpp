#include "lsint/compensated_sum.hpp"
#include "lsint/errors.hpp"
#include "lsint/geometry.hpp"
#include "lsint/grid.hpp"
#include "lsint/kernels.hpp"
#include "lsint/quadrature.hpp"
#include "lsint/redistance.hpp"
#include "lsint/reference.hpp"
#include "lsint/studies.hpp"

#include "doctest.h"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

using namespace lsint;

namespace {

constexpr double kR0 = 0.501;

double circle_error(int n, int moments, double shift = 0.0, BandSide side = BandSide::Positive,
                    ImplicitField field = make_circle_sdf(kR0),
                    EpsilonPolicy policy = EpsilonPolicy::power_of_h(2.0, 0.5)) {
  QuadratureJob job;
  job.field = std::move(field);
  job.integrand = make_integrand(IntegrandKind::ConstantOne);
  job.kernel = build_kernel(WeightFamily::Bump, moments);
  job.policy = policy;
  job.grid = GridSpec{2, n};
  job.shift = shift;
  job.side = side;
  const double exact = circle_length(kR0 + shift);
  return std::abs(integrate(job).value - exact) / exact;
}

} // namespace

TEST_SUITE("properties.kernels") {

TEST_CASE("random kernels have unit mass and vanishing moments") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pick_m(1, 5);
  std::uniform_real_distribution<double> pick_rho(0.0, 0.4);
  boost::math::quadrature::tanh_sinh<double> rule;
  int built = 0;
  for (int trial = 0; trial < 24; ++trial) {
    const int m = pick_m(rng);
    const bool shifted_family = trial % 2 == 1;
    const double rho = shifted_family ? pick_rho(rng) : 0.0;
    Kernel k;
    try {
      k = build_kernel(shifted_family ? WeightFamily::ShiftedBump : WeightFamily::Bump, m, rho);
    } catch (const SingularMomentSystem&) {
      continue;
    }
    ++built;
    CAPTURE(m);
    CAPTURE(rho);
    for (int p = 0; p <= m; ++p) {
      const double moment =
          rule.integrate([&](double r) { return k(r) * std::pow(r, p); }, rho, 1.0);
      CHECK(std::abs(moment - (p == 0 ? 1.0 : 0.0)) <= (p == 0 ? 1e-10 : 1e-8));
    }
  }
  CHECK(built >= 18);
}

TEST_CASE("scaled kernels integrate to one") {
  boost::math::quadrature::tanh_sinh<double> rule;
  for (const Kernel& k : {build_kernel(WeightFamily::Bump, 1), build_kernel(WeightFamily::Bump, 2),
                          build_kernel(WeightFamily::ShiftedBump, 1, 0.1)})
    for (double eps : {0.01, 0.1, 1.0}) {
      const double mass = rule.integrate([&](double eta) { return eval_scaled(k, eta, eps); },
                                         k.support_lo * eps, eps);
      CHECK(std::abs(mass - 1.0) <= 1e-10);
      CHECK(eval_scaled(k, -0.5 * eps, eps) == 0.0);
      CHECK(eval_scaled(k, 1.01 * eps, eps) == 0.0);
    }
}

TEST_CASE("bump kernels decay smoothly at the end of the support") {
  for (int m : {1, 2, 3}) {
    const Kernel k = build_kernel(WeightFamily::Bump, m);
    double peak = 0.0;
    for (int i = 1; i < 2000; ++i)
      peak = std::max(peak, std::abs(k(i / 2000.0)));
    CHECK(std::abs(k(1.0 - 1e-3)) < 1e-8 * peak);
  }
}

}

TEST_SUITE("properties.geometry") {

TEST_CASE("distance fields are 1-Lipschitz") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::vector<ImplicitField> fields{make_circle_sdf(kR0), make_ball_sdf(3, 0.65),
                                          make_cusp_star_sdf(0.75),
                                          make_power_of_distance(make_circle_sdf(kR0), 1)};
  for (const auto& f : fields) {
    REQUIRE(f.is_distance);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const Point a{u(rng), u(rng), f.dim == 3 ? u(rng) : 0.0};
      const Point b{u(rng), u(rng), f.dim == 3 ? u(rng) : 0.0};
      const double dist = std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
      worst = std::max(worst, std::abs(f.phi(a) - f.phi(b)) - dist);
    }
    CAPTURE(f.name);
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("closest point projection is idempotent") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const auto& f : {make_circle_sdf(kR0), make_ball_sdf(3, 0.65)}) {
    int tested = 0;
    while (tested < 1000) {
      const Point x{u(rng), u(rng), f.dim == 3 ? u(rng) : 0.0};
      if (std::hypot(x[0], x[1], x[2]) < 0.05)
        continue;
      ++tested;
      const Point p = closest_point(f, x);
      const Point q = closest_point(f, p);
      CHECK(std::abs(f.phi(p)) <= 1e-12);
      CHECK(std::hypot(p[0] - q[0], p[1] - q[1], p[2] - q[2]) <= 1e-10);
    }
  }
}

TEST_CASE("first power of the distance is the distance") {
  const auto base = make_cusp_star_sdf(0.75);
  const auto same = make_power_of_distance(base, 1);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const Point x{u(rng), u(rng), 0.0};
    CHECK(same.phi(x) == base.phi(x));
  }
}

TEST_CASE("squared variant gradient norm at grid points") {
  const auto sq = make_squared_variant(make_l1_ball(2, 1.0));
  const GridSpec g{2, 200, 2};
  bool exact = true;
  for (long i = 0; i < g.nodes_per_axis(); ++i)
    for (long j = 0; j < g.nodes_per_axis(); ++j) {
      const Point x{g.coordinate(i), g.coordinate(j), 0.0};
      const double target = 8.0 * std::abs(sq.phi(x));
      const double gn = sq.grad_norm(x);
      // Correctly rounded square root of 8|phi|.
      exact = exact && gn == std::sqrt(target) &&
              std::abs(gn * gn - target) <= 2.0 * std::numeric_limits<double>::epsilon() * target;
    }
  CHECK(exact);
}

}

TEST_SUITE("properties.grid") {

TEST_CASE("band sides partition the symmetric band") {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> pick_n(20, 120);
  std::uniform_real_distribution<double> pick_eps(0.01, 0.3);
  ImplicitField plane;
  plane.phi = [](const Point& x) { return x[0] + 0.5 * x[1]; };
  plane.grad_norm = [](const Point&) { return std::sqrt(1.25); };
  for (int trial = 0; trial < 20; ++trial) {
    const GridSpec g{2, pick_n(rng)};
    const double eps = pick_eps(rng);
    const auto& field = trial % 2 ? plane : make_cusp_star_sdf(0.75);
    const auto both = iterate_band(g, field, eps, BandSide::Both);
    const auto pos = iterate_band(g, field, eps, BandSide::Positive);
    const auto neg = iterate_band(g, field, eps, BandSide::Negative);
    std::set<std::array<long, 3>> joined;
    for (const auto* part : {&pos, &neg})
      for (const auto& n : *part)
        CHECK(joined.insert(n.index).second);
    for (const auto& n : both)
      if (n.value == 0.0)
        CHECK(joined.insert(n.index).second);
    CHECK(joined.size() == both.size());
  }
}

TEST_CASE("chunked sums do not depend on the chunk count") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::size_t> pick_size(0, 50000);
  std::lognormal_distribution<double> mag(0.0, 6.0);
  std::uniform_int_distribution<int> sign(0, 1);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> v(pick_size(rng));
    for (auto& x : v)
      x = sign(rng) ? mag(rng) : -mag(rng);
    const double one = chunked_compensated_sum(v, 1);
    for (std::size_t chunks : {2u, 5u, 16u, 64u})
      CHECK(chunked_compensated_sum(v, chunks) == one);
  }
}

TEST_CASE("band sums do not depend on the worker count") {
  QuadratureJob job;
  job.field = make_cusp_star_sdf(0.75);
  job.integrand = make_integrand(IntegrandKind::ConstantOne);
  job.kernel = build_kernel(WeightFamily::Bump, 1);
  job.policy = EpsilonPolicy::constant(0.05);
  job.grid = GridSpec{2, 800};
  const double one = integrate(job).value;
  for (int w : {2, 3, 5}) {
    job.workers = w;
    CHECK(integrate(job).value == one);
  }
}

}

TEST_SUITE("properties.redistance") {

TEST_CASE("sweeps never increase magnitudes") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> pick_r(0.2, 0.7);
  const SweepOptions one_round{1, std::numeric_limits<double>::infinity()};
  for (int trial = 0; trial < 4; ++trial) {
    const double r = pick_r(rng);
    const GridSpec g{2, 60};
    auto dg = initialize_interface(g, sample_nodes(g, make_circle_quadratic(r)));
    bool monotone = true;
    for (int round = 0; round < 3; ++round) {
      const auto before = dg.values;
      dg = fast_sweep(dg, one_round);
      for (std::size_t i = 0; i < before.size(); ++i)
        monotone = monotone && std::abs(dg.values[i]) <= std::abs(before[i]);
    }
    CHECK(monotone);
  }
}

TEST_CASE("circle distance converges at first order") {
  double errors[2];
  const int ladder[2] = {100, 200};
  for (int s = 0; s < 2; ++s) {
    const GridSpec g{2, ladder[s]};
    const auto dg = fast_sweep(initialize_interface(g, sample_nodes(g, make_circle_quadratic(kR0))));
    double worst = 0.0;
    for (long i = 0; i < g.nodes_per_axis(); ++i)
      for (long j = 0; j < g.nodes_per_axis(); ++j) {
        const double exact = std::hypot(g.coordinate(i), g.coordinate(j)) - kR0;
        if (std::abs(exact) <= 0.5 * kR0)
          worst = std::max(worst, std::abs(dg.values[dg.index(i, j)] - exact));
      }
    errors[s] = worst;
  }
  CHECK(errors[0] <= 0.02);
  CHECK(std::log2(errors[0] / errors[1]) >= 0.9);
}

TEST_CASE("redistanced circle feeds the quadrature") {
  const GridSpec g{2, 200};
  const auto dg = fast_sweep(initialize_interface(g, sample_nodes(g, make_circle_quadratic(kR0))));
  QuadratureJob job;
  job.field = make_sampled_field(dg);
  job.integrand = make_integrand(IntegrandKind::ConstantOne);
  job.kernel = build_kernel(WeightFamily::Bump, 1);
  job.policy = EpsilonPolicy::power_of_h(2.0, 0.5);
  job.grid = g;
  const double exact = circle_length(kR0);
  // The distance error near the interface is below 1e-2, which bounds the length error.
  CHECK(std::abs(integrate(job).value - exact) / exact <= 1e-2);
}

}

TEST_SUITE("properties.quadrature") {

TEST_CASE("one-sided sums agree on a smooth circle") {
  for (int m : {1, 2}) {
    const double plus = circle_error(400, m);
    const double minus = circle_error(400, m, 0.0, BandSide::Negative);
    QuadratureJob job;
    job.field = make_circle_sdf(kR0);
    job.integrand = make_integrand(IntegrandKind::ConstantOne);
    job.kernel = build_kernel(WeightFamily::Bump, m);
    job.policy = EpsilonPolicy::power_of_h(2.0, 0.5);
    job.grid = GridSpec{2, 400};
    const double sp = integrate(job).value;
    job.side = BandSide::Negative;
    const double sm = integrate(job).value;
    const double exact = circle_length(kR0);
    CHECK(std::abs(sp - sm) / exact <= 2.0 * std::max(plus, minus));
  }
}

TEST_CASE("doubling N at fixed eps never doubles the error") {
  for (const auto& field : {make_circle_sdf(kR0), make_circle_quadratic(kR0)})
    for (int m : {1, 2}) {
      double prev = 0.0;
      for (int n : {100, 200, 400, 800}) {
        const double e =
            circle_error(n, m, 0.0, BandSide::Positive, field, EpsilonPolicy::constant(0.1));
        if (prev > 0.0)
          CHECK(e <= 2.0 * prev);
        prev = e;
      }
    }
}

TEST_CASE("observed orders are exact on geometric sequences") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> pick_p(0.2, 5.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double p = pick_p(rng);
    std::vector<int> ladder{100, 200, 400, 800};
    std::vector<double> errors;
    for (int n : ladder)
      errors.push_back(std::pow(double(n), -p));
    for (double o : observed_orders(errors, ladder))
      CHECK(o == doctest::Approx(p).epsilon(1e-12));
  }
}

}

TEST_SUITE("properties.exactness") {

TEST_CASE("circle distance integral is exact to 1e-7 at N = 100") {
  CHECK(circle_error(100, 1) <= 1e-7);
}

TEST_CASE("circle distance error keeps decreasing with N") {
  double prev = circle_error(100, 1);
  for (int n : {200, 400, 800}) {
    const double e = circle_error(n, 1);
    CAPTURE(n);
    CHECK(e < prev);
    prev = e;
  }
}

TEST_CASE("shifted circle levels meet the same tolerance") {
  for (double shift : {-0.1, -0.05, 0.05, 0.1}) {
    CAPTURE(shift);
    CHECK(circle_error(100, 1, shift) <= 1e-7);
  }
}

}
