#include "lsint/redistance.hpp"

#include "lsint/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>

namespace lsint {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Extents {
  long n;
  long nk;
};

Extents extents(const GridSpec& grid) {
  const long n = grid.nodes_per_axis();
  return {n, grid.dim == 3 ? n : 1};
}

// Smallest |d| among the two neighbours along `axis`.
double upwind_neighbour(const DistanceGrid& dg, std::array<long, 3> idx, int axis, long n) {
  double best = kInf;
  for (long step : {-1L, 1L}) {
    auto nb = idx;
    nb[axis] += step;
    if (nb[axis] < 0 || nb[axis] >= n)
      continue;
    best = std::min(best, std::abs(dg.values[dg.index(nb[0], nb[1], nb[2])]));
  }
  return best;
}

// Godunov update for |grad u| = 1 given sorted upwind values.
double godunov_solve(std::array<double, 3> a, int dim, double h) {
  std::sort(a.begin(), a.begin() + dim);
  double u = a[0] + h;
  if (dim >= 2 && u > a[1]) {
    const double diff = a[0] - a[1];
    u = 0.5 * (a[0] + a[1] + std::sqrt(2.0 * h * h - diff * diff));
    if (dim == 3 && u > a[2]) {
      const double s = a[0] + a[1] + a[2];
      const double q = a[0] * a[0] + a[1] * a[1] + a[2] * a[2] - h * h;
      u = (s + std::sqrt(s * s - 3.0 * q)) / 3.0;
    }
  }
  return u;
}

double sign_of(double v) { return v < 0.0 ? -1.0 : 1.0; }

} // namespace

std::vector<double> sample_nodes(const GridSpec& grid, const ImplicitField& field) {
  const auto [n, nk] = extents(grid);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n * n * nk));
  Point x{0.0, 0.0, 0.0};
  for (long i = 0; i < n; ++i) {
    x[0] = grid.coordinate(i);
    for (long j = 0; j < n; ++j) {
      x[1] = grid.coordinate(j);
      for (long k = 0; k < nk; ++k) {
        x[2] = grid.dim == 3 ? grid.coordinate(k) : 0.0;
        out.push_back(field.phi(x));
      }
    }
  }
  return out;
}

DistanceGrid initialize_interface(const GridSpec& grid, std::span<const double> phi) {
  validate(grid);
  const auto [n, nk] = extents(grid);
  const std::size_t total = static_cast<std::size_t>(n * n * nk);
  if (phi.size() != total)
    throw std::invalid_argument(
        fmt::format("initialize_interface: expected {} samples, got {}", total, phi.size()));

  DistanceGrid dg;
  dg.grid = grid;
  dg.values.assign(total, kInf);
  dg.frozen.assign(total, 0);
  const double h = grid.spacing();
  bool has_negative = false;
  bool has_positive = false;

  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) {
      for (long k = 0; k < nk; ++k) {
        const std::size_t id = dg.index(i, j, k);
        const double v = phi[id];
        has_negative |= v < 0.0;
        has_positive |= v > 0.0;
        if (v == 0.0) {
          dg.values[id] = 0.0;
          dg.frozen[id] = 1;
          continue;
        }
        double best = kInf;
        const std::array<long, 3> idx{i, j, k};
        for (int axis = 0; axis < grid.dim; ++axis) {
          for (long step : {-1L, 1L}) {
            auto nb = idx;
            nb[axis] += step;
            if (nb[axis] < 0 || nb[axis] >= n)
              continue;
            const double w = phi[dg.index(nb[0], nb[1], nb[2])];
            if (w == 0.0 || (w < 0.0) == (v < 0.0))
              continue;
            best = std::min(best, h * v / (v - w));
          }
        }
        if (best < kInf) {
          dg.values[id] = sign_of(v) * best;
          dg.frozen[id] = 1;
        } else {
          dg.values[id] = sign_of(v) * kInf;
        }
      }
    }
  }
  if (!(has_negative && has_positive) &&
      std::none_of(phi.begin(), phi.end(), [](double v) { return v == 0.0; }))
    throw NoInterface("level set function has uniform sign; no interface on the grid");
  return dg;
}

DistanceGrid fast_sweep(DistanceGrid dg, const SweepOptions& options) {
  const GridSpec& grid = dg.grid;
  const auto [n, nk] = extents(grid);
  const double h = grid.spacing();
  const double diameter = 2.0 * grid.half_width * std::sqrt(static_cast<double>(grid.dim));
  const double tol = options.tol < 0.0 ? 1e-12 * diameter : options.tol;
  const int orderings = 1 << grid.dim;

  dg.rounds = 0;
  dg.last_change = kInf;
  for (int round = 0; round < options.max_rounds; ++round) {
    double change = 0.0;
    for (int ord = 0; ord < orderings; ++ord) {
      const bool rev_i = ord & 1;
      const bool rev_j = ord & 2;
      const bool rev_k = ord & 4;
      for (long a = 0; a < n; ++a) {
        const long i = rev_i ? n - 1 - a : a;
        for (long b = 0; b < n; ++b) {
          const long j = rev_j ? n - 1 - b : b;
          for (long c = 0; c < nk; ++c) {
            const long k = rev_k ? nk - 1 - c : c;
            const std::size_t id = dg.index(i, j, k);
            if (dg.frozen[id])
              continue;
            std::array<double, 3> nb{kInf, kInf, kInf};
            for (int axis = 0; axis < grid.dim; ++axis)
              nb[axis] = upwind_neighbour(dg, {i, j, k}, axis, axis == 2 ? nk : n);
            if (nb[0] == kInf && nb[1] == kInf && nb[2] == kInf)
              continue;
            const double candidate = godunov_solve(nb, grid.dim, h);
            const double current = std::abs(dg.values[id]);
            if (candidate < current) {
              change = std::max(change, current == kInf ? kInf : current - candidate);
              dg.values[id] = sign_of(dg.values[id]) * candidate;
            }
          }
        }
      }
    }
    dg.rounds = round + 1;
    dg.last_change = change;
    if (change <= tol)
      return dg;
  }
  throw NotConverged(fmt::format("fast sweeping did not converge in {} rounds (change {:.3e})",
                                 options.max_rounds, dg.last_change),
                     dg.last_change);
}

double eikonal_residual(const DistanceGrid& dg) {
  const GridSpec& grid = dg.grid;
  const auto [n, nk] = extents(grid);
  const double h = grid.spacing();
  double worst = 0.0;
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j)
      for (long k = 0; k < nk; ++k) {
        const std::size_t id = dg.index(i, j, k);
        if (dg.frozen[id])
          continue;
        std::array<double, 3> nb{kInf, kInf, kInf};
        for (int axis = 0; axis < grid.dim; ++axis)
          nb[axis] = upwind_neighbour(dg, {i, j, k}, axis, axis == 2 ? nk : n);
        const double solved = godunov_solve(nb, grid.dim, h);
        worst = std::max(worst, std::abs(solved - std::abs(dg.values[id])) / h);
      }
  return worst;
}

ImplicitField make_sampled_field(const DistanceGrid& dg) {
  auto shared = std::make_shared<const DistanceGrid>(dg);
  ImplicitField field;
  field.dim = dg.grid.dim;
  field.is_distance = true;
  field.constant_grad_norm = 1.0;
  field.grad_norm = [](const Point&) { return 1.0; };
  field.phi = [shared](const Point& x) {
    const GridSpec& grid = shared->grid;
    const long n = grid.nodes_per_axis();
    const double h = grid.spacing();
    std::array<long, 3> base{0, 0, 0};
    std::array<double, 3> frac{0.0, 0.0, 0.0};
    for (int axis = 0; axis < grid.dim; ++axis) {
      const double t = (x[axis] + grid.half_width) / h - grid.offset;
      const double r = std::round(t);
      // Snap to the node when within rounding of it.
      const double s = std::abs(t - r) < 1e-9 ? r : t;
      long b = static_cast<long>(std::floor(s));
      b = std::clamp(b, 0L, n - 2);
      base[axis] = b;
      frac[axis] = std::clamp(s - static_cast<double>(b), 0.0, 1.0);
    }
    const int corners = 1 << grid.dim;
    double value = 0.0;
    for (int c = 0; c < corners; ++c) {
      double weight = 1.0;
      std::array<long, 3> idx{0, 0, 0};
      for (int axis = 0; axis < grid.dim; ++axis) {
        const bool up = (c >> axis) & 1;
        idx[axis] = base[axis] + (up ? 1 : 0);
        weight *= up ? frac[axis] : 1.0 - frac[axis];
      }
      if (weight != 0.0)
        value += weight * shared->values[shared->index(idx[0], idx[1], idx[2])];
    }
    return value;
  };
  field.name = "sampled-distance";
  return field;
}

} // namespace lsint
