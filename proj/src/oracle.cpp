#include "dcla/oracle.hpp"

#include "dcla/prox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <utility>

namespace dcla::oracle {

namespace {

constexpr int kHalfWindow = 10;
constexpr double kShrink = 5.0;
constexpr int kMaxMoves = 200;

std::pair<double, double> refine_2d(const Objective2D& f, double c0, double c1, double step,
                                    double final_step) {
  double best = f(c0, c1);
  while (step >= final_step) {
    // Re-centre until the window's best is its centre; grid minimizers can
    // sit many steps from the true one along a shallow valley.
    for (int moves = 0; moves < kMaxMoves; ++moves) {
      double n0 = c0;
      double n1 = c1;
      for (int i = -kHalfWindow; i <= kHalfWindow; ++i) {
        for (int j = -kHalfWindow; j <= kHalfWindow; ++j) {
          const double a = c0 + i * step;
          const double b = c1 + j * step;
          const double v = f(a, b);
          if (v < best) {
            best = v;
            n0 = a;
            n1 = b;
          }
        }
      }
      if (n0 == c0 && n1 == c1) break;
      c0 = n0;
      c1 = n1;
    }
    step /= kShrink;
  }
  return {c0, c1};
}

double refine_1d(const Objective1D& f, double c, double step, double final_step) {
  double best = f(c);
  while (step >= final_step) {
    for (int moves = 0; moves < kMaxMoves; ++moves) {
      double n = c;
      for (int i = -kHalfWindow; i <= kHalfWindow; ++i) {
        const double a = c + i * step;
        const double v = f(a);
        if (v < best) {
          best = v;
          n = a;
        }
      }
      if (n == c) break;
      c = n;
    }
    step /= kShrink;
  }
  return c;
}

}  // namespace

double grid_argmin_1d(const Objective1D& f, double lo, double hi, double step) {
  const long n = static_cast<long>(std::floor((hi - lo) / step));
  double best_x = lo;
  double best = f(lo);
  for (long i = 1; i <= n; ++i) {
    const double x = lo + static_cast<double>(i) * step;
    const double v = f(x);
    if (v < best) {
      best = v;
      best_x = x;
    }
  }
  return best_x;
}

double zoom_argmin_1d(const Objective1D& f, double lo, double hi, double coarse_step,
                      double final_step, int keep) {
  const long n = static_cast<long>(std::floor((hi - lo) / coarse_step)) + 1;
  std::vector<double> vals(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) vals[static_cast<std::size_t>(i)] = f(lo + i * coarse_step);

  std::vector<std::pair<double, long>> minima;
  for (long i = 0; i < n; ++i) {
    const double v = vals[static_cast<std::size_t>(i)];
    const bool left = i == 0 || v <= vals[static_cast<std::size_t>(i - 1)];
    const bool right = i == n - 1 || v <= vals[static_cast<std::size_t>(i + 1)];
    if (left && right) minima.emplace_back(v, i);
  }
  std::sort(minima.begin(), minima.end());
  if (minima.size() > static_cast<std::size_t>(keep)) minima.resize(static_cast<std::size_t>(keep));

  double best_x = lo;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [v, i] : minima) {
    const double x = refine_1d(f, lo + i * coarse_step, coarse_step / kShrink, final_step);
    const double fx = f(x);
    if (fx < best) {
      best = fx;
      best_x = x;
    }
  }
  return best_x;
}

Point grid_argmin_2d(const Objective2D& f, double lo0, double hi0, double lo1, double hi1,
                     double coarse_step, double final_step, int keep) {
  const long n0 = static_cast<long>(std::floor((hi0 - lo0) / coarse_step)) + 1;
  const long n1 = static_cast<long>(std::floor((hi1 - lo1) / coarse_step)) + 1;
  Matrix vals(n0, n1);
  for (long i = 0; i < n0; ++i) {
    for (long j = 0; j < n1; ++j) vals(i, j) = f(lo0 + i * coarse_step, lo1 + j * coarse_step);
  }

  std::vector<std::pair<double, std::pair<long, long>>> minima;
  for (long i = 0; i < n0; ++i) {
    for (long j = 0; j < n1; ++j) {
      const double v = vals(i, j);
      bool is_min = true;
      for (long di = -1; di <= 1 && is_min; ++di) {
        for (long dj = -1; dj <= 1; ++dj) {
          const long a = i + di;
          const long b = j + dj;
          if (a < 0 || b < 0 || a >= n0 || b >= n1 || (di == 0 && dj == 0)) continue;
          if (vals(a, b) < v) {
            is_min = false;
            break;
          }
        }
      }
      if (is_min) minima.push_back({v, {i, j}});
    }
  }
  std::sort(minima.begin(), minima.end());
  if (minima.size() > static_cast<std::size_t>(keep)) minima.resize(static_cast<std::size_t>(keep));

  Point best_x(2);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [v, ij] : minima) {
    const auto [a, b] = refine_2d(f, lo0 + ij.first * coarse_step, lo1 + ij.second * coarse_step,
                                  coarse_step / kShrink, final_step);
    const double fx = f(a, b);
    if (fx < best) {
      best = fx;
      best_x << a, b;
    }
  }
  return best_x;
}

namespace {

double huber(double v, double lam) {
  const double a = std::abs(v);
  return a <= lam ? v * v / (2.0 * lam) : a - lam / 2.0;
}

double norm_envelope(double r, double lam) { return r <= lam ? r * r / (2.0 * lam) : r - lam / 2.0; }

double sq(double v) { return v * v; }

}  // namespace

std::vector<CheckResult> run_prox_checks(int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  std::uniform_real_distribution<double> step(0.05, 1.5);
  constexpr double coarse = 0.02;
  constexpr double fine = 1e-7;

  auto box_search = [&](const Objective2D& obj, const Point& x, double radius) {
    return grid_argmin_2d(obj, x[0] - radius, x[0] + radius, x[1] - radius, x[1] + radius, coarse,
                          fine);
  };

  std::vector<CheckResult> out;
  auto record = [&](const std::string& name, auto&& trial) {
    CheckResult r{name, trials, 0.0};
    for (int k = 0; k < trials; ++k) r.max_deviation = std::max(r.max_deviation, trial());
    out.push_back(r);
  };

  record("prox_l1", [&] {
    Point x(2);
    x << coord(rng), coord(rng);
    const double t = step(rng);
    auto obj = [&](double a, double b) {
      return t * (std::abs(a) + std::abs(b)) + 0.5 * (sq(a - x[0]) + sq(b - x[1]));
    };
    return (prox_l1(x, t) - box_search(obj, x, 2.0 * t + 0.1)).lpNorm<Eigen::Infinity>();
  });

  record("prox_l2", [&] {
    Point x(2);
    x << coord(rng), coord(rng);
    const double t = step(rng);
    auto obj = [&](double a, double b) {
      return t * std::hypot(a, b) + 0.5 * (sq(a - x[0]) + sq(b - x[1]));
    };
    return (prox_l2(x, t) - box_search(obj, x, t + 0.1)).lpNorm<Eigen::Infinity>();
  });

  for (double eps : {0.5, 1.0}) {
    record(eps == 1.0 ? "prox_l1_minus_eps_l2(eps=1)" : "prox_l1_minus_eps_l2(eps=0.5)", [&] {
      Point x(2);
      x << coord(rng), coord(rng);
      const double t = step(rng);
      auto obj = [&](double a, double b) {
        return t * (std::abs(a) + std::abs(b) - eps * std::hypot(a, b)) +
               0.5 * (sq(a - x[0]) + sq(b - x[1]));
      };
      return (prox_l1_minus_eps_l2(x, t, eps) - box_search(obj, x, 3.0 * t + 0.1))
          .lpNorm<Eigen::Infinity>();
    });
  }

  std::uniform_real_distribution<double> theta_dist(0.5, 3.0);
  record("prox_1d_convex(capped_l1 r1)", [&] {
    const double x = coord(rng);
    const double t = step(rng);
    const double theta = theta_dist(rng);
    ScalarConvexFn phi{[theta](double y) { return theta * std::abs(y); },
                       [theta](double y) { return theta * ((y > 0) - (y < 0)); }};
    auto obj = [&](double y) { return theta * std::abs(y) + sq(y - x) / (2.0 * t); };
    const double r = theta * t + 0.1;
    return std::abs(prox_1d_convex(phi, t, x) - zoom_argmin_1d(obj, x - r, x + r, 1e-3, fine));
  });

  record("prox_1d_convex(capped_l1 r2)", [&] {
    const double x = coord(rng);
    const double t = step(rng);
    const double theta = theta_dist(rng);
    ScalarConvexFn phi{
        [theta](double y) { return std::max(theta * std::abs(y) - 1.0, 0.0); },
        [theta](double y) { return theta * std::abs(y) > 1.0 ? theta * ((y > 0) - (y < 0)) : 0.0; }};
    auto obj = [&](double y) { return std::max(theta * std::abs(y) - 1.0, 0.0) + sq(y - x) / (2.0 * t); };
    const double r = theta * t + 0.1;
    return std::abs(prox_1d_convex(phi, t, x) - zoom_argmin_1d(obj, x - r, x + r, 1e-3, fine));
  });

  std::uniform_real_distribution<double> small(0.05, 1.0);
  record("prox_of_moreau(l1)", [&] {
    Point x(2);
    x << coord(rng), coord(rng);
    const double lam = small(rng);
    const double gam = small(rng);
    auto obj = [&](double a, double b) {
      return huber(a, lam) + huber(b, lam) + (sq(a - x[0]) + sq(b - x[1])) / (2.0 * gam);
    };
    return (prox_of_moreau(convex::l1(), lam, gam, x) - box_search(obj, x, gam + 0.1))
        .lpNorm<Eigen::Infinity>();
  });

  record("prox_of_moreau(l2)", [&] {
    Point x(2);
    x << coord(rng), coord(rng);
    const double lam = small(rng);
    const double gam = small(rng);
    auto obj = [&](double a, double b) {
      return norm_envelope(std::hypot(a, b), lam) + (sq(a - x[0]) + sq(b - x[1])) / (2.0 * gam);
    };
    return (prox_of_moreau(convex::l2(), lam, gam, x) - box_search(obj, x, gam + 0.1))
        .lpNorm<Eigen::Infinity>();
  });

  return out;
}

}  // namespace dcla::oracle
