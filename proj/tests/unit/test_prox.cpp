#include "dcla/oracle.hpp"
#include "dcla/prox.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace dcla;
using dcla::testing::vec;

namespace {

double sq(double v) { return v * v; }

double huber(double v, double lam) {
  const double a = std::abs(v);
  return a <= lam ? v * v / (2.0 * lam) : a - lam / 2.0;
}

}  // namespace

TEST_CASE("prox_l1 examples") {
  CHECK((prox_l1(vec({1.2, -0.3}), 0.5) - vec({0.7, 0.0})).norm() < 1e-15);
  CHECK(prox_l1(vec({0.0, 0.0}), 3.0).norm() == 0.0);
  const double p = prox_l1(vec({0.9}), 0.4)[0];
  CHECK(p == doctest::Approx(0.5).epsilon(1e-15));
  const double g = oracle::grid_argmin_1d([](double y) { return 0.4 * std::abs(y) + sq(y - 0.9) / 2; },
                                          -1.0, 2.0, 1e-5);
  CHECK(std::abs(p - g) < 1e-4);
}

TEST_CASE("prox_l2 examples") {
  CHECK((prox_l2(vec({3.0, 4.0}), 2.0) - vec({1.8, 2.4})).norm() < 1e-15);
  CHECK(prox_l2(vec({0.3, 0.4}), 1.0).norm() == 0.0);
  CHECK(prox_l2(vec({0.0, 0.0}), 1.0).norm() == 0.0);
  auto obj = [](double a, double b) { return 0.5 * std::hypot(a, b) + (sq(a - 1) + sq(b - 1)) / 2; };
  const Point g = oracle::grid_argmin_2d(obj, -1, 2, -1, 2, 0.01, 1e-6);
  CHECK((prox_l2(vec({1.0, 1.0}), 0.5) - g).lpNorm<Eigen::Infinity>() < 1e-3);
}

TEST_CASE("prox_l1_minus_eps_l2 examples") {
  CHECK(prox_l1_minus_eps_l2(vec({0.1, 0.05}), 1.0, 0.5).norm() == 0.0);

  auto obj_for = [](Point x) {
    return [x](double a, double b) {
      return std::abs(a) + std::abs(b) - std::hypot(a, b) + (sq(a - x[0]) + sq(b - x[1])) / 2;
    };
  };
  const Point p1 = prox_l1_minus_eps_l2(vec({0.5, 0.3}), 1.0, 1.0);
  CHECK((p1 - vec({0.5, 0.0})).norm() < 1e-15);
  const Point g1 = oracle::grid_argmin_2d(obj_for(vec({0.5, 0.3})), -2, 3, -2, 3, 1e-3, 1e-3);
  CHECK((p1 - g1).lpNorm<Eigen::Infinity>() < 2e-3);

  const Point p2 = prox_l1_minus_eps_l2(vec({2.0, 0.0}), 1.0, 1.0);
  CHECK((p2 - vec({2.0, 0.0})).norm() < 1e-15);
  const Point g2 = oracle::grid_argmin_2d(obj_for(vec({2.0, 0.0})), -1, 4, -2, 2, 1e-3, 1e-3);
  CHECK((p2 - g2).lpNorm<Eigen::Infinity>() < 2e-3);
}

TEST_CASE("prox_l1_minus_eps_l2 ties go to the lowest index") {
  const Point p = prox_l1_minus_eps_l2(vec({0.6, -0.6}), 1.0, 1.0);
  CHECK(p[0] == doctest::Approx(0.6));
  CHECK(p[1] == 0.0);
}

TEST_CASE("prox_l1_minus_eps_l2 rejects eps outside (0, 1]") {
  CHECK_THROWS_AS(prox_l1_minus_eps_l2(vec({1.0}), 1.0, 1.5), InvalidArgument);
  CHECK_THROWS_AS(prox_l1_minus_eps_l2(vec({1.0}), 1.0, 0.0), InvalidArgument);
}

TEST_CASE("prox_1d_convex examples") {
  ScalarConvexFn abs_fn{[](double y) { return std::abs(y); },
                        [](double y) { return static_cast<double>((y > 0) - (y < 0)); }};
  CHECK(prox_1d_convex(abs_fn, 0.4, 0.9) == doctest::Approx(0.5).epsilon(1e-9));

  ScalarConvexFn quad{[](double y) { return y * y / 2; }, [](double y) { return y; }};
  CHECK(prox_1d_convex(quad, 1.0, 3.0) == doctest::Approx(1.5).epsilon(1e-9));

  ScalarConvexFn capped{[](double y) { return std::max(2 * std::abs(y) - 1, 0.0); },
                        [](double y) { return 2 * std::abs(y) > 1 ? 2.0 * ((y > 0) - (y < 0)) : 0.0; }};
  const double p = prox_1d_convex(capped, 0.5, 2.0);
  const double g = oracle::zoom_argmin_1d(
      [](double y) { return std::max(2 * std::abs(y) - 1, 0.0) + sq(y - 2.0); }, 0.0, 3.0, 1e-3,
      1e-7);
  CHECK(std::abs(p - g) < 1e-6);
}

TEST_CASE("prox_1d_convex reports a failed bracket") {
  // Subgradient that never turns positive: no minimizer.
  ScalarConvexFn bad{[](double y) { return -y; }, [](double) { return -1e9; }};
  CHECK_THROWS_AS(prox_1d_convex(bad, 1.0, 0.0), ConvergenceError);
}

TEST_CASE("moreau_value examples") {
  const auto g = convex::l1();
  CHECK(moreau_value(g, 1.0, vec({0.0})) == 0.0);
  CHECK(moreau_value(g, 1.0, vec({3.0})) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(moreau_value(g, 1.0, vec({0.5})) == doctest::Approx(0.125).epsilon(1e-15));
  for (double x : {3.0, 0.5}) {
    auto obj = [x](double y) { return std::abs(y) + sq(y - x) / 2; };
    const double y = oracle::zoom_argmin_1d(obj, -5, 5, 1e-3, 1e-8);
    CHECK(std::abs(moreau_value(g, 1.0, vec({x})) - obj(y)) < 1e-6);
  }
}

TEST_CASE("moreau_grad examples") {
  CHECK(moreau_grad(convex::l1(), 1.0, vec({0.0}))[0] == 0.0);
  const double g3 = moreau_grad(convex::l1(), 1.0, vec({3.0}))[0];
  CHECK(g3 == doctest::Approx(1.0).epsilon(1e-15));
  const double h = 1e-5;
  const double fd = (moreau_value(convex::l1(), 1.0, vec({3.0 + h})) -
                     moreau_value(convex::l1(), 1.0, vec({3.0 - h}))) / (2 * h);
  CHECK(std::abs(g3 - fd) < 1e-6);

  const Point g = moreau_grad(convex::l2(), 1.0, vec({3.0, 4.0}));
  CHECK((g - vec({0.6, 0.8})).norm() < 1e-15);
  const Point fd2 = dcla::testing::fd_gradient(
      [](const Point& x) { return moreau_value(convex::l2(), 1.0, x); }, vec({3.0, 4.0}), 1e-5);
  CHECK((g - fd2).norm() < 1e-6);
}

TEST_CASE("prox_of_moreau examples") {
  const double p = prox_of_moreau(convex::l1(), 1.0, 1.0, vec({3.0}))[0];
  CHECK(p == doctest::Approx(2.0).epsilon(1e-15));
  const double g = oracle::zoom_argmin_1d([](double y) { return huber(y, 1.0) + sq(y - 3) / 2; },
                                          -5, 5, 1e-3, 1e-8);
  CHECK(std::abs(p - g) < 1e-6);

  CHECK(prox_of_moreau(convex::l1(), 0.3, 0.7, vec({0.0, 0.0})).norm() == 0.0);
  CHECK(prox_of_moreau(convex::l2(), 0.3, 0.7, vec({0.0, 0.0})).norm() == 0.0);

  const Point q = prox_of_moreau(convex::l2(), 1.0, 1.0, vec({3.0, 4.0}));
  CHECK((q - vec({2.4, 3.2})).norm() < 1e-14);
  auto env = [](double a, double b) {
    const double r = std::hypot(a, b);
    const double e = r <= 1.0 ? r * r / 2 : r - 0.5;
    return e + (sq(a - 3) + sq(b - 4)) / 2;
  };
  const Point gq = oracle::grid_argmin_2d(env, 1, 5, 2, 6, 0.01, 1e-7);
  CHECK((q - gq).lpNorm<Eigen::Infinity>() < 1e-5);
}

TEST_CASE("prox_of_moreau returns x bit for bit when the prox is the identity") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 100; ++k) {
    const Point x = dcla::testing::uniform_point(rng, 3, 5.0);
    const Point p = prox_of_moreau(convex::zero(), 0.01, 0.005, x);
    CHECK((p.array() == x.array()).all());
  }
}

TEST_CASE("prox_neg_abs") {
  CHECK(prox_neg_abs(0.5, 1.0) == 1.5);
  CHECK(prox_neg_abs(-0.5, 1.0) == -1.5);
  CHECK(prox_neg_abs(0.0, 1.0) == 1.0);
  for (double v : {0.5, -0.5}) {
    auto obj = [v](double y) { return sq(y - v) / 2 - std::abs(y); };
    CHECK(std::abs(prox_neg_abs(v, 1.0) - oracle::grid_argmin_1d(obj, -4, 4, 1e-5)) < 1e-4);
  }
}

TEST_CASE("approx_prox_fixed_point") {
  auto id = [](const Point& v) { return v; };
  CHECK(approx_prox_fixed_point(id, 0.5, vec({1.0}), 1)[0] == doctest::Approx(0.5));
  auto zero = [](const Point& v) { return Point(Point::Zero(v.size())); };
  const Point x = vec({0.3, -2.0});
  CHECK((approx_prox_fixed_point(zero, 0.7, x, 5) - x).norm() == 0.0);
  CHECK(std::abs(approx_prox_fixed_point(id, 0.5, vec({1.0}), 50)[0] - 2.0 / 3.0) < 1e-6);
}

TEST_CASE("closed-form proxes are nonexpansive") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> step(0.01, 3.0);
  double worst = -1.0;
  for (int k = 0; k < 1000; ++k) {
    const Point x = dcla::testing::uniform_point(rng, 3, 5.0);
    const Point y = dcla::testing::uniform_point(rng, 3, 5.0);
    const double t = step(rng);
    const double dxy = (x - y).norm();
    worst = std::max(worst, (prox_l1(x, t) - prox_l1(y, t)).norm() - dxy);
    worst = std::max(worst, (prox_l2(x, t) - prox_l2(y, t)).norm() - dxy);
    worst = std::max(worst, (prox_of_moreau(convex::l1(), t, 0.5, x) -
                             prox_of_moreau(convex::l1(), t, 0.5, y)).norm() - dxy);
    worst = std::max(worst, (prox_of_moreau(convex::l2(), t, 0.5, x) -
                             prox_of_moreau(convex::l2(), t, 0.5, y)).norm() - dxy);
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("envelope lower bound and Lipschitz sandwich") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> lam_dist(1e-3, 2.0);
  for (int k = 0; k < 1000; ++k) {
    const Point x = dcla::testing::uniform_point(rng, 2, 5.0);
    const double lam = lam_dist(rng);
    // |.|_1 is sqrt(d)-Lipschitz, |.|_2 is 1-Lipschitz.
    const double e1 = moreau_value(convex::l1(), lam, x);
    const double e2 = moreau_value(convex::l2(), lam, x);
    CHECK(e1 <= x.lpNorm<1>() + 1e-12);
    CHECK(e2 <= x.norm() + 1e-12);
    CHECK(x.lpNorm<1>() <= e1 + 2.0 * lam / 2 + 1e-12);
    CHECK(x.norm() <= e2 + lam / 2 + 1e-12);
  }
}

TEST_CASE("moreau_grad matches finite differences") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> lam_dist(0.05, 2.0);
  for (int k = 0; k < 200; ++k) {
    const Point x = dcla::testing::uniform_point(rng, 2, 4.0);
    const double lam = lam_dist(rng);
    for (const auto& g : {convex::l1(), convex::l2(), convex::half_squared_norm(2.0)}) {
      const Point grad = moreau_grad(g, lam, x);
      const Point fd = dcla::testing::fd_gradient([&](const Point& y) { return moreau_value(g, lam, y); },
                                                  x, 1e-6);
      CHECK((grad - fd).norm() <= 1e-5 * std::max(1.0, grad.norm()));
    }
  }
}

TEST_CASE("envelope gradient of l1 is a subgradient at the prox") {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> lam_dist(0.05, 2.0);
  for (int k = 0; k < 500; ++k) {
    const Point x = dcla::testing::uniform_point(rng, 4, 3.0);
    const double lam = lam_dist(rng);
    const Point g = moreau_grad(convex::l1(), lam, x);
    const Point p = prox_l1(x, lam);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      CHECK(std::abs(g[i]) <= 1.0 + 1e-12);
      if (p[i] != 0.0) CHECK(g[i] == doctest::Approx(p[i] > 0 ? 1.0 : -1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("prox_of_moreau agrees with a 1D prox of the envelope") {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> par(0.05, 2.0);
  std::uniform_real_distribution<double> coord(-5.0, 5.0);
  for (int k = 0; k < 200; ++k) {
    const double lam = par(rng);
    const double gam = par(rng);
    const double x = coord(rng);
    ScalarConvexFn env{[lam](double y) { return huber(y, lam); },
                       [lam](double y) { return std::clamp(y / lam, -1.0, 1.0); }};
    const double ref = prox_1d_convex(env, gam, x);
    CHECK(std::abs(prox_of_moreau(convex::l1(), lam, gam, vec({x}))[0] - ref) < 1e-8);
  }
}

TEST_CASE("convex factories") {
  const Point x = vec({3.0, -4.0});
  CHECK(convex::l1(2.0).value(x) == 14.0);
  CHECK(convex::l2(2.0).value(x) == 10.0);
  CHECK(convex::half_squared_norm(2.0).value(x) == 25.0);
  CHECK(convex::zero().value(x) == 0.0);
  const auto s = convex::scaled(convex::l1(), 3.0);
  CHECK(s.value(x) == 21.0);
  CHECK((s.prox(1.0, x) - prox_l1(x, 3.0)).norm() == 0.0);
  CHECK_THROWS_AS(convex::scaled(convex::l1(), 0.0), InvalidArgument);
}
