#include "dcla/diagnostics.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace dcla;
using dcla::testing::mat2;
using dcla::testing::normal_cdf;
using dcla::testing::vec;

namespace {

DCRegularizer make(RegularizerKind k, double scale = 1.0) {
  DCRegularizer r;
  r.kind = std::move(k);
  r.scale = scale;
  return r;
}

DCPotential std_normal() {
  return DCPotential(QuadraticF(vec({0.0, 0.0}), Matrix::Identity(2, 2)), make(reg::Zero{}));
}

Histogram2D hist_from(std::vector<double> xe, std::vector<double> ye, Matrix mass) {
  Histogram2D h;
  h.x_edges = std::move(xe);
  h.y_edges = std::move(ye);
  h.mass = std::move(mass);
  h.total = h.mass.sum();
  return h;
}

}  // namespace

TEST_CASE("normalize_density of the standard normal") {
  const double two_pi = 2.0 * std::numbers::pi;
  CHECK(std::abs(normalize_density(std_normal(), square_box(vec({0.0, 0.0}), 8.0), 1e-8) - two_pi) <
        1e-4);

  const double side = normal_cdf(1.0) - normal_cdf(-1.0);
  const double ref = two_pi * side * side;
  CHECK(ref == doctest::Approx(2.92836).epsilon(1e-5));
  CHECK(std::abs(normalize_density(std_normal(), square_box(vec({0.0, 0.0}), 1.0), 1e-10) - ref) <
        1e-8);
}

TEST_CASE("normalize_density is insensitive to doubling a wide box") {
  const DCPotential V(QuadraticF(vec({1.0, 1.0}), mat2(1.0, 0.8, 0.8, 1.0)),
                      make(reg::L1MinusL2{}, 10.0));
  const Box2D box = default_box(V);
  const double Z = normalize_density(V, box, 1e-8);
  const double half = 0.5 * (box.x_hi - box.x_lo);
  const double Z2 = normalize_density(V, square_box(vec({1.0, 1.0}), 2 * half), 1e-8);
  // The default box holds 99.9% of the mass.
  CHECK(Z <= Z2);
  CHECK(Z >= 0.998 * Z2);

  const Box2D wide = square_box(vec({1.0, 1.0}), 15.0);
  const double Zw = normalize_density(V, wide, 1e-9);
  const double Zww = normalize_density(V, square_box(vec({1.0, 1.0}), 30.0), 1e-9);
  CHECK(std::abs(Zw - Zww) < 1e-8);
}

TEST_CASE("target_hist matches erf products") {
  const auto xe = uniform_edges(-3.0, 3.0, 12);
  const auto ye = uniform_edges(-3.0, 3.0, 12);
  const double Z = normalize_density(std_normal(), square_box(vec({0.0, 0.0}), 3.0), 1e-10);
  const Histogram2D h = target_hist(std_normal(), Z, xe, ye, 8);
  const double side = normal_cdf(3.0) - normal_cdf(-3.0);
  double worst = 0.0;
  for (int i = 0; i < 12; ++i) {
    for (int j = 0; j < 12; ++j) {
      const double ref = (normal_cdf(xe[i + 1]) - normal_cdf(xe[i])) *
                         (normal_cdf(ye[j + 1]) - normal_cdf(ye[j])) / (side * side);
      worst = std::max(worst, std::abs(h.mass(i, j) - ref));
    }
  }
  CHECK(worst < 1e-6);
  CHECK(h.mass.sum() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("target_hist of a symmetric target is symmetric") {
  const DCPotential V(QuadraticF(vec({0.0, 0.0}), mat2(1.0, 0.8, 0.8, 1.0)),
                      make(reg::L1MinusL2{}, 10.0));
  const Box2D box = square_box(vec({0.0, 0.0}), 3.0);
  const double Z = normalize_density(V, box, 1e-8);
  const auto e = aligned_edges(box.x_lo, box.x_hi, 20);
  const Histogram2D h = target_hist(V, Z, e, e, 8);
  const int n = h.nx();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      CHECK(std::abs(h.mass(i, j) - h.mass(n - 1 - i, n - 1 - j)) < 1e-10);
      CHECK(std::abs(h.mass(i, j) - h.mass(j, i)) < 1e-10);
    }
  }
}

TEST_CASE("histogram2d examples") {
  const auto e = uniform_edges(0.0, 2.0, 2);
  Matrix s(4, 2);
  s << 0.5, 0.5, 1.5, 0.5, 0.5, 1.5, 1.5, 1.5;
  const SampleHistogram h = histogram2d(s, e, e);
  CHECK(h.n_inside == 4);
  CHECK(h.n_outside == 0);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(h.hist.mass(i, j) == 0.25);

  Matrix t(3, 2);
  t << 0.5, 0.5, 5.0, 0.5, std::nan(""), 0.0;
  const SampleHistogram g = histogram2d(t, e, e);
  CHECK(g.n_inside == 1);
  CHECK(g.n_outside == 1);

  CHECK_THROWS_AS(histogram2d(Matrix(0, 2), e, e), InvalidArgument);
  Matrix far(1, 2);
  far << 9.0, 9.0;
  CHECK_THROWS_AS(histogram2d(far, e, e), InvalidArgument);
}

TEST_CASE("exact normal samples give a small binned KL") {
  RandomStream rng(11, 0);
  Matrix s(100000, 2);
  for (int i = 0; i < s.rows(); ++i) s.row(i) = draw_normal(rng, 2).transpose();
  const auto e = uniform_edges(-3.0, 3.0, 20);
  const double Z = normalize_density(std_normal(), square_box(vec({0.0, 0.0}), 3.0), 1e-8);
  const Histogram2D target = target_hist(std_normal(), Z, e, e, 8);
  const SampleHistogram h = histogram2d(s, e, e);
  CHECK(binned_kl(h.hist, target) < 0.02);
}

TEST_CASE("binned_kl examples") {
  const std::vector<double> xe{0.0, 1.0, 2.0};
  const std::vector<double> ye{0.0, 1.0};
  const Histogram2D p = hist_from(xe, ye, mat2(0.5, 0.0, 0.5, 0.0).topLeftCorner(2, 1));
  const Histogram2D q = hist_from(xe, ye, mat2(0.25, 0.0, 0.75, 0.0).topLeftCorner(2, 1));
  const double ref = 0.5 * std::log(2.0) + 0.5 * std::log(0.5 / 0.75);
  CHECK(binned_kl(p, q) == doctest::Approx(ref).epsilon(1e-14));
  CHECK(binned_kl(p, q) == doctest::Approx(0.14384).epsilon(1e-4));
  CHECK(binned_kl(p, p) == 0.0);

  // q = 0 where p > 0 is floored, not infinite.
  const Histogram2D z = hist_from(xe, ye, mat2(1.0, 0.0, 0.0, 0.0).topLeftCorner(2, 1));
  CHECK(std::isfinite(binned_kl(p, z)));

  const Histogram2D other = hist_from({0.0, 1.0, 3.0}, ye, mat2(0.5, 0.0, 0.5, 0.0).topLeftCorner(2, 1));
  CHECK_THROWS_AS(binned_kl(p, other), InvalidArgument);
}

TEST_CASE("binned_kl is non-negative") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto e = uniform_edges(0.0, 1.0, 5);
  for (int k = 0; k < 200; ++k) {
    Matrix a(5, 5), b(5, 5);
    for (int i = 0; i < 25; ++i) {
      a.data()[i] = u(rng);
      b.data()[i] = u(rng) + 1e-3;
    }
    Histogram2D p = hist_from(e, e, a);
    Histogram2D q = hist_from(e, e, b);
    p.normalize();
    q.normalize();
    CHECK(binned_kl(p, q) >= -1e-15);
  }
}

TEST_CASE("sample_moments examples") {
  Matrix s(4, 2);
  s << 1.0, 0.0, -1.0, 0.0, 0.0, 2.0, 0.0, -2.0;
  const Moments m = sample_moments(s);
  CHECK(m.mean.norm() == 0.0);
  CHECK(m.cov(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(m.cov(1, 1) == doctest::Approx(8.0 / 3.0).epsilon(1e-15));
  CHECK(m.cov(0, 1) == 0.0);
  CHECK_THROWS_AS(sample_moments(Matrix(1, 2)), InvalidArgument);
}

TEST_CASE("edges") {
  const auto u = uniform_edges(-1.0, 1.0, 4);
  REQUIRE(u.size() == 5);
  CHECK(u.front() == -1.0);
  CHECK(u.back() == 1.0);
  CHECK(u[2] == doctest::Approx(0.0).epsilon(1e-15));

  const auto a = aligned_edges(-1.3, 2.0, 7);
  REQUIRE(a.size() == 8);
  const double w = 3.3 / 7;
  bool has_zero = false;
  for (std::size_t i = 0; i + 1 < a.size(); ++i) CHECK(a[i + 1] - a[i] == doctest::Approx(w));
  for (double v : a) has_zero |= std::abs(v) < 1e-12;
  CHECK(has_zero);
  CHECK(std::abs(a.front() + 1.3) < w);

  const auto b = aligned_edges(1.0, 2.0, 4);
  CHECK(b.front() == 1.0);
  CHECK(b.back() == 2.0);
  CHECK_THROWS_AS(uniform_edges(1.0, 0.0, 4), InvalidArgument);
  CHECK_THROWS_AS(uniform_edges(0.0, 1.0, 0), InvalidArgument);
}

TEST_CASE("gauss_legendre integrates polynomials exactly") {
  for (int order : {1, 2, 5, 8, 16}) {
    const GaussRule g = gauss_legendre(order);
    REQUIRE(static_cast<int>(g.nodes.size()) == order);
    for (int p = 0; p < 2 * order; ++p) {
      double s = 0.0;
      for (int i = 0; i < order; ++i) s += g.weights[i] * std::pow(g.nodes[i], p);
      const double ref = p % 2 == 0 ? 2.0 / (p + 1) : 0.0;
      CHECK(std::abs(s - ref) < 1e-13);
    }
  }
}

TEST_CASE("default_box") {
  const DCPotential V(QuadraticF(vec({2.0, 2.0}), mat2(1.0, 0.8, 0.8, 1.0)),
                      make(reg::L1MinusL2{}, 10.0));
  const Box2D b = default_box(V);
  CHECK(0.5 * (b.x_lo + b.x_hi) == doctest::Approx(2.0));
  CHECK(0.5 * (b.y_lo + b.y_hi) == doctest::Approx(2.0));
  const double half = 0.5 * (b.x_hi - b.x_lo);
  CHECK(half > 0.5);
  CHECK(half < 6.0 / std::sqrt(0.2));

  const Box2D g = default_box(std_normal());
  // Square of a standard normal holding 99.9% of the mass within half-width 6.
  auto mass = [](double h) { return std::pow(normal_cdf(h) - normal_cdf(-h), 2); };
  double lo = 0.0, hi = 6.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (mass(mid) >= 0.999 * mass(6.0) ? hi : lo) = mid;
  }
  CHECK(hi == doctest::Approx(3.4808).epsilon(1e-3));
  CHECK(std::abs(0.5 * (g.x_hi - g.x_lo) - hi) <= 6e-3 + 1e-9);

  const DCPotential V3(QuadraticF(vec({0.0, 0.0, 0.0}), Matrix::Identity(3, 3)), make(reg::Zero{}));
  CHECK_THROWS_AS(default_box(V3), InvalidArgument);
}

TEST_CASE("histogram CSV") {
  const auto e = uniform_edges(0.0, 1.0, 2);
  const Histogram2D h = hist_from(e, e, mat2(0.1, 0.2, 0.3, 0.4));
  std::ostringstream os;
  write_histogram_csv(os, h);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "x_lo,x_hi,y_lo,y_hi,mass");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 4);
}
