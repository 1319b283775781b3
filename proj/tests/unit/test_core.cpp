#include "dcla/core.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace dcla;

TEST_CASE("successive draws differ") {
  RandomStream s(7, 0);
  const double a = s.normal();
  const double b = s.normal();
  CHECK(a != b);
  CHECK(s.draws() == 2);
}

TEST_CASE("same seed, stream and draw index reproduce the same vector") {
  RandomStream a(123, 4);
  RandomStream b(123, 4);
  for (int k = 0; k < 10; ++k) {
    const Point x = draw_normal(a, 3);
    const Point y = draw_normal(b, 3);
    CHECK((x.array() == y.array()).all());
  }
  CHECK(a.draws() == 30);
}

TEST_CASE("draw_normal moments over 1e5 draws") {
  RandomStream s(2024, 0);
  constexpr int n = 100000;
  double sum = 0.0;
  double sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = draw_normal(s, 1)[0];
    sum += z;
    sq += z * z;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(var - 1.0) < 0.03);
}

TEST_CASE("streams with the same seed and different index are uncorrelated") {
  RandomStream a(99, 0);
  RandomStream b(99, 1);
  constexpr int n = 100000;
  double sab = 0.0, sa = 0.0, sb = 0.0, saa = 0.0, sbb = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = a.normal();
    const double y = b.normal();
    sab += x * y;
    sa += x;
    sb += y;
    saa += x * x;
    sbb += y * y;
  }
  const double cov = sab / n - (sa / n) * (sb / n);
  const double corr = cov / std::sqrt((saa / n - sa * sa / n / n) * (sbb / n - sb * sb / n / n));
  CHECK(std::abs(corr) < 0.02);
}

TEST_CASE("neighbouring seeds give different streams") {
  RandomStream a(5, 0);
  RandomStream b(6, 0);
  RandomStream c(5, 1);
  const double x = a.normal();
  CHECK(x != b.normal());
  CHECK(x != c.normal());
}

TEST_CASE("sampler kind names round trip") {
  for (auto k : {SamplerKind::ULA, SamplerKind::MoreauULA, SamplerKind::PSGLA, SamplerKind::DCLA,
                 SamplerKind::DCLAS}) {
    CHECK(sampler_kind_from_string(to_string(k)) == k);
  }
  CHECK_THROWS_AS(sampler_kind_from_string("MALA"), InvalidArgument);
}

TEST_CASE("SamplerConfig validation") {
  SamplerConfig c;
  CHECK_NOTHROW(c.validate());
  c.gamma = 0.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c.gamma = 0.1;
  c.lambda = -1.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c.lambda = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c.lambda = 0.1;
  c.n_chains = 0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
}

TEST_CASE("point validity") {
  Point x(2);
  x << 1.0, 2.0;
  CHECK(all_finite(x));
  CHECK_NOTHROW(require_valid_point(x, "x"));
  x[1] = std::numeric_limits<double>::infinity();
  CHECK_FALSE(all_finite(x));
  CHECK_THROWS_AS(require_valid_point(x, "x"), InvalidArgument);
  CHECK_THROWS_AS(require_valid_point(Point(), "x"), InvalidArgument);
}
