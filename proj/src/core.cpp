#include "dcla/core.hpp"

#include <array>
#include <cmath>
#include <string>

namespace dcla {

bool all_finite(const Point& x) { return x.allFinite(); }

void require_valid_point(const Point& x, std::string_view what) {
  if (x.size() < 1) {
    throw InvalidArgument(std::string(what) + ": dimension must be >= 1");
  }
  if (!x.allFinite()) {
    throw InvalidArgument(std::string(what) + ": non-finite coordinate");
  }
}

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t index) {
  std::array<std::uint32_t, 4> words{
      static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_index)
    : seed_(seed), stream_index_(stream_index), engine_(make_engine(seed, stream_index)) {}

double RandomStream::normal() {
  ++draws_;
  return normal_(engine_);
}

Point RandomStream::normal(int d) {
  Point z(d);
  for (int i = 0; i < d; ++i) z[i] = normal();
  return z;
}

Point draw_normal(RandomStream& stream, int d) {
  if (d < 1) throw InvalidArgument("draw_normal: d must be >= 1");
  return stream.normal(d);
}

std::string_view to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::ULA: return "ULA";
    case SamplerKind::MoreauULA: return "MoreauULA";
    case SamplerKind::PSGLA: return "PSGLA";
    case SamplerKind::DCLA: return "DCLA";
    case SamplerKind::DCLAS: return "DCLAS";
  }
  return "?";
}

SamplerKind sampler_kind_from_string(std::string_view name) {
  for (auto k : {SamplerKind::ULA, SamplerKind::MoreauULA, SamplerKind::PSGLA,
                 SamplerKind::DCLA, SamplerKind::DCLAS}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidArgument("unknown sampler kind '" + std::string(name) + "'");
}

void SamplerConfig::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidArgument("gamma must be > 0");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("lambda must be > 0");
  if (n_chains < 1) throw InvalidArgument("n_chains must be >= 1");
  if (n_steps < 0) throw InvalidArgument("n_steps must be >= 0");
}

}  // namespace dcla
