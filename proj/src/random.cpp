#include "blog/random.hpp"

#include <cmath>

namespace blog {

Rng make_rng(std::uint64_t seed, std::uint64_t replicate, std::uint64_t stream) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(seed), hi(seed), lo(replicate), hi(replicate), lo(stream), hi(stream)};
  return Rng(seq);
}

double draw_normal(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

double draw_uniform(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

double draw_gamma(Rng& rng, double shape, double rate) {
  return std::gamma_distribution<double>(shape, 1.0 / rate)(rng);
}

double draw_inverse_gamma(Rng& rng, double shape, double rate) {
  return rate / std::gamma_distribution<double>(shape, 1.0)(rng);
}

double draw_beta(Rng& rng, double a, double b) {
  const double x = std::gamma_distribution<double>(a, 1.0)(rng);
  const double y = std::gamma_distribution<double>(b, 1.0)(rng);
  return x / (x + y);
}

double draw_inverse_gaussian(Rng& rng, double mean, double shape) {
  const double z = draw_normal(rng);
  const double mv = mean * z * z;
  // The two roots multiply to mean^2; computing the larger one first avoids
  // cancellation in the smaller.
  const double large = mean + (mean / (2.0 * shape)) * (mv + std::sqrt(4.0 * shape * mv + mv * mv));
  const double small = mean * (mean / large);
  return draw_uniform(rng) <= mean / (mean + small) ? small : large;
}

}  // namespace blog
