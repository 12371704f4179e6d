#pragma once

#include <cstdint>
#include <random>

namespace blog {

using Rng = std::mt19937_64;

// Generator keyed by (seed, replicate, stream). Distinct keys give
// statistically independent streams, so replicate r's draws do not depend on
// which replicates ran before it or on which thread runs it.
Rng make_rng(std::uint64_t seed, std::uint64_t replicate, std::uint64_t stream);

// Stream identifiers in use.
inline constexpr std::uint64_t kSimulationStream = 1;
inline constexpr std::uint64_t kGibbsStream = 2;

double draw_normal(Rng& rng);
double draw_uniform(Rng& rng);  // [0, 1)
// Gamma with shape and *rate*, density proportional to x^(shape-1) exp(-rate x).
double draw_gamma(Rng& rng, double shape, double rate);
// Inverse gamma with shape and rate (scale of the reciprocal's rate).
double draw_inverse_gamma(Rng& rng, double shape, double rate);
double draw_beta(Rng& rng, double a, double b);
// Inverse Gaussian (Wald) with the given mean and shape, by the
// transformation method of Michael, Schucany and Haas.
double draw_inverse_gaussian(Rng& rng, double mean, double shape);

}  // namespace blog
