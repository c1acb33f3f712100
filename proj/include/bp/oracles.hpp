#pragma once

// Brute-force reference computations used by tests and example generation.
// Nothing here is called from the verification pipeline.

#include "bp/engine.hpp"
#include "bp/geometry.hpp"
#include "bp/quadrature.hpp"

#include <cstdint>

namespace bp {

struct MCEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

/// Polar Monte Carlo: v uniform on S^{n-1}, r uniform on the ray segment.
/// Samples are drawn in fixed-size chunks, each seeded from (seed, chunk
/// index), so results do not depend on the worker count.
MCEstimate mc_region_measure(Region region, const Density& density, const StarBody& K, const StarBody& L,
                             std::uint64_t samples, std::uint64_t seed);

/// Same on the great subsphere ξ^⊥ with weight r^{n-2}.
MCEstimate mc_section_measure(Region region, const Density& density, const Direction& xi, const StarBody& K,
                              const StarBody& L, std::uint64_t samples, std::uint64_t seed);

/// Spherical density γ of (E_{-1} g)^ = E_{1-n} γ, up to degree max_degree,
/// from pairings with the test functions φ(x) = <x/σ, u>^k exp(-|x|^2 / 2σ^2),
/// whose transforms are Hermite-Gaussians. Moments ∫ γ <θ,u>^k dθ follow from
/// ∫ g(θ) ∫ r^{n-2} φ̂(rθ) dr dθ; a Hankel solve then gives the projection of γ
/// onto even degrees <= max_degree. Integrals over θ use quad.
/// σ outside [0.1, 10] is rejected with a domain error.
SphereFunction distributional_ft_oracle(const SphereFunction& g, double sigma, const SphericalQuadrature& quad,
                                        int max_degree = 8);

}  // namespace bp
