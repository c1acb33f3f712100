#pragma once

#include "bp/vec.hpp"

#include <random>

namespace bp::testing {

inline Vec random_unit(std::mt19937_64& rng, int n)
{
    std::normal_distribution<double> gauss;
    Vec v(static_cast<std::size_t>(n));
    for (double& x : v) x = gauss(rng);
    return normalized(v);
}

inline double relative(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace bp::testing
