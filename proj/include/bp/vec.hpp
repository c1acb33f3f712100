#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace bp {

using Vec = std::vector<double>;
using ConstSpan = std::span<const double>;

inline double dot(ConstSpan a, ConstSpan b) noexcept
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(ConstSpan a) noexcept { return std::sqrt(dot(a, a)); }

inline Vec normalized(ConstSpan a)
{
    const double len = norm(a);
    Vec out(a.begin(), a.end());
    for (double& x : out) x /= len;
    return out;
}

inline Vec negated(ConstSpan a)
{
    Vec out(a.begin(), a.end());
    for (double& x : out) x = -x;
    return out;
}

/// Surface area of the unit sphere S^{d-1} in R^d.
inline double sphere_area(int d)
{
    return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

}  // namespace bp
