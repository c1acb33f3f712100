#pragma once

#include "bp/quadrature.hpp"
#include "bp/vec.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace bp {

/// Unit vector in R^n, n >= 3.
class Direction {
public:
    /// Throws domain error unless |coords| = 1 within 1e-12.
    explicit Direction(Vec coords);
    /// Normalizes a nonzero vector.
    static Direction from_vector(ConstSpan x);

    int dim() const noexcept { return static_cast<int>(coords_.size()); }
    ConstSpan coords() const noexcept { return coords_; }
    operator ConstSpan() const noexcept { return coords_; }
    double operator[](std::size_t i) const noexcept { return coords_[i]; }
    Direction operator-() const;

private:
    Vec coords_;
};

enum class BodyKind { ball, ellipsoid, lp_ball, perturbed_ball, tabulated, scaled, derived };

std::string to_string(BodyKind kind);

/// R * P_degree(<v, axis>) contribution of a perturbed ball.
struct ZonalTerm {
    int degree = 2;
    double eps = 0.0;
    Vec axis;
};

/// Radial values on a structured hyperspherical grid: shape holds n-2 polar
/// counts (nodes at θ = π i/(N-1), poles included) followed by the azimuth
/// count (φ = 2π j/N, periodic). values is row-major in that order.
struct TabulatedGrid {
    std::vector<int> shape;
    Vec values;
};

class StarBody;

/// Everything needed to rebuild a body (serialization, reports).
struct BodyDescription {
    BodyKind kind = BodyKind::ball;
    int dim = 3;
    double r = 1.0;
    double p = 2.0;  // lp_ball; +inf for the cube
    double factor = 1.0;
    Vec semiaxes;
    std::vector<ZonalTerm> terms;
    TabulatedGrid grid;
    std::vector<StarBody> children;  // scaled: base; derived: generator M
    int resolution = 0;              // derived: subsphere resolution
};

namespace detail {
class RadialModel;
}

/// Origin-symmetric star body given by its radial function. Immutable; copies
/// share the underlying model.
class StarBody {
public:
    static StarBody ball(int n, double r);
    static StarBody ellipsoid(Vec semiaxes);
    /// p may be std::numeric_limits<double>::infinity() (cube of half-width r).
    static StarBody lp_ball(int n, double p, double r);
    /// ρ(v) = r (1 + Σ eps_j P_{m_j}(<v, u_j>)), even m_j; positivity is
    /// checked by a grid scan.
    static StarBody perturbed_ball(int n, double r, std::vector<ZonalTerm> terms);
    static StarBody tabulated(int n, TabulatedGrid grid);
    static StarBody scaled(const StarBody& base, double factor);

    int dim() const noexcept;
    BodyKind kind() const noexcept;
    const BodyDescription& description() const noexcept;

    /// Unchecked hot path: v must be a unit vector of length dim().
    double radial(ConstSpan v) const;
    /// Checked evaluation.
    double radial(const Direction& v) const;

private:
    friend StarBody derived_body_example31(const StarBody&, const SphericalQuadrature&);
    explicit StarBody(std::shared_ptr<const detail::RadialModel> model);
    std::shared_ptr<const detail::RadialModel> model_;
};

double radial_eval(const StarBody& body, const Direction& v);

/// ‖x‖_body = |x| / ρ(x/|x|).
double minkowski_functional(const StarBody& body, ConstSpan x);

enum class Region { K_minus_L, L_minus_K };
std::string to_string(Region region);

struct RaySegment {
    Vec direction;
    double lo = 0.0;
    double hi = 0.0;
    Region region = Region::K_minus_L;
};

/// Default degeneracy tolerance factor: segments with
/// |ρ_K - ρ_L| <= 1e-12 max(ρ_K, ρ_L) are treated as empty.
inline constexpr double kDegeneracyTolerance = 1e-12;

/// Ray-wise piece of K Δ L from the two radial values.
struct SegmentBounds {
    double lo = 0.0;
    double hi = 0.0;
    Region region = Region::K_minus_L;
};
std::optional<SegmentBounds> segment_from_radii(double rho_k, double rho_l,
                                                double tolerance = kDegeneracyTolerance) noexcept;

std::optional<RaySegment> symmetric_difference_ray(const StarBody& K, const StarBody& L, const Direction& v);

/// Body with ρ_K(v) = ((1/(n+1)) R(ρ_M^{n+1})(v))^{-1}, i.e. ρ_K(v)^{-1} is the
/// integral of |x|^2 over M ∩ v^⊥. The Funk transform uses subsphere rules at
/// quad.resolution(); throws accuracy error if a coarser rule disagrees by
/// more than 1e-8 relative at probe directions.
StarBody derived_body_example31(const StarBody& M, const SphericalQuadrature& quad);

}  // namespace bp
