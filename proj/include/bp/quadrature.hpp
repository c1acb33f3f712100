#pragma once

#include "bp/kernels.hpp"
#include "bp/vec.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace bp {

using SphereFunction = std::function<double(ConstSpan)>;

enum class QuadratureScheme { product_gauss, monte_carlo };

std::string to_string(QuadratureScheme scheme);
QuadratureScheme quadrature_scheme_from_string(const std::string& name);

/// Nodes and weights of the N-point Gauss rule on [-1, 1] for the weight
/// (1 - t^2)^exponent, exponent > -1. exponent = 0 is Gauss-Legendre.
struct GaussRule {
    Vec nodes;
    Vec weights;
};
GaussRule gauss_gegenbauer(int points, double exponent);

/// Antipodally symmetric node/weight set on S^{dim-1}.
///
/// Nodes are stored flat with stride dim. antipode(i) is the index of -node(i);
/// half_indices() lists one representative of each antipodal pair, which the
/// pair kernels use to halve their work on even integrands.
class SphericalQuadrature {
public:
    int dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return weights_.size(); }
    QuadratureScheme scheme() const noexcept { return scheme_; }
    int resolution() const noexcept { return resolution_; }
    std::uint64_t seed() const noexcept { return seed_; }

    ConstSpan node(std::size_t i) const noexcept
    {
        return {nodes_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
    }
    double weight(std::size_t i) const noexcept { return weights_[i]; }
    std::size_t antipode(std::size_t i) const noexcept { return antipode_[i]; }

    ConstSpan flat_nodes() const noexcept { return nodes_; }
    ConstSpan weights() const noexcept { return weights_; }
    std::span<const std::size_t> half_indices() const noexcept { return half_; }

    /// Highest total polynomial degree integrated exactly (product scheme),
    /// or -1 for Monte Carlo.
    int exact_degree() const noexcept;

    double total_weight() const;

private:
    friend SphericalQuadrature build_sphere_quadrature(int, int, QuadratureScheme, std::uint64_t);
    friend SphericalQuadrature build_sphere_rule_any_dim(int, int);

    int dim_ = 0;
    int resolution_ = 0;
    std::uint64_t seed_ = 0;
    QuadratureScheme scheme_ = QuadratureScheme::product_gauss;
    Vec nodes_;
    Vec weights_;
    std::vector<std::size_t> antipode_;
    std::vector<std::size_t> half_;
};

/// resolution = Gauss points per polar angle; the azimuth gets 2*resolution
/// trapezoid points. The Monte-Carlo scheme draws resolution^(n-1) antipodal
/// pairs with equal weights.
SphericalQuadrature build_sphere_quadrature(int n, int resolution,
                                            QuadratureScheme scheme = QuadratureScheme::product_gauss,
                                            std::uint64_t seed = 0);

/// Product rule in any dimension d >= 2 (d = 2 is the circle); used for the
/// subsphere rules, where n - 1 may be 2.
SphericalQuadrature build_sphere_rule_any_dim(int d, int resolution);

/// Great-subsphere rule S^{n-1} ∩ axis^⊥, obtained by mapping a rule on
/// S^{n-2} through the Householder reflection that sends e_n to axis.
class SubsphereQuadrature {
public:
    int dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return weights_.size(); }
    ConstSpan axis() const noexcept { return axis_; }
    /// Orthonormal basis of axis^⊥, n-1 vectors of length n, stored flat.
    ConstSpan basis_vector(std::size_t k) const noexcept
    {
        return {basis_.data() + k * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
    }
    ConstSpan node(std::size_t i) const noexcept
    {
        return {nodes_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
    }
    double weight(std::size_t i) const noexcept { return weights_[i]; }
    ConstSpan weights() const noexcept { return weights_; }
    const SphericalQuadrature& inner() const noexcept { return inner_; }

private:
    friend SubsphereQuadrature build_subsphere_quadrature(ConstSpan, int);
    friend SubsphereQuadrature build_subsphere_quadrature(ConstSpan, const SphericalQuadrature&);

    int dim_ = 0;
    Vec axis_;
    Vec basis_;
    Vec nodes_;
    Vec weights_;
    SphericalQuadrature inner_;
};

SubsphereQuadrature build_subsphere_quadrature(ConstSpan axis, int resolution);
/// Reuses a prebuilt rule on S^{n-2} (must have dim == axis.size() - 1).
SubsphereQuadrature build_subsphere_quadrature(ConstSpan axis, const SphericalQuadrature& inner);

/// Gauss-Legendre rule of the given order, mapped affinely onto [lo, hi].
class RadialRule {
public:
    explicit RadialRule(int order);
    int order() const noexcept { return static_cast<int>(reference_.nodes.size()); }
    ConstSpan reference_nodes() const noexcept { return reference_.nodes; }
    ConstSpan reference_weights() const noexcept { return reference_.weights; }

    template <class F>
    double integrate(F&& g, double lo, double hi) const
    {
        const double half = 0.5 * (hi - lo);
        const double mid = 0.5 * (hi + lo);
        double s = 0.0;
        for (std::size_t i = 0; i < reference_.nodes.size(); ++i)
            s += reference_.weights[i] * g(mid + half * reference_.nodes[i]);
        return s * half;
    }

private:
    GaussRule reference_;
};

/// Fixed-order pairwise (tree) summation.
double pairwise_sum(ConstSpan values) noexcept;

/// Integrand values are computed with `exec`; the reduction order is fixed.
double integrate_sphere(const SphereFunction& f, const SphericalQuadrature& quad, Exec exec = Exec::parallel);
double integrate_subsphere(const SphereFunction& f, const SubsphereQuadrature& quad, Exec exec = Exec::parallel);
double integrate_radial(const std::function<double(double)>& g, double lo, double hi,
                        const RadialRule& rule);

}  // namespace bp
