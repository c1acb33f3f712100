#pragma once

#include "bp/kernels.hpp"
#include "bp/quadrature.hpp"
#include "bp/vec.hpp"

#include <memory>
#include <span>
#include <vector>

namespace bp {

/// Normalized Gegenbauer polynomial C_m^{(n-2)/2}(t) / C_m^{(n-2)/2}(1) on
/// [-1, 1]; the Funk-Hecke kernel of degree m on S^{n-1}. Value 1 at t = 1.
double gegenbauer_zonal(int n, int m, double t);

/// Writes P_0(t), ..., P_max_degree(t) into out (size max_degree + 1).
void gegenbauer_zonal_all(int n, int max_degree, double t, std::span<double> out);

/// Dimension of the space of degree-m spherical harmonics on S^{n-1}.
/// The closed form is checked against dim(n, m) = dim(n-1, m) + dim(n, m-1)
/// the first time it is called.
double harmonic_dimension(int n, int m);

/// Returns true if closed form and recurrence agree for all 2 <= n <= max_n,
/// 0 <= m <= max_m.
bool harmonic_dimensions_consistent(int max_n, int max_m);

/// One representative per antipodal pair of a rule, with pair coefficients
/// w_j (f_j + f_{-j}). Enough to evaluate every even projection of f.
struct EvenSamples {
    int dim = 0;
    Vec points;  // flat, stride dim
    Vec coeffs;
};

EvenSamples even_samples(const SphereFunction& f, const SphericalQuadrature& quad, Exec exec = Exec::parallel);

/// Σ_k weights[k] (Π_{2k} f)(x) at every row x of points, from pair samples.
Vec weighted_projection_sum(const EvenSamples& samples, ConstSpan points, ConstSpan degree_weights,
                            Exec exec = Exec::parallel);

/// Degree-m projection Π_m f, evaluable anywhere on the sphere. Integration
/// uses the quadrature that built it.
class DegreeProjection {
public:
    DegreeProjection(int m, std::shared_ptr<const SphericalQuadrature> quad, Vec pair_coeffs);
    int degree() const noexcept { return degree_; }
    double operator()(ConstSpan v) const;
    SphereFunction as_function() const;

private:
    int degree_;
    double factor_;
    std::shared_ptr<const SphericalQuadrature> quad_;
    Vec points_;  // half-set nodes, flat
    Vec coeffs_;  // w_j (f_j + f_{-j})
};

DegreeProjection degree_projection(const SphereFunction& f, int m, const SphericalQuadrature& quad);

/// Even-degree projections of a sphere function up to max_degree.
///
/// Projections are integrated with `integration()` and stored sampled on the
/// nodes of `evaluation()`; components_at() evaluates them anywhere.
/// tail_energy = ||f - Σ Π_m f||^2 / ||f||^2 measured on the evaluation rule.
class HarmonicExpansion {
public:
    int dim() const noexcept { return dim_; }
    int max_degree() const noexcept { return max_degree_; }
    const SphericalQuadrature& integration() const noexcept { return *integration_; }
    const SphericalQuadrature& evaluation() const noexcept { return *evaluation_; }
    const EvenSamples& pairs() const noexcept { return pairs_; }

    /// Π_m f on the evaluation nodes; all zeros for odd m.
    ConstSpan component(int m) const;
    /// f sampled on the evaluation nodes.
    ConstSpan samples() const noexcept { return samples_; }
    Vec reconstruction() const;

    double tail_energy() const noexcept { return tail_energy_; }
    bool tail_flagged() const noexcept { return tail_flagged_; }
    double norm_squared() const noexcept { return norm_squared_; }

    /// (Π_0 f)(v), (Π_2 f)(v), ..., (Π_M f)(v).
    Vec components_at(ConstSpan v) const;
    /// Σ_k weights[k] (Π_{2k} f)(v) for every row v of points (flat).
    Vec weighted_sum_at(ConstSpan points, ConstSpan degree_weights, Exec exec = Exec::parallel) const;

private:
    friend HarmonicExpansion expand(const SphereFunction&, int, const SphericalQuadrature&,
                                    const SphericalQuadrature*, double, Exec);

    int dim_ = 0;
    int max_degree_ = 0;
    std::shared_ptr<const SphericalQuadrature> integration_;
    std::shared_ptr<const SphericalQuadrature> evaluation_;
    EvenSamples pairs_;
    Vec degree_factors_;  // dim_{n,m} / |S^{n-1}|
    Vec samples_;
    std::vector<Vec> components_;  // index m/2
    Vec zero_component_;
    double tail_energy_ = 0.0;
    double norm_squared_ = 0.0;
    bool tail_flagged_ = false;
};

/// eval == nullptr samples the projections on the integration nodes.
/// tail_energy above tail_threshold sets tail_flagged (not an error).
HarmonicExpansion expand(const SphereFunction& f, int max_degree, const SphericalQuadrature& quad,
                         const SphericalQuadrature* eval = nullptr, double tail_threshold = 1e-6,
                         Exec exec = Exec::parallel);

/// Resolution check shared by projections: throws accuracy error unless a
/// product rule has resolution >= m + 1.
void require_projection_accuracy(const SphericalQuadrature& quad, int m);

}  // namespace bp
