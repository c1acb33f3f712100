#pragma once

#include "bp/harmonics.hpp"
#include "bp/kernels.hpp"
#include "bp/quadrature.hpp"

#include <memory>
#include <string>
#include <vector>

namespace bp {

/// Funk-Hecke eigenvalue of the spherical Radon transform on degree m:
/// |S^{n-2}| P_m(0). Zero for odd m.
double funk_lambda(int n, int m);

/// μ with (|x|^{-1} Y_m(x/|x|))^ = μ |ξ|^{1-n} Y_m(ξ/|ξ|) for an even degree-m
/// harmonic Y_m; 0 for odd m by convention.
double ft_multiplier(int n, int m);

/// funk_lambda and ft_multiplier for m = 0, 2, ..., M. Construction checks
/// μ_m π λ_m = (2π)^n to 1e-10 relative and throws accuracy error otherwise.
class MultiplierTable {
public:
    MultiplierTable(int n, int max_degree);
    int dim() const noexcept { return dim_; }
    int max_degree() const noexcept { return max_degree_; }
    /// Indexed by m/2.
    ConstSpan funk() const noexcept { return funk_; }
    ConstSpan fourier() const noexcept { return fourier_; }
    double funk_lambda(int m) const;
    double ft_mu(int m) const;

private:
    int dim_;
    int max_degree_;
    Vec funk_;
    Vec fourier_;
};

double funk_transform_direct(const SphereFunction& f, const SubsphereQuadrature& subquad);

/// Σ_m λ_m Π_m f, evaluable anywhere.
class SpectralFunkTransform {
public:
    SpectralFunkTransform(HarmonicExpansion expansion, MultiplierTable table);
    double operator()(ConstSpan v) const;
    const HarmonicExpansion& expansion() const noexcept { return expansion_; }
    /// Set when the expansion's tail energy exceeds its threshold.
    bool accuracy_warning() const noexcept { return expansion_.tail_flagged(); }

private:
    HarmonicExpansion expansion_;
    MultiplierTable table_;
};

/// eval_resolution 0 samples on a rule of resolution M + 1.
SpectralFunkTransform funk_transform_spectral(const SphereFunction& f, int max_degree, const SphericalQuadrature& quad,
                                              double tail_threshold = 1e-6, int eval_resolution = 0);

enum class PDVerdict { positive_definite, not_positive_definite, inconclusive };
std::string to_string(PDVerdict verdict);

struct PDOptions {
    double tol = 1e-7;
    double tail_threshold = 1e-2;
    /// 0 means max_degree + 1.
    int eval_resolution = 0;
    Exec exec = Exec::parallel;
};

/// Which spherical function the verdict is read from.
enum class PDStatistic {
    raw,       // Σ μ_m Π_m g: exact when g is band-limited
    smoothed,  // Σ c_m μ_m Π_m g, γ₀ convolved with a nonnegative kernel
};
std::string to_string(PDStatistic statistic);

struct PDReport {
    PDVerdict verdict = PDVerdict::inconclusive;
    PDStatistic statistic = PDStatistic::raw;
    int dim = 0;
    int max_degree = 0;
    /// Σ μ_m Π_m g on the evaluation nodes.
    Vec transformed_density;
    std::shared_ptr<const SphericalQuadrature> evaluation;
    /// Minimum of the verdict statistic (grid plus local refinement) and where.
    double min_value = 0.0;
    Vec min_direction;
    /// Minimum of transformed_density over the evaluation nodes.
    double raw_min = 0.0;
    /// max |statistic| over the evaluation nodes.
    double scale = 0.0;
    double tail_energy = 0.0;
    /// Quadrature-defect estimate at the minimizers, relative to scale.
    double tail_margin = 0.0;
    /// Absolute not-PD threshold: (tol + tail_margin) * scale.
    double decision_band = 0.0;
    /// c_m, indexed by m/2 (all ones for the raw statistic).
    Vec smoothing;
    double tol = 0.0;
    double tail_threshold = 0.0;
};

/// Positive-definiteness test of the degree -1 extension of g: the density of
/// the spherical measure γ₀ with (E_{-1} g)^ = E_{1-n} γ₀.
///
/// not_positive_definite: statistic minimum below -(tol + tail_margin) scale.
/// positive_definite: minimum >= -tol scale and tail_energy <= tail_threshold.
/// Everything else is inconclusive.
PDReport pd_test(const SphereFunction& g, int max_degree, const SphericalQuadrature& quad,
                 const PDOptions& options = {});

/// Funk-Hecke coefficients of Z(t)^2 with Z = Σ_{j even, j <= M/2} dim_{n,j} P_j,
/// normalized to c_0 = 1; indexed by m/2 for m = 0..M.
Vec pd_smoothing_coefficients(int n, int max_degree);

/// Largest relative defect over even m <= M of <T Π_m g, f> versus <g, T Π_m f>
/// for the spectral Fourier multiplier T, normalized by |μ_m| ||f|| ||g||.
double parseval_check(const SphereFunction& f, const SphereFunction& g, int max_degree,
                      const SphericalQuadrature& quad);

}  // namespace bp
