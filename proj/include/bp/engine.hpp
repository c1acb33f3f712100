#pragma once

#include "bp/geometry.hpp"
#include "bp/kernels.hpp"
#include "bp/quadrature.hpp"
#include "bp/transforms.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bp {

struct PowerTerm {
    double c = 1.0;
    double alpha = 0.0;
};

/// f(x) = Σ c |x|^α with c >= 0.
class Density {
public:
    Density() = default;
    explicit Density(std::vector<PowerTerm> terms);
    static Density constant(double c = 1.0) { return Density({{c, 0.0}}); }
    static Density power(double alpha, double c = 1.0) { return Density({{c, alpha}}); }

    const std::vector<PowerTerm>& terms() const noexcept { return terms_; }
    /// True iff every exponent is >= 0.
    bool continuous() const noexcept;
    double at_radius(double r) const noexcept;
    double operator()(ConstSpan x) const noexcept { return at_radius(norm(x)); }

private:
    std::vector<PowerTerm> terms_;
};

bool operator==(const Density& a, const Density& b) noexcept;

/// Optional multiplicative factor 1 + amp sin(freq r) on a radial profile.
struct Modulation {
    double amp = 0.0;
    double freq = 0.0;
};

/// Radial function r -> value used for a or b. Either a power sum (with an
/// optional modulation) or the ratio s(r) / (r v(r)) of two densities.
class RadialProfile {
public:
    RadialProfile() = default;
    static RadialProfile powers(Density d, std::optional<Modulation> modulation = std::nullopt);
    static RadialProfile ratio(Density section, Density volume);
    static RadialProfile zero() { return powers(Density()); }

    double operator()(double r) const;
    bool is_ratio() const noexcept { return ratio_; }
    const Density& density() const noexcept { return numerator_; }
    const Density& volume() const noexcept { return denominator_; }
    const std::optional<Modulation>& modulation() const noexcept { return modulation_; }

private:
    bool ratio_ = false;
    Density numerator_;
    Density denominator_;
    std::optional<Modulation> modulation_;
};

/// h = a + b on K Δ L with a radially non-decreasing and b non-increasing.
struct MonotonePair {
    RadialProfile a;
    RadialProfile b;
};

enum class Mode { main_theorem, zvavitch };
/// zvavitch mode: which half of the pair carries h.
///   non_increasing: a = 0, b = h; non_decreasing: a = h, b = 0.
enum class Orientation { non_increasing, non_decreasing };

std::string to_string(Mode mode);
std::string to_string(Orientation orientation);

struct QuadratureConfig {
    QuadratureScheme scheme = QuadratureScheme::product_gauss;
    /// Sphere rule for volumes, rays and the PD expansion.
    int resolution = 24;
    std::uint64_t seed = 0;
    int radial_order = 16;
    /// Evaluation rule of the PD test (0 means truncation_degree + 1).
    int eval_resolution = 0;
    /// Inner rule on each subsphere ξ^⊥.
    int section_resolution = 24;
    /// Rule whose half node set is the ξ grid of the section hypothesis.
    int xi_resolution = 12;
};

/// Defaults used when a scenario leaves a field out; grow cheaper with n.
QuadratureConfig default_quadrature(int n);

struct Tolerances {
    double hypothesis = 1e-7;
    double conclusion = 1e-7;
    double decomposition = 1e-10;
};

struct Scenario {
    std::string name = "scenario";
    int dim = 3;
    Mode mode = Mode::main_theorem;
    Orientation orientation = Orientation::non_increasing;
    StarBody K = StarBody::ball(3, 1.0);
    StarBody L = StarBody::ball(3, 1.0);
    Density f_section = Density::constant();
    Density f_volume = Density::constant();
    Density g_section = Density::constant();
    Density g_volume = Density::constant();
    MonotonePair decomposition;
    QuadratureConfig quadrature;
    int truncation_degree = 8;
    double pd_tol = 1e-7;
    double pd_tail_threshold = 1e-2;
    Tolerances tolerances;
};

/// Throws validation error on inconsistent dimensions, f != g in zvavitch
/// mode, odd truncation, or bad quadrature settings.
void validate(const Scenario& s);

/// The pair actually checked: the scenario's in main mode, h on one side in
/// zvavitch mode.
MonotonePair effective_pair(const Scenario& s);

/// The subsphere rule fixes ξ.
double section_measure(Region region, const Density& density, const StarBody& K, const StarBody& L,
                       const SubsphereQuadrature& subquad, const RadialRule& radial, Exec exec = Exec::parallel);

double region_measure(Region region, const Density& density, const StarBody& K, const StarBody& L,
                      const SphericalQuadrature& quad, const RadialRule& radial, Exec exec = Exec::parallel);

struct DensitySet {
    Density f_section, f_volume, g_section, g_volume;
};

/// h(x) = (1/|x|) f_section/f_volume on K∖L and g_section/g_volume on L∖K.
double h_eval(ConstSpan x, const StarBody& K, const StarBody& L, const DensitySet& densities);

struct DecompositionViolation {
    enum class Kind { a_decreasing, b_increasing, negative, sum_defect };
    Kind kind;
    Vec direction;
    double r = 0.0;
    double magnitude = 0.0;
};
std::string to_string(DecompositionViolation::Kind kind);

struct DecompositionCheck {
    bool ok = true;
    std::size_t rays = 0;
    std::size_t samples = 0;
    std::size_t violation_count = 0;
    double max_sum_defect = 0.0;
    /// First violations found (capped).
    std::vector<DecompositionViolation> violations;
};

/// Samples every ray of `rays` carrying a segment at r_samples equally spaced
/// radii (endpoints included).
DecompositionCheck check_decomposition(const MonotonePair& pair, const StarBody& K, const StarBody& L,
                                       const DensitySet& densities, const SphericalQuadrature& rays, int r_samples,
                                       double tolerance);

/// G(v) = (a(ρ_K(v)) + b(ρ_L(v)))^{-1}; throws degenerate-scenario error if
/// the denominator is not positive.
SphereFunction F_on_sphere(const MonotonePair& pair, const StarBody& K, const StarBody& L);

struct HypothesisResult {
    Vec xi;  // flat, stride n
    Vec margins;
    Vec k_side;  // μ_{n-1}((K∖L) ∩ ξ^⊥)
    Vec l_side;  // ν_{n-1}((L∖K) ∩ ξ^⊥)
    double min_margin = 0.0;
    double scale = 0.0;
    bool ok = true;
};

/// xi: flat list of unit vectors (empty: half nodes of the scenario ξ grid).
HypothesisResult verify_hypothesis(const Scenario& s, ConstSpan xi = {}, Exec exec = Exec::parallel);

struct ConclusionResult {
    double lhs = 0.0;  // ν_n(L∖K)
    double rhs = 0.0;  // μ_n(K∖L)
    double scale = 0.0;
    bool ok = true;
};

ConclusionResult verify_conclusion(const Scenario& s, Exec exec = Exec::parallel);

struct EndpointCheck {
    std::size_t samples = 0;
    std::size_t k_side = 0;
    std::size_t l_side = 0;
    std::size_t violations = 0;
    double worst = 0.0;
};

/// a(rv)+b(rv) <= a(ρ_K v)+b(ρ_L v) on K∖L and >= on L∖K, at `samples`
/// random points of K Δ L.
EndpointCheck check_endpoint_bound(const MonotonePair& pair, const StarBody& K, const StarBody& L,
                                   std::size_t samples, std::uint64_t seed);

/// Q(v) = ∫_{ρ_L(v)}^{ρ_K(v)} q(rv) dr with q = f on K∖L, g on L∖K (signed).
/// points: flat unit vectors. Discontinuous densities are rejected.
Vec q_profile(const StarBody& K, const StarBody& L, const Density& f, const Density& g, ConstSpan points,
              const RadialRule& radial);

struct VerificationReport {
    Scenario scenario;
    HypothesisResult hypothesis;
    PDReport pd;
    DecompositionCheck decomposition;
    ConclusionResult conclusion;
    EndpointCheck endpoint;
    bool vacuous = false;
    std::string verdict;
    int exit_code = 0;
};

inline const char* kVerdictVerified = "theorem instance verified";
inline const char* kVerdictVacuous = "vacuous";
inline const char* kVerdictViolated = "implication violated (investigate)";
inline const char* kVerdictInconclusive = "pd inconclusive";
inline const char* kVerdictDecomposition = "decomposition hypothesis not met";
inline const char* kVerdictNotPD = "positive-definiteness hypothesis not met";
inline const char* kVerdictSections = "section hypothesis not met";

/// Exit code for a verdict string: 0 verified/vacuous, 2 inconclusive,
/// 3 a hypothesis fails, 4 violated.
int exit_code_for(const std::string& verdict);

/// Errors from a stage are rethrown with the stage name prepended.
VerificationReport run_scenario(const Scenario& s, Exec exec = Exec::parallel);

}  // namespace bp
