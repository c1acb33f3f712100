#include "bp/engine.hpp"

#include "bp/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace bp {

Density::Density(std::vector<PowerTerm> terms) : terms_(std::move(terms))
{
    for (const PowerTerm& t : terms_) {
        if (!(t.c >= 0.0) || !std::isfinite(t.c))
            throw Error(ErrorKind::validation, "density coefficients must be finite and nonnegative");
        if (!std::isfinite(t.alpha)) throw Error(ErrorKind::validation, "density exponents must be finite");
    }
}

bool Density::continuous() const noexcept
{
    return std::all_of(terms_.begin(), terms_.end(), [](const PowerTerm& t) { return t.alpha >= 0.0; });
}

double Density::at_radius(double r) const noexcept
{
    double s = 0.0;
    for (const PowerTerm& t : terms_) s += t.alpha == 0.0 ? t.c : t.c * std::pow(r, t.alpha);
    return s;
}

bool operator==(const Density& a, const Density& b) noexcept
{
    const auto& x = a.terms();
    const auto& y = b.terms();
    return std::equal(x.begin(), x.end(), y.begin(), y.end(),
                      [](const PowerTerm& p, const PowerTerm& q) { return p.c == q.c && p.alpha == q.alpha; });
}

RadialProfile RadialProfile::powers(Density d, std::optional<Modulation> modulation)
{
    if (modulation && (!(std::abs(modulation->amp) <= 1.0) || !std::isfinite(modulation->freq)))
        throw Error(ErrorKind::validation, "modulation amplitude must lie in [-1, 1]");
    RadialProfile p;
    p.numerator_ = std::move(d);
    p.modulation_ = modulation;
    return p;
}

RadialProfile RadialProfile::ratio(Density section, Density volume)
{
    RadialProfile p;
    p.ratio_ = true;
    p.numerator_ = std::move(section);
    p.denominator_ = std::move(volume);
    return p;
}

double RadialProfile::operator()(double r) const
{
    if (ratio_) {
        const double den = denominator_.at_radius(r);
        if (den == 0.0) throw Error(ErrorKind::division, "volume density vanishes at r = " + std::to_string(r));
        return numerator_.at_radius(r) / (r * den);
    }
    double v = numerator_.at_radius(r);
    if (modulation_) v *= 1.0 + modulation_->amp * std::sin(modulation_->freq * r);
    return v;
}

std::string to_string(Mode mode) { return mode == Mode::main_theorem ? "main_theorem" : "zvavitch"; }

std::string to_string(Orientation orientation)
{
    return orientation == Orientation::non_increasing ? "non_increasing" : "non_decreasing";
}

QuadratureConfig default_quadrature(int n)
{
    QuadratureConfig q;
    switch (n) {
    case 3: break;
    case 4:
        q.resolution = 14;
        q.section_resolution = 14;
        q.xi_resolution = 6;
        break;
    case 5:
        q.resolution = 12;
        q.section_resolution = 10;
        q.xi_resolution = 4;
        break;
    default:
        q.scheme = QuadratureScheme::monte_carlo;
        q.resolution = 6;
        q.section_resolution = 6;
        q.xi_resolution = 3;
        break;
    }
    return q;
}

namespace {

bool has_negative_exponent(const Density& d) { return !d.continuous(); }

double section_ratio(const Density& section, const Density& volume, double r, const char* which)
{
    const double den = volume.at_radius(r);
    if (den == 0.0) throw Error(ErrorKind::division, std::string(which) + " vanishes at r = " + std::to_string(r));
    return section.at_radius(r) / (r * den);
}

double h_at(Region region, double r, const DensitySet& d)
{
    return region == Region::K_minus_L ? section_ratio(d.f_section, d.f_volume, r, "f_volume")
                                       : section_ratio(d.g_section, d.g_volume, r, "g_volume");
}

DensitySet densities_of(const Scenario& s) { return {s.f_section, s.f_volume, s.g_section, s.g_volume}; }

template <class Fn>
auto staged(const char* stage, Fn&& fn)
{
    try {
        return fn();
    } catch (const Error& e) {
        throw Error(e.kind(), std::string("[") + stage + "] " + e.what());
    }
}

double ray_integral(Region region, const Density& density, int power, ConstSpan v, const StarBody& K,
                    const StarBody& L, const RadialRule& radial)
{
    const auto seg = segment_from_radii(K.radial(v), L.radial(v));
    if (!seg || seg->region != region) return 0.0;
    return radial.integrate([&](double r) { return std::pow(r, power) * density.at_radius(r); }, seg->lo, seg->hi);
}

}  // namespace

void validate(const Scenario& s)
{
    if (s.dim < 3) throw Error(ErrorKind::unsupported_dimension, "scenario dimension must be >= 3");
    if (s.K.dim() != s.dim || s.L.dim() != s.dim)
        throw Error(ErrorKind::validation, "bodies K and L must have the scenario dimension");
    if (s.truncation_degree < 0 || s.truncation_degree % 2 != 0)
        throw Error(ErrorKind::validation, "truncation_degree must be even and nonnegative");
    const QuadratureConfig& q = s.quadrature;
    if (q.resolution < 4) throw Error(ErrorKind::validation, "quadrature.resolution must be >= 4");
    if (q.scheme == QuadratureScheme::product_gauss && q.resolution < s.truncation_degree + 1)
        throw Error(ErrorKind::validation, "quadrature.resolution must be >= truncation_degree + 1");
    if (q.radial_order < 1) throw Error(ErrorKind::validation, "quadrature.radial_order must be >= 1");
    if (q.section_resolution < 4 || q.xi_resolution < 1 || q.eval_resolution < 0)
        throw Error(ErrorKind::validation, "quadrature section/xi/eval resolutions out of range");
    if (!(s.pd_tol > 0.0) || !(s.pd_tail_threshold > 0.0))
        throw Error(ErrorKind::validation, "pd tolerances must be positive");
    const Tolerances& t = s.tolerances;
    if (!(t.hypothesis >= 0.0) || !(t.conclusion >= 0.0) || !(t.decomposition >= 0.0))
        throw Error(ErrorKind::validation, "tolerances must be nonnegative");
    if (s.mode == Mode::zvavitch && !(s.f_section == s.g_section && s.f_volume == s.g_volume))
        throw Error(ErrorKind::validation, "zvavitch mode requires identical f and g densities");

    const bool singular = has_negative_exponent(s.f_section) || has_negative_exponent(s.f_volume) ||
                          has_negative_exponent(s.g_section) || has_negative_exponent(s.g_volume);
    if (singular) {
        // Negative exponents are only integrable away from the origin.
        const SphericalQuadrature probe = build_sphere_quadrature(s.dim, 6);
        for (std::size_t i = 0; i < probe.size(); ++i) {
            const double low = std::min(s.K.radial(probe.node(i)), s.L.radial(probe.node(i)));
            if (low < 1e-6)
                throw Error(ErrorKind::validation,
                            "a body comes within 1e-6 of the origin while a density has a negative exponent");
        }
    }
}

MonotonePair effective_pair(const Scenario& s)
{
    if (s.mode == Mode::main_theorem) return s.decomposition;
    const RadialProfile h = RadialProfile::ratio(s.f_section, s.f_volume);
    if (s.orientation == Orientation::non_increasing) return {RadialProfile::zero(), h};
    return {h, RadialProfile::zero()};
}

double section_measure(Region region, const Density& density, const StarBody& K, const StarBody& L,
                       const SubsphereQuadrature& subquad, const RadialRule& radial, Exec exec)
{
    const int power = subquad.dim() - 2;
    return integrate_subsphere(
        [&](ConstSpan w) { return ray_integral(region, density, power, w, K, L, radial); }, subquad, exec);
}

double region_measure(Region region, const Density& density, const StarBody& K, const StarBody& L,
                      const SphericalQuadrature& quad, const RadialRule& radial, Exec exec)
{
    if (K.dim() != L.dim() || quad.dim() != K.dim())
        throw Error(ErrorKind::dimension_mismatch, "region_measure dimensions differ");
    const int power = quad.dim() - 1;
    return integrate_sphere([&](ConstSpan v) { return ray_integral(region, density, power, v, K, L, radial); }, quad,
                            exec);
}

double h_eval(ConstSpan x, const StarBody& K, const StarBody& L, const DensitySet& densities)
{
    const double r = norm(x);
    if (!(r > 0.0)) throw Error(ErrorKind::domain, "h is undefined at the origin");
    const Vec v = normalized(x);
    const auto seg = segment_from_radii(K.radial(ConstSpan(v)), L.radial(ConstSpan(v)));
    if (!seg || !(r > seg->lo && r <= seg->hi)) throw Error(ErrorKind::domain, "point lies outside K Δ L");
    return h_at(seg->region, r, densities);
}

std::string to_string(DecompositionViolation::Kind kind)
{
    switch (kind) {
    case DecompositionViolation::Kind::a_decreasing: return "a_decreasing";
    case DecompositionViolation::Kind::b_increasing: return "b_increasing";
    case DecompositionViolation::Kind::negative: return "negative";
    case DecompositionViolation::Kind::sum_defect: return "sum_defect";
    }
    return "unknown";
}

DecompositionCheck check_decomposition(const MonotonePair& pair, const StarBody& K, const StarBody& L,
                                       const DensitySet& densities, const SphericalQuadrature& rays, int r_samples,
                                       double tolerance)
{
    if (r_samples < 2) throw Error(ErrorKind::domain, "check_decomposition needs at least two radii per ray");
    constexpr std::size_t kMaxRecorded = 20;
    DecompositionCheck check;
    auto record = [&](DecompositionViolation::Kind kind, ConstSpan v, double r, double magnitude) {
        ++check.violation_count;
        if (check.violations.size() < kMaxRecorded)
            check.violations.push_back({kind, Vec(v.begin(), v.end()), r, magnitude});
    };
    Vec a(static_cast<std::size_t>(r_samples)), b(a.size());
    for (std::size_t idx : rays.half_indices()) {
        const ConstSpan v = rays.node(idx);
        const auto seg = segment_from_radii(K.radial(v), L.radial(v));
        if (!seg) continue;
        ++check.rays;
        for (int i = 0; i < r_samples; ++i) {
            const double r = seg->lo + (seg->hi - seg->lo) * i / (r_samples - 1);
            const auto k = static_cast<std::size_t>(i);
            a[k] = pair.a(r);
            b[k] = pair.b(r);
            const double h = h_at(seg->region, r, densities);
            ++check.samples;
            const double scale = std::max({std::abs(a[k]), std::abs(b[k]), std::abs(h)});
            if (a[k] < -tolerance * scale || b[k] < -tolerance * scale)
                record(DecompositionViolation::Kind::negative, v, r, -std::min(a[k], b[k]));
            const double defect = std::abs(a[k] + b[k] - h) / (std::abs(h) > 0.0 ? std::abs(h) : 1.0);
            check.max_sum_defect = std::max(check.max_sum_defect, defect);
            if (defect > tolerance) record(DecompositionViolation::Kind::sum_defect, v, r, defect);
            if (i == 0) continue;
            const double da = a[k] - a[k - 1];
            const double db = b[k] - b[k - 1];
            if (da < -tolerance * std::max(std::abs(a[k]), std::abs(a[k - 1])))
                record(DecompositionViolation::Kind::a_decreasing, v, r, -da);
            if (db > tolerance * std::max(std::abs(b[k]), std::abs(b[k - 1])))
                record(DecompositionViolation::Kind::b_increasing, v, r, db);
        }
    }
    check.ok = check.violation_count == 0;
    return check;
}

SphereFunction F_on_sphere(const MonotonePair& pair, const StarBody& K, const StarBody& L)
{
    return [pair, K, L](ConstSpan v) {
        const double den = pair.a(K.radial(v)) + pair.b(L.radial(v));
        if (!(den > 0.0) || !std::isfinite(den))
            throw Error(ErrorKind::degenerate_scenario, "a(ρ_K v) + b(ρ_L v) is not positive on the sphere");
        return 1.0 / den;
    };
}

HypothesisResult verify_hypothesis(const Scenario& s, ConstSpan xi, Exec exec)
{
    const int n = s.dim;
    const auto dim = static_cast<std::size_t>(n);
    HypothesisResult out;
    if (xi.empty()) {
        const SphericalQuadrature grid =
            build_sphere_quadrature(n, s.quadrature.xi_resolution, s.quadrature.scheme, s.quadrature.seed);
        for (std::size_t i : grid.half_indices()) {
            const ConstSpan x = grid.node(i);
            out.xi.insert(out.xi.end(), x.begin(), x.end());
        }
    } else {
        if (xi.size() % dim != 0) throw Error(ErrorKind::dimension_mismatch, "ξ list length is not a multiple of n");
        out.xi.assign(xi.begin(), xi.end());
    }
    const std::size_t count = out.xi.size() / dim;
    const SphericalQuadrature inner = build_sphere_rule_any_dim(n - 1, s.quadrature.section_resolution);
    const RadialRule radial(s.quadrature.radial_order);
    out.k_side.assign(count, 0.0);
    out.l_side.assign(count, 0.0);

    auto body = [&](std::size_t i) {
        const Direction d = Direction::from_vector(ConstSpan(out.xi.data() + i * dim, dim));
        const SubsphereQuadrature sub = build_subsphere_quadrature(d.coords(), inner);
        out.k_side[i] = section_measure(Region::K_minus_L, s.f_section, s.K, s.L, sub, radial, Exec::serial);
        out.l_side[i] = section_measure(Region::L_minus_K, s.g_section, s.K, s.L, sub, radial, Exec::serial);
    };
    const auto total = static_cast<long long>(count);
    if (exec == Exec::serial) {
        for (long long i = 0; i < total; ++i) body(static_cast<std::size_t>(i));
    } else {
        // Errors cannot leave an OpenMP region; keep the first one per index order.
        std::vector<std::string> errors(count);
        std::vector<int> kinds(count, -1);
        const int workers = worker_count();
#pragma omp parallel for schedule(dynamic, 4) num_threads(workers)
        for (long long i = 0; i < total; ++i) {
            try {
                body(static_cast<std::size_t>(i));
            } catch (const Error& e) {
                errors[static_cast<std::size_t>(i)] = e.what();
                kinds[static_cast<std::size_t>(i)] = static_cast<int>(e.kind());
            }
        }
        for (std::size_t i = 0; i < count; ++i)
            if (kinds[i] >= 0) throw Error(static_cast<ErrorKind>(kinds[i]), errors[i]);
    }

    out.margins.resize(count);
    out.min_margin = count ? std::numeric_limits<double>::infinity() : 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        out.margins[i] = out.k_side[i] - out.l_side[i];
        out.min_margin = std::min(out.min_margin, out.margins[i]);
        out.scale = std::max({out.scale, out.k_side[i], out.l_side[i]});
    }
    out.ok = out.min_margin >= -s.tolerances.hypothesis * out.scale;
    return out;
}

ConclusionResult verify_conclusion(const Scenario& s, Exec exec)
{
    const SphericalQuadrature quad =
        build_sphere_quadrature(s.dim, s.quadrature.resolution, s.quadrature.scheme, s.quadrature.seed);
    const RadialRule radial(s.quadrature.radial_order);
    ConclusionResult c;
    c.lhs = region_measure(Region::L_minus_K, s.g_volume, s.K, s.L, quad, radial, exec);
    c.rhs = region_measure(Region::K_minus_L, s.f_volume, s.K, s.L, quad, radial, exec);
    c.scale = std::max(c.lhs, c.rhs);
    c.ok = c.lhs <= c.rhs + s.tolerances.conclusion * c.scale;
    return c;
}

EndpointCheck check_endpoint_bound(const MonotonePair& pair, const StarBody& K, const StarBody& L,
                                   std::size_t samples, std::uint64_t seed)
{
    EndpointCheck check;
    const auto n = static_cast<std::size_t>(K.dim());
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unit;
    Vec v(n);
    // Bounded attempts: a nearly vacuous scenario has few rays with segments.
    for (std::size_t attempt = 0; attempt < 20 * samples && check.samples < samples; ++attempt) {
        double len = 0.0;
        while (!(len > 1e-12)) {
            for (double& x : v) x = gauss(rng);
            len = norm(v);
        }
        for (double& x : v) x /= len;
        const double rho_k = K.radial(ConstSpan(v));
        const double rho_l = L.radial(ConstSpan(v));
        const auto seg = segment_from_radii(rho_k, rho_l);
        if (!seg) continue;
        const double r = seg->lo + (seg->hi - seg->lo) * unit(rng);
        const double inner = pair.a(r) + pair.b(r);
        const double bound = pair.a(rho_k) + pair.b(rho_l);
        const double slack = 1e-12 * std::max(std::abs(inner), std::abs(bound));
        const double excess = seg->region == Region::K_minus_L ? inner - bound : bound - inner;
        ++check.samples;
        ++(seg->region == Region::K_minus_L ? check.k_side : check.l_side);
        if (excess > slack) {
            ++check.violations;
            check.worst = std::max(check.worst, excess);
        }
    }
    return check;
}

Vec q_profile(const StarBody& K, const StarBody& L, const Density& f, const Density& g, ConstSpan points,
              const RadialRule& radial)
{
    if (!f.continuous() || !g.continuous())
        throw Error(ErrorKind::continuity_requirement, "q_profile needs continuous densities (exponents >= 0)");
    const auto n = static_cast<std::size_t>(K.dim());
    if (points.size() % n != 0) throw Error(ErrorKind::dimension_mismatch, "q_profile point list");
    Vec out(points.size() / n);
    map_indices(Exec::parallel, out, [&](std::size_t i) {
        const ConstSpan v(points.data() + i * n, n);
        const auto seg = segment_from_radii(K.radial(v), L.radial(v));
        if (!seg) return 0.0;
        if (seg->region == Region::K_minus_L)
            return radial.integrate([&](double r) { return f.at_radius(r); }, seg->lo, seg->hi);
        return -radial.integrate([&](double r) { return g.at_radius(r); }, seg->lo, seg->hi);
    });
    return out;
}

int exit_code_for(const std::string& verdict)
{
    if (verdict == kVerdictVerified || verdict == kVerdictVacuous) return 0;
    if (verdict == kVerdictInconclusive) return 2;
    if (verdict == kVerdictDecomposition || verdict == kVerdictNotPD || verdict == kVerdictSections) return 3;
    if (verdict == kVerdictViolated) return 4;
    return 1;
}

VerificationReport run_scenario(const Scenario& s, Exec exec)
{
    staged("validate", [&] {
        validate(s);
        return 0;
    });
    VerificationReport report;
    report.scenario = s;
    const QuadratureConfig& q = s.quadrature;
    const SphericalQuadrature quad = staged(
        "quadrature", [&] { return build_sphere_quadrature(s.dim, q.resolution, q.scheme, q.seed); });
    const DensitySet densities = densities_of(s);
    const MonotonePair pair = effective_pair(s);

    report.vacuous = true;
    for (std::size_t i = 0; i < quad.size() && report.vacuous; ++i)
        if (segment_from_radii(s.K.radial(quad.node(i)), s.L.radial(quad.node(i)))) report.vacuous = false;

    report.decomposition = staged("decomposition", [&] {
        return check_decomposition(pair, s.K, s.L, densities, quad, 33, s.tolerances.decomposition);
    });
    report.hypothesis = staged("hypothesis", [&] { return verify_hypothesis(s, {}, exec); });
    report.conclusion = staged("conclusion", [&] { return verify_conclusion(s, exec); });
    report.endpoint = staged("endpoint", [&] { return check_endpoint_bound(pair, s.K, s.L, 10000, q.seed); });

    if (report.vacuous) {
        report.verdict = kVerdictVacuous;
    } else {
        report.pd = staged("pd", [&] {
            PDOptions opts;
            opts.tol = s.pd_tol;
            opts.tail_threshold = s.pd_tail_threshold;
            opts.eval_resolution = q.eval_resolution;
            opts.exec = exec;
            return pd_test(F_on_sphere(pair, s.K, s.L), s.truncation_degree, quad, opts);
        });
        if (!report.decomposition.ok)
            report.verdict = kVerdictDecomposition;
        else if (report.pd.verdict == PDVerdict::not_positive_definite)
            report.verdict = kVerdictNotPD;
        else if (!report.hypothesis.ok)
            report.verdict = kVerdictSections;
        else if (report.pd.verdict == PDVerdict::inconclusive)
            report.verdict = kVerdictInconclusive;
        else
            report.verdict = report.conclusion.ok ? kVerdictVerified : kVerdictViolated;
    }
    report.exit_code = exit_code_for(report.verdict);
    return report;
}

}  // namespace bp
