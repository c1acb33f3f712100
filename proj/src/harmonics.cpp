#include "bp/harmonics.hpp"

#include "bp/error.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

namespace bp {

namespace {

double binomial(int a, int b)
{
    if (b < 0 || a < b) return 0.0;
    b = std::min(b, a - b);
    double r = 1.0;
    for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return std::round(r);
}

double dimension_closed_form(int n, int m)
{
    if (m == 0) return 1.0;
    return binomial(m + n - 1, n - 1) - binomial(m + n - 3, n - 1);
}

void check_dimension_table_once()
{
    static std::once_flag flag;
    std::call_once(flag, [] {
        if (!harmonic_dimensions_consistent(12, 40))
            throw Error(ErrorKind::accuracy, "harmonic dimension closed form disagrees with its recurrence");
    });
}

}  // namespace

double gegenbauer_zonal(int n, int m, double t)
{
    if (n < 3) throw Error(ErrorKind::unsupported_dimension, "gegenbauer_zonal needs n >= 3");
    if (m < 0) throw Error(ErrorKind::domain, "gegenbauer_zonal needs m >= 0");
    if (!(std::abs(t) <= 1.0 + 1e-12)) throw Error(ErrorKind::domain, "gegenbauer_zonal needs |t| <= 1");
    t = std::clamp(t, -1.0, 1.0);
    if (m == 0) return 1.0;
    double prev = 1.0;
    double cur = t;
    for (int k = 1; k < m; ++k) {
        const double next = ((2.0 * k + n - 2) * t * cur - k * prev) / (k + n - 2.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

void gegenbauer_zonal_all(int n, int max_degree, double t, std::span<double> out)
{
    if (out.size() != static_cast<std::size_t>(max_degree) + 1)
        throw Error(ErrorKind::dimension_mismatch, "gegenbauer_zonal_all output size");
    if (!(std::abs(t) <= 1.0 + 1e-12)) throw Error(ErrorKind::domain, "gegenbauer_zonal needs |t| <= 1");
    t = std::clamp(t, -1.0, 1.0);
    out[0] = 1.0;
    if (max_degree >= 1) out[1] = t;
    for (int k = 1; k < max_degree; ++k)
        out[static_cast<std::size_t>(k + 1)] =
            ((2.0 * k + n - 2) * t * out[static_cast<std::size_t>(k)] - k * out[static_cast<std::size_t>(k - 1)]) /
            (k + n - 2.0);
}

EvenSamples even_samples(const SphereFunction& f, const SphericalQuadrature& quad, Exec exec)
{
    Vec values(quad.size());
    map_indices(exec, values, [&](std::size_t i) { return f(quad.node(i)); });
    for (std::size_t i = 0; i < values.size(); ++i)
        if (!std::isfinite(values[i]))
            throw Error(ErrorKind::singular_integrand, "non-finite sphere function value at node " + std::to_string(i));
    EvenSamples split;
    split.dim = quad.dim();
    const auto half = quad.half_indices();
    const auto dim = static_cast<std::size_t>(quad.dim());
    split.points.reserve(half.size() * dim);
    split.coeffs.reserve(half.size());
    for (std::size_t j : half) {
        const ConstSpan x = quad.node(j);
        split.points.insert(split.points.end(), x.begin(), x.end());
        split.coeffs.push_back(quad.weight(j) * (values[j] + values[quad.antipode(j)]));
    }
    return split;
}

Vec weighted_projection_sum(const EvenSamples& samples, ConstSpan points, ConstSpan degree_weights, Exec exec)
{
    const auto dim = static_cast<std::size_t>(samples.dim);
    if (degree_weights.empty() || points.size() % dim != 0)
        throw Error(ErrorKind::dimension_mismatch, "weighted_projection_sum");
    const std::size_t degrees = degree_weights.size();
    const std::size_t count = points.size() / dim;
    Vec sums(count * degrees);
    zonal_sums(exec, samples.dim, static_cast<int>(2 * (degrees - 1)), points, samples.points, samples.coeffs, sums);
    const double area = sphere_area(samples.dim);
    Vec out(count, 0.0);
    for (std::size_t k = 0; k < degrees; ++k) {
        const double factor = degree_weights[k] * harmonic_dimension(samples.dim, static_cast<int>(2 * k)) / area;
        for (std::size_t i = 0; i < count; ++i) out[i] += factor * sums[k * count + i];
    }
    return out;
}

bool harmonic_dimensions_consistent(int max_n, int max_m)
{
    for (int n = 3; n <= max_n; ++n)
        for (int m = 1; m <= max_m; ++m)
            if (dimension_closed_form(n, m) != dimension_closed_form(n - 1, m) + dimension_closed_form(n, m - 1))
                return false;
    return true;
}

double harmonic_dimension(int n, int m)
{
    check_dimension_table_once();
    if (n < 2 || m < 0) throw Error(ErrorKind::domain, "harmonic_dimension needs n >= 2, m >= 0");
    return dimension_closed_form(n, m);
}

void require_projection_accuracy(const SphericalQuadrature& quad, int m)
{
    if (quad.scheme() == QuadratureScheme::product_gauss && quad.resolution() < m + 1)
        throw Error(ErrorKind::accuracy, "quadrature resolution " + std::to_string(quad.resolution()) +
                                             " too coarse for degree " + std::to_string(m) + " projections (need >= " +
                                             std::to_string(m + 1) + ")");
}

DegreeProjection::DegreeProjection(int m, std::shared_ptr<const SphericalQuadrature> quad, Vec pair_coeffs)
    : degree_(m),
      factor_(harmonic_dimension(quad->dim(), m) / sphere_area(quad->dim())),
      quad_(std::move(quad)),
      coeffs_(std::move(pair_coeffs))
{
    for (std::size_t j : quad_->half_indices()) {
        const ConstSpan x = quad_->node(j);
        points_.insert(points_.end(), x.begin(), x.end());
    }
}

double DegreeProjection::operator()(ConstSpan v) const
{
    if (degree_ % 2 != 0) return 0.0;
    Vec out(static_cast<std::size_t>(degree_ / 2 + 1));
    zonal_sums_serial(quad_->dim(), degree_, v, points_, coeffs_, out);
    return factor_ * out.back();
}

SphereFunction DegreeProjection::as_function() const
{
    return [self = *this](ConstSpan v) { return self(v); };
}

DegreeProjection degree_projection(const SphereFunction& f, int m, const SphericalQuadrature& quad)
{
    if (m < 0 || m % 2 != 0) throw Error(ErrorKind::domain, "degree_projection needs an even degree");
    require_projection_accuracy(quad, m);
    EvenSamples split = even_samples(f, quad, Exec::parallel);
    return DegreeProjection(m, std::make_shared<const SphericalQuadrature>(quad), std::move(split.coeffs));
}

ConstSpan HarmonicExpansion::component(int m) const
{
    if (m < 0 || m > max_degree_) throw Error(ErrorKind::domain, "component degree out of range");
    if (m % 2 != 0) return zero_component_;
    return components_[static_cast<std::size_t>(m / 2)];
}

Vec HarmonicExpansion::reconstruction() const
{
    Vec sum(samples_.size(), 0.0);
    for (const Vec& c : components_)
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += c[i];
    return sum;
}

Vec HarmonicExpansion::components_at(ConstSpan v) const
{
    if (v.size() != static_cast<std::size_t>(dim_)) throw Error(ErrorKind::dimension_mismatch, "components_at");
    Vec out(components_.size());
    zonal_sums_serial(dim_, max_degree_, v, pairs_.points, pairs_.coeffs, out);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] *= degree_factors_[k];
    return out;
}

Vec HarmonicExpansion::weighted_sum_at(ConstSpan points, ConstSpan degree_weights, Exec exec) const
{
    if (degree_weights.size() != components_.size()) throw Error(ErrorKind::dimension_mismatch, "weighted_sum_at");
    return weighted_projection_sum(pairs_, points, degree_weights, exec);
}

HarmonicExpansion expand(const SphereFunction& f, int max_degree, const SphericalQuadrature& quad,
                         const SphericalQuadrature* eval, double tail_threshold, Exec exec)
{
    if (max_degree < 0 || max_degree % 2 != 0) throw Error(ErrorKind::domain, "truncation degree must be even");
    require_projection_accuracy(quad, max_degree);

    HarmonicExpansion e;
    e.dim_ = quad.dim();
    e.max_degree_ = max_degree;
    e.integration_ = std::make_shared<const SphericalQuadrature>(quad);
    e.evaluation_ = eval ? std::make_shared<const SphericalQuadrature>(*eval) : e.integration_;
    if (e.evaluation_->dim() != e.dim_) throw Error(ErrorKind::dimension_mismatch, "evaluation rule dimension");

    e.pairs_ = even_samples(f, quad, exec);
    const std::size_t degrees = static_cast<std::size_t>(max_degree / 2 + 1);
    const double area = sphere_area(e.dim_);
    for (std::size_t k = 0; k < degrees; ++k)
        e.degree_factors_.push_back(harmonic_dimension(e.dim_, static_cast<int>(2 * k)) / area);

    const SphericalQuadrature& ev = *e.evaluation_;
    e.samples_.resize(ev.size());
    map_indices(exec, e.samples_, [&](std::size_t i) { return f(ev.node(i)); });

    // Zonal sums are even in v, so evaluate one node per antipodal pair.
    const auto dim = static_cast<std::size_t>(e.dim_);
    const auto half = ev.half_indices();
    Vec half_eval;
    half_eval.reserve(half.size() * dim);
    for (std::size_t i : half) {
        const ConstSpan x = ev.node(i);
        half_eval.insert(half_eval.end(), x.begin(), x.end());
    }
    Vec sums(half.size() * degrees);
    zonal_sums(exec, e.dim_, max_degree, half_eval, e.pairs_.points, e.pairs_.coeffs, sums);

    e.components_.assign(degrees, Vec(ev.size(), 0.0));
    for (std::size_t k = 0; k < degrees; ++k) {
        Vec& c = e.components_[k];
        for (std::size_t h = 0; h < half.size(); ++h) {
            const double value = e.degree_factors_[k] * sums[k * half.size() + h];
            c[half[h]] = value;
            c[ev.antipode(half[h])] = value;
        }
    }
    e.zero_component_.assign(ev.size(), 0.0);

    const Vec recon = e.reconstruction();
    Vec residual(ev.size()), energy(ev.size());
    for (std::size_t i = 0; i < ev.size(); ++i) {
        const double r = e.samples_[i] - recon[i];
        residual[i] = ev.weight(i) * r * r;
        energy[i] = ev.weight(i) * e.samples_[i] * e.samples_[i];
    }
    e.norm_squared_ = pairwise_sum(energy);
    e.tail_energy_ = e.norm_squared_ > 0.0 ? pairwise_sum(residual) / e.norm_squared_ : 0.0;
    e.tail_flagged_ = e.tail_energy_ > tail_threshold;
    return e;
}

}  // namespace bp
