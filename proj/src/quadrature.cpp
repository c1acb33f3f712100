#include "bp/quadrature.hpp"

#include "bp/error.hpp"
#include "bp/kernels.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace bp {

std::string to_string(QuadratureScheme scheme)
{
    return scheme == QuadratureScheme::product_gauss ? "product" : "mc";
}

QuadratureScheme quadrature_scheme_from_string(const std::string& name)
{
    if (name == "product") return QuadratureScheme::product_gauss;
    if (name == "mc") return QuadratureScheme::monte_carlo;
    throw Error(ErrorKind::validation, "unknown quadrature scheme '" + name + "' (expected product|mc)");
}

GaussRule gauss_gegenbauer(int points, double exponent)
{
    if (points < 1) throw Error(ErrorKind::domain, "Gauss rule needs at least one point");
    if (exponent <= -1.0) throw Error(ErrorKind::domain, "Gauss weight exponent must exceed -1");
    const auto count = static_cast<Eigen::Index>(points);

    // Golub-Welsch: symmetric Jacobi matrix of the orthonormal recurrence.
    Eigen::VectorXd diagonal = Eigen::VectorXd::Zero(count);
    Eigen::VectorXd off(std::max<Eigen::Index>(count - 1, 0));
    for (Eigen::Index k = 1; k < count; ++k) {
        const double kk = static_cast<double>(k);
        const double s = kk + exponent;
        off(k - 1) = std::sqrt(kk * (kk + 2.0 * exponent) / (4.0 * s * s - 1.0));
    }
    const double mu0 = std::exp(std::lgamma(0.5) + std::lgamma(exponent + 1.0) - std::lgamma(exponent + 1.5));

    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(points));
    rule.weights.resize(static_cast<std::size_t>(points));
    if (points == 1) {
        rule.nodes[0] = 0.0;
        rule.weights[0] = mu0;
        return rule;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diagonal, off, Eigen::ComputeEigenvectors);
    const Eigen::VectorXd& values = solver.eigenvalues();
    const Eigen::MatrixXd& vectors = solver.eigenvectors();
    for (Eigen::Index i = 0; i < count; ++i) {
        rule.nodes[static_cast<std::size_t>(i)] = values(i);
        rule.weights[static_cast<std::size_t>(i)] = mu0 * vectors(0, i) * vectors(0, i);
    }
    // Enforce exact reflection symmetry t_i = -t_{N-1-i}.
    for (int i = 0; i < points / 2; ++i) {
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(points - 1 - i);
        const double t = 0.5 * (rule.nodes[hi] - rule.nodes[lo]);
        const double w = 0.5 * (rule.weights[hi] + rule.weights[lo]);
        rule.nodes[lo] = -t;
        rule.nodes[hi] = t;
        rule.weights[lo] = w;
        rule.weights[hi] = w;
    }
    if (points % 2 == 1) rule.nodes[static_cast<std::size_t>(points / 2)] = 0.0;
    return rule;
}

int SphericalQuadrature::exact_degree() const noexcept
{
    return scheme_ == QuadratureScheme::product_gauss ? 2 * resolution_ - 1 : -1;
}

double SphericalQuadrature::total_weight() const { return pairwise_sum(weights_); }

SphericalQuadrature build_sphere_rule_any_dim(int d, int resolution)
{
    if (d < 2) throw Error(ErrorKind::unsupported_dimension, "sphere rule needs d >= 2");
    if (resolution < 1) throw Error(ErrorKind::domain, "resolution must be positive");
    SphericalQuadrature q;
    q.dim_ = d;
    q.resolution_ = resolution;
    q.scheme_ = QuadratureScheme::product_gauss;

    const int azimuth = 2 * resolution;
    std::vector<double> cos_phi(static_cast<std::size_t>(azimuth)), sin_phi(cos_phi.size());
    for (int k = 0; k < resolution; ++k) {
        const double phi = 2.0 * std::numbers::pi * (k + 0.5) / azimuth;
        cos_phi[static_cast<std::size_t>(k)] = std::cos(phi);
        sin_phi[static_cast<std::size_t>(k)] = std::sin(phi);
        cos_phi[static_cast<std::size_t>(k + resolution)] = -std::cos(phi);
        sin_phi[static_cast<std::size_t>(k + resolution)] = -std::sin(phi);
    }
    const double azimuth_weight = 2.0 * std::numbers::pi / azimuth;

    const int polar_count = d - 2;
    std::vector<GaussRule> polar;
    for (int j = 1; j <= polar_count; ++j) polar.push_back(gauss_gegenbauer(resolution, 0.5 * (d - 2 - j)));

    std::size_t total = static_cast<std::size_t>(azimuth);
    for (int j = 0; j < polar_count; ++j) total *= static_cast<std::size_t>(resolution);
    q.nodes_.resize(total * static_cast<std::size_t>(d));
    q.weights_.resize(total);
    q.antipode_.resize(total);

    std::vector<int> index(static_cast<std::size_t>(polar_count) + 1, 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        // decode row-major multi-index (polar..., azimuth)
        std::size_t rem = flat;
        index[static_cast<std::size_t>(polar_count)] = static_cast<int>(rem % static_cast<std::size_t>(azimuth));
        rem /= static_cast<std::size_t>(azimuth);
        for (int j = polar_count - 1; j >= 0; --j) {
            index[static_cast<std::size_t>(j)] = static_cast<int>(rem % static_cast<std::size_t>(resolution));
            rem /= static_cast<std::size_t>(resolution);
        }
        double* x = q.nodes_.data() + flat * static_cast<std::size_t>(d);
        double scale = 1.0;
        double weight = azimuth_weight;
        for (int j = 0; j < polar_count; ++j) {
            const auto& rule = polar[static_cast<std::size_t>(j)];
            const auto i = static_cast<std::size_t>(index[static_cast<std::size_t>(j)]);
            const double t = rule.nodes[i];
            x[j] = scale * t;
            scale *= std::sqrt((1.0 - t) * (1.0 + t));
            weight *= rule.weights[i];
        }
        const auto k = static_cast<std::size_t>(index[static_cast<std::size_t>(polar_count)]);
        x[d - 2] = scale * cos_phi[k];
        x[d - 1] = scale * sin_phi[k];
        q.weights_[flat] = weight;

        // antipode: reflect every polar index, shift azimuth by pi
        std::size_t anti = 0;
        for (int j = 0; j < polar_count; ++j)
            anti = anti * static_cast<std::size_t>(resolution) +
                   static_cast<std::size_t>(resolution - 1 - index[static_cast<std::size_t>(j)]);
        anti = anti * static_cast<std::size_t>(azimuth) + (k + static_cast<std::size_t>(resolution)) % static_cast<std::size_t>(azimuth);
        q.antipode_[flat] = anti;
    }
    for (std::size_t i = 0; i < total; ++i)
        if (i < q.antipode_[i]) q.half_.push_back(i);
    return q;
}

SphericalQuadrature build_sphere_quadrature(int n, int resolution, QuadratureScheme scheme, std::uint64_t seed)
{
    if (n < 3) throw Error(ErrorKind::unsupported_dimension, "sphere quadrature needs n >= 3, got " + std::to_string(n));
    if (resolution < 4) throw Error(ErrorKind::domain, "resolution must be >= 4, got " + std::to_string(resolution));
    if (scheme == QuadratureScheme::product_gauss) return build_sphere_rule_any_dim(n, resolution);

    SphericalQuadrature q;
    q.dim_ = n;
    q.resolution_ = resolution;
    q.scheme_ = QuadratureScheme::monte_carlo;
    q.seed_ = seed;
    std::size_t pairs = 1;
    for (int j = 0; j < n - 1; ++j) pairs *= static_cast<std::size_t>(resolution);
    const std::size_t total = 2 * pairs;
    const auto dim = static_cast<std::size_t>(n);
    q.nodes_.resize(total * dim);
    q.weights_.assign(total, sphere_area(n) / static_cast<double>(total));
    q.antipode_.resize(total);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec g(dim);
    for (std::size_t p = 0; p < pairs; ++p) {
        double len = 0.0;
        do {
            for (double& x : g) x = gauss(rng);
            len = norm(g);
        } while (len < 1e-12);
        for (std::size_t d = 0; d < dim; ++d) {
            q.nodes_[2 * p * dim + d] = g[d] / len;
            q.nodes_[(2 * p + 1) * dim + d] = -g[d] / len;
        }
        q.antipode_[2 * p] = 2 * p + 1;
        q.antipode_[2 * p + 1] = 2 * p;
        q.half_.push_back(2 * p);
    }
    return q;
}

SubsphereQuadrature build_subsphere_quadrature(ConstSpan axis, const SphericalQuadrature& inner)
{
    const int n = static_cast<int>(axis.size());
    if (n < 3) throw Error(ErrorKind::unsupported_dimension, "subsphere rule needs n >= 3");
    if (inner.dim() != n - 1) throw Error(ErrorKind::dimension_mismatch, "inner rule must live on S^{n-2}");
    if (std::abs(norm(axis) - 1.0) > 1e-12) throw Error(ErrorKind::domain, "subsphere axis must be a unit vector");

    SubsphereQuadrature s;
    s.dim_ = n;
    s.axis_.assign(axis.begin(), axis.end());
    s.inner_ = inner;
    const auto dim = static_cast<std::size_t>(n);

    // Reflection H = I - 2uu^T/|u|^2 sending e_n to xi (u = e_n - xi) or to
    // -xi (u = e_n + xi), whichever avoids cancellation. Either way H maps
    // e_n^⊥ onto xi^⊥.
    Vec u(axis.begin(), axis.end());
    const double sign = axis[dim - 1] <= 0.0 ? -1.0 : 1.0;
    for (double& x : u) x *= sign;
    u[dim - 1] += 1.0;
    const double uu = dot(u, u);

    s.basis_.resize((dim - 1) * dim);
    for (std::size_t k = 0; k + 1 < dim; ++k) {
        double* b = s.basis_.data() + k * dim;
        for (std::size_t d = 0; d < dim; ++d) b[d] = (d == k ? 1.0 : 0.0) - 2.0 * u[d] * u[k] / uu;
    }

    const std::size_t count = inner.size();
    s.nodes_.assign(count * dim, 0.0);
    s.weights_.assign(inner.weights().begin(), inner.weights().end());
    for (std::size_t i = 0; i < count; ++i) {
        const ConstSpan y = inner.node(i);
        double* w = s.nodes_.data() + i * dim;
        for (std::size_t k = 0; k + 1 < dim; ++k) {
            const double* b = s.basis_.data() + k * dim;
            for (std::size_t d = 0; d < dim; ++d) w[d] += y[k] * b[d];
        }
    }
    return s;
}

SubsphereQuadrature build_subsphere_quadrature(ConstSpan axis, int resolution)
{
    if (axis.size() < 3) throw Error(ErrorKind::unsupported_dimension, "subsphere rule needs n >= 3");
    return build_subsphere_quadrature(axis, build_sphere_rule_any_dim(static_cast<int>(axis.size()) - 1, resolution));
}

RadialRule::RadialRule(int order) : reference_(gauss_gegenbauer(order, 0.0)) {}

double pairwise_sum(ConstSpan values) noexcept
{
    constexpr std::size_t block = 16;
    if (values.size() <= block) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

namespace {

std::string describe_node(ConstSpan x)
{
    std::ostringstream os;
    os.precision(17);
    os << '(';
    for (std::size_t d = 0; d < x.size(); ++d) os << (d ? ", " : "") << x[d];
    os << ')';
    return os.str();
}

template <class Rule>
double weighted_sum(const SphereFunction& f, const Rule& rule, Exec exec)
{
    Vec terms(rule.size());
    map_indices(exec, terms, [&](std::size_t i) { return f(rule.node(i)); });
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (!std::isfinite(terms[i]))
            throw Error(ErrorKind::singular_integrand,
                        "non-finite integrand at node " + std::to_string(i) + " " + describe_node(rule.node(i)));
        terms[i] *= rule.weight(i);
    }
    return pairwise_sum(terms);
}

}  // namespace

double integrate_sphere(const SphereFunction& f, const SphericalQuadrature& quad, Exec exec)
{
    return weighted_sum(f, quad, exec);
}

double integrate_subsphere(const SphereFunction& f, const SubsphereQuadrature& quad, Exec exec)
{
    return weighted_sum(f, quad, exec);
}

double integrate_radial(const std::function<double(double)>& g, double lo, double hi, const RadialRule& rule)
{
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    Vec terms(static_cast<std::size_t>(rule.order()));
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const double r = mid + half * rule.reference_nodes()[i];
        const double v = g(r);
        if (!std::isfinite(v))
            throw Error(ErrorKind::singular_integrand, "non-finite radial integrand at r = " + std::to_string(r));
        terms[i] = rule.reference_weights()[i] * v;
    }
    return half * pairwise_sum(terms);
}

}  // namespace bp
