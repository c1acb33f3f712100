#include "bp/oracles.hpp"

#include "bp/error.hpp"
#include "bp/kernels.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <random>

namespace bp {

namespace {

constexpr std::uint64_t kChunk = 4096;

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct ChunkSums {
    double sum = 0.0;
    double sum_sq = 0.0;
};

// sampler(rng) returns one draw of the estimator.
template <class Sampler>
MCEstimate run_chunks(std::uint64_t samples, std::uint64_t seed, Sampler&& sampler)
{
    MCEstimate est;
    est.samples = samples;
    est.seed = seed;
    if (samples == 0) return est;
    const std::uint64_t chunks = (samples + kChunk - 1) / kChunk;
    Vec sums(chunks), squares(chunks);
    const auto total = static_cast<long long>(chunks);
    const int workers = worker_count();
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
    for (long long c = 0; c < total; ++c) {
        const auto chunk = static_cast<std::uint64_t>(c);
        std::mt19937_64 rng(splitmix64(seed ^ splitmix64(chunk)));
        const std::uint64_t begin = chunk * kChunk;
        const std::uint64_t end = std::min(samples, begin + kChunk);
        ChunkSums s;
        for (std::uint64_t i = begin; i < end; ++i) {
            const double x = sampler(rng);
            s.sum += x;
            s.sum_sq += x * x;
        }
        sums[chunk] = s.sum;
        squares[chunk] = s.sum_sq;
    }
    const double n = static_cast<double>(samples);
    const double mean = pairwise_sum(sums) / n;
    const double second = pairwise_sum(squares) / n;
    est.value = mean;
    est.std_error = samples > 1 ? std::sqrt(std::max(second - mean * mean, 0.0) / (n - 1.0)) : 0.0;
    return est;
}

void random_unit(std::mt19937_64& rng, std::span<double> v)
{
    std::normal_distribution<double> gauss;
    double len = 0.0;
    while (!(len > 1e-12)) {
        for (double& x : v) x = gauss(rng);
        len = norm(v);
    }
    for (double& x : v) x /= len;
}

double segment_draw(Region region, const Density& density, int power, ConstSpan v, const StarBody& K,
                    const StarBody& L, std::mt19937_64& rng)
{
    const auto seg = segment_from_radii(K.radial(v), L.radial(v));
    std::uniform_real_distribution<double> unit;
    const double u = unit(rng);  // drawn unconditionally to keep streams aligned
    if (!seg || seg->region != region) return 0.0;
    const double r = seg->lo + (seg->hi - seg->lo) * u;
    return (seg->hi - seg->lo) * std::pow(r, power) * density.at_radius(r);
}

}  // namespace

MCEstimate mc_region_measure(Region region, const Density& density, const StarBody& K, const StarBody& L,
                             std::uint64_t samples, std::uint64_t seed)
{
    if (K.dim() != L.dim()) throw Error(ErrorKind::dimension_mismatch, "K and L have different dimensions");
    const int n = K.dim();
    const double area = sphere_area(n);
    return run_chunks(samples, seed, [&](std::mt19937_64& rng) {
        Vec v(static_cast<std::size_t>(n));
        random_unit(rng, v);
        return area * segment_draw(region, density, n - 1, v, K, L, rng);
    });
}

MCEstimate mc_section_measure(Region region, const Density& density, const Direction& xi, const StarBody& K,
                              const StarBody& L, std::uint64_t samples, std::uint64_t seed)
{
    if (K.dim() != L.dim() || xi.dim() != K.dim())
        throw Error(ErrorKind::dimension_mismatch, "mc_section_measure dimensions differ");
    const int n = K.dim();
    const double area = sphere_area(n - 1);
    return run_chunks(samples, seed, [&](std::mt19937_64& rng) {
        Vec v(static_cast<std::size_t>(n));
        double len = 0.0;
        std::normal_distribution<double> gauss;
        while (!(len > 1e-12)) {
            for (double& x : v) x = gauss(rng);
            const double d = dot(v, xi.coords());
            for (std::size_t i = 0; i < v.size(); ++i) v[i] -= d * xi[i];
            len = norm(v);
        }
        for (double& x : v) x /= len;
        return area * segment_draw(region, density, n - 2, v, K, L, rng);
    });
}

namespace {

// Coefficients of the probabilists' Hermite polynomials He_0..He_max.
std::vector<Vec> hermite_coefficients(int max_degree)
{
    std::vector<Vec> he(static_cast<std::size_t>(max_degree) + 1);
    he[0] = {1.0};
    if (max_degree >= 1) he[1] = {0.0, 1.0};
    for (int k = 1; k < max_degree; ++k) {
        Vec next(static_cast<std::size_t>(k) + 2, 0.0);
        for (std::size_t j = 0; j < he[static_cast<std::size_t>(k)].size(); ++j)
            next[j + 1] += he[static_cast<std::size_t>(k)][j];
        for (std::size_t j = 0; j < he[static_cast<std::size_t>(k) - 1].size(); ++j)
            next[j] -= k * he[static_cast<std::size_t>(k) - 1][j];
        he[static_cast<std::size_t>(k) + 1] = std::move(next);
    }
    return he;
}

// ∫_0^∞ r^p exp(-s^2 r^2 / 2) dr
double gaussian_moment(double p, double s)
{
    return std::pow(2.0, 0.5 * (p - 1.0)) * std::tgamma(0.5 * (p + 1.0)) / std::pow(s, p + 1.0);
}

struct OracleData {
    int n;
    int max_degree;
    double sigma;
    std::shared_ptr<const SphericalQuadrature> quad;
    Vec g_weighted;               // w_i g(θ_i)
    std::vector<Vec> phi_coeffs;  // per even k: monomial coefficients of Φ_k(t)
    Vec z;                        // reproducing kernel coefficients, per even power
    Vec rhs_moment;               // ∫_0^∞ (r/σ)^k e^{-r²/2σ²} dr per even k
};

}  // namespace

SphereFunction distributional_ft_oracle(const SphereFunction& g, double sigma, const SphericalQuadrature& quad,
                                        int max_degree)
{
    if (!(sigma >= 0.1 && sigma <= 10.0)) throw Error(ErrorKind::domain, "oracle test scale σ must lie in [0.1, 10]");
    if (max_degree < 0 || max_degree % 2 != 0) throw Error(ErrorKind::domain, "oracle degree must be even");
    auto data = std::make_shared<OracleData>();
    const int n = quad.dim();
    data->n = n;
    data->max_degree = max_degree;
    data->sigma = sigma;
    data->quad = std::make_shared<const SphericalQuadrature>(quad);
    data->g_weighted.resize(quad.size());
    for (std::size_t i = 0; i < quad.size(); ++i) {
        const double value = g(quad.node(i));
        if (!std::isfinite(value)) throw Error(ErrorKind::singular_integrand, "oracle: non-finite g");
        data->g_weighted[i] = quad.weight(i) * value;
    }

    // φ(x) = <x/σ,u>^k e^{-|x|²/2σ²} has φ̂(ξ) = σ^n (2π)^{n/2} (-1)^{k/2} He_k(σ<ξ,u>) e^{-σ²|ξ|²/2}.
    // Pairing kernel Φ_k(<θ,u>) = ∫_0^∞ r^{n-2} φ̂(rθ) dr is a polynomial in <θ,u>.
    // Right side: ∫_0^∞ φ(rθ) dr = <θ,u>^k ∫ (r/σ)^k e^{-r²/2σ²} dr.
    const auto he = hermite_coefficients(max_degree);
    const double prefactor = std::pow(sigma, n) * std::pow(2.0 * std::numbers::pi, 0.5 * n);
    for (int k = 0; k <= max_degree; k += 2) {
        const double sign = (k / 2) % 2 == 0 ? 1.0 : -1.0;
        Vec coeffs(static_cast<std::size_t>(k) + 1, 0.0);
        for (int j = 0; j <= k; ++j) {
            const double c = he[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
            if (c == 0.0) continue;
            coeffs[static_cast<std::size_t>(j)] =
                prefactor * sign * c * std::pow(sigma, j) * gaussian_moment(n - 2 + j, sigma);
        }
        data->phi_coeffs.push_back(std::move(coeffs));
        data->rhs_moment.push_back(gaussian_moment(k, 1.0 / sigma) / std::pow(sigma, k));
    }

    // Z(t) = Σ_i z_i t^{2i} with ∫_S Z(<θ,u>) <θ,u>^{2j} dθ = 1 for j = 0..M/2.
    const int terms = max_degree / 2 + 1;
    Eigen::MatrixXd hankel(terms, terms);
    const double ring = sphere_area(n - 1);
    for (int i = 0; i < terms; ++i)
        for (int j = 0; j < terms; ++j) {
            const double a = i + j + 0.5;
            const double b = 0.5 * (n - 1);
            hankel(i, j) = ring * std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
        }
    const Eigen::VectorXd z = hankel.colPivHouseholderQr().solve(Eigen::VectorXd::Ones(terms));
    data->z.assign(z.data(), z.data() + terms);

    return [data](ConstSpan u) {
        const SphericalQuadrature& q = *data->quad;
        const Vec unit = normalized(u);
        double gamma = 0.0;
        Vec terms(q.size());
        for (int i = 0; 2 * i <= data->max_degree; ++i) {
            const Vec& c = data->phi_coeffs[static_cast<std::size_t>(i)];
            for (std::size_t p = 0; p < q.size(); ++p) {
                const double t = dot(q.node(p), unit);
                double poly = 0.0;
                for (std::size_t j = c.size(); j-- > 0;) poly = poly * t + c[j];
                terms[p] = data->g_weighted[p] * poly;
            }
            const double moment = pairwise_sum(terms) / data->rhs_moment[static_cast<std::size_t>(i)];
            gamma += data->z[static_cast<std::size_t>(i)] * moment;
        }
        return gamma;
    };
}

}  // namespace bp
