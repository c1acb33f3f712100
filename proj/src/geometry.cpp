#include "bp/geometry.hpp"

#include "bp/error.hpp"
#include "bp/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>

namespace bp {

Direction::Direction(Vec coords) : coords_(std::move(coords))
{
    if (coords_.size() < 3) throw Error(ErrorKind::unsupported_dimension, "directions need n >= 3");
    const double len = norm(coords_);
    if (!(std::abs(len - 1.0) <= 1e-12))
        throw Error(ErrorKind::domain, "direction is not a unit vector (norm " + std::to_string(len) + ")");
}

Direction Direction::from_vector(ConstSpan x)
{
    const double len = norm(x);
    if (!(len > 0.0) || !std::isfinite(len)) throw Error(ErrorKind::domain, "cannot normalize a zero vector");
    return Direction(normalized(x));
}

Direction Direction::operator-() const { return Direction(negated(coords_)); }

std::string to_string(BodyKind kind)
{
    switch (kind) {
    case BodyKind::ball: return "ball";
    case BodyKind::ellipsoid: return "ellipsoid";
    case BodyKind::lp_ball: return "lp_ball";
    case BodyKind::perturbed_ball: return "perturbed_ball";
    case BodyKind::tabulated: return "tabulated";
    case BodyKind::scaled: return "scaled";
    case BodyKind::derived: return "derived";
    }
    return "unknown";
}

std::string to_string(Region region) { return region == Region::K_minus_L ? "K_minus_L" : "L_minus_K"; }

namespace detail {

class RadialModel {
public:
    explicit RadialModel(BodyDescription d) : desc(std::move(d)) {}
    virtual ~RadialModel() = default;
    virtual double eval(ConstSpan v) const = 0;
    BodyDescription desc;
};

}  // namespace detail

namespace {

using detail::RadialModel;

void require_dim(int n)
{
    if (n < 3) throw Error(ErrorKind::unsupported_dimension, "star bodies need n >= 3, got " + std::to_string(n));
}

void require_positive(double x, const char* what)
{
    if (!(x > 0.0) || !std::isfinite(x)) throw Error(ErrorKind::domain, std::string(what) + " must be positive and finite");
}

class BallModel final : public RadialModel {
public:
    using RadialModel::RadialModel;
    double eval(ConstSpan) const override { return desc.r; }
};

class EllipsoidModel final : public RadialModel {
public:
    explicit EllipsoidModel(BodyDescription d) : RadialModel(std::move(d))
    {
        for (double a : desc.semiaxes) inv_sq_.push_back(1.0 / (a * a));
    }
    double eval(ConstSpan v) const override
    {
        double s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * v[i] * inv_sq_[i];
        return 1.0 / std::sqrt(s);
    }

private:
    Vec inv_sq_;
};

class LpModel final : public RadialModel {
public:
    using RadialModel::RadialModel;
    double eval(ConstSpan v) const override
    {
        double top = 0.0;
        for (double x : v) top = std::max(top, std::abs(x));
        if (std::isinf(desc.p)) return desc.r / top;
        double s = 0.0;
        for (double x : v) s += std::pow(std::abs(x) / top, desc.p);
        return desc.r / (top * std::pow(s, 1.0 / desc.p));
    }
};

class PerturbedModel final : public RadialModel {
public:
    using RadialModel::RadialModel;
    double eval(ConstSpan v) const override
    {
        double s = 1.0;
        for (const ZonalTerm& t : desc.terms) s += t.eps * gegenbauer_zonal(desc.dim, t.degree, dot(v, t.axis));
        return desc.r * s;
    }
};

class ScaledModel final : public RadialModel {
public:
    using RadialModel::RadialModel;
    double eval(ConstSpan v) const override { return desc.factor * desc.children.front().radial(v); }
};

// Hyperspherical angles matching the quadrature layout:
// x_0 = cos θ_0, x_1 = sin θ_0 cos θ_1, ..., x_{n-2} = (Π sin θ) cos φ, x_{n-1} = (Π sin θ) sin φ.
void to_angles(ConstSpan x, Vec& polar, double& phi)
{
    const std::size_t n = x.size();
    polar.resize(n - 2);
    double tail_sq = 0.0;
    for (std::size_t i = 1; i < n; ++i) tail_sq += x[i] * x[i];
    for (std::size_t j = 0; j + 2 < n; ++j) {
        polar[j] = std::atan2(std::sqrt(tail_sq), x[j]);
        tail_sq -= x[j + 1] * x[j + 1];
        tail_sq = std::max(tail_sq, 0.0);
    }
    phi = std::atan2(x[n - 1], x[n - 2]);
    if (phi < 0.0) phi += 2.0 * std::numbers::pi;
}

Vec from_angles(ConstSpan polar, double phi)
{
    const std::size_t n = polar.size() + 2;
    Vec x(n);
    double scale = 1.0;
    for (std::size_t j = 0; j < polar.size(); ++j) {
        x[j] = scale * std::cos(polar[j]);
        scale *= std::sin(polar[j]);
    }
    x[n - 2] = scale * std::cos(phi);
    x[n - 1] = scale * std::sin(phi);
    return x;
}

class TabulatedModel final : public RadialModel {
public:
    explicit TabulatedModel(BodyDescription d) : RadialModel(std::move(d))
    {
        const std::vector<int>& shape = desc.grid.shape;
        std::size_t stride = 1;
        strides_.assign(shape.size(), 0);
        for (std::size_t k = shape.size(); k-- > 0;) {
            strides_[k] = stride;
            stride *= static_cast<std::size_t>(shape[k]);
        }
    }

    double eval(ConstSpan v) const override
    {
        if (v.size() != static_cast<std::size_t>(desc.dim))
            throw Error(ErrorKind::dimension_mismatch, "tabulated body of dimension " + std::to_string(desc.dim) +
                                                           " evaluated at a vector of length " +
                                                           std::to_string(v.size()));
        Vec polar;
        double phi = 0.0;
        to_angles(v, polar, phi);
        const std::vector<int>& shape = desc.grid.shape;
        const std::size_t axes = shape.size();
        std::vector<std::size_t> lo(axes), hi(axes);
        Vec frac(axes);
        for (std::size_t k = 0; k + 1 < axes; ++k) {
            const double h = std::numbers::pi / (shape[k] - 1);
            const double s = std::clamp(polar[k] / h, 0.0, static_cast<double>(shape[k] - 1));
            lo[k] = std::min(static_cast<std::size_t>(s), static_cast<std::size_t>(shape[k] - 2));
            hi[k] = lo[k] + 1;
            frac[k] = s - static_cast<double>(lo[k]);
        }
        const int na = shape.back();
        const double s = phi / (2.0 * std::numbers::pi / na);
        const auto base = std::min(static_cast<std::size_t>(s), static_cast<std::size_t>(na - 1));
        lo[axes - 1] = base;
        hi[axes - 1] = (base + 1) % static_cast<std::size_t>(na);
        frac[axes - 1] = std::clamp(s - static_cast<double>(base), 0.0, 1.0);

        // Multilinear blend over the 2^axes cell corners; exact at grid nodes.
        double value = 0.0;
        for (std::size_t corner = 0; corner < (std::size_t{1} << axes); ++corner) {
            double w = 1.0;
            std::size_t index = 0;
            for (std::size_t k = 0; k < axes; ++k) {
                const bool up = (corner >> k) & 1u;
                w *= up ? frac[k] : 1.0 - frac[k];
                index += (up ? hi[k] : lo[k]) * strides_[k];
            }
            if (w != 0.0) value += w * desc.grid.values[index];
        }
        return value;
    }

private:
    std::vector<std::size_t> strides_;
};

class DerivedModel final : public RadialModel {
public:
    DerivedModel(BodyDescription d, SphericalQuadrature inner) : RadialModel(std::move(d)), inner_(std::move(inner)) {}

    double eval(ConstSpan v) const override { return eval_with(v, inner_); }

    double eval_with(ConstSpan v, const SphericalQuadrature& inner) const
    {
        const SubsphereQuadrature sub = build_subsphere_quadrature(v, inner);
        const StarBody& M = desc.children.front();
        const double p = desc.dim + 1.0;
        const double integral = integrate_subsphere([&](ConstSpan w) { return std::pow(M.radial(w), p); }, sub);
        return p / integral;
    }

private:
    SphericalQuadrature inner_;
};

std::vector<Vec> grid_points(const std::vector<int>& shape)
{
    const std::size_t axes = shape.size();
    std::size_t total = 1;
    for (int s : shape) total *= static_cast<std::size_t>(s);
    std::vector<Vec> points;
    points.reserve(total);
    std::vector<int> idx(axes, 0);
    Vec polar(axes - 1);
    for (std::size_t flat = 0; flat < total; ++flat) {
        for (std::size_t k = 0; k + 1 < axes; ++k) polar[k] = std::numbers::pi * idx[k] / (shape[k] - 1);
        points.push_back(from_angles(polar, 2.0 * std::numbers::pi * idx[axes - 1] / shape[axes - 1]));
        for (std::size_t k = axes; k-- > 0;) {
            if (++idx[k] < shape[k]) break;
            idx[k] = 0;
        }
    }
    return points;
}

// Grid points that coincide on the sphere (poles of the angular chart) must
// carry one value, and the value table must be even.
void validate_tabulated(int n, const TabulatedGrid& grid)
{
    if (grid.shape.size() != static_cast<std::size_t>(n - 1))
        throw Error(ErrorKind::dimension_mismatch, "tabulated grid needs " + std::to_string(n - 1) + " axes for n = " +
                                                       std::to_string(n));
    std::size_t total = 1;
    for (std::size_t k = 0; k < grid.shape.size(); ++k) {
        const int s = grid.shape[k];
        const bool azimuth = k + 1 == grid.shape.size();
        if (azimuth ? (s < 4 || s % 2 != 0) : s < 3)
            throw Error(ErrorKind::validation, azimuth ? "tabulated azimuth count must be even and >= 4"
                                                       : "tabulated polar counts must be >= 3");
        total *= static_cast<std::size_t>(s);
    }
    if (grid.values.size() != total)
        throw Error(ErrorKind::dimension_mismatch, "tabulated grid has " + std::to_string(grid.values.size()) +
                                                       " values, shape needs " + std::to_string(total));
    for (double x : grid.values) require_positive(x, "tabulated radial values");

    const std::vector<Vec> points = grid_points(grid.shape);
    auto key = [](ConstSpan x) {
        std::vector<long long> k;
        for (double c : x) {
            const long long r = std::llround(c * 1e9);
            k.push_back(r == 0 ? 0 : r);
        }
        return k;
    };
    std::map<std::vector<long long>, double> seen;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double value = grid.values[i];
        auto [it, inserted] = seen.emplace(key(points[i]), value);
        if (!inserted && std::abs(it->second - value) > 1e-12 * std::max(it->second, value))
            throw Error(ErrorKind::validation, "tabulated values disagree at coincident grid point " + std::to_string(i));
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto it = seen.find(key(negated(points[i])));
        if (it == seen.end()) throw Error(ErrorKind::validation, "tabulated grid is not antipodally closed");
        if (std::abs(it->second - grid.values[i]) > 1e-12 * std::max(it->second, grid.values[i]))
            throw Error(ErrorKind::validation, "tabulated values are not even at grid point " + std::to_string(i));
    }
}

}  // namespace

StarBody::StarBody(std::shared_ptr<const detail::RadialModel> model) : model_(std::move(model)) {}

int StarBody::dim() const noexcept { return model_->desc.dim; }
BodyKind StarBody::kind() const noexcept { return model_->desc.kind; }
const BodyDescription& StarBody::description() const noexcept { return model_->desc; }

double StarBody::radial(ConstSpan v) const { return model_->eval(v); }

double StarBody::radial(const Direction& v) const
{
    if (v.dim() != dim())
        throw Error(ErrorKind::dimension_mismatch, "body of dimension " + std::to_string(dim()) +
                                                       " evaluated in dimension " + std::to_string(v.dim()));
    return model_->eval(v.coords());
}

StarBody StarBody::ball(int n, double r)
{
    require_dim(n);
    require_positive(r, "ball radius");
    BodyDescription d;
    d.kind = BodyKind::ball;
    d.dim = n;
    d.r = r;
    return StarBody(std::make_shared<BallModel>(std::move(d)));
}

StarBody StarBody::ellipsoid(Vec semiaxes)
{
    require_dim(static_cast<int>(semiaxes.size()));
    for (double a : semiaxes) require_positive(a, "ellipsoid semiaxes");
    BodyDescription d;
    d.kind = BodyKind::ellipsoid;
    d.dim = static_cast<int>(semiaxes.size());
    d.semiaxes = std::move(semiaxes);
    return StarBody(std::make_shared<EllipsoidModel>(std::move(d)));
}

StarBody StarBody::lp_ball(int n, double p, double r)
{
    require_dim(n);
    require_positive(r, "lp_ball radius");
    if (!(p > 0.0)) throw Error(ErrorKind::domain, "lp_ball exponent must be positive");
    BodyDescription d;
    d.kind = BodyKind::lp_ball;
    d.dim = n;
    d.p = p;
    d.r = r;
    return StarBody(std::make_shared<LpModel>(std::move(d)));
}

StarBody StarBody::perturbed_ball(int n, double r, std::vector<ZonalTerm> terms)
{
    require_dim(n);
    require_positive(r, "perturbed_ball radius");
    double eps_sum = 0.0;
    int max_degree = 0;
    for (ZonalTerm& t : terms) {
        if (t.degree < 0 || t.degree % 2 != 0) throw Error(ErrorKind::domain, "perturbation degrees must be even");
        if (t.axis.size() != static_cast<std::size_t>(n))
            throw Error(ErrorKind::dimension_mismatch, "perturbation axis has wrong length");
        if (!std::isfinite(t.eps)) throw Error(ErrorKind::domain, "perturbation eps must be finite");
        t.axis = normalized(Direction::from_vector(t.axis).coords());
        eps_sum += std::abs(t.eps);
        max_degree = std::max(max_degree, t.degree);
    }
    BodyDescription d;
    d.kind = BodyKind::perturbed_ball;
    d.dim = n;
    d.r = r;
    d.terms = std::move(terms);
    auto model = std::make_shared<PerturbedModel>(std::move(d));
    // |P_m| <= 1, so Σ|eps| < 1 already guarantees positivity.
    if (eps_sum >= 1.0) {
        const SphericalQuadrature scan = build_sphere_quadrature(n, std::clamp(max_degree + 4, 8, n == 3 ? 64 : 20));
        for (std::size_t i = 0; i < scan.size(); ++i)
            if (!(model->eval(scan.node(i)) > 0.0))
                throw Error(ErrorKind::domain, "perturbed_ball radial function is not positive on the scan grid");
        for (const ZonalTerm& t : model->desc.terms)
            if (!(model->eval(t.axis) > 0.0))
                throw Error(ErrorKind::domain, "perturbed_ball radial function is not positive at a perturbation axis");
    }
    return StarBody(std::move(model));
}

StarBody StarBody::tabulated(int n, TabulatedGrid grid)
{
    require_dim(n);
    validate_tabulated(n, grid);
    BodyDescription d;
    d.kind = BodyKind::tabulated;
    d.dim = n;
    d.grid = std::move(grid);
    return StarBody(std::make_shared<TabulatedModel>(std::move(d)));
}

StarBody StarBody::scaled(const StarBody& base, double factor)
{
    require_positive(factor, "scale factor");
    BodyDescription d;
    d.kind = BodyKind::scaled;
    d.dim = base.dim();
    d.factor = factor;
    d.children.push_back(base);
    return StarBody(std::make_shared<ScaledModel>(std::move(d)));
}

double radial_eval(const StarBody& body, const Direction& v) { return body.radial(v); }

double minkowski_functional(const StarBody& body, ConstSpan x)
{
    if (x.size() != static_cast<std::size_t>(body.dim()))
        throw Error(ErrorKind::dimension_mismatch, "minkowski_functional argument has wrong length");
    const double len = norm(x);
    if (!(len > 0.0)) throw Error(ErrorKind::domain, "minkowski_functional needs x != 0");
    const Vec v = normalized(x);
    return len / body.radial(ConstSpan(v));
}

std::optional<SegmentBounds> segment_from_radii(double rho_k, double rho_l, double tolerance) noexcept
{
    if (std::abs(rho_k - rho_l) <= tolerance * std::max(rho_k, rho_l)) return std::nullopt;
    if (rho_k > rho_l) return SegmentBounds{rho_l, rho_k, Region::K_minus_L};
    return SegmentBounds{rho_k, rho_l, Region::L_minus_K};
}

std::optional<RaySegment> symmetric_difference_ray(const StarBody& K, const StarBody& L, const Direction& v)
{
    if (K.dim() != L.dim()) throw Error(ErrorKind::dimension_mismatch, "K and L have different dimensions");
    const auto bounds = segment_from_radii(K.radial(v), L.radial(v));
    if (!bounds) return std::nullopt;
    return RaySegment{Vec(v.coords().begin(), v.coords().end()), bounds->lo, bounds->hi, bounds->region};
}

StarBody derived_body_example31(const StarBody& M, const SphericalQuadrature& quad)
{
    const int n = M.dim();
    if (quad.dim() != n) throw Error(ErrorKind::dimension_mismatch, "quadrature and body dimensions differ");
    const int res = std::max(quad.resolution(), 8);
    BodyDescription d;
    d.kind = BodyKind::derived;
    d.dim = n;
    d.children.push_back(M);
    d.resolution = res;
    auto model = std::make_shared<DerivedModel>(d, build_sphere_rule_any_dim(n - 1, res));

    // Compare against a coarser rule at the coordinate axes and a diagonal.
    const SphericalQuadrature coarse = build_sphere_rule_any_dim(n - 1, std::max(4, (2 * res) / 3));
    std::vector<Vec> probes;
    for (int i = 0; i < n; ++i) {
        Vec e(static_cast<std::size_t>(n), 0.0);
        e[static_cast<std::size_t>(i)] = 1.0;
        probes.push_back(e);
    }
    probes.push_back(normalized(Vec(static_cast<std::size_t>(n), 1.0)));
    for (const Vec& v : probes) {
        const double fine = model->eval(v);
        const double rough = model->eval_with(v, coarse);
        if (!(std::abs(fine - rough) <= 1e-8 * std::abs(fine)))
            throw Error(ErrorKind::accuracy, "derived body: subsphere resolution " + std::to_string(res) +
                                                 " too coarse (relative change " +
                                                 std::to_string(std::abs(fine - rough) / std::abs(fine)) + ")");
    }
    return StarBody(std::move(model));
}

}  // namespace bp
