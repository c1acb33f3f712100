#include "bp/quadrature.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace bp;
using bp::testing::relative;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("product rule weights sum to the sphere area")
{
    CHECK(relative(build_sphere_quadrature(3, 32).total_weight(), 4 * pi) < 1e-10);
    CHECK(relative(build_sphere_quadrature(4, 16).total_weight(), 2 * pi * pi) < 1e-10);
    CHECK(relative(build_sphere_quadrature(5, 8).total_weight(), 8 * pi * pi / 3) < 1e-10);
}

TEST_CASE("monte carlo weights are normalized by construction")
{
    const SphericalQuadrature q = build_sphere_quadrature(5, 12, QuadratureScheme::monte_carlo, 7);
    CHECK(relative(q.total_weight(), 8 * pi * pi / 3) < 1e-12);
    CHECK(q.exact_degree() == -1);
    const SphericalQuadrature again = build_sphere_quadrature(5, 12, QuadratureScheme::monte_carlo, 7);
    CHECK(std::equal(q.flat_nodes().begin(), q.flat_nodes().end(), again.flat_nodes().begin()));
}

TEST_CASE("node sets are antipodally symmetric with equal weights")
{
    for (const auto& q : {build_sphere_quadrature(3, 9), build_sphere_quadrature(4, 6),
                          build_sphere_quadrature(6, 4, QuadratureScheme::monte_carlo, 3)}) {
        std::size_t half = 0;
        for (std::size_t i = 0; i < q.size(); ++i) {
            const std::size_t j = q.antipode(i);
            CHECK(q.weight(i) == q.weight(j));
            for (int d = 0; d < q.dim(); ++d) CHECK(q.node(i)[d] == doctest::Approx(-q.node(j)[d]).epsilon(1e-15));
            CHECK(std::abs(norm(q.node(i)) - 1.0) < 1e-14);
        }
        half = q.half_indices().size();
        CHECK(2 * half == q.size());
    }
}

TEST_CASE("odd integrands vanish and polynomials are exact")
{
    const SphericalQuadrature q = build_sphere_quadrature(3, 12);
    double wsum = 0.0;
    for (double w : q.weights()) wsum += std::abs(w);
    const double odd = integrate_sphere([](ConstSpan v) { return v[0] * v[0] * v[0] + v[1] * v[2] * v[2]; }, q);
    CHECK(std::abs(odd) <= 1e-13 * wsum);
    // ∫ v_3^2 = 4π/3, ∫ v_1^4 = 4π/5, ∫ v_1^2 v_2^2 v_3^2 = 4π/105
    CHECK(relative(integrate_sphere([](ConstSpan v) { return v[2] * v[2]; }, q), 4 * pi / 3) < 1e-13);
    CHECK(relative(integrate_sphere([](ConstSpan v) { return std::pow(v[0], 4); }, q), 4 * pi / 5) < 1e-13);
    CHECK(relative(integrate_sphere([](ConstSpan v) { return v[0] * v[0] * v[1] * v[1] * v[2] * v[2]; }, q),
                   4 * pi / 105) < 1e-12);
    CHECK(q.exact_degree() == 23);
}

TEST_CASE("exactness limit in n = 5")
{
    // ∫_{S^4} v_1^2 = |S^4| / 5
    const SphericalQuadrature q = build_sphere_quadrature(5, 4);
    const double area = 8 * pi * pi / 3;
    CHECK(relative(integrate_sphere([](ConstSpan v) { return v[4] * v[4]; }, q), area / 5) < 1e-12);
    CHECK(relative(integrate_sphere([](ConstSpan v) { return v[0] * v[0]; }, q), area / 5) < 1e-12);
}

TEST_CASE("refinement of a smooth non-polynomial integrand converges")
{
    auto f = [](ConstSpan v) { return std::exp(v[0] + 0.5 * v[2]); };
    const double exact = integrate_sphere(f, build_sphere_quadrature(3, 40));
    double previous = std::abs(integrate_sphere(f, build_sphere_quadrature(3, 4)) - exact);
    for (int res : {8, 16}) {
        const double err = std::abs(integrate_sphere(f, build_sphere_quadrature(3, res)) - exact);
        CHECK((err <= previous / 4 || err < 1e-10));
        previous = err;
    }
}

TEST_CASE("subsphere rule lies in the hyperplane")
{
    std::mt19937_64 rng(5);
    for (int n : {3, 4, 5}) {
        for (int trial = 0; trial < 5; ++trial) {
            const Vec xi = bp::testing::random_unit(rng, n);
            const SubsphereQuadrature s = build_subsphere_quadrature(xi, 10);
            double total = 0.0;
            for (std::size_t i = 0; i < s.size(); ++i) {
                CHECK(std::abs(dot(s.node(i), xi)) < 1e-12);
                CHECK(std::abs(norm(s.node(i)) - 1.0) < 1e-12);
                total += s.weight(i);
            }
            CHECK(relative(total, sphere_area(n - 1)) < 1e-10);
        }
    }
}

TEST_CASE("subsphere examples")
{
    const Vec e3 = {0.0, 0.0, 1.0};
    const SubsphereQuadrature eq = build_subsphere_quadrature(e3, 16);
    for (std::size_t i = 0; i < eq.size(); ++i) CHECK(std::abs(eq.node(i)[2]) < 1e-15);
    CHECK(relative(integrate_subsphere([](ConstSpan) { return 1.0; }, eq), 2 * pi) < 1e-10);
    CHECK(relative(integrate_subsphere([](ConstSpan w) { return dot(w, w); }, eq), 2 * pi) < 1e-12);

    const SubsphereQuadrature x1 = build_subsphere_quadrature(Vec{1.0, 0.0, 0.0}, 16);
    CHECK(std::abs(integrate_subsphere([](ConstSpan w) { return w[0] * w[0]; }, x1)) < 1e-12);

    const SubsphereQuadrature s4 = build_subsphere_quadrature(Vec{0.5, 0.5, 0.5, 0.5}, 8);
    CHECK(relative(integrate_subsphere([](ConstSpan) { return 1.0; }, s4), 4 * pi) < 1e-10);
}

TEST_CASE("subsphere rule is rotation covariant")
{
    std::mt19937_64 rng(9);
    auto f = [](ConstSpan w) { return std::cos(3.0 * dot(w, w)); };
    const double ref = integrate_subsphere(f, build_subsphere_quadrature(Vec{0.0, 0.0, 0.0, 1.0}, 8));
    for (int t = 0; t < 5; ++t) {
        const Vec xi = bp::testing::random_unit(rng, 4);
        CHECK(relative(integrate_subsphere(f, build_subsphere_quadrature(xi, 8)), ref) < 1e-10);
    }
}

TEST_CASE("radial rule")
{
    const RadialRule rule(8);
    CHECK(std::abs(integrate_radial([](double r) { return r * r; }, 0.0, 1.0, rule) - 1.0 / 3.0) < 1e-14);
    // degree 15 is the exactness limit of 8 points
    const double exact = (std::pow(2.0, 16) - 1.0) / 16.0;
    CHECK(relative(rule.integrate([](double r) { return std::pow(r, 15); }, 1.0, 2.0), exact) < 1e-12);
}

TEST_CASE("gauss gegenbauer weights integrate the weight function")
{
    // ∫_{-1}^{1} (1 - t^2)^{1/2} dt = π/2
    const GaussRule g = gauss_gegenbauer(7, 0.5);
    double s = 0.0;
    for (double w : g.weights) s += w;
    CHECK(relative(s, pi / 2) < 1e-13);
}

TEST_CASE("pairwise sum is order fixed and accurate")
{
    Vec values(1000, 0.1);
    CHECK(std::abs(pairwise_sum(values) - 100.0) < 1e-12);
    CHECK(pairwise_sum(Vec{}) == 0.0);
}

TEST_CASE("invalid arguments are rejected")
{
    CHECK_THROWS(build_sphere_quadrature(2, 8));
    CHECK_THROWS(build_sphere_quadrature(3, 0));
    CHECK_THROWS(build_subsphere_quadrature(Vec{1.0, 1.0, 0.0}, 8));
    CHECK_THROWS(RadialRule(0));
}
