#include "bp/harmonics.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace bp;

TEST_CASE("gegenbauer zonal values")
{
    for (int n : {3, 4, 5, 7}) {
        CHECK(gegenbauer_zonal(n, 0, 0.3) == 1.0);
        CHECK(gegenbauer_zonal(n, 6, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    }
    CHECK(gegenbauer_zonal(3, 2, 0.0) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(gegenbauer_zonal(3, 4, 0.0) == doctest::Approx(3.0 / 8.0).epsilon(1e-15));
    // n = 5: C_2^{3/2}(t) ∝ 5t^2 - 1, so P_2(0) = -1/4
    CHECK(gegenbauer_zonal(5, 2, 0.0) == doctest::Approx(-0.25).epsilon(1e-14));
    Vec all(7);
    gegenbauer_zonal_all(4, 6, 0.37, all);
    for (int m = 0; m <= 6; ++m) CHECK(all[static_cast<std::size_t>(m)] == doctest::Approx(gegenbauer_zonal(4, m, 0.37)));
}

TEST_CASE("gegenbauer kernels are orthogonal on the sphere")
{
    // P_2 for n = 5 checked by numerical orthogonality against degrees 0 and 4.
    const SphericalQuadrature q = build_sphere_quadrature(5, 8);
    const Vec u = {0.0, 0.0, 0.0, 0.0, 1.0};
    auto inner = [&](int a, int b) {
        return integrate_sphere([&](ConstSpan v) { return gegenbauer_zonal(5, a, dot(v, u)) * gegenbauer_zonal(5, b, dot(v, u)); }, q);
    };
    CHECK(std::abs(inner(2, 0)) < 1e-12);
    CHECK(std::abs(inner(2, 4)) < 1e-12);
    // ||P_m||^2 = |S^{n-1}| / dim_{n,m}
    CHECK(inner(2, 2) == doctest::Approx(sphere_area(5) / harmonic_dimension(5, 2)).epsilon(1e-12));
}

TEST_CASE("harmonic dimensions")
{
    CHECK(harmonic_dimension(3, 0) == 1);
    CHECK(harmonic_dimension(3, 2) == 5);
    CHECK(harmonic_dimension(4, 2) == 9);
    CHECK(harmonic_dimension(5, 4) == 55);
    CHECK(harmonic_dimensions_consistent(10, 12));
}

TEST_CASE("degree projections of simple functions")
{
    const SphericalQuadrature q = build_sphere_quadrature(3, 12);
    const Vec v = {0.6, 0.0, 0.8};
    const DegreeProjection c0 = degree_projection([](ConstSpan) { return 2.5; }, 0, q);
    const DegreeProjection c2 = degree_projection([](ConstSpan) { return 2.5; }, 2, q);
    CHECK(c0(v) == doctest::Approx(2.5).epsilon(1e-13));
    CHECK(std::abs(c2(v)) < 1e-10);
    const DegreeProjection z0 = degree_projection([](ConstSpan x) { return x[2] * x[2]; }, 0, q);
    CHECK(z0(v) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("zonal eigenfunctions are reproduced")
{
    const Vec u = normalized(Vec{1.0, 2.0, -1.0});
    const SphericalQuadrature q = build_sphere_quadrature(3, 12);
    const SphereFunction f = [&](ConstSpan v) { return gegenbauer_zonal(3, 4, dot(v, u)); };
    const HarmonicExpansion e = expand(f, 8, q);
    for (int m = 0; m <= 8; m += 2) {
        const ConstSpan c = e.component(m);
        double worst = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            const double target = m == 4 ? f(e.evaluation().node(i)) : 0.0;
            worst = std::max(worst, std::abs(c[i] - target));
        }
        CHECK(worst < 1e-8);
    }
    CHECK(e.tail_energy() < 1e-10);
}

TEST_CASE("constant expands to degree zero only")
{
    const HarmonicExpansion e = expand([](ConstSpan) { return 1.0; }, 8, build_sphere_quadrature(4, 10));
    for (double x : e.component(0)) CHECK(x == doctest::Approx(1.0).epsilon(1e-12));
    for (double x : e.component(2)) CHECK(std::abs(x) < 1e-12);
    for (double x : e.component(3)) CHECK(x == 0.0);
    CHECK(e.tail_energy() < 1e-20);
}

TEST_CASE("band-limited reconstruction, orthogonality and Bessel")
{
    std::mt19937_64 rng(11);
    const Vec u1 = bp::testing::random_unit(rng, 3), u2 = bp::testing::random_unit(rng, 3);
    // Degrees 0 and 2 from the perturbed-ball family, plus a degree 6 term.
    const SphereFunction f = [&](ConstSpan v) {
        return 1.0 + 0.1 * gegenbauer_zonal(3, 2, dot(v, u1)) + 0.05 * gegenbauer_zonal(3, 6, dot(v, u2));
    };
    const SphericalQuadrature q = build_sphere_quadrature(3, 12);
    const HarmonicExpansion e = expand(f, 8, q, &q);
    CHECK(e.tail_energy() < 1e-10);
    double bessel = 0.0;
    for (int m = 0; m <= 8; m += 2) {
        const ConstSpan a = e.component(m);
        for (int k = m + 2; k <= 8; k += 2) {
            const ConstSpan b = e.component(k);
            double ip = 0.0, na = 0.0, nb = 0.0;
            for (std::size_t i = 0; i < q.size(); ++i) {
                ip += q.weight(i) * a[i] * b[i];
                na += q.weight(i) * a[i] * a[i];
                nb += q.weight(i) * b[i] * b[i];
            }
            CHECK(std::abs(ip) <= 1e-8 * std::sqrt(na * nb) + 1e-14);
        }
        for (std::size_t i = 0; i < q.size(); ++i) bessel += q.weight(i) * a[i] * a[i];
    }
    CHECK(bessel <= e.norm_squared() * (1 + 1e-8));
    const Vec at = e.components_at(u1);
    CHECK(at[1] == doctest::Approx(0.1).epsilon(1e-10));
}

TEST_CASE("non band-limited functions report tail energy")
{
    const SphericalQuadrature q = build_sphere_quadrature(3, 24);
    const HarmonicExpansion e = expand([](ConstSpan v) { return std::exp(4.0 * v[0] * v[0]); }, 2, q, nullptr, 1e-6);
    CHECK(e.tail_energy() > 1e-6);
    CHECK(e.tail_flagged());
}

TEST_CASE("projection resolution is enforced")
{
    CHECK_THROWS(degree_projection([](ConstSpan) { return 1.0; }, 8, build_sphere_quadrature(3, 8)));
    CHECK_NOTHROW(require_projection_accuracy(build_sphere_quadrature(3, 9), 8));
}
