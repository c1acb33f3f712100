// Serial vs OpenMP timings of the hot kernels, with a bitwise equality check.

#include "bp/engine.hpp"
#include "bp/kernels.hpp"
#include "bp/quadrature.hpp"

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>

namespace {

using namespace bp;

double seconds(const std::function<void()>& fn, int reps)
{
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / reps;
}

bool same_bits(ConstSpan a, ConstSpan b)
{
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

void report(const char* name, double serial, double parallel, bool equal)
{
    std::printf("%-28s serial %9.4f s  parallel %9.4f s  speedup %5.2fx  %s\n", name, serial, parallel,
                serial / parallel, equal ? "bitwise equal" : "MISMATCH");
}

}  // namespace

int main()
{
    std::printf("workers: %d\n", worker_count());
    bool all_equal = true;

    for (const auto& [n, res] : {std::pair{3, 48}, std::pair{5, 8}}) {
        const SphericalQuadrature quad = build_sphere_quadrature(n, res);
        const std::size_t count = quad.size();
        Vec coeffs(count);
        for (std::size_t i = 0; i < count; ++i) coeffs[i] = quad.weight(i) * (1.0 + 0.1 * quad.node(i)[0]);
        const int degree = 8;
        Vec a(static_cast<std::size_t>(degree / 2 + 1) * count), b(a.size());
        const double ts = seconds([&] { zonal_sums_serial(n, degree, quad.flat_nodes(), quad.flat_nodes(), coeffs, a); }, 2);
        const double tp = seconds([&] { zonal_sums_parallel(n, degree, quad.flat_nodes(), quad.flat_nodes(), coeffs, b); }, 2);
        const bool equal = same_bits(a, b);
        all_equal = all_equal && equal;
        char name[64];
        std::snprintf(name, sizeof name, "zonal_sums n=%d (%zu pts)", n, count);
        report(name, ts, tp, equal);
    }

    {
        const StarBody K = StarBody::ellipsoid({1.0, 1.0, 1.3});
        const StarBody L = StarBody::ball(3, 0.95);
        const SphericalQuadrature quad = build_sphere_quadrature(3, 96);
        const RadialRule radial(16);
        const Density d = Density::power(2.0);
        double vs = 0.0, vp = 0.0;
        const double ts = seconds([&] { vs = region_measure(Region::K_minus_L, d, K, L, quad, radial, Exec::serial); }, 5);
        const double tp = seconds([&] { vp = region_measure(Region::K_minus_L, d, K, L, quad, radial, Exec::parallel); }, 5);
        const bool equal = std::memcmp(&vs, &vp, sizeof vs) == 0;
        all_equal = all_equal && equal;
        report("region_measure n=3 res=96", ts, tp, equal);
    }

    return all_equal ? 0 : 1;
}
