#include "bp/kernels.hpp"

#include "bp/error.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bp {

namespace {

std::atomic<int> g_worker_override{0};

int default_workers()
{
#ifdef _OPENMP
    int workers = omp_get_max_threads();
#else
    int workers = 1;
#endif
    if (const char* env = std::getenv("BP_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) workers = std::min(workers, cap);
    }
    return std::max(workers, 1);
}

struct Recurrence {
    std::vector<double> a;  // (2k + n - 2) / (k + n - 2)
    std::vector<double> b;  // k / (k + n - 2)

    Recurrence(int n, int max_degree) : a(static_cast<std::size_t>(max_degree) + 1), b(a.size())
    {
        for (int k = 1; k <= max_degree; ++k) {
            a[static_cast<std::size_t>(k)] = (2.0 * k + n - 2) / (k + n - 2.0);
            b[static_cast<std::size_t>(k)] = static_cast<double>(k) / (k + n - 2.0);
        }
    }
};

void zonal_row(int n, int max_degree, const Recurrence& rec, ConstSpan x, ConstSpan sources, ConstSpan coeffs,
               std::span<double> acc)
{
    const std::size_t dim = static_cast<std::size_t>(n);
    const std::size_t count = coeffs.size();
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t j = 0; j < count; ++j) {
        const double* y = sources.data() + j * dim;
        double t = 0.0;
        for (std::size_t d = 0; d < dim; ++d) t += x[d] * y[d];
        t = std::clamp(t, -1.0, 1.0);
        const double c = coeffs[j];
        double prev = 1.0;  // P_0
        double cur = t;     // P_1
        acc[0] += c;
        for (int k = 1; k < max_degree; ++k) {
            const double next = rec.a[static_cast<std::size_t>(k)] * t * cur - rec.b[static_cast<std::size_t>(k)] * prev;
            prev = cur;
            cur = next;
            // cur now holds P_{k+1}
            if ((k + 1) % 2 == 0) acc[static_cast<std::size_t>((k + 1) / 2)] += c * cur;
        }
    }
}

void check_shapes(int n, int max_degree, ConstSpan eval_points, ConstSpan source_points, ConstSpan source_coeffs,
                  std::span<const double> out)
{
    if (n < 2 || max_degree < 0 || max_degree % 2 != 0)
        throw Error(ErrorKind::domain, "zonal_sums needs n >= 2 and an even max_degree");
    const std::size_t dim = static_cast<std::size_t>(n);
    if (eval_points.size() % dim != 0 || source_points.size() != source_coeffs.size() * dim)
        throw Error(ErrorKind::dimension_mismatch, "zonal_sums point arrays do not match n");
    const std::size_t eval_count = eval_points.size() / dim;
    if (out.size() != eval_count * static_cast<std::size_t>(max_degree / 2 + 1))
        throw Error(ErrorKind::dimension_mismatch, "zonal_sums output has wrong size");
}

template <bool Parallel>
void zonal_sums_impl(int n, int max_degree, ConstSpan eval_points, ConstSpan source_points, ConstSpan source_coeffs,
                     std::span<double> out)
{
    check_shapes(n, max_degree, eval_points, source_points, source_coeffs, out);
    const std::size_t dim = static_cast<std::size_t>(n);
    const auto eval_count = static_cast<long long>(eval_points.size() / dim);
    const std::size_t degrees = static_cast<std::size_t>(max_degree / 2 + 1);
    const Recurrence rec(n, std::max(max_degree, 1));

    auto body = [&](long long i, std::vector<double>& acc) {
        const ConstSpan x(eval_points.data() + static_cast<std::size_t>(i) * dim, dim);
        zonal_row(n, max_degree, rec, x, source_points, source_coeffs, acc);
        for (std::size_t k = 0; k < degrees; ++k)
            out[k * static_cast<std::size_t>(eval_count) + static_cast<std::size_t>(i)] = acc[k];
    };

    if constexpr (Parallel) {
        const int workers = worker_count();
#pragma omp parallel num_threads(workers)
        {
            std::vector<double> acc(degrees);
#pragma omp for schedule(dynamic, 16)
            for (long long i = 0; i < eval_count; ++i) body(i, acc);
        }
    } else {
        std::vector<double> acc(degrees);
        for (long long i = 0; i < eval_count; ++i) body(i, acc);
    }
}

}  // namespace

int worker_count()
{
    const int forced = g_worker_override.load();
    if (forced >= 1) return forced;
    static const int workers = default_workers();
    return workers;
}

void set_worker_count(int workers)
{
    if (workers < 0) throw Error(ErrorKind::domain, "worker count must be >= 0");
    g_worker_override.store(workers);
}

void zonal_sums_serial(int n, int max_degree, ConstSpan eval_points, ConstSpan source_points,
                       ConstSpan source_coeffs, std::span<double> out)
{
    zonal_sums_impl<false>(n, max_degree, eval_points, source_points, source_coeffs, out);
}

void zonal_sums_parallel(int n, int max_degree, ConstSpan eval_points, ConstSpan source_points,
                         ConstSpan source_coeffs, std::span<double> out)
{
    zonal_sums_impl<true>(n, max_degree, eval_points, source_points, source_coeffs, out);
}

}  // namespace bp
