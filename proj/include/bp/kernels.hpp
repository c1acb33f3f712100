#pragma once

// Data-parallel inner loops. Every kernel has a serial reference version and
// an OpenMP version computing each output with the same operation order, so
// results are bitwise identical for any worker count.

#include "bp/vec.hpp"

#include <cstddef>
#include <span>

namespace bp {

enum class Exec { serial, parallel };

/// Worker count used by Exec::parallel. BP_THREADS (if set, >= 1) caps it.
int worker_count();
/// Overrides the worker count (testing, benchmarks); 0 restores the default.
/// Negative values are a domain error.
void set_worker_count(int workers);

/// out[i] = fn(i) for i in [0, out.size()).
template <class Fn>
void map_indices(Exec exec, std::span<double> out, Fn&& fn)
{
    const auto count = static_cast<long long>(out.size());
    if (exec == Exec::serial) {
        for (long long i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
        return;
    }
    const int workers = worker_count();
#pragma omp parallel for schedule(static) num_threads(workers)
    for (long long i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
}

/// Degree-wise zonal sums over a point set:
///   out[k * eval_count + i] = sum_j coeff[j] * P_{2k}(<x_i, y_j>),  k = 0..max_degree/2,
/// where P_m is the normalized Gegenbauer polynomial for S^{n-1} and the
/// points are stored flat with stride n. The j-sum runs in index order.
void zonal_sums_serial(int n, int max_degree, ConstSpan eval_points, ConstSpan source_points,
                       ConstSpan source_coeffs, std::span<double> out);
void zonal_sums_parallel(int n, int max_degree, ConstSpan eval_points, ConstSpan source_points,
                         ConstSpan source_coeffs, std::span<double> out);

inline void zonal_sums(Exec exec, int n, int max_degree, ConstSpan eval_points, ConstSpan source_points,
                       ConstSpan source_coeffs, std::span<double> out)
{
    if (exec == Exec::serial)
        zonal_sums_serial(n, max_degree, eval_points, source_points, source_coeffs, out);
    else
        zonal_sums_parallel(n, max_degree, eval_points, source_points, source_coeffs, out);
}

}  // namespace bp
