#ifndef SGDOM_PARALLEL_HPP
#define SGDOM_PARALLEL_HPP

#include <cstddef>
#include <exception>
#include <mutex>

#if defined(SGDOM_HAVE_OPENMP)
#include <omp.h>
#endif

namespace sgdom {

/// Runs body(i) for i in [0, n). When parallel is true and OpenMP is
/// available the iterations are distributed across threads; results must
/// be written to per-index slots so the output is identical to the
/// serial reference path. The first exception thrown by any iteration is
/// rethrown on the calling thread.
template <typename Body>
void parallel_for(std::size_t n, bool parallel, Body&& body) {
#if defined(SGDOM_HAVE_OPENMP)
    if (parallel) {
        std::exception_ptr first_error;
        std::mutex error_mutex;
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            try {
                body(static_cast<std::size_t>(i));
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
        if (first_error) std::rethrow_exception(first_error);
        return;
    }
#else
    (void)parallel;
#endif
    for (std::size_t i = 0; i < n; ++i) {
        body(i);
    }
}

}  // namespace sgdom

#endif  // SGDOM_PARALLEL_HPP
