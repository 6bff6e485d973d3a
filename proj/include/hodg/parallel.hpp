#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hodg {

/// Number of workers used by data-parallel passes. Zero means "runtime default".
void set_workers(int n);
int workers();

/// Sets flush-to-zero and denormals-are-zero on the calling thread and on
/// every worker for its lifetime, then restores the previous modes. No-op
/// on targets without SSE control registers.
class FlushDenormals {
public:
    FlushDenormals();
    ~FlushDenormals();
    FlushDenormals(const FlushDenormals&) = delete;
    FlushDenormals& operator=(const FlushDenormals&) = delete;

private:
    unsigned saved_ = 0;
};

/// Static-partitioned parallel loop over [0, n). Every index is visited once;
/// callers must write only to slots owned by their index.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
#ifdef _OPENMP
    const int nt = workers();
    if (nt > 1 && n > 1) {
        const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(static) num_threads(nt)
        for (long long i = 0; i < count; ++i) fn(static_cast<std::size_t>(i));
        return;
    }
#endif
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

}  // namespace hodg
