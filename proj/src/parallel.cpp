#include "hodg/parallel.hpp"

#include <atomic>

#if defined(__SSE2__)
#include <xmmintrin.h>
#endif

namespace hodg {

namespace {
std::atomic<int> g_workers{0};
}

void set_workers(int n) { g_workers.store(n < 0 ? 0 : n); }

int workers() {
    const int n = g_workers.load();
    if (n > 0) return n;
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace {

#if defined(__SSE2__)
constexpr unsigned kFlushBits = 0x8040;  // FTZ | DAZ

void on_all_workers(unsigned csr) {
#ifdef _OPENMP
    const int nt = workers();
    if (nt > 1) {
#pragma omp parallel num_threads(nt)
        _mm_setcsr(csr);
    }
#endif
    _mm_setcsr(csr);
}
#endif

}  // namespace

FlushDenormals::FlushDenormals() {
#if defined(__SSE2__)
    saved_ = _mm_getcsr();
    on_all_workers(saved_ | kFlushBits);
#endif
}

FlushDenormals::~FlushDenormals() {
#if defined(__SSE2__)
    on_all_workers(saved_);
#endif
}

}  // namespace hodg
