#include "kddids/simd.hpp"

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace kddids::simd {

#if defined(__AVX2__)

namespace {

double dot_avx2(const double *a, const double *b, std::size_t n) {
    __m256d vacc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        vacc = _mm256_add_pd(vacc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    }
    alignas(32) double acc[4];
    _mm256_store_pd(acc, vacc);
    for (std::size_t lane = 0; i < n; ++i, ++lane) acc[lane] += a[i] * b[i];
    return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

void axpy_avx2(double alpha, const double *x, double *y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_add_pd(_mm256_loadu_pd(y + i), _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void momentum_step_avx2(double step, const double *x, double momentum, double *v, double *w, std::size_t n) {
    const __m256d vs = _mm256_set1_pd(step);
    const __m256d vm = _mm256_set1_pd(momentum);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vv = _mm256_add_pd(_mm256_mul_pd(vm, _mm256_loadu_pd(v + i)), _mm256_mul_pd(vs, _mm256_loadu_pd(x + i)));
        _mm256_storeu_pd(v + i, vv);
        _mm256_storeu_pd(w + i, _mm256_add_pd(_mm256_loadu_pd(w + i), vv));
    }
    for (; i < n; ++i) {
        v[i] = momentum * v[i] + step * x[i];
        w[i] += v[i];
    }
}

constexpr Kernels kAvx2{"avx2", dot_avx2, axpy_avx2, momentum_step_avx2};

}  // namespace

const Kernels *avx2() {
    static const bool supported = __builtin_cpu_supports("avx2");
    return supported ? &kAvx2 : nullptr;
}

#else

const Kernels *avx2() { return nullptr; }

#endif

}  // namespace kddids::simd
