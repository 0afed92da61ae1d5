#include "kddids/simd.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)
#include <arm_neon.h>
#endif

namespace kddids::simd {

#if defined(__aarch64__) && defined(__ARM_NEON)

namespace {

// lanes 0-1 live in lo, lanes 2-3 in hi, matching the scalar lane layout
double dot_neon(const double *a, const double *b, std::size_t n) {
    float64x2_t lo = vdupq_n_f64(0.0);
    float64x2_t hi = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        lo = vaddq_f64(lo, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
        hi = vaddq_f64(hi, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
    }
    double acc[4];
    vst1q_f64(acc, lo);
    vst1q_f64(acc + 2, hi);
    for (std::size_t lane = 0; i < n; ++i, ++lane) acc[lane] += a[i] * b[i];
    return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

void axpy_neon(double alpha, const double *x, double *y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(alpha);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void momentum_step_neon(double step, const double *x, double momentum, double *v, double *w, std::size_t n) {
    const float64x2_t vs = vdupq_n_f64(step);
    const float64x2_t vm = vdupq_n_f64(momentum);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t vv = vaddq_f64(vmulq_f64(vm, vld1q_f64(v + i)), vmulq_f64(vs, vld1q_f64(x + i)));
        vst1q_f64(v + i, vv);
        vst1q_f64(w + i, vaddq_f64(vld1q_f64(w + i), vv));
    }
    for (; i < n; ++i) {
        v[i] = momentum * v[i] + step * x[i];
        w[i] += v[i];
    }
}

constexpr Kernels kNeon{"neon", dot_neon, axpy_neon, momentum_step_neon};

}  // namespace

const Kernels *neon() { return &kNeon; }

#else

const Kernels *neon() { return nullptr; }

#endif

}  // namespace kddids::simd
