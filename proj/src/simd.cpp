#include "kddids/simd.hpp"

#include <atomic>
#include <cstdlib>

namespace kddids::simd {

namespace {

double dot_scalar(const double *a, const double *b, std::size_t n) {
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc[0] += a[i] * b[i];
        acc[1] += a[i + 1] * b[i + 1];
        acc[2] += a[i + 2] * b[i + 2];
        acc[3] += a[i + 3] * b[i + 3];
    }
    for (std::size_t lane = 0; i < n; ++i, ++lane) acc[lane] += a[i] * b[i];
    return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

void axpy_scalar(double alpha, const double *x, double *y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void momentum_step_scalar(double step, const double *x, double momentum, double *v, double *w, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = momentum * v[i] + step * x[i];
        w[i] += v[i];
    }
}

constexpr Kernels kScalar{"scalar", dot_scalar, axpy_scalar, momentum_step_scalar};

const Kernels *best_available() {
    if (const auto *k = avx2()) return k;
    if (const auto *k = neon()) return k;
    return &kScalar;
}

const Kernels *by_name(std::string_view name) {
    if (name == "scalar") return &kScalar;
    if (name == "avx2") return avx2();
    if (name == "neon") return neon();
    return nullptr;
}

std::atomic<const Kernels *> &current() {
    static std::atomic<const Kernels *> k{[] {
        if (const char *env = std::getenv("KDDIDS_SIMD")) {
            if (const auto *chosen = by_name(env)) return chosen;
        }
        return best_available();
    }()};
    return k;
}

}  // namespace

const Kernels &scalar() { return kScalar; }

const Kernels &active() { return *current().load(std::memory_order_acquire); }

bool select(std::string_view name) {
    const Kernels *k = by_name(name);
    if (!k) return false;
    current().store(k, std::memory_order_release);
    return true;
}

}  // namespace kddids::simd
