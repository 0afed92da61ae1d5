// simd.hpp
//
// Dense double-precision kernels behind the perceptron.  Each kernel has a
// scalar reference and vector variants that produce bit-identical results:
// dot products accumulate in four interleaved lanes (element i goes to lane
// i % 4, tail elements to lanes 0..r-1) and reduce as (l0 + l1) + (l2 + l3),
// with no fused multiply-add anywhere.

#ifndef KDDIDS_SIMD_HPP
#define KDDIDS_SIMD_HPP

#include <cassert>
#include <cstddef>
#include <span>
#include <string_view>

namespace kddids::simd {

struct Kernels {
    std::string_view name;

    double (*dot)(const double *a, const double *b, std::size_t n);

    /// y += alpha * x
    void (*axpy)(double alpha, const double *x, double *y, std::size_t n);

    /// v = momentum * v + step * x; w += v
    void (*momentum_step)(double step, const double *x, double momentum, double *v, double *w, std::size_t n);
};

const Kernels &scalar();

/// nullptr when not compiled in or not supported by this CPU
const Kernels *avx2();
const Kernels *neon();

/// Kernels used by the library.  Chosen on first use: the best supported
/// variant, unless KDDIDS_SIMD names one of "scalar", "avx2", "neon".
const Kernels &active();

/// selects by name; returns false (and changes nothing) if unavailable
bool select(std::string_view name);

inline double dot(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    return active().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    assert(x.size() == y.size());
    active().axpy(alpha, x.data(), y.data(), x.size());
}

}  // namespace kddids::simd

#endif
