// AVX2 variants. This translation unit is compiled with -mavx2 (no FMA, so
// elementwise results round exactly like the scalar reference).

#include "kernels_internal.hpp"

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace lovabs::simd::avx2 {

namespace {
constexpr std::size_t kLanes = 4;
}

void hinge_slack(const double* u, const double* y, double* out,
                 std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(u + i),
                                       _mm256_loadu_pd(y + i));
    const __m256d s = _mm256_sub_pd(one, prod);
    _mm256_storeu_pd(out + i, _mm256_max_pd(s, zero));
  }
  for (; i < n; ++i) {
    const double s = 1.0 - u[i] * y[i];
    out[i] = s > 0.0 ? s : 0.0;
  }
}

void clip(const double* u, double* out, std::size_t n) {
  const __m256d hi = _mm256_set1_pd(1.0);
  const __m256d lo = _mm256_set1_pd(-1.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d v = _mm256_max_pd(_mm256_loadu_pd(u + i), lo);
    _mm256_storeu_pd(out + i, _mm256_min_pd(v, hi));
  }
  for (; i < n; ++i) out[i] = std::min(1.0, std::max(-1.0, u[i]));
}

void abs(const double* u, double* out, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(out + i, _mm256_andnot_pd(sign, _mm256_loadu_pd(u + i)));
  }
  for (; i < n; ++i) out[i] = std::fabs(u[i]);
}

void gemv(const double* w, std::size_t rows, std::size_t cols,
          const double* x, double* out) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = w + r * cols;
    __m256d acc = _mm256_setzero_pd();
    std::size_t c = 0;
    for (; c + kLanes <= cols; c += kLanes) {
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(row + c),
                                             _mm256_loadu_pd(x + c)));
    }
    alignas(32) double lanes[kLanes];
    _mm256_store_pd(lanes, acc);
    double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; c < cols; ++c) total += row[c] * x[c];
    out[r] = total;
  }
}

void rank1_update(double* w, std::size_t rows, std::size_t cols,
                  const double* g, const double* x, double scale) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double a = scale * g[r];
    const __m256d av = _mm256_set1_pd(a);
    double* row = w + r * cols;
    std::size_t c = 0;
    for (; c + kLanes <= cols; c += kLanes) {
      const __m256d upd = _mm256_mul_pd(av, _mm256_loadu_pd(x + c));
      _mm256_storeu_pd(row + c, _mm256_add_pd(_mm256_loadu_pd(row + c), upd));
    }
    for (; c < cols; ++c) row[c] += a * x[c];
  }
}

void clamp(const double* v, double bound, double* out, std::size_t n) {
  const __m256d hi = _mm256_set1_pd(bound);
  const __m256d lo = _mm256_set1_pd(-bound);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d t = _mm256_max_pd(_mm256_loadu_pd(v + i), lo);
    _mm256_storeu_pd(out + i, _mm256_min_pd(t, hi));
  }
  for (; i < n; ++i) out[i] = std::min(bound, std::max(-bound, v[i]));
}

}  // namespace lovabs::simd::avx2
