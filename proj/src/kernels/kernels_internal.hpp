#pragma once

#include <cstddef>

namespace lovabs::simd {

namespace scalar {
void hinge_slack(const double* u, const double* y, double* out, std::size_t n);
void clip(const double* u, double* out, std::size_t n);
void abs(const double* u, double* out, std::size_t n);
void gemv(const double* w, std::size_t rows, std::size_t cols, const double* x,
          double* out);
void rank1_update(double* w, std::size_t rows, std::size_t cols,
                  const double* g, const double* x, double scale);
void clamp(const double* v, double bound, double* out, std::size_t n);
}  // namespace scalar

#if defined(LOVABS_HAVE_AVX2)
namespace avx2 {
void hinge_slack(const double* u, const double* y, double* out, std::size_t n);
void clip(const double* u, double* out, std::size_t n);
void abs(const double* u, double* out, std::size_t n);
void gemv(const double* w, std::size_t rows, std::size_t cols, const double* x,
          double* out);
void rank1_update(double* w, std::size_t rows, std::size_t cols,
                  const double* g, const double* x, double scale);
void clamp(const double* v, double bound, double* out, std::size_t n);
}  // namespace avx2
#endif

}  // namespace lovabs::simd
