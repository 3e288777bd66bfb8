#include "kernels_internal.hpp"

#include <algorithm>
#include <cmath>

namespace lovabs::simd::scalar {

void hinge_slack(const double* u, const double* y, double* out,
                 std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double s = 1.0 - u[i] * y[i];
    out[i] = s > 0.0 ? s : 0.0;
  }
}

void clip(const double* u, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::min(1.0, std::max(-1.0, u[i]));
  }
}

void abs(const double* u, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::fabs(u[i]);
}

void gemv(const double* w, std::size_t rows, std::size_t cols,
          const double* x, double* out) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = w + r * cols;
    double acc = 0.0;
    for (std::size_t c = 0; c < cols; ++c) acc += row[c] * x[c];
    out[r] = acc;
  }
}

void rank1_update(double* w, std::size_t rows, std::size_t cols,
                  const double* g, const double* x, double scale) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double a = scale * g[r];
    double* row = w + r * cols;
    for (std::size_t c = 0; c < cols; ++c) row[c] += a * x[c];
  }
}

void clamp(const double* v, double bound, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::min(bound, std::max(-bound, v[i]));
  }
}

}  // namespace lovabs::simd::scalar
