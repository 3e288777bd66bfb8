#pragma once

// Dense arithmetic kernels used by the hinge evaluation and the trainer.
//
// Every kernel has a scalar reference implementation; an AVX2 variant is
// compiled on x86-64 and selected at first use when the CPU supports it.
// Setting LOVABS_KERNELS=scalar in the environment forces the reference path.
// Elementwise kernels are bit-identical across variants; reductions (gemv)
// may differ in the last few ulps because lanes are summed in another order.

#include <cstddef>
#include <span>
#include <string_view>

namespace lovabs::simd {

struct KernelTable {
  std::string_view name;

  /// out[i] = max(0, 1 - u[i] * y[i]).
  void (*hinge_slack)(const double* u, const double* y, double* out,
                      std::size_t n);
  /// out[i] = u[i] clamped to [-1, 1].
  void (*clip)(const double* u, double* out, std::size_t n);
  /// out[i] = |u[i]|.
  void (*abs)(const double* u, double* out, std::size_t n);
  /// out = W x for a row-major rows x cols matrix.
  void (*gemv)(const double* w, std::size_t rows, std::size_t cols,
               const double* x, double* out);
  /// W += scale * g x^T for a row-major rows x cols matrix.
  void (*rank1_update)(double* w, std::size_t rows, std::size_t cols,
                       const double* g, const double* x, double scale);
  /// out[i] = min(bound, max(-bound, v[i])).
  void (*clamp)(const double* v, double bound, double* out, std::size_t n);
};

const KernelTable& scalar_kernels();

/// nullptr when the AVX2 variant was not built or the CPU lacks AVX2.
const KernelTable* avx2_kernels();

/// The table selected for this process (AVX2 when available).
const KernelTable& active_kernels();

// Span conveniences over the active table.

void hinge_slack(std::span<const double> u, std::span<const double> y,
                 std::span<double> out);
void clip(std::span<const double> u, std::span<double> out);
void gemv(std::span<const double> w, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> out);
void rank1_update(std::span<double> w, std::size_t rows, std::size_t cols,
                  std::span<const double> g, std::span<const double> x,
                  double scale);
void clamp(std::span<const double> v, double bound, std::span<double> out);

}  // namespace lovabs::simd
