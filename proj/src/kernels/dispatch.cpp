#include "lovabs/kernels.hpp"

#include <cstdlib>
#include <string_view>

#include "kernels_internal.hpp"
#include "lovabs/common.hpp"

namespace lovabs::simd {

namespace {

const KernelTable kScalar{
    "scalar",           scalar::hinge_slack, scalar::clip,  scalar::abs,
    scalar::gemv,       scalar::rank1_update, scalar::clamp,
};

#if defined(LOVABS_HAVE_AVX2)
const KernelTable kAvx2{
    "avx2",           avx2::hinge_slack,  avx2::clip,  avx2::abs,
    avx2::gemv,       avx2::rank1_update, avx2::clamp,
};
#endif

bool cpu_has_avx2() {
#if defined(LOVABS_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable& select() {
  if (const char* env = std::getenv("LOVABS_KERNELS")) {
    if (std::string_view(env) == "scalar") return kScalar;
  }
  if (const KernelTable* t = avx2_kernels()) return *t;
  return kScalar;
}

void check_size(std::size_t got, std::size_t want, const char* what) {
  if (got < want) throw DomainError(std::string(what) + ": buffer too small");
}

}  // namespace

const KernelTable& scalar_kernels() { return kScalar; }

const KernelTable* avx2_kernels() {
#if defined(LOVABS_HAVE_AVX2)
  static const bool ok = cpu_has_avx2();
  return ok ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active_kernels() {
  static const KernelTable& table = select();
  return table;
}

void hinge_slack(std::span<const double> u, std::span<const double> y,
                 std::span<double> out) {
  check_size(y.size(), u.size(), "hinge_slack");
  check_size(out.size(), u.size(), "hinge_slack");
  active_kernels().hinge_slack(u.data(), y.data(), out.data(), u.size());
}

void clip(std::span<const double> u, std::span<double> out) {
  check_size(out.size(), u.size(), "clip");
  active_kernels().clip(u.data(), out.data(), u.size());
}

void gemv(std::span<const double> w, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> out) {
  check_size(w.size(), rows * cols, "gemv");
  check_size(x.size(), cols, "gemv");
  check_size(out.size(), rows, "gemv");
  active_kernels().gemv(w.data(), rows, cols, x.data(), out.data());
}

void rank1_update(std::span<double> w, std::size_t rows, std::size_t cols,
                  std::span<const double> g, std::span<const double> x,
                  double scale) {
  check_size(w.size(), rows * cols, "rank1_update");
  check_size(g.size(), rows, "rank1_update");
  check_size(x.size(), cols, "rank1_update");
  active_kernels().rank1_update(w.data(), rows, cols, g.data(), x.data(),
                                scale);
}

void clamp(std::span<const double> v, double bound, std::span<double> out) {
  check_size(out.size(), v.size(), "clamp");
  active_kernels().clamp(v.data(), bound, out.data(), v.size());
}

}  // namespace lovabs::simd
