#include "lovabs/lovasz.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "lovabs/kernels.hpp"

namespace lovabs {

namespace {

void check_dim(std::size_t n, int k, const char* what) {
  if (n != static_cast<std::size_t>(k)) {
    throw DomainError(std::string(what) + ": vector length " + std::to_string(n) +
                      " does not match k=" + std::to_string(k));
  }
}

/// Fixed-capacity descending order; k <= kMaxK everywhere a table exists.
template <std::size_t N>
int order_into(std::span<const double> x, std::array<int, N>& idx) {
  const int k = static_cast<int>(x.size());
  std::iota(idx.begin(), idx.begin() + k, 0);
  std::stable_sort(idx.begin(), idx.begin() + k,
                   [&](int a, int b) { return x[static_cast<std::size_t>(a)] > x[static_cast<std::size_t>(b)]; });
  return k;
}

double extension_sorted(const SetFunction& f, std::span<const double> x) {
  std::array<int, kMaxK> idx{};
  const int k = order_into(x, idx);
  double total = 0.0;
  Mask prefix = 0;
  double prev = 0.0;
  for (int j = 0; j < k; ++j) {
    const int i = idx[static_cast<std::size_t>(j)];
    prefix |= Mask{1} << i;
    const double cur = f(prefix);
    total += x[static_cast<std::size_t>(i)] * (cur - prev);
    prev = cur;
  }
  return total;
}

void label_signs(const Label& y, std::span<double> out) {
  for (int i = 0; i < y.k; ++i) out[static_cast<std::size_t>(i)] = static_cast<double>(y.sign(i));
}

}  // namespace

std::vector<int> descending_order(std::span<const double> x) {
  std::vector<int> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return x[static_cast<std::size_t>(a)] > x[static_cast<std::size_t>(b)]; });
  return idx;
}

double lovasz_extension(const SetFunction& f, std::span<const double> x) {
  check_dim(x.size(), f.k(), "lovasz_extension");
  for (double xi : x) {
    if (!(xi >= 0.0)) throw DomainError("lovasz_extension: entries must be nonnegative");
  }
  return extension_sorted(f, x);
}

std::vector<double> clip(std::span<const double> u) {
  std::vector<double> out(u.size());
  simd::clip(u, out);
  return out;
}

double hinge(const PolymatroidCollection& fc, std::span<const double> u, const Label& y) {
  check_dim(u.size(), fc.k(), "hinge");
  require_same_k(fc.k(), y.k, "hinge");
  const std::size_t k = u.size();
  std::array<double, kMaxK> signs{};
  std::array<double, kMaxK> slack{};
  label_signs(y, signs);
  simd::hinge_slack(u, std::span<const double>(signs.data(), k), std::span<double>(slack.data(), k));
  return extension_sorted(fc.at(y), std::span<const double>(slack.data(), k));
}

std::vector<double> hinge_subgradient(const PolymatroidCollection& fc, std::span<const double> u,
                                      const Label& y) {
  check_dim(u.size(), fc.k(), "hinge_subgradient");
  require_same_k(fc.k(), y.k, "hinge_subgradient");
  const std::size_t k = u.size();
  std::array<double, kMaxK> signs{};
  std::array<double, kMaxK> slack{};
  label_signs(y, signs);
  simd::hinge_slack(u, std::span<const double>(signs.data(), k), std::span<double>(slack.data(), k));

  const SetFunction& f = fc.at(y);
  std::array<int, kMaxK> idx{};
  order_into(std::span<const double>(slack.data(), k), idx);
  std::vector<double> g(k, 0.0);
  Mask prefix = 0;
  double prev = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const int i = idx[j];
    prefix |= Mask{1} << i;
    const double cur = f(prefix);
    const auto ii = static_cast<std::size_t>(i);
    if (slack[ii] > 0.0) g[ii] = -signs[ii] * (cur - prev);
    prev = cur;
  }
  return g;
}

double bep_surrogate(std::span<const double> u, const Label& code) {
  check_dim(u.size(), code.k, "bep_surrogate");
  double best = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < code.k; ++j) best = std::max(best, code.sign(j) * u[static_cast<std::size_t>(j)]);
  return std::max(0.0, best + 1.0);
}

double expected_hinge(const PolymatroidCollection& fc, std::span<const double> u,
                      const LabelDistribution& p) {
  require_same_k(fc.k(), p.k(), "expected_hinge");
  double total = 0.0;
  for (Mask y = 0; y < p.probs().size(); ++y) {
    const double py = p[y];
    if (py > 0.0) total += py * hinge(fc, u, Label{p.k(), y});
  }
  return total;
}

std::vector<double> OrderedDecomposition::reconstruct() const {
  const std::size_t k = order.size();
  std::vector<double> x(k, 0.0);
  for (std::size_t i = 1; i <= k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (has(vertices[i], static_cast<int>(j))) x[j] += alphas[i];
    }
  }
  return x;
}

OrderedDecomposition simplex_decompose(std::span<const double> x) {
  for (double xi : x) {
    if (!(xi >= 0.0 && xi <= 1.0)) throw DomainError("simplex_decompose: input must lie in [0,1]^k");
  }
  if (x.size() > static_cast<std::size_t>(kMaxK)) throw CapacityError("simplex_decompose: k too large");
  OrderedDecomposition d;
  d.order = descending_order(x);
  const std::size_t k = x.size();
  d.alphas.assign(k + 1, 0.0);
  d.vertices.assign(k + 1, 0);
  auto sorted = [&](std::size_t i) { return x[static_cast<std::size_t>(d.order[i - 1])]; };
  d.alphas[0] = 1.0 - (k > 0 ? sorted(1) : 0.0);
  for (std::size_t i = 1; i <= k; ++i) {
    d.vertices[i] = d.vertices[i - 1] | (Mask{1} << d.order[i - 1]);
    d.alphas[i] = i < k ? sorted(i) - sorted(i + 1) : sorted(k);
  }
  return d;
}

std::vector<double> to_vector(const AbstainReport& v) {
  std::vector<double> out(static_cast<std::size_t>(v.k));
  for (int i = 0; i < v.k; ++i) out[static_cast<std::size_t>(i)] = v.value(i);
  return out;
}

std::vector<double> to_vector(const Label& y) {
  std::vector<double> out(static_cast<std::size_t>(y.k));
  for (int i = 0; i < y.k; ++i) out[static_cast<std::size_t>(i)] = y.sign(i);
  return out;
}

}  // namespace lovabs
