#pragma once

// Reference implementations used only by tests. They recompute quantities
// straight from their definitions (explicit vectors, all permutations, dense
// sampling) and share no code paths with the library beyond its data types.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "lovabs/setfn.hpp"

namespace oracles {

using lovabs::Mask;
using lovabs::PolymatroidCollection;
using lovabs::SetFunction;

inline bool in(Mask s, int i) { return ((s >> i) & 1u) != 0; }

/// f(S) = sum_j a_j phi_j(sum_{i in S} w_ji) + sum_{i in S} m_i with concave
/// nondecreasing phi_j; always a polymatroid, usually strictly submodular.
inline SetFunction random_polymatroid(int k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, 2);
  const int terms = 1 + static_cast<int>(unit(rng) * 3);
  std::vector<std::vector<double>> w(static_cast<std::size_t>(terms), std::vector<double>(static_cast<std::size_t>(k)));
  std::vector<double> a(static_cast<std::size_t>(terms)), cap(static_cast<std::size_t>(terms));
  std::vector<int> kind(static_cast<std::size_t>(terms));
  for (int j = 0; j < terms; ++j) {
    for (double& x : w[static_cast<std::size_t>(j)]) x = unit(rng);
    a[static_cast<std::size_t>(j)] = 0.2 + unit(rng);
    cap[static_cast<std::size_t>(j)] = 0.5 + unit(rng);
    kind[static_cast<std::size_t>(j)] = pick(rng);
  }
  std::vector<double> m(static_cast<std::size_t>(k));
  for (double& x : m) x = unit(rng) < 0.5 ? 0.0 : 0.3 * unit(rng);
  std::vector<double> values(std::size_t{1} << k);
  for (Mask s = 0; s < values.size(); ++s) {
    double total = 0.0;
    for (int j = 0; j < terms; ++j) {
      double z = 0.0;
      for (int i = 0; i < k; ++i) {
        if (in(s, i)) z += w[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
      }
      double phi = 0.0;
      switch (kind[static_cast<std::size_t>(j)]) {
        case 0: phi = std::sqrt(z); break;
        case 1: phi = std::min(z, cap[static_cast<std::size_t>(j)]); break;
        default: phi = 1.0 - std::exp(-z); break;
      }
      total += a[static_cast<std::size_t>(j)] * phi;
    }
    for (int i = 0; i < k; ++i) {
      if (in(s, i)) total += m[static_cast<std::size_t>(i)];
    }
    values[s] = s == 0 ? 0.0 : total;
  }
  return SetFunction::from_table(k, std::move(values));
}

/// Half the time symmetric, otherwise one independent polymatroid per label.
inline PolymatroidCollection random_collection(int k, std::mt19937_64& rng) {
  if (std::uniform_int_distribution<int>(0, 1)(rng) == 0) {
    return PolymatroidCollection::symmetric(random_polymatroid(k, rng));
  }
  std::vector<PolymatroidCollection::Member> members(std::size_t{1} << k);
  for (auto& m : members) m = std::make_shared<const SetFunction>(random_polymatroid(k, rng));
  return PolymatroidCollection::from_members(k, std::move(members));
}

/// Brute-force axiom check straight from the definitions.
inline bool is_polymatroid(const SetFunction& f, double tol = 1e-9) {
  const Mask n = Mask{1} << f.k();
  if (f(0) != 0.0) return false;
  for (Mask s = 0; s < n; ++s) {
    if (f(s) < -tol) return false;
    for (Mask t = 0; t < n; ++t) {
      if ((s & t) == s && f(s) > f(t) + tol) return false;
      if (f(s) + f(t) < f(s | t) + f(s & t) - tol) return false;
    }
  }
  return true;
}

/// max over all permutations pi of sum_i x_{pi_i} (f(S_i) - f(S_{i-1})).
inline double extension_max_perm(const SetFunction& f, const std::vector<double>& x) {
  std::vector<int> perm(x.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = -std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    Mask s = 0;
    for (int i : perm) {
      const double before = f(s);
      s |= Mask{1} << i;
      total += x[static_cast<std::size_t>(i)] * (f(s) - before);
    }
    best = std::max(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// F_y((1 - u y)_+) through the permutation maximum.
inline double hinge_max_perm(const SetFunction& f, const std::vector<double>& u, const std::vector<int>& y) {
  std::vector<double> w(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) w[i] = std::max(0.0, 1.0 - u[i] * y[i]);
  return extension_max_perm(f, w);
}

/// f_y(mis \ abs) + f_y(mis) from explicit {-1,0,1} and {-1,1} vectors.
inline double abstain_loss(const SetFunction& fy, const std::vector<int>& v, const std::vector<int>& y) {
  Mask mis = 0, abs = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != y[i]) mis |= Mask{1} << i;
    if (v[i] == 0) abs |= Mask{1} << i;
  }
  return fy(mis & ~abs) + fy(mis);
}

inline std::vector<int> label_vector(Mask bits, int k) {
  std::vector<int> y(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) y[static_cast<std::size_t>(i)] = in(bits, i) ? 1 : -1;
  return y;
}

/// All of {-1,0,1}^k in base-3 order.
inline std::vector<std::vector<int>> all_reports(int k) {
  std::vector<std::vector<int>> out;
  int total = 1;
  for (int i = 0; i < k; ++i) total *= 3;
  for (int c = 0; c < total; ++c) {
    std::vector<int> v(static_cast<std::size_t>(k));
    int r = c;
    for (int i = 0; i < k; ++i) {
      v[static_cast<std::size_t>(i)] = r % 3 - 1;
      r /= 3;
    }
    out.push_back(v);
  }
  return out;
}

/// (g(u + h e_i) - g(u - h e_i)) / 2h.
inline std::vector<double> central_difference(const std::function<double(const std::vector<double>&)>& g,
                                              std::vector<double> u, double h) {
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double keep = u[i];
    u[i] = keep + h;
    const double up = g(u);
    u[i] = keep - h;
    const double down = g(u);
    u[i] = keep;
    out[i] = (up - down) / (2.0 * h);
  }
  return out;
}

/// Infinity-norm distance from x to the hull of `vertices`, minimised over a
/// grid of convex weights with the given resolution. This is an upper bound
/// that tightens as the resolution grows.
inline double sampled_hull_distance(const std::vector<double>& x, const std::vector<std::vector<double>>& vertices,
                                    int resolution) {
  const std::size_t n = vertices.size();
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> parts(n, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t idx, int left) {
    if (idx + 1 == n) {
      parts[idx] = left;
      double d = 0.0;
      for (std::size_t c = 0; c < x.size(); ++c) {
        double p = 0.0;
        for (std::size_t v = 0; v < n; ++v) p += parts[v] * vertices[v][c];
        d = std::max(d, std::fabs(x[c] - p / resolution));
      }
      best = std::min(best, d);
      return;
    }
    for (int a = 0; a <= left; ++a) {
      parts[idx] = a;
      rec(idx + 1, left - a);
    }
  };
  rec(0, resolution);
  return best;
}

}  // namespace oracles
