#include <doctest.h>

#include <cmath>
#include <random>

#include "lovabs/distribution.hpp"
#include "lovabs/setfn.hpp"
#include "lovabs/text.hpp"
#include "support/oracles.hpp"

using namespace lovabs;

namespace {
Mask set(std::initializer_list<int> one_based) {
  Mask s = 0;
  for (int i : one_based) s |= Mask{1} << (i - 1);
  return s;
}
}  // namespace

TEST_CASE("modular set functions sum their weights") {
  const std::vector<double> w11{1, 1}, w23{2, 3}, w05{0, 5};
  CHECK(make_modular(w11)(set({1, 2})) == 2.0);
  CHECK(make_modular(w23)(set({2})) == 3.0);
  CHECK(make_modular(w05)(set({1})) == 0.0);
  const std::vector<double> bad{1, -1};
  CHECK_THROWS_AS(make_modular(bad), ValidationError);
}

TEST_CASE("zero-one indicator of nonempty sets") {
  const auto f = make_zero_one(3);
  CHECK(f(0) == 0.0);
  CHECK(f(set({2})) == 1.0);
  CHECK(f(set({1, 2, 3})) == 1.0);
}

TEST_CASE("jaccard collection") {
  const auto j = make_jaccard(3);
  CHECK(j.at(parse_label("++-"))(set({3})) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  for (Mask y = 0; y < 8; ++y) {
    CHECK(j.at(y)(0) == 0.0);
    CHECK(j.at(y)(7) == 1.0);
  }
  CHECK(make_jaccard(2).at(parse_label("--"))(set({1, 2})) == 1.0);
}

TEST_CASE("concave cardinality functions") {
  const auto f = make_power_card(4, 0.5);
  CHECK(f(0b1111) == 2.0);
  CHECK(f(0) == 0.0);
  CHECK(std::fabs(f(0b0101) - 1.41421356237309515) < 1e-12);
  CHECK_THROWS_AS(make_concave_card(3, [](int n) { return static_cast<double>(n * n); }), ValidationError);
  CHECK_THROWS_AS(make_concave_card(3, [](int n) { return 3.0 - n; }), ValidationError);
  CHECK_THROWS_AS(make_power_card(3, 1.5), ValidationError);
}

TEST_CASE("set function tables are validated on construction") {
  CHECK_THROWS_AS(SetFunction::from_table(2, {0, 1, 1}), ValidationError);
  CHECK_THROWS_AS(SetFunction::from_table(2, {0.5, 1, 1, 1}), ValidationError);
  CHECK_THROWS_AS(SetFunction::from_table(2, {0, -1, 1, 1}), ValidationError);
  CHECK_THROWS_AS(SetFunction::from_table(2, {0, NAN, 1, 1}), ValidationError);
  CHECK_THROWS_AS(make_zero_one(21), CapacityError);
  CHECK_THROWS_AS(make_zero_one(0), DomainError);
  CHECK_THROWS_AS(make_zero_one(2).eval(4), DomainError);
}

TEST_CASE("polymatroid validation flags") {
  const std::vector<double> w{1, 2};
  auto r = validate_polymatroid(make_modular(w));
  CHECK(r.valid());
  CHECK(r.modular);
  CHECK_FALSE(r.strict());

  r = validate_polymatroid(make_zero_one(2));
  CHECK(r.valid());
  CHECK_FALSE(r.modular);

  r = validate_polymatroid(make_power_card(3, 0.5), true);
  CHECK(r.valid());
  CHECK(r.strictly_submodular);
  CHECK(r.strictly_increasing);
  CHECK(r.violations.empty());

  const auto bad = SetFunction::from_table(2, {0, 1, 1, 3});
  r = validate_polymatroid(bad);
  CHECK_FALSE(r.submodular);
  CHECK_FALSE(r.valid());
  CHECK_FALSE(r.violations.empty());

  const auto dec = SetFunction::from_table(2, {0, 2, 1, 1});
  CHECK_FALSE(validate_polymatroid(dec).increasing);

  const auto zs = SetFunction::from_table(3, {0, 0, 1, 1, 1, 1, 1, 1});
  CHECK(validate_polymatroid(zs).zero_singletons == std::vector<int>{0});
}

TEST_CASE("validation agrees with a brute-force axiom check") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const int k = 1 + t % 4;
    std::vector<double> v(std::size_t{1} << k);
    for (std::size_t s = 1; s < v.size(); ++s) v[s] = std::round(unit(rng) * 4) / 2;
    const auto f = SetFunction::from_table(k, v);
    CHECK(validate_polymatroid(f).valid() == oracles::is_polymatroid(f));
  }
}

TEST_CASE("built-ins are polymatroids up to k = 6") {
  std::mt19937_64 rng(3);
  for (int k = 1; k <= 6; ++k) {
    CHECK(validate_polymatroid(make_zero_one(k)).valid());
    CHECK(validate_polymatroid(make_power_card(k, 0.5)).valid());
    std::vector<double> w(static_cast<std::size_t>(k));
    for (double& x : w) x = std::uniform_real_distribution<double>(0, 3)(rng);
    const auto r = validate_polymatroid(make_modular(w));
    CHECK(r.valid());
    CHECK(r.modular);
    const auto jac = make_jaccard(k);
    for (Mask y = 0; y <= full_mask(k); ++y) CHECK(validate_polymatroid(jac.at(y)).valid());
    CHECK(oracles::is_polymatroid(make_power_card(k, 0.5)));
  }
}

TEST_CASE("complementary-label condition") {
  for (int k = 2; k <= 4; ++k) CHECK(check_condition1(make_jaccard(k)).pass);
  const std::vector<double> ones{1, 1, 1};
  const auto modular = check_condition1(PolymatroidCollection::symmetric(make_modular(ones)));
  CHECK_FALSE(modular.pass);
  CHECK(modular.label.has_value());
  CHECK_FALSE(check_condition1(make_foreground_miss(3)).pass);
}

TEST_CASE("mean value") {
  CHECK(mean_value(make_zero_one(2)) == 0.75);
  const std::vector<double> w{1, 2, 0.5};
  CHECK(mean_value(make_modular(w)) == doctest::Approx(1.75));
  CHECK(mean_value(SetFunction::from_table(2, {0, 0, 0, 0})) == 0.0);
}

TEST_CASE("mean value is at least half the full value, with equality exactly for modular f") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 300; ++t) {
    const int k = 1 + t % 5;
    const auto f = oracles::random_polymatroid(k, rng);
    const double slack = mean_value(f) - f(f.full()) / 2.0;
    CHECK(slack >= -1e-12);
    CHECK((std::fabs(slack) < 1e-9) == validate_polymatroid(f).modular);
  }
  CHECK(mean_value(make_zero_one(1)) == 0.5);
  for (int k = 2; k <= 5; ++k) CHECK(mean_value(make_zero_one(k)) > 0.5);
}

TEST_CASE("restriction keeps the chosen coordinates") {
  const auto f = make_power_card(4, 0.5);
  const std::vector<int> keep{1, 3};
  const auto g = restrict_to(f, keep);
  CHECK(g.k() == 2);
  CHECK(g(0b11) == f(0b1010));
}

TEST_CASE("label distributions") {
  const auto u = uniform(2);
  for (double p : u.probs()) CHECK(p == 0.25);
  const Label y{2, 0b10};
  CHECK(mix(point_mass(y), point_mass(y), 0.3) == point_mass(y));
  CHECK(mix(u, point_mass(y), 0.0) == u);
  const Label r{2, 0b01};
  CHECK(flip(u, r) == u);
  CHECK(flip(point_mass(y), r) == point_mass(y.times(r)));
  const LabelDistribution p(2, {0.1, 0.2, 0.3, 0.4});
  CHECK(flip(flip(p, r), r) == p);
  CHECK(marginal_positive(p, 0) == doctest::Approx(0.6));
  CHECK_THROWS_AS(LabelDistribution(2, {0.5, 0.5, 0.5, -0.5}), ValidationError);
  CHECK_THROWS_AS(LabelDistribution(2, {0.5, 0.5, 0.5, 0.5}), ValidationError);
  CHECK_THROWS_AS(mix(u, u, 1.5), DomainError);
}
