#include <doctest.h>

#include <cmath>
#include <random>

#include "lovabs/lovasz.hpp"
#include "lovabs/multiclass.hpp"
#include "lovabs/targets.hpp"
#include "lovabs/text.hpp"
#include "support/oracles.hpp"

using namespace lovabs;

namespace {

ClassCollection weighted(int k, int classes) {
  std::vector<double> w;
  for (int c = 1; c <= classes; ++c) w.push_back(0.5 + 0.25 * c);
  return ClassCollection::class_weighted(k, w);
}

// Reports over bits: whole-block zeros for abstentions, the class code otherwise.
AbstainReport encode_report(const ClassVector& v, const BlockCodec& codec) {
  const int d = codec.bits();
  AbstainReport out{d * static_cast<int>(v.size()), 0, 0};
  for (std::size_t i = 0; i < v.size(); ++i) {
    const int shift = d * static_cast<int>(i);
    if (v[i] == 0) {
      out.zeros |= full_mask(d) << shift;
    } else {
      out.positives |= codec.code(v[i]) << shift;
    }
  }
  return out;
}

// g_y(mis \ abs) + g_y(mis) spelled out per coordinate.
double target_by_hand(const ClassCollection& g, const ClassVector& v, const ClassVector& y) {
  Mask mis = 0, abs = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != y[i]) mis |= Mask{1} << i;
    if (v[i] == 0) abs |= Mask{1} << i;
  }
  return g.eval(y, mis & ~abs) + g.eval(y, mis);
}

}  // namespace

TEST_CASE("binary block code") {
  const BlockCodec c8(8);
  CHECK(c8.bits() == 3);
  CHECK(format_label(Label{3, c8.code(7)}) == "+++");
  CHECK(format_label(Label{3, c8.code(5)}) == "+-+");
  CHECK(format_label(Label{3, c8.code(4)}) == "+--");
  CHECK(format_label(Label{3, c8.code(8)}) == "---");
  CHECK(format_label(Label{3, c8.code(1)}) == "--+");
  for (int c = 1; c <= 8; ++c) CHECK(c8.decode(c8.code(c)) == c);
  CHECK(format_label(c8.encode({7, 3})) == "+++-++");
  CHECK(c8.decode(c8.encode({2, 8, 1})) == ClassVector{2, 8, 1});
  CHECK(BlockCodec(2).bits() == 1);
  CHECK_THROWS_AS(BlockCodec(6), ConfigError);
  CHECK_THROWS_AS(BlockCodec(1), ConfigError);
  CHECK_THROWS_AS(c8.code(9), DomainError);
}

TEST_CASE("touched blocks") {
  const BlockCodec c4(4);
  CHECK(c4.touched_blocks(0b000000, 3) == 0);
  CHECK(c4.touched_blocks(0b000010, 3) == 0b001);
  CHECK(c4.touched_blocks(0b110001, 3) == 0b101);
}

TEST_CASE("class vector text") {
  CHECK(format_classes({5, 0}) == "5,_");
  CHECK(parse_classes("5,_,3", true) == ClassVector{5, 0, 3});
  CHECK(parse_classes("5,0", true) == ClassVector{5, 0});
  CHECK_THROWS(parse_classes("5,_", false));
  CHECK_THROWS(parse_classes("5,,3", true));
  CHECK_THROWS_AS(check_class_vector({0, 9}, 8, true), DomainError);
}

TEST_CASE("enumeration sizes") {
  CHECK(enumerate_class_reports(2, 4).size() == 25);
  CHECK(enumerate_class_labels(2, 4).size() == 16);
  CHECK(enumerate_class_reports(2, 4).front() == ClassVector{0, 0});
  CHECK(enumerate_class_labels(1, 4).back() == ClassVector{4});
}

TEST_CASE("multiclass target worked values") {
  const auto g = ClassCollection::class_weighted(2, {1, 1, 1, 1, 1, 1, 1, 1});
  CHECK(multiclass_target(g, {5, 0}, {7, 3}) == doctest::Approx(3.0));
  CHECK(multiclass_target(g, {7, 3}, {7, 3}) == 0.0);
  CHECK(multiclass_target(g, {0, 0}, {7, 3}) == doctest::Approx(2.0));
  const auto s = ClassCollection::shared(make_power_card(4, 0.5), 8);
  CHECK(multiclass_target(s, {0, 0, 0, 0}, {1, 2, 3, 4}) == doctest::Approx(2.0));
}

TEST_CASE("lifted abstain loss equals the multiclass target on block reports") {
  for (int classes : {2, 4}) {
    const BlockCodec codec(classes);
    for (int k = 1; k <= 2; ++k) {
      std::mt19937_64 rng(113);
      for (const auto& g : {ClassCollection::shared(oracles::random_polymatroid(k, rng), classes), weighted(k, classes)}) {
        const auto lifted = lift_polymatroid(g, codec);
        CHECK(validate_polymatroid(lifted.at(Mask{0})).valid());
        for (const auto& y : enumerate_class_labels(k, classes)) {
          for (const auto& v : enumerate_class_reports(k, classes)) {
            const double want = target_by_hand(g, v, y);
            CHECK(multiclass_target(g, v, y) == doctest::Approx(want).epsilon(1e-12));
            CHECK(target_abstain(lifted, encode_report(v, codec), codec.encode(y)) ==
                  doctest::Approx(want).epsilon(1e-12));
          }
        }
      }
    }
  }
}

TEST_CASE("multiclass surrogate is the lifted hinge") {
  const BlockCodec codec(4);
  const auto g = weighted(2, 4);
  const auto lifted = lift_polymatroid(g, codec);
  std::mt19937_64 rng(127);
  std::uniform_real_distribution<double> d(-1.5, 1.5);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> u(4);
    for (double& x : u) x = d(rng);
    const ClassVector y{static_cast<int>(1 + rng() % 4), static_cast<int>(1 + rng() % 4)};
    CHECK(multiclass_surrogate(lifted, codec, u, y) == doctest::Approx(hinge(lifted, u, codec.encode(y))));
  }
}

TEST_CASE("lift capacity") {
  CHECK_NOTHROW(lift_polymatroid(ClassCollection::shared(make_zero_one(4), 8), BlockCodec(8)));
  CHECK_THROWS_AS(lift_polymatroid(ClassCollection::shared(make_zero_one(5), 8), BlockCodec(8)), CapacityError);
  CHECK_THROWS_AS(lift_polymatroid(weighted(4, 8), BlockCodec(8)), CapacityError);
}

TEST_CASE("trimmed link decodes or abstains per block") {
  const BlockCodec c8(8);
  const auto cfg = LinkConfig::make(3, 0.5);
  CHECK(trimmed_link(std::vector<double>{0.9, -0.8, 0.95}, cfg, c8) == ClassVector{5});
  CHECK(trimmed_link(std::vector<double>{0.9, 0.01, 0.95}, cfg, c8) == ClassVector{0});
  const auto cfg6 = LinkConfig::make(6, 0.5);
  CHECK(trimmed_link(std::vector<double>{0.9, -0.8, 0.95, 0.01, 0.02, -0.01}, cfg6, c8) == ClassVector{5, 0});
}

TEST_CASE("block domination") {
  for (auto [classes, k] : {std::pair{2, 2}, std::pair{4, 1}, std::pair{4, 2}}) {
    const BlockCodec codec(classes);
    CHECK(verify_block_domination(ClassCollection::shared(make_power_card(k, 0.5), classes), codec).pass);
    CHECK(verify_block_domination(ClassCollection::shared(make_zero_one(k), classes), codec).pass);
    CHECK(verify_block_domination(weighted(k, classes), codec).pass);
  }
}

TEST_CASE("trimmed link calibration for four classes") {
  CalibrationSweepOptions opt;
  opt.perturbations = 10;
  const BlockCodec codec(4);
  CHECK(verify_trimmed_link_calibration(ClassCollection::shared(make_zero_one(1), 4), codec, opt).pass);
  CHECK(verify_trimmed_link_calibration(weighted(1, 4), codec, opt).pass);
}

TEST_CASE("one-hot lift matches the one-vs-all target") {
  const auto g = onehot_jaccard();
  CHECK(g(1, {1, 2}, 0b01) == doctest::Approx(1.0));
  CHECK(g(2, {1, 2}, 0b01) == doctest::Approx(0.5));
  CHECK(g(3, {1, 2}, 0) == 0.0);
  CHECK(mis_class({1, 2}, {1, 1}, 1) == 0b10);
  CHECK(mis_class({1, 2}, {1, 1}, 2) == 0b10);
  CHECK(format_label(onehot_encode({2, 1}, 3)) == "-+-+--");
  for (int classes = 2; classes <= 3; ++classes) {
    for (int k = 1; k <= 2; ++k) CHECK(verify_onehot_identity(g, classes, k).pass);
  }
  const auto lifted = onehot_lift(g, 3, 2);
  CHECK(lifted.has(onehot_encode({2, 1}, 3).bits));
  CHECK_FALSE(lifted.has(0));
}

TEST_CASE("binary code and one-vs-all targets conflict") {
  const auto c = bep_ova_conflict();
  CHECK(c.nested);
  CHECK(c.forces_decrease);
  CHECK(c.g_first == doctest::Approx(1.0));
  CHECK(c.g_second == 0.0);
  CHECK(c.verdict.find("no increasing submodular f") != std::string::npos);
}
