#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qhelly/builders.hpp"
#include "qhelly/verify.hpp"

using namespace qhelly;

namespace {

Rational q(long a, long b = 1) { return ratio(a, b); }

Box interval(Rational lo, Rational hi) { return Box({{lo, hi}}); }

Box square(Rational x, Rational y, Rational side) { return Box({{x, x + side}, {y, y + side}}); }

std::vector<Body> as_bodies(const std::vector<Box>& boxes) { return {boxes.begin(), boxes.end()}; }

std::vector<Body> triangle_sides() {
  return {ConvexPolygon::segment({0, 0}, {2, 0}), ConvexPolygon::segment({2, 0}, {0, 2}),
          ConvexPolygon::segment({0, 2}, {0, 0})};
}

}  // namespace

TEST_CASE("nerve chain examples") {
  const auto touching = nerve_chain({interval(0, 1), interval(1, 2)});
  CHECK(touching.member(VertexSet{0, 1}, 0));
  CHECK(touching.window().lo == 0);
  CHECK(touching.window().hi == 8);

  const auto sides = nerve_chain(triangle_sides(), {0, 2});
  for (int l = 0; l <= 2; ++l) {
    CHECK(sides.member(VertexSet{0, 1}, l));
    CHECK(sides.member(VertexSet{0, 2}, l));
    CHECK(sides.member(VertexSet{1, 2}, l));
    CHECK_FALSE(sides.member(VertexSet{0, 1, 2}, l));
  }

  const auto single = nerve_chain({square(0, 0, 1)});
  CHECK(single.member(VertexSet{}, 0));
  CHECK(single.member(VertexSet{0}, 3));

  std::vector<Body> hs = {HalfspaceBody::from_box(square(0, 0, 1))};
  CHECK_THROWS_AS(nerve_chain(hs), UnsupportedError);
  CHECK_THROWS_AS(nerve_chain({interval(0, 1), square(0, 0, 1)}), InputError);
}

TEST_CASE("quantitative chain examples") {
  QuantitativeChainSpec spec{{square(0, 0, 1), square(q(1, 2), q(1, 2), 1)}, q(1, 2), {0, 4}, {}};
  const auto chain = quantitative_chain(spec);
  for (int l = 0; l <= 4; ++l) CHECK(chain.member(VertexSet{0, 1}, l) == (l >= 2));
  for (int l = 0; l <= 4; ++l) CHECK(chain.member(VertexSet{}, l));

  QuantitativeChainSpec apart{{square(0, 0, 1), square(5, 5, 1)}, q(1, 2), {0, 6}, {}};
  const auto c2 = quantitative_chain(apart);
  for (int l = 0; l <= 6; ++l) CHECK_FALSE(c2.member(VertexSet{0, 1}, l));

  QuantitativeChainSpec bad = spec;
  bad.v = 1;
  CHECK_THROWS_AS(quantitative_chain(bad), InputError);
}

TEST_CASE("quantitative membership equals the direct volume test") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto boxes = random_boxes(6, 2, BoxGenParams{}, rng());
    const Rational v = trial % 2 ? q(1, 2) : q(1, 3);
    const auto chain = quantitative_chain({as_bodies(boxes), v, {-1, 5}, {}});
    CHECK_FALSE(validate_chain(chain, 10000, 1).has_value());
    for (auto s : oracle::all_masks(6)) {
      std::vector<Box> chosen;
      for (int i = 0; i < 6; ++i)
        if ((s >> i) & 1U) chosen.push_back(boxes[static_cast<std::size_t>(i)]);
      for (int l = -1; l <= 5; ++l) {
        const bool want = chosen.empty() || box_volume(intersect_boxes(chosen)) >= ipow(v, l);
        CHECK(chain.member(VertexSet(s), l) == want);
        if (l < 5 && chain.member(VertexSet(s), l)) CHECK(chain.member(VertexSet(s), l + 1));
      }
    }
  }
}

TEST_CASE("quantitative edges are nerve edges") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto polys = random_polygons(6, 4, PolygonGenParams{}, seed);
    std::vector<Body> bodies(polys.begin(), polys.end());
    const auto q_chain = quantitative_chain({bodies, q(1, 2), {0, 6}, {}});
    const auto nerve = nerve_chain(bodies, {0, 0});
    for (auto s : oracle::all_masks(6))
      if (q_chain.member(VertexSet(s), 6)) CHECK(nerve.member(VertexSet(s), 0));
  }
}

TEST_CASE("Monte Carlo quantitative chain is flagged and still a chain") {
  const auto polys = random_polygons(5, 5, PolygonGenParams{}, 8);
  std::vector<Body> bodies(polys.begin(), polys.end());
  VolumeBackend mc;
  mc.kind = VolumeBackend::Kind::MonteCarlo;
  mc.samples = 20000;
  mc.seed = 5;
  const auto chain = quantitative_chain({bodies, q(1, 2), {0, 5}, mc});
  CHECK(chain.approximate());
  for (auto s : oracle::all_masks(5))
    for (int l = 0; l <= 5; ++l) {
      if (!chain.member(VertexSet(s), l)) continue;
      if (l < 5) CHECK(chain.member(VertexSet(s), l + 1));
      for (auto t : oracle::submasks(s)) CHECK(chain.member(VertexSet(t), l));
    }
  mc.workers = 3;
  const auto again = quantitative_chain({bodies, q(1, 2), {0, 5}, mc});
  for (auto s : oracle::all_masks(5))
    for (int l = 0; l <= 5; ++l) CHECK(chain.member(VertexSet(s), l) == again.member(VertexSet(s), l));
}

TEST_CASE("subsampled chain") {
  const auto boxes = random_boxes(6, 1, BoxGenParams{}, 3);
  const auto base = quantitative_chain({as_bodies(boxes), q(1, 2), {0, 10}, {}});

  const auto same = subsampled_chain(base, 1, 0);
  CHECK(same.window().lo == 0);
  CHECK(same.window().hi == 10);
  for (auto s : oracle::all_masks(6))
    for (int l = 0; l <= 10; ++l) CHECK(same.member(VertexSet(s), l) == base.member(VertexSet(s), l));

  const auto sub = subsampled_chain(base, 2, 1);
  for (auto s : oracle::all_masks(6)) CHECK(sub.member(VertexSet(s), 3) == base.member(VertexSet(s), 7));

  // Period k+1 = 3 on Q(v) equals Q(v^3).
  const auto cubed = quantitative_chain({as_bodies(boxes), q(1, 8), {0, 3}, {}});
  const auto every3 = subsampled_chain(base, 3, 0);
  CHECK(every3.window().lo == 0);
  CHECK(every3.window().hi == 3);
  for (auto s : oracle::all_masks(6))
    for (int l = 0; l <= 3; ++l) CHECK(every3.member(VertexSet(s), l) == cubed.member(VertexSet(s), l));

  CHECK_FALSE(validate_chain(sub, 10000, 2).has_value());
  CHECK_THROWS_AS(subsampled_chain(base, 0, 0), InputError);
}

TEST_CASE("explicit chain builder") {
  const ExplicitHypergraph h(GroundSet(3), {VertexSet{0, 1}});
  auto r = explicit_chain({h, h, h}, 0);
  REQUIRE(r.chain.has_value());
  CHECK_FALSE(r.rejection.has_value());

  auto bad = explicit_chain({ExplicitHypergraph(GroundSet(3), {VertexSet{0, 1, 2}}),
                             ExplicitHypergraph(GroundSet(3), {VertexSet{0, 1}, VertexSet{1, 2}})},
                            4);
  CHECK_FALSE(bad.chain.has_value());
  REQUIRE(bad.rejection.has_value());
  CHECK(bad.rejection->set == VertexSet{0, 1, 2});
  CHECK(bad.rejection->level == 4);

  auto growing = explicit_chain({ExplicitHypergraph(GroundSet(3), {VertexSet{0}}), ExplicitHypergraph(GroundSet(3), {VertexSet{0, 1}}),
                                 ExplicitHypergraph(GroundSet(3), {VertexSet{0, 1, 2}})},
                                0);
  CHECK(growing.chain.has_value());
}

TEST_CASE("random chains") {
  SyntheticChainSpec spec;
  spec.n = 7;
  spec.window = {0, 4};
  spec.seed = 12;
  const auto a = random_chain(spec);
  const auto b = random_chain(spec);
  CHECK(a.levels() == b.levels());
  CHECK_FALSE(validate_chain(a, 0, 0).has_value());

  spec.density = {1.0};
  const auto full = random_chain(spec);
  for (auto s : oracle::all_masks(7))
    for (int l = 0; l <= 4; ++l) CHECK(full.member(VertexSet(s), l));

  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    SyntheticChainSpec r;
    r.n = 3 + static_cast<int>(rng() % 6);
    r.window = {0, static_cast<int>(rng() % 5)};
    r.density = {0.2 + 0.6 * static_cast<double>(rng() % 100) / 100.0};
    r.seed = rng();
    CHECK_FALSE(validate_chain(random_chain(r), 0, 0).has_value());
  }
}

TEST_CASE("planted colorful chains carry the planted violation") {
  for (int k = 2; k <= 4; ++k) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      PlantedSpec spec;
      spec.k = k;
      spec.level = 1;
      spec.extra = k == 4 ? 0 : 2;
      spec.seed = seed;
      const auto p = planted_colorful_chain(spec);
      const auto& chain = p.chain;
      CHECK(chain.window().lo == 1);
      CHECK(chain.window().hi == 1 + k + 1);
      CHECK_FALSE(validate_chain(chain, 0, 0).has_value());
      REQUIRE(p.classes.size() == static_cast<std::size_t>(k));
      VertexSet uni;
      for (VertexSet c : p.classes) {
        CHECK(c.size() == k);
        CHECK_FALSE(c.intersects(uni));
        uni = uni | c;
        for (int l = 1; l <= 1 + k; ++l) CHECK_FALSE(chain.member(c, l));
      }
      CHECK(uni == p.support);
      CHECK_FALSE(chain.member(p.support, 1 + k + 1));
      std::vector<oracle::Mask> masks;
      for (VertexSet c : p.classes) masks.push_back(c.bits());
      CHECK(oracle::colorful_violated(oracle::member_of(chain), masks, 1));
    }
  }
  PlantedSpec too_big;
  too_big.k = 5;
  CHECK_THROWS_AS(planted_colorful_chain(too_big), InputError);
}

TEST_CASE("window warnings") {
  const ExplicitHypergraph h(GroundSet(3), {VertexSet{0, 1}});
  const auto chain = HypergraphChain::from_levels({h, h, h}, 0);
  CHECK_FALSE(window_warning(chain, 0, 2, "x").has_value());
  CHECK(window_warning(chain, 0, 3, "x").has_value());
  CHECK(window_warning(chain, -1, 1, "x").has_value());
}
