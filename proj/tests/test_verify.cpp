#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qhelly/builders.hpp"
#include "qhelly/verify.hpp"

using namespace qhelly;

namespace {

Rational q(long a, long b = 1) { return ratio(a, b); }

Box interval(Rational lo, Rational hi) { return Box({{lo, hi}}); }

HypergraphChain constant(int n, std::vector<VertexSet> edges, int levels = 2) {
  const auto h = ExplicitHypergraph::from_edges(GroundSet(n), std::move(edges));
  return HypergraphChain::from_levels(std::vector<ExplicitHypergraph>(static_cast<std::size_t>(levels), h), 0);
}

HypergraphChain random_explicit(std::mt19937_64& rng, int n, int levels) {
  SyntheticChainSpec spec;
  spec.n = n;
  spec.window = {0, levels - 1};
  spec.density = {0.35 + 0.4 * static_cast<double>(rng() % 100) / 100.0};
  spec.edges_per_level = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n));
  spec.seed = rng();
  return random_chain(spec);
}

HypergraphChain interval_q1(std::mt19937_64& rng, int n, LevelWindow w, const Rational& v = Rational(1, 2)) {
  const auto boxes = oracle::random_intervals(rng, n, 8, 16, 2, 16);
  return quantitative_chain({std::vector<Body>(boxes.begin(), boxes.end()), v, w, {}});
}

std::vector<Body> triangle_sides() {
  return {ConvexPolygon::segment({0, 0}, {2, 0}), ConvexPolygon::segment({2, 0}, {0, 2}),
          ConvexPolygon::segment({0, 2}, {0, 0})};
}

}  // namespace

TEST_CASE("omega examples") {
  const auto complete = constant(5, {VertexSet::range(5)});
  CHECK(omega(complete, 0, VertexSet::range(5), 2) == 5);

  std::vector<VertexSet> pairs;
  for (VertexSet p : k_subsets(VertexSet::range(5), 2))
    if (p != VertexSet{0, 1}) pairs.push_back(p);
  const auto missing01 = constant(5, pairs);
  CHECK(omega(missing01, 0, VertexSet::range(5), 2) == 4);
  CHECK(max_clique(missing01, 0, VertexSet::range(5), 2) == VertexSet{0, 2, 3, 4});

  const auto empty = constant(5, {VertexSet{}});
  CHECK(omega(empty, 0, VertexSet{0, 1}, 3) == 2);
  CHECK(omega(empty, 0, VertexSet::range(5), 3) == 2);
}

TEST_CASE("largest edge within examples") {
  const auto c = constant(5, {VertexSet{0, 1}, VertexSet{2, 3, 4}});
  CHECK(largest_edge_within(c, 0, VertexSet::range(5)) == VertexSet{2, 3, 4});
  CHECK(largest_edge_within(c, 0, VertexSet{0, 1}) == VertexSet{0, 1});
  CHECK(largest_edge_within(c, 0, VertexSet{0, 2}) == VertexSet{0});
}

TEST_CASE("omega and largest edge match brute force") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 6);
    const auto chain = trial % 3 == 0 ? interval_q1(rng, n, {0, 2}) : random_explicit(rng, n, 3);
    const auto member = oracle::member_of(chain);
    for (int rep = 0; rep < 6; ++rep) {
      const oracle::Mask s = rng() & ((oracle::Mask{1} << n) - 1);
      const int l = static_cast<int>(rng() % 3);
      const int h = 1 + static_cast<int>(rng() % 3);
      CHECK(omega(chain, l, VertexSet(s), h) == oracle::omega(member, l, s, h));
      const VertexSet k = max_clique(chain, l, VertexSet(s), h);
      CHECK(k.is_subset_of(VertexSet(s)));
      CHECK(k.size() == oracle::omega(member, l, s, h));
      const VertexSet e = largest_edge_within(chain, l, VertexSet(s));
      CHECK(e.size() == oracle::largest_edge(member, l, s));
      CHECK(chain.member(e, l));
    }
  }
}

TEST_CASE("omega is monotone in the level and the set") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 40; ++trial) {
    const auto chain = random_explicit(rng, 7, 4);
    const oracle::Mask s = rng() & 0x7F;
    const oracle::Mask bigger = s | (rng() & 0x7F);
    for (int h = 1; h <= 3; ++h)
      for (int l = 0; l < 3; ++l) {
        CHECK(omega(chain, l, VertexSet(s), h) <= omega(chain, l + 1, VertexSet(s), h));
        CHECK(omega(chain, l, VertexSet(s), h) <= omega(chain, l, VertexSet(bigger), h));
      }
  }
}

TEST_CASE("Helly verifier examples") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const auto boxes = oracle::random_intervals(rng, 7, 4, 12, 0, 6);
    const auto nerve = nerve_chain(std::vector<Body>(boxes.begin(), boxes.end()), {0, 1});
    CHECK_FALSE(helly_holds(nerve, 2, 0).has_value());
  }

  const auto sides = nerve_chain(triangle_sides(), {0, 3});
  for (int l = 0; l < 3; ++l) {
    auto c = helly_holds(sides, 2, l);
    REQUIRE(c.has_value());
    CHECK(c->kind == CertificateKind::HellyViolation);
    CHECK(c->set == VertexSet{0, 1, 2});
    CHECK(revalidate(*c, sides));
  }
  CHECK_FALSE(helly_holds(sides, 3, 0).has_value());

  // h = n: only the full set could fail, and it has no h-subsets beyond itself.
  const auto chain = constant(4, {VertexSet{0, 1, 2}, VertexSet{3}});
  CHECK_FALSE(helly_holds(chain, 4, 0).has_value());
}

TEST_CASE("minimum Helly number examples") {
  const auto path = nerve_chain({interval(0, 1), interval(1, 2), interval(2, 3)}, {0, 2});
  CHECK(min_helly_number(path) == 2);
  CHECK(min_helly_number(constant(5, {VertexSet::range(5)})) == 1);
  CHECK(min_helly_number(nerve_chain(triangle_sides(), {0, 2})) == 3);
}

TEST_CASE("Helly verifier matches brute force") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 80; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 6);
    const auto chain = random_explicit(rng, n, 3);
    const auto member = oracle::member_of(chain);
    for (int h = 1; h <= 3; ++h)
      for (int l = 0; l < 2; ++l) {
        auto cert = helly_holds(chain, h, l, 1 + static_cast<int>(trial % 3));
        CHECK(cert.has_value() == !oracle::helly(member, n, h, l));
        if (cert) CHECK(revalidate(*cert, chain));
      }
    int want = n + 1;
    for (int h = n + 1; h >= 1; --h) {
      bool all = true;
      for (int l = 0; l < 2; ++l) all = all && oracle::helly(member, n, h, l);
      if (all) want = h;
    }
    CHECK(min_helly_number(chain) == want);
  }
}

TEST_CASE("interval Q_1 chains have Helly number 2") {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 60; ++trial) {
    const auto chain = interval_q1(rng, 2 + static_cast<int>(rng() % 7), {-2, 4}, trial % 2 ? q(1, 2) : q(2, 3));
    for (int l = -2; l < 4; ++l) CHECK_FALSE(helly_holds(chain, 2, l).has_value());
  }
}

TEST_CASE("colorful verifier examples") {
  const auto nerve = nerve_chain({interval(0, 2), interval(1, 3)}, {0, 1});
  ClassUniverse explicit_tuple;
  explicit_tuple.kind = ClassUniverse::Kind::Explicit;
  explicit_tuple.tuples = {{VertexSet{0, 1}, VertexSet{0, 1}}};
  auto r = colorful_helly_holds(nerve, 2, 0, explicit_tuple);
  CHECK_FALSE(r.violation.has_value());

  // A selection that is not an edge makes the tuple vacuously fine.
  const auto sides = nerve_chain(triangle_sides(), {0, 1});
  ClassUniverse t2;
  t2.kind = ClassUniverse::Kind::Explicit;
  t2.tuples = {{VertexSet{0}, VertexSet{1}, VertexSet{2}}};
  CHECK_FALSE(colorful_helly_holds(sides, 3, 0, t2).violation.has_value());
  t2.tuples = {{VertexSet{0, 1}, VertexSet{2}}};
  CHECK_FALSE(colorful_helly_holds(sides, 2, 0, t2).violation.has_value());

  // Singletons as classes reproduce the Helly witness.
  ClassUniverse singles;
  singles.kind = ClassUniverse::Kind::Disjoint;
  singles.max_class_size = 1;
  auto s = colorful_helly_holds(sides, 3, 0, singles);
  CHECK_FALSE(s.violation.has_value());
  auto pairs = colorful_helly_holds(sides, 2, 0, singles);
  CHECK_FALSE(pairs.violation.has_value());
}

TEST_CASE("planted colorful violation is found and re-validates") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    PlantedSpec spec;
    spec.k = 2 + static_cast<int>(seed % 2);
    spec.extra = 1;
    spec.seed = seed;
    const auto p = planted_colorful_chain(spec);
    ClassUniverse u;
    u.max_class_size = spec.k;
    auto r = colorful_helly_holds(p.chain, spec.k, 0, u, 2);
    REQUIRE(r.violation.has_value());
    CHECK(r.violation->kind == CertificateKind::ColorfulViolation);
    CHECK(revalidate(*r.violation, p.chain));
  }
}

TEST_CASE("disjoint colorful verifier matches brute force") {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 3);
    const auto chain = random_explicit(rng, n, 2);
    const auto member = oracle::member_of(chain);
    for (int k = 2; k <= 3; ++k) {
      ClassUniverse u;
      u.max_class_size = 3;
      auto r = colorful_helly_holds(chain, k, 0, u, 1 + trial % 2);
      CHECK(r.violation.has_value() == !oracle::colorful_disjoint(member, n, k, 0, 3));
      CHECK_FALSE(r.truncated);
      if (r.violation) {
        CHECK(revalidate(*r.violation, chain));
        std::vector<oracle::Mask> masks;
        for (VertexSet c : r.violation->classes) masks.push_back(c.bits());
        CHECK(oracle::colorful_violated(member, masks, 0));
      }
    }
  }
}

TEST_CASE("colorful number k over all tuples implies Helly number k") {
  std::mt19937_64 rng(36);
  int checked = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const auto chain = random_explicit(rng, 5, 2);
    for (int k = 2; k <= 3; ++k) {
      ClassUniverse any;
      any.kind = ClassUniverse::Kind::Any;
      any.max_class_size = 0;
      if (colorful_helly_holds(chain, k, 0, any).violation) continue;
      ++checked;
      CHECK_FALSE(helly_holds(chain, k, 0).has_value());
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("budget truncation is deterministic across worker counts") {
  std::mt19937_64 rng(37);
  const auto chain = interval_q1(rng, 8, {0, 3});
  ClassUniverse u;
  u.budget = 50;
  auto a = colorful_helly_holds(chain, 2, 1, u, 1);
  auto b = colorful_helly_holds(chain, 2, 1, u, 4);
  CHECK(a.examined == b.examined);
  CHECK(a.truncated == b.truncated);
  CHECK(a.examined <= 50);
  u.budget = 0;
  auto full = colorful_helly_holds(chain, 2, 1, u, 1);
  CHECK_FALSE(full.truncated);
  CHECK(full.examined >= a.examined);
}

TEST_CASE("fractional profile examples") {
  const auto complete = constant(5, {VertexSet::range(5)});
  auto p = fractional_profile(complete, 2, 0, VertexSet::range(5));
  CHECK(p.alpha == 1);
  CHECK(p.beta == 1);

  const auto empty = constant(5, {VertexSet{}});
  auto z = fractional_profile(empty, 2, 0, VertexSet::range(5));
  CHECK(z.alpha == 0);
  CHECK(z.beta == 0);

  std::vector<Body> six = {interval(0, 1), interval(0, 1), interval(0, 1), interval(0, 1), interval(5, q(11, 2)), interval(7, q(15, 2))};
  const auto chain = quantitative_chain({six, q(1, 2), {0, 2}, {}});
  auto f = fractional_profile(chain, 2, 0, VertexSet::range(6));
  CHECK(f.alpha == q(6, 15));
  CHECK(f.beta == q(4, 6));
  CHECK(f.edges == 6);
  CHECK(f.total == 15);
  CHECK(to_string(f.alpha) == "2/5");
  CHECK(f.certificate().kind == CertificateKind::FractionalReport);
  CHECK(revalidate(f.certificate(), chain));
  CHECK_THROWS_AS(fractional_profile(chain, 7, 0, VertexSet::range(6)), InputError);
}

TEST_CASE("fractional profile matches brute force") {
  std::mt19937_64 rng(38);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 8);
    const auto chain = random_explicit(rng, n, 2);
    const auto member = oracle::member_of(chain);
    const oracle::Mask s = (oracle::Mask{1} << n) - 1;
    for (int k = 1; k <= std::min(n, 3); ++k) {
      auto p = fractional_profile(chain, k, 0, VertexSet(s));
      long edges = 0, total = 0;
      for (auto t : oracle::submasks(s))
        if (oracle::popcount(t) == k) {
          ++total;
          edges += member(t, 0);
        }
      CHECK(p.alpha == ratio(edges, total));
      CHECK(p.beta == ratio(oracle::largest_edge(member, 1, s), n));
    }
  }
}

TEST_CASE("approximate chains yield suspects") {
  auto sides = oracle::function_chain(
      3, {0, 1}, [](oracle::Mask s, int) { return oracle::popcount(s) <= 2; }, true);
  auto c = helly_holds(sides, 2, 0);
  REQUIRE(c.has_value());
  CHECK(c->kind == CertificateKind::Suspect);
  CHECK(c->suspected == CertificateKind::HellyViolation);
  CHECK_FALSE(c->is_violation());
}

TEST_CASE("revalidate rejects forged certificates") {
  const auto chain = constant(4, {VertexSet::range(4)});
  Certificate forged;
  forged.kind = CertificateKind::HellyViolation;
  forged.set = VertexSet{0, 1, 2};
  forged.arity = 2;
  forged.level = 0;
  CHECK_FALSE(revalidate(forged, chain));
  forged.kind = CertificateKind::ColorfulViolation;
  forged.classes = {VertexSet{0}, VertexSet{1}};
  CHECK_FALSE(revalidate(forged, chain));
  forged.kind = CertificateKind::Monotonicity;
  forged.set = VertexSet{0};
  CHECK_FALSE(revalidate(forged, chain));
}
