#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qhelly/builders.hpp"
#include "qhelly/proof.hpp"

using namespace qhelly;

namespace {

Rational q(long a, long b = 1) { return ratio(a, b); }

Box interval(Rational lo, Rational hi) { return Box({{lo, hi}}); }

HypergraphChain constant(int n, std::vector<VertexSet> edges, int levels = 3) {
  const auto h = ExplicitHypergraph::from_edges(GroundSet(n), std::move(edges));
  return HypergraphChain::from_levels(std::vector<ExplicitHypergraph>(static_cast<std::size_t>(levels), h), 0);
}

HypergraphChain complete(int n, int levels = 5) { return constant(n, {VertexSet::range(n)}, levels); }

/// Sets of size at most `size` at every level.
HypergraphChain uniform(int n, int size, LevelWindow w) {
  return oracle::function_chain(n, w, [size](oracle::Mask s, int) { return oracle::popcount(s) <= size; });
}

long count_missing(const oracle::Member& member, int level, oracle::Mask s, int r) {
  long missing = 0;
  for (auto t : oracle::submasks(s))
    if (oracle::popcount(t) == r && !member(t, level)) ++missing;
  return missing;
}

}  // namespace

TEST_CASE("disjoint missing families") {
  auto f = max_disjoint_missing(complete(5), 0, VertexSet::range(5), 2);
  CHECK(f.sets.empty());
  CHECK(f.bound_holds);

  std::vector<VertexSet> edges;
  for (VertexSet p : k_subsets(VertexSet::range(4), 2))
    if (p != VertexSet{0, 1} && p != VertexSet{2, 3}) edges.push_back(p);
  const auto two_missing = constant(4, edges);
  auto g = max_disjoint_missing(two_missing, 0, VertexSet::range(4), 2);
  CHECK(g.sets == std::vector<VertexSet>{VertexSet{0, 1}, VertexSet{2, 3}});
  CHECK(check_family(two_missing, g));

  const auto empty = constant(6, {VertexSet{}});
  auto e = max_disjoint_missing(empty, 0, VertexSet::range(6), 2);
  CHECK(e.sets.size() == 3);
  CHECK(check_family(empty, e));
}

TEST_CASE("missing families satisfy their invariants on random chains") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    SyntheticChainSpec spec;
    spec.n = 4 + static_cast<int>(rng() % 5);
    spec.window = {0, 1};
    spec.seed = rng();
    const auto chain = random_chain(spec);
    const oracle::Mask s = rng() & ((oracle::Mask{1} << spec.n) - 1);
    for (int r = 1; r <= 3; ++r) {
      auto f = max_disjoint_missing(chain, 0, VertexSet(s), r);
      CHECK(check_family(chain, f));
      CHECK(f.bound_holds);
      CHECK(static_cast<long>(f.sets.size()) * r >= oracle::popcount(s) - f.omega);
    }
  }
}

TEST_CASE("first counting lemma examples") {
  auto c = lemma31a_counts(complete(5), 0, VertexSet::range(5), 2);
  CHECK(c.missing == 0);
  CHECK(c.bound == 0);

  const auto nerve = nerve_chain({interval(0, 1), interval(0, 1), interval(2, 3), interval(2, 3)}, {0, 2});
  auto n = lemma31a_counts(nerve, 0, VertexSet::range(4), 2);
  CHECK(n.missing == 4);
  CHECK(n.omega == 2);
  CHECK(n.bound == 0);
  CHECK(n.holds());
}

TEST_CASE("second counting lemma examples") {
  auto c = lemma31b_counts(complete(5), 0, VertexSet::range(5), 2, 3);
  CHECK(c.missing == 0);
  CHECK(c.bound == 0);

  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    SyntheticChainSpec spec;
    spec.n = 6;
    spec.window = {0, 2};
    spec.seed = rng();
    const auto chain = random_chain(spec);
    const VertexSet s = VertexSet::range(6);
    auto a = lemma31a_counts(chain, 0, s, 2);
    auto b = lemma31b_counts(chain, 0, s, 2, 2);
    CHECK(Rational(a.missing) == Rational(b.missing));
    if (a.omega == b.omega) CHECK(Rational(a.bound) == b.bound);
  }
  CHECK_THROWS_AS(lemma31b_counts(complete(5), 0, VertexSet::range(5), 3, 2), InputError);
}

TEST_CASE("counting lemmas agree with brute-force counts") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 60; ++trial) {
    SyntheticChainSpec spec;
    spec.n = 5 + static_cast<int>(rng() % 3);
    spec.window = {0, 2};
    spec.seed = rng();
    const auto chain = random_chain(spec);
    const auto member = oracle::member_of(chain);
    const oracle::Mask s = (oracle::Mask{1} << spec.n) - 1;
    for (int k = 2; k <= 3; ++k) {
      auto a = lemma31a_counts(chain, 0, VertexSet(s), k);
      CHECK(a.missing == count_missing(member, 0, s, k));
      CHECK(a.omega == oracle::omega(member, 1, s, k));
      CHECK(a.bound == binomial((spec.n - a.omega) / k, k));
      if (a.colorful_violation) {
        std::vector<oracle::Mask> masks;
        for (VertexSet cl : a.colorful_violation->classes) masks.push_back(cl.bits());
        CHECK(oracle::colorful_violated(member, masks, 0));
      }
    }
  }
}

TEST_CASE("gamma examples") {
  const VertexSet s = VertexSet::range(5);
  const auto all2 = make_family(2, s, k_subsets(s, 2));
  CHECK(gamma(VertexSet{3}, all2) == VertexSet{0, 1, 2, 4});
  const auto empty = make_family(2, s, {});
  CHECK(gamma(VertexSet{3}, empty) == VertexSet{});
  const auto two = make_family(2, s, {VertexSet{0, 1}, VertexSet{0, 2}});
  CHECK(gamma(VertexSet{0}, two) == VertexSet{1, 2});
  CHECK_THROWS_AS(gamma(VertexSet{0, 1}, two), InputError);
  CHECK_THROWS_AS(make_family(2, s, {VertexSet{0}}), InputError);
  CHECK_THROWS_AS(make_family(2, s, {VertexSet{0, 7}}), InputError);
  CHECK_THROWS_AS(make_family(2, s, {VertexSet{0, 1}, VertexSet{0, 1}}), InputError);
}

TEST_CASE("extraction step on a planted missing pair") {
  const VertexSet planted{0, 1};
  auto chain = oracle::function_chain(8, {0, 3}, [&](oracle::Mask s, int l) {
    return l >= 2 || !planted.is_subset_of(VertexSet(s));
  });
  const VertexSet s = VertexSet::range(8);
  auto r = lemma32_step(chain, 1, q(1, 2), make_family(2, s, k_subsets(s, 2)), 2, false);
  REQUIRE(r.m.has_value());
  CHECK(*r.m == planted);
  CHECK(r.pair_count == 6);
  std::vector<VertexSet> want;
  for (int v = 2; v < 8; ++v) want.push_back(VertexSet{v});
  CHECK(r.next.sets == want);
  CHECK(r.next.i == 1);
  CHECK_THROWS_AS(lemma32_step(chain, 1, q(1, 2), make_family(2, s, {}), 2, false), InputError);
  CHECK_THROWS_AS(lemma32_step(chain, 1, q(3, 2), make_family(2, s, k_subsets(s, 2)), 2, false), InputError);
}

TEST_CASE("extraction step output contract on interval chains") {
  std::mt19937_64 rng(44);
  int with_pairs = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const auto boxes = oracle::random_intervals(rng, 8, 8, 16, 2, 16);
    const auto chain = quantitative_chain({std::vector<Body>(boxes.begin(), boxes.end()), q(1, 2), {0, 3}, {}});
    const VertexSet s = VertexSet::range(8);
    std::vector<VertexSet> f2;
    for (VertexSet p : k_subsets(s, 2))
      if (chain.member(p, 0)) f2.push_back(p);
    if (f2.empty()) continue;
    const auto family = make_family(2, s, f2);
    auto r = lemma32_step(chain, 1, q(1, 2), family, 2, false);
    if (!r.m) {
      CHECK(r.pair_count == 0);
      continue;
    }
    ++with_pairs;
    CHECK_FALSE(chain.member(*r.m, 1));
    CHECK(r.m->size() == 2);
    for (VertexSet a : r.next.sets) {
      CHECK(a.size() == 1);
      r.m->for_each([&](Vertex v) { CHECK(std::binary_search(family.sets.begin(), family.sets.end(), a.with(v))); });
    }
    // Every A paired with M is reported.
    for (VertexSet a : k_subsets(s, 1)) {
      const bool paired = r.m->is_subset_of(gamma(a, family));
      CHECK(paired == std::binary_search(r.next.sets.begin(), r.next.sets.end(), a));
    }
    CHECK(r.closed_form == pow(q(1, 2) / 48, 2) * Rational(binomial(8, 1)));
  }
  CHECK(with_pairs > 0);
}

TEST_CASE("beta recurrence") {
  CHECK(beta_recurrence(q(1, 2), 1) == q(1, 2));
  CHECK(beta_recurrence(q(1, 2), 2) == q(1, 9216));
  CHECK(to_string(beta_recurrence(q(1, 2), 2)) == "1/9216");
  CHECK(beta_recurrence(q(3, 4), 3) == pow(pow(q(3, 4) / 108, 3) / 108, 3));
  CHECK_THROWS_AS(beta_recurrence(1, 2), InputError);
  CHECK_THROWS_AS(beta_recurrence(0, 2), InputError);
  for (int num = 1; num + 1 < 20; ++num) {
    const Rational a = q(num, 20), b = q(num + 1, 20);
    for (int k = 1; k <= 4; ++k) {
      CHECK(beta_recurrence(a, k) < beta_recurrence(b, k));
      if (k >= 2) CHECK(beta_recurrence(a, k) < beta_recurrence(a, k - 1));
    }
  }
}

TEST_CASE("stability delta") {
  CHECK(stability_delta(1, 1, 1, 1) == 1);
  CHECK(stability_delta(q(1, 2), 2, 2, 6) == 0);
  CHECK(stability_delta(q(1, 2), 2, 3, 12) == q(1, 66));
  CHECK_THROWS_AS(stability_delta(0, 2, 2, 6), InputError);
  CHECK_THROWS_AS(stability_delta(q(1, 2), 3, 2, 6), InputError);
  for (int n = 1; n <= 16; ++n)
    for (int h = 1; h <= 3; ++h)
      for (int k = h; k <= std::min(n, 4); ++k)
        for (int e = 1; e <= 8; ++e) {
          const Rational eps = q(e, 8);
          const Rational d = stability_delta(eps, h, k, n);
          const Rational ceil_side =
              ratio(binomial(ceil_to_int(eps * n / h), h), binomial(k, h) * binomial(n, h));
          CHECK(d <= ceil_side);
          CHECK(d >= 0);
        }
}

TEST_CASE("theorem driver short-circuits on a large edge") {
  auto r = theorem25_run(complete(4, 4), 0, VertexSet::range(4), 2, q(1, 2));
  CHECK(r.kind == TheoremOutcome::Kind::LargeEdge);
  CHECK(r.large_edge == VertexSet::range(4));
  CHECK(r.large_edge_level == 3);
  CHECK(r.beta == q(1, 9216));
  CHECK(r.alpha_observed == 1);
  CHECK(Rational(r.large_edge.size()) >= r.beta * 4);
  CHECK_THROWS_AS(theorem25_run(complete(4, 3), 0, VertexSet::range(4), 2, q(1, 2)), InputError);
  CHECK_THROWS_AS(theorem25_run(complete(4, 4), 0, VertexSet::range(4), 2, q(1, 2), q(1, 100000)), InputError);
  CHECK_THROWS_AS(theorem25_run(constant(4, {VertexSet{}}, 4), 0, VertexSet::range(4), 2, q(1, 2)), InputError);
}

TEST_CASE("theorem driver finds planted witnesses") {
  int witnesses = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    PlantedSpec spec;
    spec.k = 2 + static_cast<int>(seed % 2);
    spec.level = 0;
    spec.seed = seed;
    const auto p = planted_colorful_chain(spec);
    const VertexSet s = p.support;
    const auto r = theorem25_run(p.chain, 0, s, spec.k, q(1, 100), Rational(1));
    CHECK(r.kind == TheoremOutcome::Kind::ContradictionWitness);
    if (!r.witness) continue;
    CHECK(revalidate(*r.witness, p.chain));
    CHECK(r.witness->classes.size() == static_cast<std::size_t>(spec.k));
    CHECK(static_cast<int>(r.rounds.size()) == spec.k - 1);
    ++witnesses;
  }
  CHECK(witnesses == 20);
}

TEST_CASE("theorem driver on colorful-verified chains never certifies a contradiction") {
  std::mt19937_64 rng(45);
  int verified = 0;
  for (int trial = 0; trial < 150 && verified < 40; ++trial) {
    SyntheticChainSpec spec;
    spec.n = 5 + static_cast<int>(rng() % 2);
    spec.window = {0, 3};
    spec.density = {0.6};
    spec.seed = rng();
    const auto chain = random_chain(spec);
    ClassUniverse u;
    u.max_class_size = 0;
    if (colorful_helly_holds(chain, 2, 0, u).violation) continue;
    const VertexSet s = chain.ground().all();
    const auto f = fractional_profile(chain, 2, 0, s);
    if (f.alpha == 0) continue;
    ++verified;
    const Rational alpha = f.alpha == 1 ? q(99, 100) : f.alpha;
    const auto r = theorem25_run(chain, 0, s, 2, alpha);
    CHECK(r.kind != TheoremOutcome::Kind::ContradictionWitness);
    if (r.kind == TheoremOutcome::Kind::LargeEdge) CHECK(Rational(r.large_edge.size()) >= r.beta * s.size());
  }
  CHECK(verified > 0);
}

TEST_CASE("stability check outcomes") {
  auto vac = theorem26_check(complete(6, 4), 2, 2, 0, VertexSet::range(6), q(1, 2));
  CHECK(vac.status == StabilityReport::Status::Vacuous);

  // Pairs everywhere, no triples: Helly fails, so no theorem claim is made.
  const auto pairs_only = uniform(12, 2, {0, 3});
  auto pf = theorem26_check(pairs_only, 2, 2, 0, VertexSet::range(12), q(1, 2));
  CHECK(pf.hypothesis);
  CHECK(pf.delta == q(3, 66));
  CHECK(pf.fraction == 0);
  CHECK(pf.status == StabilityReport::Status::PreconditionFailed);
  REQUIRE(pf.precondition_certificate.has_value());
  CHECK(pf.precondition_certificate->kind == CertificateKind::HellyViolation);

  std::mt19937_64 rng(46);
  int non_vacuous = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto boxes = oracle::random_intervals(rng, 8, 8, 24, 2, 16);
    const auto chain = quantitative_chain({std::vector<Body>(boxes.begin(), boxes.end()), q(1, 2), {0, 3}, {}});
    for (const Rational& eps : {q(1, 4), q(1, 2)}) {
      auto r = theorem26_check(chain, 2, 2, 0, VertexSet::range(8), eps);
      CHECK(r.status != StabilityReport::Status::Inconsistent);
      CHECK(r.status != StabilityReport::Status::PreconditionFailed);
      if (r.hypothesis) {
        ++non_vacuous;
        CHECK(r.fraction >= r.delta);
      }
    }
  }
  CHECK(non_vacuous > 0);
}
