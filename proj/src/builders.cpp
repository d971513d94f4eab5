#include "qhelly/builders.hpp"

#include <random>

#include "qhelly/parallel.hpp"

namespace qhelly {

namespace {

/// Running intersection of a growing family of exact bodies.
struct ExactState {
  bool universe = true;  // intersection of no bodies
  std::optional<Box> box;
  ConvexPolygon polygon;
};

class ExactBodies {
 public:
  explicit ExactBodies(const std::vector<Body>& bodies) {
    bool any_polygon = false;
    int dim = -1;
    for (std::size_t i = 0; i < bodies.size(); ++i) {
      const Body& b = bodies[i];
      if (std::holds_alternative<HalfspaceBody>(b))
        throw UnsupportedError("body " + std::to_string(i) + " is a halfspace body; exact intersection needs boxes or polygons");
      const int d = body_dimension(b);
      if (dim >= 0 && d != dim) throw InputError("bodies have different dimensions");
      dim = d;
      any_polygon = any_polygon || std::holds_alternative<ConvexPolygon>(b);
    }
    planar_ = any_polygon;
    for (const Body& b : bodies) {
      if (planar_) {
        if (const auto* box = std::get_if<Box>(&b)) polygons_.push_back(ConvexPolygon::from_box(*box));
        else polygons_.push_back(std::get<ConvexPolygon>(b));
      } else {
        boxes_.push_back(std::get<Box>(b));
      }
    }
  }

  ExactState add(const ExactState& s, Vertex v) const {
    ExactState out;
    out.universe = false;
    const auto i = static_cast<std::size_t>(v);
    if (planar_) {
      if (s.universe) {
        out.polygon = polygons_[i];
      } else if (!s.polygon.empty()) {
        const ConvexPolygon pair[] = {s.polygon, polygons_[i]};
        out.polygon = intersect_polygons(pair);
      }
    } else {
      if (s.universe) {
        out.box = boxes_[i];
      } else if (s.box) {
        const Box pair[] = {*s.box, boxes_[i]};
        out.box = intersect_boxes(pair);
      }
    }
    return out;
  }

  bool nonempty(const ExactState& s) const { return s.universe || (planar_ ? !s.polygon.empty() : s.box.has_value()); }

  Rational volume(const ExactState& s) const { return planar_ ? polygon_area(s.polygon) : box_volume(s.box); }

  ExactState of(VertexSet s) const {
    ExactState st;
    s.for_each([&](Vertex v) { st = add(st, v); });
    return st;
  }

 private:
  bool planar_ = false;
  std::vector<Box> boxes_;
  std::vector<ConvexPolygon> polygons_;
};

/// Depth-first walk over the subsets of {0..n-1} carrying a per-set state.
/// `visit` returns false to skip the supersets reached through this node.
template <typename State, typename Step, typename Visit>
void walk_subsets(int n, VertexSet s, const State& state, Vertex next, const Step& step, const Visit& visit) {
  for (Vertex v = next; v < n; ++v) {
    VertexSet t = s.with(v);
    State child = step(state, v);
    if (visit(t, child)) walk_subsets(n, t, child, v + 1, step, visit);
  }
}

/// Index of the first level of `window` whose threshold v^l is at most
/// `volume`, as a table entry.
std::int32_t first_level_for(const Rational& volume, const std::vector<Rational>& thresholds, LevelWindow window) {
  for (std::size_t i = 0; i < thresholds.size(); ++i)
    if (volume >= thresholds[i]) return static_cast<std::int32_t>(window.lo + static_cast<int>(i));
  return MinLevelTable::kNever;
}

std::vector<Rational> thresholds_for(const Rational& v, LevelWindow window) {
  std::vector<Rational> t;
  for (int l = window.lo; l <= window.hi; ++l) t.push_back(ipow(v, l));
  return t;
}

class LazyNerveOracle final : public ChainOracle {
 public:
  explicit LazyNerveOracle(ExactBodies bodies) : bodies_(std::move(bodies)) {}
  bool member(VertexSet s, int) const override { return bodies_.nonempty(bodies_.of(s)); }

 private:
  ExactBodies bodies_;
};

class LazyVolumeOracle final : public ChainOracle {
 public:
  LazyVolumeOracle(ExactBodies bodies, Rational v) : bodies_(std::move(bodies)), v_(std::move(v)) {}
  bool member(VertexSet s, int level) const override {
    if (s.empty()) return true;
    return bodies_.volume(bodies_.of(s)) >= ipow(v_, level);
  }

 private:
  ExactBodies bodies_;
  Rational v_;
};

void check_window(LevelWindow w) {
  if (w.lo > w.hi) throw InputError("empty level window " + to_string(w));
}

void check_v(const Rational& v) {
  if (v <= 0 || v >= 1) throw InputError("threshold base v must lie in (0,1), got " + to_string(v));
}

// ---------------------------------------------------------------------------
// Monte Carlo membership on a shared sample set
// ---------------------------------------------------------------------------

using Bits = std::vector<std::uint64_t>;

struct SampleMembership {
  // bits[p][body]: membership of partition p's samples in the body.
  std::vector<std::vector<Bits>> bits;
  std::uint64_t samples = 0;
  Rational box_volume;

  std::uint64_t hits_of(VertexSet s) const {
    std::uint64_t hits = 0;
    for (const auto& part : bits) {
      const std::size_t words = part.empty() ? 0 : part[0].size();
      for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t acc = ~std::uint64_t{0};
        s.for_each([&](Vertex v) { acc &= part[static_cast<std::size_t>(v)][w]; });
        hits += static_cast<std::uint64_t>(std::popcount(acc));
      }
    }
    return hits;
  }

  Rational estimate(std::uint64_t hits) const {
    return ratio(Integer(static_cast<unsigned long>(hits)), Integer(static_cast<unsigned long>(samples))) * box_volume;
  }
};

SampleMembership sample_bodies(const std::vector<HalfspaceBody>& bodies, const VolumeBackend& backend) {
  if (backend.samples == 0) throw InputError("Monte Carlo backend needs a positive sample count");
  const int d = bodies.front().dimension();
  std::optional<Box> hull;
  for (const auto& b : bodies) {
    if (b.dimension() != d) throw InputError("bodies have different dimensions");
    if (!b.bounding_box()) continue;
    if (!hull) {
      hull = *b.bounding_box();
      continue;
    }
    std::vector<Interval> axes = hull->axes();
    for (int i = 0; i < d; ++i) {
      auto& a = axes[static_cast<std::size_t>(i)];
      const auto& o = b.bounding_box()->axis(i);
      if (o.lo < a.lo) a.lo = o.lo;
      if (o.hi > a.hi) a.hi = o.hi;
    }
    hull = Box(std::move(axes));
  }

  SampleMembership m;
  m.samples = backend.samples;
  m.bits.resize(static_cast<std::size_t>(kDefaultPartitions));
  if (!hull) {
    m.box_volume = 0;
    return m;
  }
  m.box_volume = box_volume(*hull);
  std::vector<double> lo(static_cast<std::size_t>(d)), width(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    lo[static_cast<std::size_t>(i)] = hull->axis(i).lo.get_d();
    width[static_cast<std::size_t>(i)] = Rational(hull->axis(i).hi - hull->axis(i).lo).get_d();
  }
  const auto parts = static_cast<std::uint64_t>(kDefaultPartitions);
  parallel_for(m.bits.size(), backend.workers, [&](std::size_t p) {
    const std::uint64_t share = backend.samples / parts + (p < backend.samples % parts ? 1 : 0);
    std::mt19937_64 rng(mix_seed(backend.seed, p));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto& part = m.bits[p];
    part.assign(bodies.size(), Bits((share + 63) / 64, 0));
    std::vector<double> x(static_cast<std::size_t>(d));
    for (std::uint64_t s = 0; s < share; ++s) {
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = lo[i] + width[i] * unit(rng);
      for (std::size_t b = 0; b < bodies.size(); ++b)
        if (bodies[b].contains(x)) part[b][s / 64] |= std::uint64_t{1} << (s % 64);
    }
  });
  return m;
}

class LazySampleOracle final : public ChainOracle {
 public:
  LazySampleOracle(SampleMembership m, Rational v) : m_(std::move(m)), v_(std::move(v)) {}
  bool member(VertexSet s, int level) const override {
    if (s.empty()) return true;
    return m_.estimate(m_.hits_of(s)) >= ipow(v_, level);
  }

 private:
  SampleMembership m_;
  Rational v_;
};

std::vector<HalfspaceBody> as_halfspace_bodies(const std::vector<Body>& bodies) {
  std::vector<HalfspaceBody> out;
  for (const Body& b : bodies) {
    if (const auto* box = std::get_if<Box>(&b)) out.push_back(HalfspaceBody::from_box(*box));
    else if (const auto* poly = std::get_if<ConvexPolygon>(&b)) out.push_back(HalfspaceBody::from_polygon(*poly));
    else out.push_back(std::get<HalfspaceBody>(b));
  }
  return out;
}

HypergraphChain monte_carlo_chain(const QuantitativeChainSpec& spec) {
  const int n = static_cast<int>(spec.bodies.size());
  SampleMembership m = sample_bodies(as_halfspace_bodies(spec.bodies), spec.backend);
  const std::string description = "quantitative(v=" + to_string(spec.v) + ",mc samples=" +
                                  std::to_string(spec.backend.samples) + " seed=" + std::to_string(spec.backend.seed) +
                                  ")";
  if (n > kTableLimit)
    return HypergraphChain(GroundSet(n), spec.window, std::make_shared<LazySampleOracle>(std::move(m), spec.v),
                           ChainKind::Implicit, description, true);

  const auto thresholds = thresholds_for(spec.v, spec.window);
  std::vector<std::int32_t> first(std::size_t{1} << n, MinLevelTable::kNever);
  first[0] = spec.window.lo;
  // State: running AND of the membership bitsets, partition by partition.
  using State = std::vector<Bits>;
  State all;
  for (const auto& part : m.bits) all.push_back(Bits(part.empty() ? 0 : part[0].size(), ~std::uint64_t{0}));
  walk_subsets(
      n, VertexSet{}, all, 0,
      [&](const State& s, Vertex v) {
        State out = s;
        for (std::size_t p = 0; p < out.size(); ++p)
          for (std::size_t w = 0; w < out[p].size(); ++w) out[p][w] &= m.bits[p][static_cast<std::size_t>(v)][w];
        return out;
      },
      [&](VertexSet t, const State& s) {
        std::uint64_t hits = 0;
        for (const auto& words : s)
          for (auto w : words) hits += static_cast<std::uint64_t>(std::popcount(w));
        if (hits == 0) return false;
        first[t.bits()] = first_level_for(m.estimate(hits), thresholds, spec.window);
        return first[t.bits()] != MinLevelTable::kNever;
      });
  return HypergraphChain(GroundSet(n), spec.window, std::make_shared<MinLevelTable>(n, std::move(first)),
                         ChainKind::Implicit, description, true);
}

class SubsampledOracle final : public ChainOracle {
 public:
  SubsampledOracle(HypergraphChain base, int period, int anchor)
      : base_(std::move(base)), period_(period), anchor_(anchor) {}
  bool member(VertexSet s, int level) const override { return base_.oracle().member(s, anchor_ + period_ * level); }

 private:
  HypergraphChain base_;
  int period_;
  int anchor_;
};

int floor_div(int a, int b) { return a / b - ((a % b != 0) && ((a < 0) != (b < 0)) ? 1 : 0); }
int ceil_div(int a, int b) { return -floor_div(-a, b); }

}  // namespace

HypergraphChain nerve_chain(const std::vector<Body>& bodies, LevelWindow window) {
  check_window(window);
  const int n = static_cast<int>(bodies.size());
  if (n > kMaxVertices) throw InputError("at most " + std::to_string(kMaxVertices) + " bodies");
  ExactBodies exact(bodies);
  if (n > kTableLimit)
    return HypergraphChain(GroundSet(n), window, std::make_shared<LazyNerveOracle>(std::move(exact)),
                           ChainKind::Implicit, "nerve");
  std::vector<std::int32_t> first(std::size_t{1} << n, MinLevelTable::kNever);
  first[0] = window.lo;
  walk_subsets(
      n, VertexSet{}, ExactState{}, 0, [&](const ExactState& s, Vertex v) { return exact.add(s, v); },
      [&](VertexSet t, const ExactState& s) {
        if (!exact.nonempty(s)) return false;
        first[t.bits()] = window.lo;
        return true;
      });
  return HypergraphChain(GroundSet(n), window, std::make_shared<MinLevelTable>(n, std::move(first)),
                         ChainKind::Implicit, "nerve");
}

HypergraphChain quantitative_chain(const QuantitativeChainSpec& spec) {
  check_window(spec.window);
  check_v(spec.v);
  const int n = static_cast<int>(spec.bodies.size());
  if (n > kMaxVertices) throw InputError("at most " + std::to_string(kMaxVertices) + " bodies");
  if (n == 0) throw InputError("quantitative chain needs at least one body");
  if (spec.backend.kind == VolumeBackend::Kind::MonteCarlo) return monte_carlo_chain(spec);

  ExactBodies exact(spec.bodies);
  const std::string description = "quantitative(v=" + to_string(spec.v) + ",exact)";
  if (n > kTableLimit)
    return HypergraphChain(GroundSet(n), spec.window, std::make_shared<LazyVolumeOracle>(std::move(exact), spec.v),
                           ChainKind::Implicit, description);
  const auto thresholds = thresholds_for(spec.v, spec.window);
  std::vector<std::int32_t> first(std::size_t{1} << n, MinLevelTable::kNever);
  first[0] = spec.window.lo;
  walk_subsets(
      n, VertexSet{}, ExactState{}, 0, [&](const ExactState& s, Vertex v) { return exact.add(s, v); },
      [&](VertexSet t, const ExactState& s) {
        first[t.bits()] = first_level_for(exact.volume(s), thresholds, spec.window);
        return first[t.bits()] != MinLevelTable::kNever;
      });
  return HypergraphChain(GroundSet(n), spec.window, std::make_shared<MinLevelTable>(n, std::move(first)),
                         ChainKind::Implicit, description);
}

HypergraphChain subsampled_chain(const HypergraphChain& chain, int period, int anchor) {
  if (period < 1) throw InputError("subsampling period must be >= 1");
  const LevelWindow in = chain.window();
  LevelWindow out{ceil_div(in.lo - anchor, period), floor_div(in.hi - anchor, period)};
  if (out.lo > out.hi)
    throw InputError("subsampling with period " + std::to_string(period) + " and anchor " + std::to_string(anchor) +
                     " needs input levels " + std::to_string(anchor) + "+" + std::to_string(period) +
                     "*l for some l, but the input window is " + to_string(in));
  const std::string description =
      "subsampled(period=" + std::to_string(period) + ",anchor=" + std::to_string(anchor) + ") of " + chain.description();
  if (chain.kind() == ChainKind::Explicit) {
    std::vector<ExplicitHypergraph> levels;
    for (int l = out.lo; l <= out.hi; ++l) levels.push_back(chain.levels()[static_cast<std::size_t>(anchor + period * l - in.lo)]);
    return HypergraphChain::from_levels(std::move(levels), out.lo, description);
  }
  return HypergraphChain(chain.ground(), out, std::make_shared<SubsampledOracle>(chain, period, anchor),
                         ChainKind::Implicit, description, chain.approximate());
}

ExplicitChainResult explicit_chain(std::vector<ExplicitHypergraph> levels, int first_level) {
  HypergraphChain chain = HypergraphChain::from_levels(std::move(levels), first_level);
  ExplicitChainResult result;
  if (auto cert = validate_chain(chain, 0, 0)) result.rejection = std::move(cert);
  else result.chain = std::move(chain);
  return result;
}

HypergraphChain random_chain(const SyntheticChainSpec& spec) {
  check_window(spec.window);
  if (spec.n < 0 || spec.n > kMaxVertices) throw InputError("synthetic chain size out of range");
  const auto count = static_cast<std::size_t>(spec.window.count());
  if (spec.density.size() != 1 && spec.density.size() != count)
    throw InputError("density list needs 1 or " + std::to_string(count) + " entries");
  for (double d : spec.density)
    if (!(d >= 0.0 && d <= 1.0)) throw InputError("density must lie in [0,1]");
  const int per_level = spec.edges_per_level > 0 ? spec.edges_per_level : spec.n;
  std::mt19937_64 rng(spec.seed);
  auto coin = [&](double p) { return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p; };

  GroundSet ground(spec.n);
  std::vector<ExplicitHypergraph> levels;
  std::vector<VertexSet> previous;
  for (std::size_t i = 0; i < count; ++i) {
    const double p = spec.density.size() == 1 ? spec.density[0] : spec.density[i];
    std::vector<VertexSet> edges = previous;
    for (int e = 0; e < per_level; ++e) {
      VertexSet s;
      for (Vertex v = 0; v < spec.n; ++v)
        if (coin(p)) s = s.with(v);
      edges.push_back(s);
    }
    levels.push_back(ExplicitHypergraph::from_edges(ground, std::move(edges)));
    previous = levels.back().maximal_edges();
  }
  return HypergraphChain::from_levels(std::move(levels), spec.window.lo,
                                      "synthetic(n=" + std::to_string(spec.n) + ",seed=" + std::to_string(spec.seed) + ")");
}

PlantedChain planted_colorful_chain(const PlantedSpec& spec) {
  const int k = spec.k;
  if (k < 2) throw InputError("planted chains need k >= 2");
  if (spec.extra < 0 || k * k + spec.extra > kTableLimit) throw InputError("planted chain too large");
  if (!(spec.density >= 0.0 && spec.density <= 1.0)) throw InputError("density must lie in [0,1]");
  const int n = k * k + spec.extra;
  std::mt19937_64 rng(spec.seed);
  auto coin = [&](double p) { return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p; };

  std::vector<Vertex> perm(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) perm[static_cast<std::size_t>(v)] = v;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<VertexSet> classes(static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c)
    for (int j = 0; j < k; ++j) classes[static_cast<std::size_t>(c)] = classes[static_cast<std::size_t>(c)].with(perm[static_cast<std::size_t>(c * k + j)]);
  VertexSet support;
  for (VertexSet c : classes) support = support | c;

  std::vector<VertexSet> edges;
  auto transversals = [&](auto&& self, std::size_t c, VertexSet acc) -> void {
    if (c == classes.size()) {
      edges.push_back(acc);
      return;
    }
    classes[c].for_each([&](Vertex v) { self(self, c + 1, acc.with(v)); });
  };
  transversals(transversals, 0, VertexSet{});

  GroundSet ground(n);
  std::vector<ExplicitHypergraph> levels;
  for (int l = spec.level; l <= spec.level + k + 1; ++l) {
    for (int e = 0; e < spec.noise_edges; ++e) {
      VertexSet s;
      for (Vertex v = 0; v < n; ++v)
        if (coin(spec.density)) s = s.with(v);
      if (l == spec.level) {
        // Keep at most k-1 vertices of the union.
        while ((s & support).size() > k - 1) s = s.without((s & support).max());
      } else if (l <= spec.level + k) {
        for (VertexSet c : classes)
          if (c.is_subset_of(s)) s = s.without(c.max());
      } else if (support.is_subset_of(s)) {
        s = s.without(support.max());
      }
      edges.push_back(s);
    }
    levels.push_back(ExplicitHypergraph::from_edges(ground, edges));
    edges = levels.back().maximal_edges();
  }
  std::sort(classes.begin(), classes.end());
  return PlantedChain{HypergraphChain::from_levels(std::move(levels), spec.level,
                                                   "planted(k=" + std::to_string(k) + ",seed=" + std::to_string(spec.seed) + ")"),
                      std::move(classes), support};
}

std::optional<std::string> window_warning(const HypergraphChain& chain, int level, int reach, std::string_view verifier) {
  if (chain.window().contains(level, level + reach)) return std::nullopt;
  return std::string(verifier) + " at level " + std::to_string(level) + " needs levels [" + std::to_string(level) + "," +
         std::to_string(level + reach) + "] but the chain window is " + to_string(chain.window());
}

}  // namespace qhelly
