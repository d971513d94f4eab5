#include "qhelly/verify.hpp"

#include <algorithm>

#include "qhelly/parallel.hpp"

namespace qhelly {

namespace {

void require_arity(int h, const char* name) {
  if (h < 1) throw InputError(std::string(name) + " must be >= 1");
}

/// Candidate tracking for clique searches: a candidate of clique K is a
/// vertex u above max(K) such that K ∪ {u} is still a clique.
class CliqueGrower {
 public:
  CliqueGrower(const ChainOracle& oracle, int level, int h) : oracle_(oracle), level_(level), h_(h) {}

  VertexSet initial_candidates(VertexSet s) const {
    if (h_ > 1) return s;
    VertexSet out;
    s.for_each([&](Vertex u) {
      if (oracle_.member(VertexSet{u}, level_)) out = out.with(u);
    });
    return out;
  }

  /// Candidates of k ∪ {v}, from the candidates `cand` of k, restricted to
  /// vertices above v.
  VertexSet next_candidates(VertexSet k, Vertex v, VertexSet cand) const {
    VertexSet above(cand.bits() & ~((std::uint64_t{2} << v) - 1));
    if (h_ < 2 || k.size() < h_ - 2) return above;
    VertexSet out;
    above.for_each([&](Vertex u) {
      const VertexSet pair{v, u};
      const bool ok = for_each_k_subset(k, h_ - 2, [&](VertexSet t) { return oracle_.member(t | pair, level_); });
      if (ok) out = out.with(u);
    });
    return out;
  }

 private:
  const ChainOracle& oracle_;
  int level_;
  int h_;
};

VertexSet vertices_from(VertexSet cand, Vertex v) { return VertexSet(cand.bits() & ~((std::uint64_t{1} << v) - 1)); }

}  // namespace

int omega(const HypergraphChain& chain, int level, VertexSet s, int h) { return max_clique(chain, level, s, h).size(); }

VertexSet max_clique(const HypergraphChain& chain, int level, VertexSet s, int h) {
  chain.require_levels(level, level, "omega");
  chain.ground().check(s);
  require_arity(h, "omega arity h");
  CliqueGrower grow(chain.oracle(), level, h);
  VertexSet best;
  auto rec = [&](auto&& self, VertexSet k, VertexSet cand) -> void {
    if (k.size() > best.size()) best = k;
    for (Vertex v = cand.min(); v >= 0; v = VertexSet(cand.bits() & ~((std::uint64_t{2} << v) - 1)).min()) {
      if (k.size() + vertices_from(cand, v).size() <= best.size()) return;
      self(self, k.with(v), grow.next_candidates(k, v, cand));
    }
  };
  rec(rec, VertexSet{}, grow.initial_candidates(s));
  return best;
}

VertexSet largest_edge_within(const HypergraphChain& chain, int level, VertexSet s) {
  chain.require_levels(level, level, "largest_edge_within");
  chain.ground().check(s);
  if (chain.kind() == ChainKind::Explicit) {
    std::optional<VertexSet> best;
    for (VertexSet e : chain.levels()[static_cast<std::size_t>(level - chain.window().lo)].maximal_edges()) {
      VertexSet c = e & s;
      if (!best || c.size() > best->size() || (c.size() == best->size() && c < *best)) best = c;
    }
    return best.value_or(VertexSet{});
  }
  const ChainOracle& oracle = chain.oracle();
  VertexSet best;
  auto rec = [&](auto&& self, VertexSet e, VertexSet rest) -> void {
    if (e.size() > best.size()) best = e;
    for (Vertex v = rest.min(); v >= 0; v = VertexSet(rest.bits() & ~((std::uint64_t{2} << v) - 1)).min()) {
      const VertexSet tail = vertices_from(rest, v);
      if (e.size() + tail.size() <= best.size()) return;
      const VertexSet next = e.with(v);
      if (oracle.member(next, level)) self(self, next, tail.without(v));
    }
  };
  rec(rec, VertexSet{}, s);
  return best;
}

std::optional<Certificate> helly_holds(const HypergraphChain& chain, int h, int level, int workers,
                                       std::optional<VertexSet> within) {
  chain.require_levels(level, level + 1, "helly_holds");
  require_arity(h, "Helly arity h");
  if (within) chain.ground().check(*within);
  const ChainOracle& oracle = chain.oracle();
  CliqueGrower grow(oracle, level, h);
  const VertexSet start = grow.initial_candidates(within.value_or(chain.ground().all()));
  const auto n = static_cast<std::size_t>(chain.n());

  auto found = parallel_first<VertexSet>(n, workers, [&](std::size_t first) -> std::optional<VertexSet> {
    const auto v0 = static_cast<Vertex>(first);
    if (!start.contains(v0)) return std::nullopt;
    std::optional<VertexSet> hit;
    auto rec = [&](auto&& self, VertexSet k, VertexSet cand) -> bool {
      if (k.size() > h && !oracle.member(k, level + 1)) {
        hit = k;
        return true;
      }
      for (Vertex v = cand.min(); v >= 0; v = VertexSet(cand.bits() & ~((std::uint64_t{2} << v) - 1)).min())
        if (self(self, k.with(v), grow.next_candidates(k, v, cand))) return true;
      return false;
    };
    rec(rec, VertexSet{v0}, grow.next_candidates(VertexSet{}, v0, start));
    return hit;
  });
  if (!found) return std::nullopt;
  Certificate c;
  c.kind = CertificateKind::HellyViolation;
  c.set = *found;
  c.level = level;
  c.arity = h;
  if (chain.approximate()) return make_suspect(c, "approximate chain");
  return c;
}

int min_helly_number(const HypergraphChain& chain, std::optional<int> level, int workers) {
  const LevelWindow w = chain.window();
  std::vector<int> levels;
  if (level) {
    chain.require_levels(*level, *level + 1, "min_helly_number");
    levels.push_back(*level);
  } else {
    for (int l = w.lo; l < w.hi; ++l) levels.push_back(l);
    if (levels.empty()) throw InputError("min_helly_number needs a window with at least two levels");
  }
  for (int h = 1; h <= chain.n(); ++h) {
    bool ok = true;
    for (int l : levels)
      if (helly_holds(chain, h, l, workers)) {
        ok = false;
        break;
      }
    if (ok) return h;
  }
  return chain.n() + 1;
}

// ---------------------------------------------------------------------------
// Colorful Helly
// ---------------------------------------------------------------------------

std::string ClassUniverse::describe(int k) const {
  const std::string size = max_class_size > 0 ? "size <= " + std::to_string(max_class_size) : "any size";
  std::string out;
  switch (kind) {
    case Kind::Disjoint: out = "pairwise-disjoint " + std::to_string(k) + "-tuples of classes of " + size; break;
    case Kind::Any: out = "all " + std::to_string(k) + "-multisets of classes of " + size; break;
    case Kind::Explicit: out = "explicit list of " + std::to_string(tuples.size()) + " tuples"; break;
  }
  if (budget > 0) out += ", budget " + std::to_string(budget);
  return out;
}

namespace {

struct BlockResult {
  std::optional<std::vector<VertexSet>> violation;
  std::uint64_t examined = 0;
  bool hit_limit = false;
};

/// Extends the distinct images of the partial selection map by one class;
/// false when some new image is not an edge.
bool extend_images(const ChainOracle& oracle, int level, const std::vector<VertexSet>& images, VertexSet cls,
                   std::vector<VertexSet>& out) {
  out.clear();
  for (VertexSet f : images) {
    bool ok = true;
    cls.for_each([&](Vertex x) {
      if (!ok) return;
      VertexSet g = f.with(x);
      if (!oracle.member(g, level)) ok = false;
      else out.push_back(g);
    });
    if (!ok) return false;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return true;
}

class TupleSearch {
 public:
  TupleSearch(const ChainOracle& oracle, int level, int k, bool disjoint, std::vector<VertexSet> classes)
      : oracle_(oracle), level_(level), k_(k), disjoint_(disjoint), classes_(std::move(classes)) {}

  std::size_t blocks() const { return classes_.size(); }

  BlockResult run(std::size_t first, std::uint64_t limit) const {
    BlockResult r;
    std::vector<std::size_t> chosen{first};
    std::vector<VertexSet> images;
    if (!step(r, limit)) return r;
    if (!extend_images(oracle_, level_, {VertexSet{}}, classes_[first], images)) return r;
    search(r, limit, chosen, classes_[first], images);
    return r;
  }

 private:
  bool step(BlockResult& r, std::uint64_t limit) const {
    if (limit > 0 && r.examined >= limit) {
      r.hit_limit = true;
      return false;
    }
    ++r.examined;
    return true;
  }

  bool search(BlockResult& r, std::uint64_t limit, std::vector<std::size_t>& chosen, VertexSet used,
              const std::vector<VertexSet>& images) const {
    if (static_cast<int>(chosen.size()) == k_) {
      std::vector<VertexSet> tuple;
      for (auto i : chosen) tuple.push_back(classes_[i]);
      r.violation = std::move(tuple);
      return true;
    }
    std::vector<VertexSet> next;
    for (std::size_t j = chosen.back() + (disjoint_ ? 1 : 0); j < classes_.size(); ++j) {
      if (disjoint_ && classes_[j].intersects(used)) continue;
      if (!step(r, limit)) return true;
      if (!extend_images(oracle_, level_, images, classes_[j], next)) continue;
      chosen.push_back(j);
      const bool stop = search(r, limit, chosen, used | classes_[j], next);
      chosen.pop_back();
      if (stop) return true;
    }
    return false;
  }

  const ChainOracle& oracle_;
  int level_;
  int k_;
  bool disjoint_;
  std::vector<VertexSet> classes_;
};

bool colorful_violation(const ChainOracle& oracle, int level, const std::vector<VertexSet>& classes) {
  for (VertexSet c : classes)
    if (oracle.member(c, level + 1)) return false;
  for (VertexSet f : colorful_selections(ColorClasses(classes)))
    if (!oracle.member(f, level)) return false;
  return true;
}

}  // namespace

ColorfulReport colorful_helly_holds(const HypergraphChain& chain, int k, int level, const ClassUniverse& universe,
                                    int workers) {
  chain.require_levels(level, level + 1, "colorful_helly_holds");
  require_arity(k, "colorful arity k");
  if (universe.max_class_size < 0) throw InputError("class size limit must be >= 0");
  const ChainOracle& oracle = chain.oracle();
  ColorfulReport report;
  report.universe = universe.describe(k);

  std::optional<std::vector<VertexSet>> violation;
  if (universe.kind == ClassUniverse::Kind::Explicit) {
    for (const auto& tuple : universe.tuples) {
      if (static_cast<int>(tuple.size()) != k)
        throw InputError("explicit class tuple has " + std::to_string(tuple.size()) + " classes, expected " +
                         std::to_string(k));
      for (VertexSet c : tuple) chain.ground().check(c);
      if (universe.budget > 0 && report.examined >= universe.budget) {
        report.truncated = true;
        break;
      }
      ++report.examined;
      if (colorful_violation(oracle, level, tuple)) {
        violation = tuple;
        break;
      }
    }
  } else {
    // Classes that could appear in a violation: not an edge one level up,
    // and every member a vertex of H_level.
    std::vector<VertexSet> classes;
    if (universe.within) chain.ground().check(*universe.within);
    const VertexSet pool = universe.within.value_or(chain.ground().all());
    const int n = pool.size();
    const int top = universe.max_class_size > 0 ? std::min(universe.max_class_size, n) : n;
    for (int size = 1; size <= top; ++size) {
      for_each_k_subset(pool, size, [&](VertexSet c) {
        bool singletons = true;
        c.for_each([&](Vertex x) { singletons = singletons && oracle.member(VertexSet{x}, level); });
        if (singletons && !oracle.member(c, level + 1)) classes.push_back(c);
        return true;
      });
    }
    std::sort(classes.begin(), classes.end());
    TupleSearch search(oracle, level, k, universe.kind == ClassUniverse::Kind::Disjoint, std::move(classes));

    std::vector<BlockResult> blocks(search.blocks());
    std::atomic<std::size_t> best{blocks.size()};
    parallel_for(blocks.size(), workers, [&](std::size_t i) {
      if (i > best.load()) return;
      blocks[i] = search.run(i, universe.budget);
      if (blocks[i].violation) {
        std::size_t cur = best.load();
        while (i < cur && !best.compare_exchange_weak(cur, i)) {
        }
      }
    });
    std::uint64_t remaining = universe.budget;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      BlockResult b = blocks[i];
      if (universe.budget > 0 && (b.hit_limit || b.examined > remaining)) {
        b = search.run(i, remaining);
        report.examined += b.examined;
        if (b.violation) violation = b.violation;
        else report.truncated = true;
        break;
      }
      report.examined += b.examined;
      remaining -= universe.budget > 0 ? b.examined : 0;
      if (b.violation) {
        violation = b.violation;
        break;
      }
    }
  }

  if (violation) {
    Certificate c;
    c.kind = CertificateKind::ColorfulViolation;
    c.classes = std::move(*violation);
    c.level = level;
    c.arity = k;
    report.violation = chain.approximate() ? make_suspect(c, "approximate chain") : c;
  }
  if (report.truncated) report.universe += " (truncated after " + std::to_string(report.examined) + " tuples)";
  return report;
}

// ---------------------------------------------------------------------------
// Fractional profile and re-validation
// ---------------------------------------------------------------------------

Certificate FractionalProfile::certificate() const {
  Certificate c;
  c.kind = CertificateKind::FractionalReport;
  c.set = set;
  c.level = level;
  c.arity = k;
  c.alpha = alpha;
  c.largest = largest;
  c.beta = beta;
  return c;
}

FractionalProfile fractional_profile(const HypergraphChain& chain, int k, int level, VertexSet s) {
  chain.require_levels(level, level + 1, "fractional_profile");
  chain.ground().check(s);
  require_arity(k, "fractional arity k");
  if (s.size() < k) throw InputError("fractional_profile needs |S| >= k");
  FractionalProfile p;
  p.k = k;
  p.level = level;
  p.set = s;
  std::uint64_t edges = 0;
  for_each_k_subset(s, k, [&](VertexSet t) {
    edges += chain.oracle().member(t, level) ? 1 : 0;
    return true;
  });
  p.edges = Integer(static_cast<unsigned long>(edges));
  p.total = binomial(s.size(), k);
  p.alpha = ratio(p.edges, p.total);
  p.largest = largest_edge_within(chain, level + 1, s);
  p.beta = ratio(p.largest.size(), s.size());
  return p;
}

bool revalidate(const Certificate& cert, const HypergraphChain& chain) {
  const CertificateKind kind = cert.kind == CertificateKind::Suspect ? cert.suspected : cert.kind;
  const LevelWindow w = chain.window();
  auto in = [&](VertexSet s, int level) { return w.contains(level) && chain.member(s, level); };
  switch (kind) {
    case CertificateKind::Monotonicity:
      return w.contains(cert.level + 1) && in(cert.set, cert.level) && !in(cert.set, cert.level + 1);
    case CertificateKind::DownwardClosure:
      return cert.subset.is_subset_of(cert.set) && in(cert.set, cert.level) && !in(cert.subset, cert.level);
    case CertificateKind::HellyViolation: {
      if (cert.set.size() <= cert.arity || !w.contains(cert.level, cert.level + 1)) return false;
      if (in(cert.set, cert.level + 1)) return false;
      return for_each_k_subset(cert.set, cert.arity, [&](VertexSet t) { return in(t, cert.level); });
    }
    case CertificateKind::ColorfulViolation:
      if (cert.classes.empty() || !w.contains(cert.level, cert.level + 1)) return false;
      for (VertexSet c : cert.classes)
        if (c.empty()) return false;
      return colorful_violation(chain.oracle(), cert.level, cert.classes);
    case CertificateKind::FractionalReport: {
      if (!w.contains(cert.level, cert.level + 1) || cert.set.size() < cert.arity || cert.arity < 1) return false;
      FractionalProfile p = fractional_profile(chain, cert.arity, cert.level, cert.set);
      return p.alpha == cert.alpha && p.beta == cert.beta && cert.largest.is_subset_of(cert.set) &&
             in(cert.largest, cert.level + 1) && cert.largest.size() == p.largest.size();
    }
    case CertificateKind::Suspect:
      return false;
  }
  return false;
}

}  // namespace qhelly
