#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qhelly/chain.hpp"
#include "qhelly/geometry.hpp"

namespace qhelly {

/// How intersection volumes are obtained for a quantitative chain.
struct VolumeBackend {
  enum class Kind { Exact, MonteCarlo };
  Kind kind = Kind::Exact;
  std::uint64_t samples = 100000;
  Rational confidence = Rational(19, 20);
  std::uint64_t seed = 0;
  int workers = 1;
};

struct QuantitativeChainSpec {
  std::vector<Body> bodies;  // body i is vertex i
  Rational v;                // threshold base, 0 < v < 1
  LevelWindow window;
  VolumeBackend backend;
};

/// Constant chain: S is an edge at every level of `window` iff the bodies
/// indexed by S have a common point (closed sets, exact test). Boxes of any
/// dimension, or boxes and polygons in the plane.
HypergraphChain nerve_chain(const std::vector<Body>& bodies, LevelWindow window = {0, 8});

/// S is an edge at level l iff vol(intersection of S) >= v^l. The exact
/// backend handles boxes and planar polygons; the Monte Carlo backend also
/// accepts halfspace bodies and yields a chain flagged approximate. Monte
/// Carlo membership uses one shared sample set, so the approximate chain is
/// still monotone and downward closed.
HypergraphChain quantitative_chain(const QuantitativeChainSpec& spec);

/// Output level l is input level anchor + period * l. The output window is
/// every l whose input level lies in the input window.
HypergraphChain subsampled_chain(const HypergraphChain& chain, int period, int anchor);

/// Either a validated explicit chain or the monotonicity certificate that
/// rejected it.
struct ExplicitChainResult {
  std::optional<HypergraphChain> chain;
  std::optional<Certificate> rejection;
};

ExplicitChainResult explicit_chain(std::vector<ExplicitHypergraph> levels, int first_level);

/// Synthetic explicit chain. Each level draws `edges_per_level` random sets
/// (every vertex joins independently with the level's density), merges them
/// with the previous level's maximal edges and reduces to an antichain.
struct SyntheticChainSpec {
  int n = 6;
  LevelWindow window{0, 3};
  std::vector<double> density{0.5};  // one value per level, or one for all
  int edges_per_level = 0;           // 0 means n
  std::uint64_t seed = 0;
};

HypergraphChain random_chain(const SyntheticChainSpec& spec);

/// Synthetic chain with a planted colorful violation at `level`: k disjoint
/// classes of k vertices each, whose transversals are exactly the k-subsets
/// of their union in H_level. Random noise edges are added on every level
/// without ever putting a whole class into H_l for l <= level + k, any
/// further k-subset of the union into H_level, or the whole union into
/// H_{level+k+1}. Vertices are shuffled and `extra` outside vertices added.
struct PlantedSpec {
  int k = 2;
  int level = 0;
  int extra = 0;
  int noise_edges = 4;  // random sets drawn per level
  double density = 0.5;
  std::uint64_t seed = 0;
};

struct PlantedChain {
  HypergraphChain chain;
  std::vector<VertexSet> classes;  // sorted
  VertexSet support;               // union of the classes
};

/// The window is [level, level + k + 1].
PlantedChain planted_colorful_chain(const PlantedSpec& spec);

/// Message when a verifier about `level` needs levels up to level + `reach`
/// but the chain window stops earlier (or starts later); nullopt otherwise.
std::optional<std::string> window_warning(const HypergraphChain& chain, int level, int reach, std::string_view verifier);

}  // namespace qhelly
