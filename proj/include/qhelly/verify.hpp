#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qhelly/chain.hpp"

namespace qhelly {

/// Size of the largest K ⊆ S with every h-subset of K an edge of H_level.
/// Sets with fewer than h elements count as cliques, so the result is at
/// least min(|S|, h-1).
int omega(const HypergraphChain& chain, int level, VertexSet s, int h);

/// A clique of size omega(chain, level, s, h); lexicographically first among
/// the largest ones.
VertexSet max_clique(const HypergraphChain& chain, int level, VertexSet s, int h);

/// Lexicographically first maximum-cardinality subset of S that is an edge
/// of H_level.
VertexSet largest_edge_within(const HypergraphChain& chain, int level, VertexSet s);

/// First S (lexicographic order) with |S| > h, every h-subset of S in
/// H_level and S not in H_{level+1}; nullopt when there is none. Sets with
/// at most h elements satisfy the condition automatically. `within`
/// restricts the search to subsets of a vertex set. On approximate chains the
/// result is a Suspect certificate.
std::optional<Certificate> helly_holds(const HypergraphChain& chain, int h, int level, int workers = 1,
                                       std::optional<VertexSet> within = std::nullopt);

/// Least h for which helly_holds succeeds at every level l with [l, l+1] in
/// the window (or only at `level` when given); n+1 if none.
int min_helly_number(const HypergraphChain& chain, std::optional<int> level = std::nullopt, int workers = 1);

/// Which tuples of color classes the colorful verifier enumerates. Tuples are
/// taken up to order, since the property does not depend on it.
struct ClassUniverse {
  enum class Kind { Disjoint, Any, Explicit };
  Kind kind = Kind::Disjoint;
  int max_class_size = 3;                        // 0 means no limit
  std::uint64_t budget = 0;                      // partial tuples examined; 0 means no limit
  std::vector<std::vector<VertexSet>> tuples;    // for Kind::Explicit
  std::optional<VertexSet> within;               // classes drawn from this set only

  std::string describe(int k) const;
};

struct ColorfulReport {
  std::optional<Certificate> violation;
  std::uint64_t examined = 0;  // partial and complete tuples visited
  bool truncated = false;      // budget exhausted before the universe was covered
  std::string universe;        // human-readable description of what was checked
};

/// Searches the universe for classes S_1..S_k whose colorful selections are
/// all edges of H_level while no class is an edge of H_{level+1}. The
/// certificate is the first such tuple in enumeration order.
ColorfulReport colorful_helly_holds(const HypergraphChain& chain, int k, int level, const ClassUniverse& universe,
                                    int workers = 1);

struct FractionalProfile {
  int k = 0;
  int level = 0;
  VertexSet set;
  Integer edges;         // |H_level ∩ C(S,k)|
  Integer total;         // C(|S|,k)
  Rational alpha;        // edges / total
  VertexSet largest;     // largest edge of H_{level+1} inside S
  Rational beta;         // |largest| / |S|

  Certificate certificate() const;
};

FractionalProfile fractional_profile(const HypergraphChain& chain, int k, int level, VertexSet s);

/// Re-checks a certificate against the chain's oracle.
bool revalidate(const Certificate& cert, const HypergraphChain& chain);

}  // namespace qhelly
