#pragma once

#include <string>
#include <vector>

#include "qhelly/vertex_set.hpp"

namespace qhelly {

/// Finite vertex set {0, ..., n-1} with optional display labels.
class GroundSet {
 public:
  GroundSet() = default;
  explicit GroundSet(int n, std::vector<std::string> labels = {});

  int size() const { return n_; }
  VertexSet all() const { return VertexSet::range(n_); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::string label(Vertex v) const;

  /// Throws InputError when `s` has a vertex >= n.
  void check(VertexSet s) const;

  friend bool operator==(const GroundSet& a, const GroundSet& b) { return a.n_ == b.n_; }

 private:
  int n_ = 0;
  std::vector<std::string> labels_;
};

/// Downward-closed hypergraph stored through its maximal edges. A set is an
/// edge iff it is contained in some maximal edge, so the empty set is an
/// edge whenever there is at least one maximal edge.
class ExplicitHypergraph {
 public:
  ExplicitHypergraph() = default;

  /// Rejects (InputError) edges outside the ground set and inputs that are
  /// not antichains; the diagnostic names the nested pair.
  ExplicitHypergraph(GroundSet ground, std::vector<VertexSet> maximal_edges);

  /// Reduces an arbitrary edge list to its maximal members first.
  static ExplicitHypergraph from_edges(GroundSet ground, std::vector<VertexSet> edges);

  /// The complete hypergraph 2^V.
  static ExplicitHypergraph complete(GroundSet ground);

  const GroundSet& ground() const { return ground_; }
  /// Sorted lexicographically.
  const std::vector<VertexSet>& maximal_edges() const { return maximal_; }

  /// True iff `s` is contained in some maximal edge.
  bool contains(VertexSet s) const;

  friend bool operator==(const ExplicitHypergraph& a, const ExplicitHypergraph& b) {
    return a.ground_ == b.ground_ && a.maximal_ == b.maximal_;
  }

 private:
  GroundSet ground_;
  std::vector<VertexSet> maximal_;
};

/// Drops every set contained in another one and sorts the rest.
std::vector<VertexSet> antichain_reduce(std::vector<VertexSet> sets);

/// k >= 1 color classes, each nonempty. Classes may overlap.
class ColorClasses {
 public:
  explicit ColorClasses(std::vector<VertexSet> classes);

  int k() const { return static_cast<int>(classes_.size()); }
  const std::vector<VertexSet>& classes() const { return classes_; }
  VertexSet support() const;

 private:
  std::vector<VertexSet> classes_;
};

/// The distinct sets F admitting a surjection phi: [k] -> F with
/// phi(i) in S_i, sorted lexicographically. With overlapping classes some
/// selections have fewer than k elements.
std::vector<VertexSet> colorful_selections(const ColorClasses& classes);

}  // namespace qhelly
