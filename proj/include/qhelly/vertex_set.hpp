#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace qhelly {

using Vertex = int;

/// Largest ground set representable by VertexSet.
inline constexpr int kMaxVertices = 64;

/// A subset of {0, ..., 63}, stored as a bit mask. Equality is extensional.
/// The natural order (operator<) is the lexicographic order of the sorted
/// index tuples, which is the iteration order used everywhere for
/// certificates: {0} < {0,1} < {0,1,2} < {0,2} < {1}.
class VertexSet {
 public:
  constexpr VertexSet() = default;
  constexpr explicit VertexSet(std::uint64_t bits) : bits_(bits) {}
  VertexSet(std::initializer_list<Vertex> vertices);

  static VertexSet range(int n);  // {0, ..., n-1}
  static VertexSet from_vector(const std::vector<Vertex>& vertices);

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool contains(Vertex v) const { return v >= 0 && v < 64 && ((bits_ >> v) & 1U); }
  constexpr bool is_subset_of(VertexSet other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool intersects(VertexSet other) const { return (bits_ & other.bits_) != 0; }

  /// Smallest / largest member, or -1 when empty.
  constexpr Vertex min() const { return bits_ ? std::countr_zero(bits_) : -1; }
  constexpr Vertex max() const { return bits_ ? 63 - std::countl_zero(bits_) : -1; }

  VertexSet with(Vertex v) const;
  VertexSet without(Vertex v) const;

  constexpr VertexSet operator|(VertexSet o) const { return VertexSet(bits_ | o.bits_); }
  constexpr VertexSet operator&(VertexSet o) const { return VertexSet(bits_ & o.bits_); }
  constexpr VertexSet operator-(VertexSet o) const { return VertexSet(bits_ & ~o.bits_); }

  std::vector<Vertex> members() const;

  template <typename F>
  void for_each(F&& f) const {
    for (std::uint64_t b = bits_; b; b &= b - 1) f(static_cast<Vertex>(std::countr_zero(b)));
  }

  friend constexpr bool operator==(VertexSet a, VertexSet b) { return a.bits_ == b.bits_; }
  friend bool operator<(VertexSet a, VertexSet b);

 private:
  std::uint64_t bits_ = 0;
};

/// Lexicographic comparison of sorted index tuples.
bool lex_less(VertexSet a, VertexSet b);

/// "{0,2,5}"; the empty set prints as "{}".
std::string to_string(VertexSet s);

/// Accepts "{0,2,5}", "0 2 5", "0,2,5" and "{}".
VertexSet parse_vertex_set(std::string_view text);

/// All k-subsets of `s`, in lexicographic order. k > |s| yields nothing;
/// k = 0 yields the empty set once.
std::vector<VertexSet> k_subsets(VertexSet s, int k);

/// Visits the k-subsets of `s` in lexicographic order; the visitor returns
/// false to stop early. Returns false iff stopped early.
bool for_each_k_subset(VertexSet s, int k, const std::function<bool(VertexSet)>& visit);

/// Visits every subset of `s` (including the empty set and `s`) in
/// lexicographic order; the visitor returns false to stop early.
bool for_each_subset_lex(VertexSet s, const std::function<bool(VertexSet)>& visit);

}  // namespace qhelly

template <>
struct std::hash<qhelly::VertexSet> {
  std::size_t operator()(qhelly::VertexSet s) const noexcept { return std::hash<std::uint64_t>{}(s.bits()); }
};
