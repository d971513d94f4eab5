#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qhelly/certificate.hpp"
#include "qhelly/hypergraph.hpp"

namespace qhelly {

/// Inclusive range of levels [lo, hi].
struct LevelWindow {
  int lo = 0;
  int hi = 0;

  bool contains(int level) const { return level >= lo && level <= hi; }
  bool contains(int from, int to) const { return from <= to && from >= lo && to <= hi; }
  int count() const { return hi - lo + 1; }
};

std::string to_string(LevelWindow w);

/// Membership oracle behind a chain. Implementations are immutable and must
/// be safe to query from several threads.
class ChainOracle {
 public:
  virtual ~ChainOracle() = default;
  /// `level` is inside the chain window and `s` inside the ground set.
  virtual bool member(VertexSet s, int level) const = 0;
};

/// Oracle backed by a per-subset table of the first level at which the set
/// becomes an edge (`kNever` when it never does inside the window).
class MinLevelTable final : public ChainOracle {
 public:
  static constexpr std::int32_t kNever = INT32_MAX;

  MinLevelTable(int n, std::vector<std::int32_t> first_level);
  bool member(VertexSet s, int level) const override;
  std::int32_t first_level(VertexSet s) const { return first_level_[s.bits()]; }

 private:
  int n_;
  std::vector<std::int32_t> first_level_;
};

/// Largest ground set for which builders materialize a MinLevelTable.
inline constexpr int kTableLimit = 20;

enum class ChainKind { Explicit, Implicit };

/// A monotone family of downward-closed hypergraphs H_lo ⊆ ... ⊆ H_hi over one
/// ground set, exposed through a membership oracle on a finite window.
/// Cheap to copy; the oracle is shared.
class HypergraphChain {
 public:
  HypergraphChain(GroundSet ground, LevelWindow window, std::shared_ptr<const ChainOracle> oracle, ChainKind kind,
                  std::string description, bool approximate = false);

  /// Explicit chain from one hypergraph per level (levels[i] is level
  /// window.lo + i). Does not check monotonicity; see explicit_chain().
  static HypergraphChain from_levels(std::vector<ExplicitHypergraph> levels, int first_level,
                                     std::string description = "explicit");

  /// Throws InputError when `level` is outside the window or `s` outside the
  /// ground set.
  bool member(VertexSet s, int level) const;

  const GroundSet& ground() const { return ground_; }
  int n() const { return ground_.size(); }
  LevelWindow window() const { return window_; }
  ChainKind kind() const { return kind_; }
  bool approximate() const { return approximate_; }
  const std::string& description() const { return description_; }
  const ChainOracle& oracle() const { return *oracle_; }

  /// Per-level hypergraphs for explicit chains, empty otherwise.
  const std::vector<ExplicitHypergraph>& levels() const { return *levels_; }

  /// Throws InputError unless [from, to] lies in the window; `what` names
  /// the operation in the diagnostic.
  void require_levels(int from, int to, std::string_view what) const;

 private:
  GroundSet ground_;
  LevelWindow window_;
  std::shared_ptr<const ChainOracle> oracle_;
  std::shared_ptr<const std::vector<ExplicitHypergraph>> levels_;
  ChainKind kind_;
  std::string description_;
  bool approximate_;
};

/// Checks the chain axioms. Explicit chains: monotonicity of every maximal
/// edge across consecutive levels, exhaustively. Implicit chains:
/// `sample_budget` seeded random (S, level) probes of monotonicity and
/// downward closure. Returns the first violation found, or nullopt.
std::optional<Certificate> validate_chain(const HypergraphChain& chain, std::uint64_t sample_budget,
                                          std::uint64_t seed);

/// Explicit-chain text format:
///   n <n> levels <lo> <hi>
///   level <l>:
///   <sorted vertex indices of one maximal edge per line, "{}" for the empty edge>
/// with levels separated by blank lines. Rejects non-antichains and
/// non-monotone chains with a diagnostic naming the edge and levels.
HypergraphChain parse_explicit_chain(std::string_view text);

/// Parses the same format without the monotonicity check; returns the levels
/// and the first level index.
std::pair<std::vector<ExplicitHypergraph>, int> parse_explicit_levels(std::string_view text);
std::string read_text_file(const std::string& path, std::string_view what);
HypergraphChain load_explicit_chain(const std::string& path);
std::string format_explicit_chain(const HypergraphChain& chain);

}  // namespace qhelly
