#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qhelly/chain.hpp"
#include "qhelly/verify.hpp"

namespace qhelly {

/// Pairwise disjoint r-subsets of `host`, none an edge of H_level, chosen
/// greedily in lexicographic order (so maximal, not necessarily maximum).
struct MissingEdgeFamily {
  int level = 0;
  int r = 0;
  VertexSet host;
  std::vector<VertexSet> sets;
  int omega = 0;            // omega_r(H_level|host)
  bool bound_holds = false;  // t * r >= |host| - omega
};

MissingEdgeFamily max_disjoint_missing(const HypergraphChain& chain, int level, VertexSet s, int r);

/// Checks every MissingEdgeFamily invariant, maximality included.
bool check_family(const HypergraphChain& chain, const MissingEdgeFamily& family);

/// Counting side of the first missing-edge lemma at (level, S, k).
struct Lemma31aCounts {
  Integer missing;   // |C(S,k) \ H_level|
  Integer bound;     // C(floor((|S| - omega)/k), k)
  int omega = 0;     // omega_k(H_{level+1}|S)
  MissingEdgeFamily family;  // disjoint k-sets missing from H_{level+1}
  /// k of the family's sets whose colorful selections are all edges of
  /// H_level: the chain fails the colorful property on that tuple.
  std::optional<Certificate> colorful_violation;
  bool holds() const { return missing >= bound; }
};

Lemma31aCounts lemma31a_counts(const HypergraphChain& chain, int level, VertexSet s, int k);

/// Counting side of the second missing-edge lemma at (level, S, h, k).
struct Lemma31bCounts {
  Integer missing;   // |C(S,h) \ H_level|
  Rational bound;    // C(floor((|S| - omega)/h), h) / C(k,h)
  int omega = 0;     // omega_h(H_{level+2}|S)
  MissingEdgeFamily family;  // disjoint h-sets missing from H_{level+2}
  std::optional<Certificate> colorful_violation;  // at level + 1
  bool holds() const { return Rational(missing) >= bound; }
};

Lemma31bCounts lemma31b_counts(const HypergraphChain& chain, int level, VertexSet s, int h, int k);

/// A family of i-subsets of a host set.
struct NeighborhoodFamily {
  int i = 0;
  VertexSet host;
  std::vector<VertexSet> sets;  // sorted, distinct
};

/// Validates sizes, containment and distinctness; sorts the sets.
NeighborhoodFamily make_family(int i, VertexSet host, std::vector<VertexSet> sets);

/// {v in host : A ∪ {v} in F_i}; requires |A| = i - 1.
VertexSet gamma(VertexSet a, const NeighborhoodFamily& family);

struct Lemma32Result {
  NeighborhoodFamily next;        // F_{i-1}
  std::optional<VertexSet> m;     // nullopt when the pair set is empty
  Integer pair_count;             // |P|
  bool size_hypothesis = false;   // |F_i| >= c C(n,i)
  bool omega_hypothesis = false;  // omega_k(H_{t+1}|S) <= c n / 2
  int omega = 0;
  Rational closed_form;           // (c / 12k^2)^k C(n, i-1)
  bool closed_form_holds = false; // |F_{i-1}| >= closed_form
};

/// One extraction step: enumerates P = {(A, M) : |A| = i-1, M a k-subset of
/// Gamma_A that is not an edge of H_t}, picks the M paired with the most A
/// (lexicographically first on ties) and returns those A as F_{i-1}. With
/// `enforce`, a failed hypothesis is an InputError; otherwise it is only
/// recorded. An empty F_i is always an InputError.
Lemma32Result lemma32_step(const HypergraphChain& chain, int t_level, const Rational& c, const NeighborhoodFamily& family,
                           int k, bool enforce = true, int workers = 1);

/// alpha_{k-1} where alpha_0 = alpha and alpha_{j+1} = (alpha_j / 12k^2)^k.
Rational beta_recurrence(const Rational& alpha, int k);

struct TheoremRound {
  int j = 0;
  int i = 0;
  int t_level = 0;
  Rational c;
  std::size_t family_size = 0;
  Lemma32Result step;
};

struct TheoremOutcome {
  enum class Kind { LargeEdge, ContradictionWitness, Aborted };
  Kind kind = Kind::Aborted;
  VertexSet large_edge;
  int large_edge_level = 0;
  std::optional<Certificate> witness;  // ColorfulViolation or HellyViolation
  std::string reason;                  // why the run aborted
  Rational alpha_observed;
  Rational beta;       // beta_recurrence(alpha, k)
  Rational threshold;  // large-edge threshold actually used (>= beta)
  std::vector<TheoremRound> rounds;
  std::string transcript;
};

std::string kind_name(TheoremOutcome::Kind kind);

/// Runs the large-edge-or-witness procedure at (level, S, k, alpha).
/// `threshold` overrides the large-edge fraction; it must be at least
/// beta_recurrence(alpha, k). Requires the window to contain
/// [level, level + k + 1] and the observed fraction of k-subsets of S in
/// H_level to be at least alpha.
TheoremOutcome theorem25_run(const HypergraphChain& chain, int level, VertexSet s, int k, const Rational& alpha,
                             std::optional<Rational> threshold = std::nullopt, int workers = 1);

/// C(k,h)^{-1} C(floor(eps n / h), h) / C(n,h), and 0 when floor(eps n / h) < h.
Rational stability_delta(const Rational& epsilon, int h, int k, int n);

struct StabilityReport {
  enum class Status { Vacuous, Consistent, PreconditionFailed, Inconsistent };
  Status status = Status::Vacuous;
  VertexSet largest;        // largest edge of H_{level+3} in S
  bool hypothesis = false;  // |largest| < (1 - eps)|S|
  Integer missing;          // |C(S,h) \ H_level|
  Integer total;            // C(|S|,h)
  Rational fraction;        // missing / total
  Rational delta;
  bool inequality = false;  // fraction >= delta
  std::string preconditions;  // which local checks ran and how they ended
  std::optional<Certificate> precondition_certificate;
};

std::string status_name(StabilityReport::Status status);

/// Checks the stability contrapositive at (level, S): when the largest edge
/// of H_{level+3} inside S has fewer than (1 - eps)|S| elements, the
/// fraction of h-subsets of S missing from H_level must be at least
/// stability_delta. The Helly property at levels level and level+2 and the
/// colorful property at level+1 are verified inside S first.
StabilityReport theorem26_check(const HypergraphChain& chain, int h, int k, int level, VertexSet s,
                                const Rational& epsilon, int workers = 1);

}  // namespace qhelly
