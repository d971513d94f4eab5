#pragma once

#include <string>
#include <vector>

#include "qhelly/rational.hpp"
#include "qhelly/vertex_set.hpp"

namespace qhelly {

enum class CertificateKind {
  Monotonicity,      // set in H_level but not in H_{level+1}
  DownwardClosure,   // set in H_level, subset not in H_level
  HellyViolation,    // all arity-subsets of set in H_level, set not in H_{level+1}
  ColorfulViolation, // every colorful selection of classes in H_level, no class in H_{level+1}
  FractionalReport,  // observed (alpha, beta) for set at level
  Suspect,           // a claim of kind `suspected` on an approximate chain
};

/// Machine-checkable witness. Which payload fields are meaningful depends on
/// `kind`; `revalidate` (verify.hpp) re-checks it against a chain.
struct Certificate {
  CertificateKind kind = CertificateKind::Suspect;
  CertificateKind suspected = CertificateKind::Suspect;
  int level = 0;
  int arity = 0;
  VertexSet set;
  VertexSet subset;
  std::vector<VertexSet> classes;
  VertexSet largest;
  Rational alpha;
  Rational beta;
  std::string reason;

  /// True for kinds that witness a failed property on an exact chain.
  bool is_violation() const {
    return kind == CertificateKind::Monotonicity || kind == CertificateKind::DownwardClosure ||
           kind == CertificateKind::HellyViolation || kind == CertificateKind::ColorfulViolation;
  }
};

std::string kind_name(CertificateKind kind);

/// Payload as a single line, e.g. "S={0,1,2};level=3;h=2".
std::string describe(const Certificate& cert);

/// Wraps a would-be violation found on an approximate chain.
Certificate make_suspect(Certificate claim, std::string reason);

}  // namespace qhelly
