#include "qhelly/certificate.hpp"

namespace qhelly {

std::string kind_name(CertificateKind kind) {
  switch (kind) {
    case CertificateKind::Monotonicity: return "monotonicity-violation";
    case CertificateKind::DownwardClosure: return "downward-closure-violation";
    case CertificateKind::HellyViolation: return "helly-violation";
    case CertificateKind::ColorfulViolation: return "colorful-violation";
    case CertificateKind::FractionalReport: return "fractional-report";
    case CertificateKind::Suspect: return "suspect";
  }
  return "unknown";
}

namespace {

std::string classes_string(const std::vector<VertexSet>& classes) {
  std::string out;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (i) out += '|';
    out += to_string(classes[i]);
  }
  return out;
}

std::string payload(const Certificate& c, CertificateKind kind) {
  switch (kind) {
    case CertificateKind::Monotonicity:
      return "S=" + to_string(c.set) + ";level=" + std::to_string(c.level);
    case CertificateKind::DownwardClosure:
      return "S=" + to_string(c.set) + ";T=" + to_string(c.subset) + ";level=" + std::to_string(c.level);
    case CertificateKind::HellyViolation:
      return "S=" + to_string(c.set) + ";level=" + std::to_string(c.level) + ";h=" + std::to_string(c.arity);
    case CertificateKind::ColorfulViolation:
      return "classes=" + classes_string(c.classes) + ";level=" + std::to_string(c.level);
    case CertificateKind::FractionalReport:
      return "S=" + to_string(c.set) + ";level=" + std::to_string(c.level) + ";k=" + std::to_string(c.arity) +
             ";alpha=" + to_string(c.alpha) + ";largest=" + to_string(c.largest) + ";beta=" + to_string(c.beta);
    case CertificateKind::Suspect:
      return "reason=" + c.reason;
  }
  return {};
}

}  // namespace

std::string describe(const Certificate& cert) {
  if (cert.kind == CertificateKind::Suspect)
    return "suspect " + kind_name(cert.suspected) + ";" + payload(cert, cert.suspected) + ";reason=" + cert.reason;
  return kind_name(cert.kind) + ";" + payload(cert, cert.kind);
}

Certificate make_suspect(Certificate claim, std::string reason) {
  claim.suspected = claim.kind;
  claim.kind = CertificateKind::Suspect;
  claim.reason = std::move(reason);
  return claim;
}

}  // namespace qhelly
