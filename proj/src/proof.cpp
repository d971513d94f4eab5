#include "qhelly/proof.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "qhelly/parallel.hpp"

namespace qhelly {

namespace {

Integer count_missing(const HypergraphChain& chain, int level, VertexSet s, int r) {
  unsigned long missing = 0;
  for_each_k_subset(s, r, [&](VertexSet t) {
    missing += chain.oracle().member(t, level) ? 0 : 1;
    return true;
  });
  return Integer(missing);
}

/// First k-tuple (by index combination) of `classes` whose colorful
/// selections are all edges of H_level.
std::optional<Certificate> colorful_tuple_violation(const HypergraphChain& chain, int level,
                                                    const std::vector<VertexSet>& classes, int k) {
  const int t = static_cast<int>(classes.size());
  if (t < k) return std::nullopt;
  std::optional<Certificate> found;
  for_each_k_subset(VertexSet::range(t), k, [&](VertexSet idx) {
    std::vector<VertexSet> tuple;
    idx.for_each([&](Vertex i) { tuple.push_back(classes[static_cast<std::size_t>(i)]); });
    for (VertexSet f : colorful_selections(ColorClasses(tuple)))
      if (!chain.oracle().member(f, level)) return true;
    Certificate c;
    c.kind = CertificateKind::ColorfulViolation;
    c.classes = std::move(tuple);
    c.level = level;
    c.arity = k;
    found = chain.approximate() ? make_suspect(c, "approximate chain") : c;
    return false;
  });
  return found;
}

Integer floor_binomial(int numerator, int denominator, int k) {
  const int x = numerator >= 0 ? numerator / denominator : -1;
  return binomial(x, k);
}

}  // namespace

MissingEdgeFamily max_disjoint_missing(const HypergraphChain& chain, int level, VertexSet s, int r) {
  chain.require_levels(level, level, "max_disjoint_missing");
  chain.ground().check(s);
  if (r < 1) throw InputError("missing-edge size r must be >= 1");
  MissingEdgeFamily f;
  f.level = level;
  f.r = r;
  f.host = s;
  VertexSet used;
  for_each_k_subset(s, r, [&](VertexSet m) {
    if (!m.intersects(used) && !chain.oracle().member(m, level)) {
      f.sets.push_back(m);
      used = used | m;
    }
    return true;
  });
  f.omega = omega(chain, level, s, r);
  f.bound_holds = static_cast<int>(f.sets.size()) * r >= s.size() - f.omega;
  return f;
}

bool check_family(const HypergraphChain& chain, const MissingEdgeFamily& family) {
  VertexSet used;
  for (VertexSet m : family.sets) {
    if (m.size() != family.r || !m.is_subset_of(family.host) || m.intersects(used)) return false;
    if (chain.member(m, family.level)) return false;
    used = used | m;
  }
  return for_each_k_subset(family.host - used, family.r, [&](VertexSet m) { return chain.member(m, family.level); });
}

Lemma31aCounts lemma31a_counts(const HypergraphChain& chain, int level, VertexSet s, int k) {
  chain.require_levels(level, level + 1, "lemma31a_counts");
  chain.ground().check(s);
  if (k < 1) throw InputError("k must be >= 1");
  Lemma31aCounts out;
  out.missing = count_missing(chain, level, s, k);
  out.family = max_disjoint_missing(chain, level + 1, s, k);
  out.omega = out.family.omega;
  out.bound = floor_binomial(s.size() - out.omega, k, k);
  out.colorful_violation = colorful_tuple_violation(chain, level, out.family.sets, k);
  return out;
}

Lemma31bCounts lemma31b_counts(const HypergraphChain& chain, int level, VertexSet s, int h, int k) {
  chain.require_levels(level, level + 2, "lemma31b_counts");
  chain.ground().check(s);
  if (h < 1) throw InputError("h must be >= 1");
  if (h > k) throw InputError("lemma31b_counts needs h <= k, got h=" + std::to_string(h) + " k=" + std::to_string(k));
  Lemma31bCounts out;
  out.missing = count_missing(chain, level, s, h);
  out.family = max_disjoint_missing(chain, level + 2, s, h);
  out.omega = out.family.omega;
  out.bound = ratio(floor_binomial(s.size() - out.omega, h, h), binomial(k, h));
  out.colorful_violation = colorful_tuple_violation(chain, level + 1, out.family.sets, k);
  return out;
}

NeighborhoodFamily make_family(int i, VertexSet host, std::vector<VertexSet> sets) {
  if (i < 0) throw InputError("family arity must be >= 0");
  for (VertexSet a : sets) {
    if (a.size() != i)
      throw InputError("family member " + to_string(a) + " has size " + std::to_string(a.size()) + ", expected " +
                       std::to_string(i));
    if (!a.is_subset_of(host)) throw InputError("family member " + to_string(a) + " is not inside the host set");
  }
  std::sort(sets.begin(), sets.end());
  if (std::adjacent_find(sets.begin(), sets.end()) != sets.end()) throw InputError("family has duplicate members");
  return NeighborhoodFamily{i, host, std::move(sets)};
}

VertexSet gamma(VertexSet a, const NeighborhoodFamily& family) {
  if (a.size() != family.i - 1)
    throw InputError("gamma needs |A| = " + std::to_string(family.i - 1) + ", got " + std::to_string(a.size()));
  VertexSet out;
  (family.host - a).for_each([&](Vertex v) {
    if (std::binary_search(family.sets.begin(), family.sets.end(), a.with(v))) out = out.with(v);
  });
  return out;
}

Lemma32Result lemma32_step(const HypergraphChain& chain, int t_level, const Rational& c, const NeighborhoodFamily& family,
                           int k, bool enforce, int workers) {
  chain.require_levels(t_level, t_level + 1, "lemma32_step");
  chain.ground().check(family.host);
  if (k < 1) throw InputError("k must be >= 1");
  if (family.i < 1) throw InputError("lemma32_step needs i >= 1");
  if (c <= 0 || c >= 1) throw InputError("c must lie in (0,1), got " + to_string(c));
  if (family.sets.empty()) throw InputError("F_i is empty");

  const int n = family.host.size();
  const int i = family.i;
  Lemma32Result r;
  r.size_hypothesis = Rational(static_cast<long>(family.sets.size())) >= c * Rational(binomial(n, i));
  r.omega = omega(chain, t_level + 1, family.host, k);
  r.omega_hypothesis = Rational(r.omega) <= c * n / 2;
  if (enforce && !r.size_hypothesis)
    throw InputError("hypothesis |F_i| >= c C(n,i) fails: |F_i|=" + std::to_string(family.sets.size()) + ", c=" + to_string(c) +
                     ", C(n,i)=" + binomial(n, i).get_str());
  if (enforce && !r.omega_hypothesis)
    throw InputError("hypothesis omega_k(H_{t+1}|S) <= cn/2 fails: omega=" + std::to_string(r.omega) + ", cn/2=" +
                     to_string(Rational(c * n / 2)));

  const std::vector<VertexSet> as = k_subsets(family.host, i - 1);
  std::vector<std::vector<VertexSet>> missing(as.size());
  parallel_for(as.size(), workers, [&](std::size_t a) {
    for_each_k_subset(gamma(as[a], family), k, [&](VertexSet m) {
      if (!chain.oracle().member(m, t_level)) missing[a].push_back(m);
      return true;
    });
  });

  std::map<VertexSet, std::vector<VertexSet>> paired;
  unsigned long pairs = 0;
  for (std::size_t a = 0; a < as.size(); ++a) {
    for (VertexSet m : missing[a]) paired[m].push_back(as[a]);
    pairs += missing[a].size();
  }
  r.pair_count = Integer(pairs);

  std::vector<VertexSet> chosen;
  for (auto& [m, list] : paired) {
    if (!r.m || list.size() > chosen.size()) {
      r.m = m;
      chosen = list;
    }
  }
  r.next = make_family(i - 1, family.host, std::move(chosen));
  if (r.m) {
    for (VertexSet a : r.next.sets)
      r.m->for_each([&](Vertex v) {
        if (!std::binary_search(family.sets.begin(), family.sets.end(), a.with(v)))
          throw std::logic_error("lemma32_step produced A=" + to_string(a) + ", v=" + std::to_string(v) +
                                 " with A+v outside F_i");
      });
  }
  r.closed_form = pow(c / (12 * k * k), static_cast<unsigned>(k)) * Rational(binomial(n, i - 1));
  r.closed_form_holds = Rational(static_cast<long>(r.next.sets.size())) >= r.closed_form;
  return r;
}

Rational beta_recurrence(const Rational& alpha, int k) {
  if (alpha <= 0 || alpha >= 1) throw InputError("alpha must lie in (0,1), got " + to_string(alpha));
  if (k < 1) throw InputError("k must be >= 1");
  Rational x = alpha;
  const Rational scale(12 * k * k);
  for (int j = 0; j + 1 < k; ++j) x = pow(x / scale, static_cast<unsigned>(k));
  return x;
}

std::string kind_name(TheoremOutcome::Kind kind) {
  switch (kind) {
    case TheoremOutcome::Kind::LargeEdge: return "large-edge";
    case TheoremOutcome::Kind::ContradictionWitness: return "contradiction-witness";
    case TheoremOutcome::Kind::Aborted: return "aborted";
  }
  return "unknown";
}

TheoremOutcome theorem25_run(const HypergraphChain& chain, int level, VertexSet s, int k, const Rational& alpha,
                             std::optional<Rational> threshold, int workers) {
  chain.require_levels(level, level + k + 1, "theorem25_run");
  chain.ground().check(s);
  if (k < 1) throw InputError("k must be >= 1");
  const int n = s.size();
  if (n < k) throw InputError("theorem25_run needs |S| >= k");

  TheoremOutcome out;
  out.beta = beta_recurrence(alpha, k);
  out.threshold = threshold.value_or(out.beta);
  if (out.threshold < out.beta)
    throw InputError("threshold " + to_string(out.threshold) + " is below beta " + to_string(out.beta));
  if (out.threshold > 1) throw InputError("threshold must be at most 1");

  std::vector<VertexSet> fk;
  for_each_k_subset(s, k, [&](VertexSet t) {
    if (chain.oracle().member(t, level)) fk.push_back(t);
    return true;
  });
  out.alpha_observed = ratio(Integer(static_cast<unsigned long>(fk.size())), binomial(n, k));
  if (out.alpha_observed < alpha)
    throw InputError("observed fraction " + to_string(out.alpha_observed) + " of k-subsets is below alpha " +
                     to_string(alpha));

  std::ostringstream tr;
  tr << "theorem25 level=" << level << " k=" << k << " S=" << to_string(s) << " n=" << n
     << " alpha=" << to_string(alpha) << " alpha_observed=" << to_string(out.alpha_observed)
     << " beta=" << to_string(out.beta) << " threshold=" << to_string(out.threshold) << '\n';
  const Rational needed = out.threshold * n;

  auto finish = [&](TheoremOutcome::Kind kind, std::string reason = {}) {
    out.kind = kind;
    out.reason = std::move(reason);
    tr << "outcome " << kind_name(kind);
    if (!out.reason.empty()) tr << " reason=" << out.reason;
    tr << '\n';
    out.transcript = tr.str();
    return out;
  };

  const VertexSet large = largest_edge_within(chain, level + k + 1, s);
  tr << "largest-edge level=" << level + k + 1 << " set=" << to_string(large) << " size=" << large.size()
     << " needed=" << to_string(needed) << '\n';
  if (Rational(large.size()) >= needed) {
    out.large_edge = large;
    out.large_edge_level = level + k + 1;
    return finish(TheoremOutcome::Kind::LargeEdge);
  }

  const VertexSet clique = max_clique(chain, level + k, s, k);
  tr << "omega level=" << level + k << " value=" << clique.size() << " clique=" << to_string(clique) << '\n';
  if (Rational(clique.size()) >= needed) {
    if (clique.size() > k && !chain.member(clique, level + k + 1)) {
      Certificate c;
      c.kind = CertificateKind::HellyViolation;
      c.set = clique;
      c.level = level + k;
      c.arity = k;
      out.witness = chain.approximate() ? make_suspect(c, "approximate chain") : c;
      return finish(TheoremOutcome::Kind::Aborted, "Helly number above k at level " + std::to_string(level + k));
    }
    tr << "note omega bound fails only through cliques of fewer than k vertices\n";
  }

  std::vector<Rational> alphas{alpha};
  for (int j = 1; j < k; ++j) alphas.push_back(pow(alphas.back() / Rational(12 * k * k), static_cast<unsigned>(k)));

  NeighborhoodFamily family = make_family(k, s, std::move(fk));
  std::vector<VertexSet> classes;
  for (int j = 1; j < k; ++j) {
    TheoremRound round;
    round.j = j;
    round.i = k - j + 1;
    round.t_level = level + k - j;
    round.c = alphas[static_cast<std::size_t>(j - 1)];
    round.family_size = family.sets.size();
    round.step = lemma32_step(chain, round.t_level, round.c, family, k, false, workers);
    const Lemma32Result& st = round.step;
    tr << "round j=" << j << " i=" << round.i << " t=" << round.t_level << " c=" << to_string(round.c)
       << " F_i=" << round.family_size << " size-hypothesis=" << (st.size_hypothesis ? "ok" : "fails")
       << " omega=" << st.omega << " omega-hypothesis=" << (st.omega_hypothesis ? "ok" : "fails")
       << " pairs=" << st.pair_count.get_str() << " M=" << (st.m ? to_string(*st.m) : "none")
       << " F_i-1=" << st.next.sets.size() << " closed-form=" << (st.closed_form_holds ? "holds" : "fails") << '\n';
    out.rounds.push_back(round);
    if (!st.m) return finish(TheoremOutcome::Kind::Aborted, "round " + std::to_string(j) + " has an empty pair set");
    classes.push_back(*st.m);
    family = st.next;
  }

  VertexSet support;
  for (VertexSet a : family.sets) support = support | a;
  std::optional<VertexSet> last;
  for_each_k_subset(support, k, [&](VertexSet m) {
    if (chain.oracle().member(m, level + 1)) return true;
    last = m;
    return false;
  });
  tr << "final support=" << to_string(support) << " M_k=" << (last ? to_string(*last) : "none") << '\n';
  if (!last) return finish(TheoremOutcome::Kind::Aborted, "support of F_1 spans a k-clique of H_{level+1}");
  classes.push_back(*last);

  Certificate c;
  c.kind = CertificateKind::ColorfulViolation;
  c.classes = classes;
  c.level = level;
  c.arity = k;
  if (!revalidate(c, chain)) return finish(TheoremOutcome::Kind::Aborted, "witness failed re-validation");
  out.witness = chain.approximate() ? make_suspect(c, "approximate chain") : c;
  tr << "witness " << describe(c) << '\n';
  return finish(TheoremOutcome::Kind::ContradictionWitness);
}

Rational stability_delta(const Rational& epsilon, int h, int k, int n) {
  if (epsilon <= 0 || epsilon > 1) throw InputError("epsilon must lie in (0,1]");
  if (h < 1 || h > k || k > n) throw InputError("stability_delta needs 1 <= h <= k <= n");
  const std::int64_t m = floor_to_int(epsilon * n / h);
  if (m < h) return 0;
  return ratio(binomial(m, h), binomial(k, h) * binomial(n, h));
}

std::string status_name(StabilityReport::Status status) {
  switch (status) {
    case StabilityReport::Status::Vacuous: return "vacuous";
    case StabilityReport::Status::Consistent: return "consistent";
    case StabilityReport::Status::PreconditionFailed: return "precondition-failed";
    case StabilityReport::Status::Inconsistent: return "inconsistent";
  }
  return "unknown";
}

StabilityReport theorem26_check(const HypergraphChain& chain, int h, int k, int level, VertexSet s,
                                const Rational& epsilon, int workers) {
  chain.require_levels(level, level + 3, "theorem26_check");
  chain.ground().check(s);
  const int n = s.size();
  StabilityReport r;
  r.delta = stability_delta(epsilon, h, k, n);
  r.largest = largest_edge_within(chain, level + 3, s);
  r.hypothesis = Rational(r.largest.size()) < (1 - epsilon) * n;
  r.missing = count_missing(chain, level, s, h);
  r.total = binomial(n, h);
  r.fraction = ratio(r.missing, r.total);
  r.inequality = r.fraction >= r.delta;
  if (!r.hypothesis) {
    r.status = StabilityReport::Status::Vacuous;
    r.preconditions = "not needed";
    return r;
  }

  std::optional<Certificate> failed;
  std::string detail;
  for (int l : {level, level + 2}) {
    if (failed) break;
    failed = helly_holds(chain, h, l, workers, s);
    detail += "helly h=" + std::to_string(h) + " level " + std::to_string(l) + (failed ? " fails; " : " ok; ");
  }
  if (!failed) {
    ClassUniverse u;
    u.kind = ClassUniverse::Kind::Disjoint;
    u.max_class_size = h;
    u.within = s;
    ColorfulReport cr = colorful_helly_holds(chain, k, level + 1, u, workers);
    failed = cr.violation;
    detail += "colorful k=" + std::to_string(k) + " level " + std::to_string(level + 1) + " over " + cr.universe +
              (failed ? " fails" : " ok");
  }
  r.preconditions = detail;
  r.precondition_certificate = failed;
  if (failed) r.status = StabilityReport::Status::PreconditionFailed;
  else r.status = r.inequality ? StabilityReport::Status::Consistent : StabilityReport::Status::Inconsistent;
  return r;
}

}  // namespace qhelly
