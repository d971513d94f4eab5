#include "qhelly/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <sstream>

#include "qhelly/parallel.hpp"
#include "qhelly/proof.hpp"

namespace qhelly {

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string seconds_text(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", s);
  return buf;
}

std::string double_text(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string format_csv(const Report& report, bool timing) {
  std::string out = "chain_id,operation,parameters,result,certificate";
  if (timing) out += ",wall_time_s";
  out += '\n';
  for (const auto& r : report.rows) {
    out += csv_field(r.chain_id) + ',' + csv_field(r.operation) + ',' + csv_field(r.parameters) + ',' +
           csv_field(r.result) + ',' + csv_field(r.certificate);
    if (timing) out += ',' + seconds_text(r.seconds);
    out += '\n';
  }
  return out;
}

std::string format_summary(const Report& report, bool timing) {
  std::ostringstream out;
  for (const auto& r : report.rows) {
    out << r.chain_id << " | " << r.operation << " | " << r.parameters << " | " << r.result;
    if (timing) out << " | " << seconds_text(r.seconds) << "s";
    out << '\n';
    if (!r.certificate.empty()) out << "    certificate: " << r.certificate << '\n';
    if (!r.detail.empty()) {
      std::istringstream lines(r.detail);
      for (std::string line; std::getline(lines, line);) out << "    " << line << '\n';
    }
  }
  out << "rows: " << report.rows.size() << ", violation: " << (report.violation ? "yes" : "no") << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Directives
// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void directive_error(const Directive& d, const std::string& msg) {
  throw InputError("line " + std::to_string(d.line) + ": " + msg);
}

}  // namespace

std::string Directive::text(const std::string& key, const std::string& fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

std::string Directive::text(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end()) directive_error(*this, "'" + keyword + "' needs " + key + "=");
  return it->second;
}

int Directive::integer(const std::string& key) const {
  const std::string v = text(key);
  try {
    std::size_t used = 0;
    int x = std::stoi(v, &used);
    if (used == v.size()) return x;
  } catch (const std::exception&) {
  }
  directive_error(*this, "bad integer " + key + "=" + v);
}

int Directive::integer(const std::string& key, int fallback) const { return has(key) ? integer(key) : fallback; }

std::uint64_t Directive::unsigned_integer(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const std::string v = text(key);
  try {
    std::size_t used = 0;
    if (!v.empty() && v[0] != '-') {
      std::uint64_t x = std::stoull(v, &used);
      if (used == v.size()) return x;
    }
  } catch (const std::exception&) {
  }
  directive_error(*this, "bad unsigned integer " + key + "=" + v);
}

Rational Directive::rational(const std::string& key) const {
  try {
    return parse_rational(text(key));
  } catch (const InputError& e) {
    directive_error(*this, key + ": " + e.what());
  }
}

Rational Directive::rational(const std::string& key, const Rational& fallback) const {
  return has(key) ? rational(key) : fallback;
}

Directive parse_directive(std::string_view line, int line_no) {
  std::istringstream in{std::string(line)};
  Directive d;
  d.line = line_no;
  in >> d.keyword;
  for (std::string tok; in >> tok;) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) {
      if (!d.params.empty()) throw InputError("line " + std::to_string(line_no) + ": word '" + tok + "' after key=value pairs");
      d.positional.push_back(tok);
      continue;
    }
    std::string key = tok.substr(0, eq);
    if (key.empty()) throw InputError("line " + std::to_string(line_no) + ": empty key in '" + tok + "'");
    if (!d.params.emplace(key, tok.substr(eq + 1)).second)
      throw InputError("line " + std::to_string(line_no) + ": key '" + key + "' given twice");
  }
  return d;
}

// ---------------------------------------------------------------------------
// Scenario parsing
// ---------------------------------------------------------------------------

Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir) {
  Scenario sc;
  sc.base_dir = base_dir;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  bool header = false;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw.substr(0, raw.find('#'));
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Directive d = parse_directive(line, line_no);
    if (!header) {
      if (d.keyword != "qhelly-scenario" || d.positional.size() != 1 || !d.params.empty())
        directive_error(d, "expected header 'qhelly-scenario 1'");
      if (d.positional[0] != "1") directive_error(d, "unsupported scenario version " + d.positional[0]);
      header = true;
      continue;
    }
    auto once = [&](std::optional<Directive>& slot) {
      if (slot) directive_error(d, "'" + d.keyword + "' given twice");
      slot = d;
    };
    if (d.keyword == "seed") {
      if (d.positional.size() != 1) directive_error(d, "expected 'seed <u64>'");
      try {
        std::size_t used = 0;
        sc.seed = std::stoull(d.positional[0], &used);
        if (used != d.positional[0].size() || d.positional[0][0] == '-') throw std::invalid_argument("x");
      } catch (const std::exception&) {
        directive_error(d, "bad seed '" + d.positional[0] + "'");
      }
    } else if (d.keyword == "bodies") {
      once(sc.bodies);
    } else if (d.keyword == "chain") {
      if (d.positional.size() != 1) directive_error(d, "expected 'chain <builder> key=value ...'");
      once(sc.chain);
    } else if (d.keyword == "subsample") {
      once(sc.subsample);
    } else if (d.keyword == "op") {
      if (d.positional.size() != 1) directive_error(d, "expected 'op <operation> key=value ...'");
      sc.ops.push_back(d);
    } else if (d.keyword == "output") {
      if (d.positional.size() != 1) directive_error(d, "expected 'output <file name>'");
      sc.output = d.positional[0];
    } else {
      directive_error(d, "unknown directive '" + d.keyword + "'");
    }
  }
  if (!header) throw InputError("empty scenario");
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::filesystem::path p(path);
  return parse_scenario(read_text_file(path, "scenario"), p.parent_path());
}

// ---------------------------------------------------------------------------
// Chain construction from directives
// ---------------------------------------------------------------------------

namespace {

enum SeedStream : std::uint64_t { kBodiesStream = 1, kChainStream = 2, kValidateStream = 3, kSearchStream = 4, kSamplingStream = 5 };

std::string resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative() && !base.empty()) path = base / path;
  return path.string();
}

LevelWindow parse_window(const Directive& d, const std::string& key, LevelWindow fallback) {
  if (!d.has(key)) return fallback;
  const std::string v = d.text(key);
  auto colon = v.find(':');
  try {
    if (colon == std::string::npos) throw std::invalid_argument("x");
    std::size_t u1 = 0, u2 = 0;
    LevelWindow w{std::stoi(v.substr(0, colon), &u1), std::stoi(v.substr(colon + 1), &u2)};
    if (u1 != colon || u2 != v.size() - colon - 1) throw std::invalid_argument("x");
    if (w.lo > w.hi) directive_error(d, "empty window " + v);
    return w;
  } catch (const InputError&) {
    throw;
  } catch (const std::exception&) {
    directive_error(d, "bad window " + key + "=" + v + " (expected lo:hi)");
  }
}

std::vector<double> parse_doubles(const Directive& d, const std::string& key, std::vector<double> fallback) {
  if (!d.has(key)) return fallback;
  std::vector<double> out;
  std::istringstream in(d.text(key));
  for (std::string tok; std::getline(in, tok, ',');) out.push_back(parse_rational(tok).get_d());
  if (out.empty()) directive_error(d, "empty list " + key + "=");
  return out;
}

std::vector<Rational> parse_rationals(const Directive& d, const std::string& key, std::vector<Rational> fallback) {
  if (!d.has(key)) return fallback;
  std::vector<Rational> out;
  std::istringstream in(d.text(key));
  for (std::string tok; std::getline(in, tok, ',');) out.push_back(parse_rational(tok));
  if (out.empty()) directive_error(d, "empty list " + key + "=");
  return out;
}

VolumeBackend parse_backend(const Directive& d, std::uint64_t seed, int workers) {
  VolumeBackend b;
  const std::string kind = d.text("backend", "exact");
  if (kind == "exact") b.kind = VolumeBackend::Kind::Exact;
  else if (kind == "mc") b.kind = VolumeBackend::Kind::MonteCarlo;
  else directive_error(d, "backend must be exact or mc");
  b.samples = d.unsigned_integer("samples", b.samples);
  b.confidence = d.rational("confidence", b.confidence);
  b.seed = d.unsigned_integer("sample-seed", mix_seed(seed, kSamplingStream));
  b.workers = workers;
  return b;
}

struct BuiltChain {
  std::optional<HypergraphChain> chain;
  std::optional<Certificate> rejection;
  std::string id;
  std::vector<Body> bodies;
  bool has_bodies = false;
};

}  // namespace

std::vector<Body> bodies_from(const Directive& d, const std::filesystem::path& base_dir, std::uint64_t seed) {
  const std::uint64_t s = d.unsigned_integer("seed", mix_seed(seed, kBodiesStream));
  if (d.has("file")) return load_bodies(resolve(base_dir, d.text("file")));
  if (d.positional.size() != 1) directive_error(d, "expected 'bodies file=<path>' or a generator");
  const std::string& gen = d.positional[0];
  if (gen == "random-boxes") {
    BoxGenParams p;
    p.grid = d.integer("grid", p.grid);
    p.span = d.rational("span", p.span);
    p.min_width = d.rational("min-width", p.min_width);
    p.max_width = d.rational("max-width", p.max_width);
    std::vector<Body> out;
    for (auto& b : random_boxes(d.integer("count"), d.integer("dim", 1), p, s)) out.emplace_back(std::move(b));
    return out;
  }
  if (gen == "random-polygons") {
    PolygonGenParams p;
    p.grid = d.integer("grid", p.grid);
    p.span = d.rational("span", p.span);
    std::vector<Body> out;
    for (auto& b : random_polygons(d.integer("count"), d.integer("vertices", 5), p, s)) out.emplace_back(std::move(b));
    return out;
  }
  directive_error(d, "unknown body source '" + gen + "'");
}

namespace {

BuiltChain build_chain(const Scenario& sc, std::uint64_t seed, int workers) {
  BuiltChain out;
  if (sc.bodies) {
    out.bodies = bodies_from(*sc.bodies, sc.base_dir, seed);
    out.has_bodies = true;
  }
  if (!sc.chain) return out;
  const Directive& d = *sc.chain;
  const std::string& builder = d.positional[0];
  const std::uint64_t chain_seed = d.unsigned_integer("seed", mix_seed(seed, kChainStream));
  auto need_bodies = [&]() -> const std::vector<Body>& {
    if (!out.has_bodies) directive_error(d, "builder '" + builder + "' needs a 'bodies' line");
    return out.bodies;
  };

  std::optional<HypergraphChain> chain;
  if (builder == "explicit") {
    auto [levels, first] = parse_explicit_levels(read_text_file(resolve(sc.base_dir, d.text("file")), "chain file"));
    ExplicitChainResult r = explicit_chain(std::move(levels), first);
    if (r.rejection) {
      out.rejection = r.rejection;
      out.id = d.text("id", "explicit");
      return out;
    }
    chain = std::move(r.chain);
  } else if (builder == "nerve") {
    chain = nerve_chain(need_bodies(), parse_window(d, "window", {0, 8}));
  } else if (builder == "quantitative") {
    QuantitativeChainSpec spec{need_bodies(), d.rational("v"), parse_window(d, "window", {0, 8}),
                               parse_backend(d, seed, workers)};
    chain = quantitative_chain(spec);
  } else if (builder == "synthetic") {
    SyntheticChainSpec spec;
    spec.n = d.integer("n", spec.n);
    spec.window = parse_window(d, "window", spec.window);
    spec.density = parse_doubles(d, "density", spec.density);
    spec.edges_per_level = d.integer("edges", 0);
    spec.seed = chain_seed;
    chain = random_chain(spec);
  } else if (builder == "complete") {
    const GroundSet g(d.integer("n"));
    const LevelWindow w = parse_window(d, "window", {0, 4});
    chain = HypergraphChain::from_levels(std::vector<ExplicitHypergraph>(static_cast<std::size_t>(w.count()),
                                                                         ExplicitHypergraph::complete(g)),
                                         w.lo, "complete(n=" + std::to_string(g.size()) + ")");
  } else if (builder == "planted") {
    PlantedSpec spec;
    spec.k = d.integer("k", spec.k);
    spec.level = d.integer("level", spec.level);
    spec.extra = d.integer("extra", spec.extra);
    spec.noise_edges = d.integer("noise", spec.noise_edges);
    spec.density = parse_doubles(d, "density", {spec.density}).front();
    spec.seed = chain_seed;
    chain = planted_colorful_chain(spec).chain;
  } else {
    directive_error(d, "unknown chain builder '" + builder + "'");
  }

  if (sc.subsample) {
    const Directive& s = *sc.subsample;
    chain = subsampled_chain(*chain, s.integer("period"), s.integer("anchor", 0));
  }
  out.id = d.text("id", chain->description());
  out.chain = std::move(chain);
  return out;
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

VertexSet set_param(const Directive& d, const HypergraphChain& chain) {
  const std::string v = d.text("set", "all");
  if (v == "all") return chain.ground().all();
  try {
    VertexSet s = parse_vertex_set(v);
    chain.ground().check(s);
    return s;
  } catch (const InputError& e) {
    directive_error(d, std::string("set: ") + e.what());
  }
}

/// Levels an operation touches, as [from, to]; nullopt for operations that
/// do not query the chain at fixed levels.
std::optional<std::pair<int, int>> required_levels(const Directive& op, const HypergraphChain& chain) {
  const std::string& name = op.positional[0];
  const int lo = chain.window().lo;
  if (name == "verify-helly" || name == "min-helly") {
    if (!op.has("level")) return std::make_pair(lo, lo + 1);
    const int l = op.integer("level");
    return std::make_pair(l, l + 1);
  }
  const int l = op.integer("level", lo);
  if (name == "verify-colorful" || name == "verify-fractional") return std::make_pair(l, l + 1);
  if (name == "theorem25") return std::make_pair(l, l + op.integer("k") + 1);
  if (name == "theorem26") return std::make_pair(l, l + 3);
  if (name == "lemma-check") {
    const std::string kind = op.text("kind");
    if (kind == "31a") return std::make_pair(l, l + 1);
    if (kind == "31b") return std::make_pair(l, l + 2);
    if (kind == "32") {
      const int t = op.integer("t", l);
      return std::make_pair(std::min(l, t), std::max(l, t + 1));
    }
    directive_error(op, "lemma-check kind must be 31a, 31b or 32");
  }
  return std::nullopt;
}

const std::vector<std::string> kChainOps = {"validate",    "verify-helly", "min-helly", "verify-colorful",
                                            "verify-fractional", "lemma-check", "theorem25", "theorem26"};
const std::vector<std::string> kFreeOps = {"search-counterexample", "volume"};

bool is_chain_op(const std::string& name) { return std::count(kChainOps.begin(), kChainOps.end(), name) > 0; }

std::string cert_text(const std::optional<Certificate>& c) { return c ? describe(*c) : std::string(); }

std::string verdict(const std::optional<Certificate>& c) {
  if (!c) return "ok";
  return c->kind == CertificateKind::Suspect ? "suspect" : "violation";
}

std::string families_text(const std::vector<VertexSet>& sets) {
  std::string out;
  for (std::size_t i = 0; i < sets.size(); ++i) out += (i ? "|" : "") + to_string(sets[i]);
  return out.empty() ? "-" : out;
}

std::vector<std::vector<VertexSet>> parse_tuples(const Directive& d) {
  std::vector<std::vector<VertexSet>> out;
  std::istringstream in(d.text("tuples"));
  for (std::string tuple; std::getline(in, tuple, ';');) {
    std::vector<VertexSet> classes;
    std::istringstream cls(tuple);
    for (std::string c; std::getline(cls, c, '|');) classes.push_back(parse_vertex_set(c));
    out.push_back(std::move(classes));
  }
  return out;
}

ClassUniverse universe_param(const Directive& d) {
  ClassUniverse u;
  const std::string kind = d.text("universe", d.has("tuples") ? "explicit" : "disjoint");
  if (kind == "disjoint") u.kind = ClassUniverse::Kind::Disjoint;
  else if (kind == "any") u.kind = ClassUniverse::Kind::Any;
  else if (kind == "explicit") {
    u.kind = ClassUniverse::Kind::Explicit;
    u.tuples = parse_tuples(d);
  } else {
    directive_error(d, "universe must be disjoint, any or explicit");
  }
  u.max_class_size = d.integer("max-size", u.max_class_size);
  u.budget = d.unsigned_integer("budget", 0);
  return u;
}

std::string describe_profile(const FractionalProfile& p) {
  return describe(p.certificate()) + ";edges=" + p.edges.get_str() + ";total=" + p.total.get_str();
}

struct OpContext {
  const HypergraphChain* chain = nullptr;
  const BuiltChain* built = nullptr;
  std::uint64_t seed = 0;
  int workers = 1;
  Report* report = nullptr;
};

void mark(OpContext& ctx, const std::optional<Certificate>& c) {
  if (c && c->is_violation()) ctx.report->violation = true;
}

std::vector<ReportRow> run_op(const Directive& op, OpContext& ctx) {
  const std::string& name = op.positional[0];
  std::vector<ReportRow> rows;
  ReportRow row;
  row.chain_id = ctx.built->id;
  row.operation = name;
  const HypergraphChain* chain = ctx.chain;

  if (name == "validate") {
    const std::uint64_t samples = op.unsigned_integer("samples", 10000);
    const std::uint64_t seed = op.unsigned_integer("seed", mix_seed(ctx.seed, kValidateStream));
    row.parameters = chain->kind() == ChainKind::Explicit ? "exhaustive"
                                                         : "samples=" + std::to_string(samples) + " seed=" + std::to_string(seed);
    auto c = validate_chain(*chain, samples, seed);
    row.result = verdict(c);
    row.certificate = cert_text(c);
    mark(ctx, c);
  } else if (name == "verify-helly") {
    const int h = op.integer("h");
    std::optional<Certificate> c;
    if (op.has("level")) {
      const int l = op.integer("level");
      row.parameters = "h=" + std::to_string(h) + " level=" + std::to_string(l);
      c = helly_holds(*chain, h, l, ctx.workers);
    } else {
      const LevelWindow w = chain->window();
      row.parameters = "h=" + std::to_string(h) + " levels=" + std::to_string(w.lo) + ".." + std::to_string(w.hi - 1);
      for (int l = w.lo; l < w.hi && !c; ++l) c = helly_holds(*chain, h, l, ctx.workers);
    }
    row.result = verdict(c);
    row.certificate = cert_text(c);
    mark(ctx, c);
  } else if (name == "min-helly") {
    std::optional<int> level;
    if (op.has("level")) level = op.integer("level");
    row.parameters = level ? "level=" + std::to_string(*level) : "all levels";
    row.result = "h=" + std::to_string(min_helly_number(*chain, level, ctx.workers));
  } else if (name == "verify-colorful") {
    const int k = op.integer("k");
    const int l = op.integer("level", chain->window().lo);
    ClassUniverse u = universe_param(op);
    if (auto w = window_warning(*chain, l, k + 1, "verify-colorful")) ctx.report->warnings.push_back(*w);
    ColorfulReport rep = colorful_helly_holds(*chain, k, l, u, ctx.workers);
    row.parameters = "k=" + std::to_string(k) + " level=" + std::to_string(l) + " universe=" + rep.universe;
    row.result = verdict(rep.violation) + (rep.truncated ? " (partial)" : "");
    row.certificate = cert_text(rep.violation);
    row.detail = "examined " + std::to_string(rep.examined) + " tuples";
    mark(ctx, rep.violation);
  } else if (name == "verify-fractional") {
    const int k = op.integer("k");
    const int l = op.integer("level", chain->window().lo);
    const VertexSet s = set_param(op, *chain);
    FractionalProfile p = fractional_profile(*chain, k, l, s);
    row.parameters = "k=" + std::to_string(k) + " level=" + std::to_string(l) + " S=" + to_string(s);
    row.result = "alpha=" + to_string(p.alpha) + " beta=" + to_string(p.beta);
    row.certificate = describe_profile(p);
  } else if (name == "lemma-check") {
    const std::string kind = op.text("kind");
    const int l = op.integer("level", chain->window().lo);
    const int k = op.integer("k");
    const VertexSet s = set_param(op, *chain);
    row.operation = "lemma-check " + kind;
    if (kind == "31a") {
      Lemma31aCounts c = lemma31a_counts(*chain, l, s, k);
      row.parameters = "k=" + std::to_string(k) + " level=" + std::to_string(l) + " S=" + to_string(s);
      row.result = c.holds() ? "holds" : "fails";
      row.certificate = "missing=" + c.missing.get_str() + ";bound=" + c.bound.get_str() + ";omega=" +
                        std::to_string(c.omega) + ";family=" + families_text(c.family.sets);
      if (c.colorful_violation) row.certificate += ";witness=" + describe(*c.colorful_violation);
      mark(ctx, c.colorful_violation);
    } else if (kind == "31b") {
      const int h = op.integer("h");
      Lemma31bCounts c = lemma31b_counts(*chain, l, s, h, k);
      row.parameters = "h=" + std::to_string(h) + " k=" + std::to_string(k) + " level=" + std::to_string(l) +
                       " S=" + to_string(s);
      row.result = c.holds() ? "holds" : "fails";
      row.certificate = "missing=" + c.missing.get_str() + ";bound=" + to_string(c.bound) + ";omega=" +
                        std::to_string(c.omega) + ";family=" + families_text(c.family.sets);
      if (c.colorful_violation) row.certificate += ";witness=" + describe(*c.colorful_violation);
      mark(ctx, c.colorful_violation);
    } else {
      const int i = op.integer("i", k);
      const int t = op.integer("t", l);
      const Rational c = op.rational("c");
      const bool enforce = op.text("enforce", "true") != "false";
      std::vector<VertexSet> fi;
      for_each_k_subset(s, i, [&](VertexSet a) {
        if (chain->member(a, l)) fi.push_back(a);
        return true;
      });
      Lemma32Result r = lemma32_step(*chain, t, c, make_family(i, s, std::move(fi)), k, enforce, ctx.workers);
      row.parameters = "i=" + std::to_string(i) + " k=" + std::to_string(k) + " t=" + std::to_string(t) +
                       " c=" + to_string(c) + " F_i=H_" + std::to_string(l) + " S=" + to_string(s);
      row.result = r.m ? "M=" + to_string(*r.m) : "no-pair";
      row.certificate = "pairs=" + r.pair_count.get_str() + ";F_i-1=" + std::to_string(r.next.sets.size()) +
                        ";size-hypothesis=" + (r.size_hypothesis ? "ok" : "fails") +
                        ";omega-hypothesis=" + (r.omega_hypothesis ? "ok" : "fails") +
                        ";closed-form=" + (r.closed_form_holds ? "holds" : "fails");
    }
  } else if (name == "theorem25") {
    const int k = op.integer("k");
    const int l = op.integer("level", chain->window().lo);
    const VertexSet s = set_param(op, *chain);
    const Rational alpha = op.rational("alpha");
    std::optional<Rational> threshold;
    if (op.has("threshold")) threshold = op.rational("threshold");
    TheoremOutcome o = theorem25_run(*chain, l, s, k, alpha, threshold, ctx.workers);
    row.parameters = "k=" + std::to_string(k) + " level=" + std::to_string(l) + " alpha=" + to_string(alpha) +
                     " S=" + to_string(s) + " threshold=" + to_string(o.threshold);
    row.result = kind_name(o.kind);
    if (o.kind == TheoremOutcome::Kind::LargeEdge)
      row.certificate = "S'=" + to_string(o.large_edge) + ";level=" + std::to_string(o.large_edge_level) +
                        ";size=" + std::to_string(o.large_edge.size());
    else if (o.witness)
      row.certificate = describe(*o.witness);
    else
      row.certificate = "reason=" + o.reason;
    row.detail = o.transcript;
    mark(ctx, o.witness);
  } else if (name == "theorem26") {
    const int h = op.integer("h");
    const int k = op.integer("k");
    const int l = op.integer("level", chain->window().lo);
    const VertexSet s = set_param(op, *chain);
    const Rational eps = op.rational("epsilon");
    StabilityReport r = theorem26_check(*chain, h, k, l, s, eps, ctx.workers);
    row.parameters = "h=" + std::to_string(h) + " k=" + std::to_string(k) + " level=" + std::to_string(l) +
                     " epsilon=" + to_string(eps) + " S=" + to_string(s);
    row.result = status_name(r.status);
    row.certificate = "largest=" + to_string(r.largest) + ";missing=" + r.missing.get_str() + ";total=" +
                      r.total.get_str() + ";fraction=" + to_string(r.fraction) + ";delta=" + to_string(r.delta);
    if (r.precondition_certificate) row.certificate += ";precondition=" + describe(*r.precondition_certificate);
    row.detail = "preconditions: " + r.preconditions;
    mark(ctx, r.precondition_certificate);
    if (r.status == StabilityReport::Status::Inconsistent && !chain->approximate()) ctx.report->violation = true;
  }
  rows.push_back(std::move(row));
  return rows;
}

std::string body_set_volume(const std::vector<Body>& bodies, VertexSet s, const VolumeBackend& backend) {
  std::vector<Body> chosen;
  s.for_each([&](Vertex v) { chosen.push_back(bodies[static_cast<std::size_t>(v)]); });
  if (chosen.empty()) throw InputError("volume needs a nonempty set of bodies");
  bool all_boxes = true, planar = true;
  for (const Body& b : chosen) {
    all_boxes = all_boxes && std::holds_alternative<Box>(b);
    planar = planar && !std::holds_alternative<HalfspaceBody>(b) && body_dimension(b) == 2;
  }
  if (backend.kind == VolumeBackend::Kind::Exact) {
    if (all_boxes) {
      std::vector<Box> boxes;
      for (const Body& b : chosen) boxes.push_back(std::get<Box>(b));
      return to_string(box_volume(intersect_boxes(boxes)));
    }
    if (planar) {
      std::vector<ConvexPolygon> polys;
      for (const Body& b : chosen) {
        if (const auto* box = std::get_if<Box>(&b)) polys.push_back(ConvexPolygon::from_box(*box));
        else polys.push_back(std::get<ConvexPolygon>(b));
      }
      return to_string(polygon_area(intersect_polygons(polys)));
    }
    throw UnsupportedError("exact volume needs boxes or planar polygons; use backend=mc");
  }
  std::vector<HalfspaceBody> hs;
  for (const Body& b : chosen) {
    if (const auto* box = std::get_if<Box>(&b)) hs.push_back(HalfspaceBody::from_box(*box));
    else if (const auto* p = std::get_if<ConvexPolygon>(&b)) hs.push_back(HalfspaceBody::from_polygon(*p));
    else hs.push_back(std::get<HalfspaceBody>(b));
  }
  VolumeEstimate e = mc_volume(hs, backend.samples, backend.confidence, backend.seed, backend.workers);
  return "estimate=" + to_string(e.estimate) + ";lower=" + double_text(e.lower) + ";upper=" + double_text(e.upper) +
         ";confidence=" + to_string(e.confidence) + ";samples=" + std::to_string(e.samples) + ";hits=" +
         std::to_string(e.hits) + ";seed=" + std::to_string(e.seed) + ";partitions=" + std::to_string(e.partitions);
}

SearchSpec search_spec_from(const Directive& op, std::uint64_t seed) {
  SearchSpec s;
  const std::string prop = op.text("property", "colorful");
  if (prop == "colorful") s.property = SearchSpec::Property::Colorful;
  else if (prop == "fractional") s.property = SearchSpec::Property::Fractional;
  else directive_error(op, "property must be colorful or fractional");
  s.d = op.integer("d", 1);
  s.target = op.integer("target", 2 * s.d);
  s.v = parse_rationals(op, "v", s.v);
  s.trials = op.integer("trials", s.trials);
  s.n = op.integer("n", s.n);
  const std::string shape = op.text("shape", s.d == 1 ? "intervals" : "boxes");
  if (shape == "intervals") s.shape = SearchSpec::Shape::Intervals;
  else if (shape == "boxes") s.shape = SearchSpec::Shape::Boxes;
  else if (shape == "polygons") s.shape = SearchSpec::Shape::Polygons;
  else directive_error(op, "shape must be intervals, boxes or polygons");
  s.boxes.grid = s.polygons.grid = op.integer("grid", 16);
  s.boxes.span = s.polygons.span = op.rational("span", 1);
  s.boxes.min_width = op.rational("min-width", s.boxes.min_width);
  s.boxes.max_width = op.rational("max-width", s.boxes.max_width);
  s.polygon_vertices = op.integer("vertices", s.polygon_vertices);
  s.window = parse_window(op, "window", s.window);
  s.universe = universe_param(op);
  s.planted = op.text("planted", "false") == "true";
  s.backend = parse_backend(op, seed, 1);
  s.seed = op.unsigned_integer("seed", mix_seed(seed, kSearchStream));
  return s;
}

}  // namespace

Report run_scenario(const Scenario& sc, const RunOptions& options) {
  const std::uint64_t seed = options.seed.value_or(sc.seed);
  Report report;
  for (const Directive& op : sc.ops) {
    const std::string& name = op.positional[0];
    if (!is_chain_op(name) && std::count(kFreeOps.begin(), kFreeOps.end(), name) == 0)
      directive_error(op, "unknown operation '" + name + "'");
    if (is_chain_op(name) && !sc.chain) directive_error(op, "operation '" + name + "' needs a 'chain' line");
  }
  BuiltChain built = build_chain(sc, seed, options.workers);
  if (built.rejection) {
    ReportRow row{built.id, "build", "explicit", "rejected", describe(*built.rejection), {}, 0.0};
    report.rows.push_back(std::move(row));
    report.violation = true;
    return report;
  }
  if (built.chain) {
    for (const Directive& op : sc.ops) {
      if (!is_chain_op(op.positional[0])) continue;
      if (auto range = required_levels(op, *built.chain); range && !built.chain->window().contains(range->first, range->second))
        directive_error(op, "operation '" + op.positional[0] + "' needs levels [" + std::to_string(range->first) + "," +
                                std::to_string(range->second) + "] but the chain window is " + to_string(built.chain->window()));
    }
  }

  OpContext ctx;
  ctx.chain = built.chain ? &*built.chain : nullptr;
  ctx.built = &built;
  ctx.seed = seed;
  ctx.workers = options.workers;
  ctx.report = &report;
  for (const Directive& op : sc.ops) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<ReportRow> rows;
    const std::string& name = op.positional[0];
    try {
      if (name == "search-counterexample") {
        SearchResult r = search_counterexample(search_spec_from(op, seed), options.workers);
        rows = std::move(r.rows);
      } else if (name == "volume") {
        if (!built.has_bodies) directive_error(op, "'volume' needs a 'bodies' line");
        ReportRow row;
        row.chain_id = "bodies";
        row.operation = "volume";
        VertexSet s = VertexSet::range(static_cast<int>(built.bodies.size()));
        if (op.has("set") && op.text("set") != "all") s = parse_vertex_set(op.text("set"));
        if (!s.is_subset_of(VertexSet::range(static_cast<int>(built.bodies.size()))))
          directive_error(op, "set names a body that does not exist");
        VolumeBackend b = parse_backend(op, seed, options.workers);
        row.parameters = "S=" + to_string(s) + " backend=" + op.text("backend", "exact");
        row.result = body_set_volume(built.bodies, s, b);
        rows.push_back(std::move(row));
      } else {
        rows = run_op(op, ctx);
      }
    } catch (const InputError& e) {
      const std::string msg = e.what();
      if (msg.rfind("line ", 0) == 0) throw;
      throw InputError("line " + std::to_string(op.line) + ": " + msg);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (auto& r : rows) {
      r.seconds = secs;
      report.rows.push_back(std::move(r));
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Conjecture search
// ---------------------------------------------------------------------------

std::string describe_body(const Body& body) {
  std::string out;
  if (const auto* b = std::get_if<Box>(&body)) {
    for (std::size_t i = 0; i < b->axes().size(); ++i)
      out += (i ? "x[" : "[") + to_string(b->axes()[i].lo) + "," + to_string(b->axes()[i].hi) + "]";
  } else if (const auto* p = std::get_if<ConvexPolygon>(&body)) {
    for (const auto& v : p->vertices()) out += "(" + to_string(v.x) + "," + to_string(v.y) + ")";
    if (out.empty()) out = "empty";
  } else {
    const auto& h = std::get<HalfspaceBody>(body);
    for (const auto& s : h.halfspaces()) {
      out += "<";
      for (const auto& a : s.normal) out += to_string(a) + ",";
      out += to_string(s.offset) + ">";
    }
  }
  return out;
}

namespace {

std::string instance_text(const std::vector<Body>& bodies) {
  std::string out;
  for (std::size_t i = 0; i < bodies.size(); ++i) out += (i ? " " : "") + describe_body(bodies[i]);
  return out;
}

std::vector<Body> generate(const SearchSpec& spec, std::uint64_t seed) {
  std::vector<Body> out;
  if (spec.shape == SearchSpec::Shape::Polygons) {
    for (auto& p : random_polygons(spec.n, spec.polygon_vertices, spec.polygons, seed)) out.emplace_back(std::move(p));
  } else {
    for (auto& b : random_boxes(spec.n, spec.d, spec.boxes, seed)) out.emplace_back(std::move(b));
  }
  return out;
}

std::string join_rationals(const std::vector<Rational>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + to_string(v[i]);
  return out;
}

}  // namespace

SearchResult search_counterexample(const SearchSpec& spec, int workers) {
  if (spec.d < 1) throw InputError("dimension must be >= 1");
  if (spec.target < 1) throw InputError("target must be >= 1");
  if (spec.trials < 0) throw InputError("trial budget must be >= 0");
  for (const Rational& v : spec.v)
    if (v <= 0 || v >= 1) throw InputError("candidate v must lie in (0,1), got " + to_string(v));
  const bool exact = spec.backend.kind == VolumeBackend::Kind::Exact;
  if (!spec.planted) {
    if (exact && spec.d > 2) throw UnsupportedError("exact search supports d = 1 and d = 2 only");
    if (spec.shape == SearchSpec::Shape::Intervals && spec.d != 1) throw InputError("intervals need d = 1");
    if (spec.shape == SearchSpec::Shape::Polygons && spec.d != 2) throw InputError("polygons need d = 2");
  }
  if (spec.window.count() < 2) throw InputError("search window needs at least two levels");

  SearchResult result;
  const auto trials = static_cast<std::size_t>(spec.trials);
  std::vector<std::vector<ReportRow>> per_trial(trials);
  const std::string prop = spec.property == SearchSpec::Property::Colorful ? "colorful" : "fractional";

  parallel_for(trials, workers, [&](std::size_t t) {
    const std::uint64_t seed = mix_seed(spec.seed, t);
    auto& rows = per_trial[t];
    if (spec.planted) {
      PlantedSpec ps;
      ps.k = spec.target;
      ps.level = spec.window.lo;
      ps.extra = std::max(0, spec.n - spec.target * spec.target);
      ps.seed = seed;
      PlantedChain pc = planted_colorful_chain(ps);
      ClassUniverse u = spec.universe;
      if (u.kind != ClassUniverse::Kind::Explicit) u.max_class_size = std::max(u.max_class_size, spec.target);
      ColorfulReport rep = colorful_helly_holds(pc.chain, spec.target, ps.level, u, 1);
      if (rep.violation && revalidate(*rep.violation, pc.chain)) {
        rows.push_back({"trial=" + std::to_string(t) + " planted", "search-counterexample",
                        "property=colorful target=" + std::to_string(spec.target) + " level=" + std::to_string(ps.level),
                        "finding", describe(*rep.violation) + ";instance=" + pc.chain.description(), {}, 0.0});
      }
      return;
    }
    const std::vector<Body> bodies = generate(spec, seed);
    for (const Rational& v : spec.v) {
      QuantitativeChainSpec qs{bodies, v, spec.window, spec.backend};
      qs.backend.seed = mix_seed(seed, 1);
      qs.backend.workers = 1;
      HypergraphChain chain = quantitative_chain(qs);
      const std::string id = "trial=" + std::to_string(t) + " v=" + to_string(v);
      for (int l = spec.window.lo; l < spec.window.hi; ++l) {
        if (spec.property == SearchSpec::Property::Colorful) {
          ColorfulReport rep = colorful_helly_holds(chain, spec.target, l, spec.universe, 1);
          if (!rep.violation || !revalidate(*rep.violation, chain)) continue;
          const bool suspect = rep.violation->kind == CertificateKind::Suspect;
          rows.push_back({id, "search-counterexample",
                          "property=colorful d=" + std::to_string(spec.d) + " target=" + std::to_string(spec.target) +
                              " level=" + std::to_string(l),
                          suspect ? "suspect-finding" : "finding",
                          describe(*rep.violation) + ";instance=" + instance_text(bodies), {}, 0.0});
          break;
        }
        if (spec.n < spec.target) break;
        FractionalProfile p = fractional_profile(chain, spec.target, l, chain.ground().all());
        rows.push_back({id, "search-counterexample",
                        "property=fractional d=" + std::to_string(spec.d) + " target=" + std::to_string(spec.target) +
                            " level=" + std::to_string(l),
                        "observed", describe(p.certificate()), {}, 0.0});
      }
    }
  });

  for (auto& rows : per_trial) {
    for (auto& r : rows) {
      if (r.result == "finding") ++result.findings;
      if (r.result == "suspect-finding") ++result.suspect;
      result.rows.push_back(std::move(r));
    }
  }
  if (spec.trials == 0) return result;

  std::string searched = "property=" + prop + " d=" + std::to_string(spec.d) + " target=" + std::to_string(spec.target) +
                         " trials=" + std::to_string(spec.trials) + " n=" + std::to_string(spec.n) +
                         (spec.planted ? " planted" : " v=" + join_rationals(spec.v)) + " window=" + to_string(spec.window);
  if (spec.property == SearchSpec::Property::Colorful) searched += " universe=" + spec.universe.describe(spec.target);
  std::string summary;
  if (spec.property == SearchSpec::Property::Fractional) summary = "observations-only";
  else if (result.findings == 0 && result.suspect == 0) summary = "no-finding";
  else summary = "findings=" + std::to_string(result.findings) + " suspect=" + std::to_string(result.suspect);
  result.rows.push_back({"search", "search-counterexample", searched, summary,
                         summary == "no-finding" ? "absence of findings within the searched universe only" : "", {}, 0.0});
  return result;
}

}  // namespace qhelly
