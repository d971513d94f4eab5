#include "qhelly/chain.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "qhelly/rational.hpp"

namespace qhelly {

std::string to_string(LevelWindow w) { return "[" + std::to_string(w.lo) + "," + std::to_string(w.hi) + "]"; }

MinLevelTable::MinLevelTable(int n, std::vector<std::int32_t> first_level) : n_(n), first_level_(std::move(first_level)) {
  if (n < 0 || n > kTableLimit) throw InputError("membership table limited to " + std::to_string(kTableLimit) + " vertices");
  if (first_level_.size() != (std::size_t{1} << n)) throw InputError("membership table has the wrong size");
}

bool MinLevelTable::member(VertexSet s, int level) const { return first_level_[s.bits()] <= level; }

namespace {

/// Levels stored as maximal edges; answered through a table when small.
class ExplicitOracle final : public ChainOracle {
 public:
  ExplicitOracle(std::shared_ptr<const std::vector<ExplicitHypergraph>> levels, int first_level, int n)
      : levels_(std::move(levels)), first_level_(first_level) {
    if (n <= 16) table_ = build_table(n);
  }

  bool member(VertexSet s, int level) const override {
    if (table_) return table_->member(s, level);
    return (*levels_)[static_cast<std::size_t>(level - first_level_)].contains(s);
  }

 private:
  std::unique_ptr<MinLevelTable> build_table(int n) const {
    const std::size_t size = std::size_t{1} << n;
    std::vector<std::int32_t> first(size, MinLevelTable::kNever);
    std::vector<char> in(size);
    for (std::size_t i = 0; i < levels_->size(); ++i) {
      std::fill(in.begin(), in.end(), 0);
      for (VertexSet e : (*levels_)[i].maximal_edges()) in[e.bits()] = 1;
      // Downward propagation, larger masks first.
      for (std::size_t m = size; m-- > 0;) {
        if (!in[m]) continue;
        for (std::uint64_t b = m; b; b &= b - 1) in[m & ~(b & (~b + 1))] = 1;
      }
      const auto level = static_cast<std::int32_t>(first_level_ + static_cast<int>(i));
      for (std::size_t m = 0; m < size; ++m)
        if (in[m] && first[m] == MinLevelTable::kNever) first[m] = level;
    }
    return std::make_unique<MinLevelTable>(n, std::move(first));
  }

  std::shared_ptr<const std::vector<ExplicitHypergraph>> levels_;
  int first_level_;
  std::unique_ptr<MinLevelTable> table_;
};

const std::vector<ExplicitHypergraph>& no_levels() {
  static const std::vector<ExplicitHypergraph> empty;
  return empty;
}

}  // namespace

HypergraphChain::HypergraphChain(GroundSet ground, LevelWindow window, std::shared_ptr<const ChainOracle> oracle,
                                 ChainKind kind, std::string description, bool approximate)
    : ground_(std::move(ground)),
      window_(window),
      oracle_(std::move(oracle)),
      levels_(std::shared_ptr<const std::vector<ExplicitHypergraph>>(std::shared_ptr<void>{}, &no_levels())),
      kind_(kind),
      description_(std::move(description)),
      approximate_(approximate) {
  if (window_.lo > window_.hi) throw InputError("empty level window " + to_string(window_));
  if (!oracle_) throw InputError("chain without a membership oracle");
}

HypergraphChain HypergraphChain::from_levels(std::vector<ExplicitHypergraph> levels, int first_level,
                                             std::string description) {
  if (levels.empty()) throw InputError("explicit chain needs at least one level");
  GroundSet ground = levels.front().ground();
  for (const auto& h : levels)
    if (!(h.ground() == ground)) throw InputError("explicit chain levels use different ground sets");
  auto shared = std::make_shared<const std::vector<ExplicitHypergraph>>(std::move(levels));
  LevelWindow window{first_level, first_level + static_cast<int>(shared->size()) - 1};
  auto oracle = std::make_shared<ExplicitOracle>(shared, first_level, ground.size());
  HypergraphChain chain(std::move(ground), window, std::move(oracle), ChainKind::Explicit, std::move(description));
  chain.levels_ = std::move(shared);
  return chain;
}

bool HypergraphChain::member(VertexSet s, int level) const {
  if (!window_.contains(level))
    throw InputError("level " + std::to_string(level) + " outside chain window " + to_string(window_));
  ground_.check(s);
  return oracle_->member(s, level);
}

void HypergraphChain::require_levels(int from, int to, std::string_view what) const {
  if (!window_.contains(from, to))
    throw InputError(std::string(what) + " needs levels [" + std::to_string(from) + "," + std::to_string(to) +
                     "] but the chain window is " + to_string(window_));
}

std::optional<Certificate> validate_chain(const HypergraphChain& chain, std::uint64_t sample_budget,
                                          std::uint64_t seed) {
  const LevelWindow w = chain.window();
  if (chain.kind() == ChainKind::Explicit) {
    const auto& levels = chain.levels();
    for (int l = w.lo; l < w.hi; ++l) {
      const auto& here = levels[static_cast<std::size_t>(l - w.lo)];
      const auto& next = levels[static_cast<std::size_t>(l - w.lo + 1)];
      for (VertexSet e : here.maximal_edges()) {
        if (!next.contains(e)) {
          Certificate c;
          c.kind = CertificateKind::Monotonicity;
          c.set = e;
          c.level = l;
          return c;
        }
      }
    }
    return std::nullopt;
  }

  const int n = chain.n();
  std::mt19937_64 rng(seed);
  std::vector<Vertex> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  for (std::uint64_t probe = 0; probe < sample_budget; ++probe) {
    const int level = std::uniform_int_distribution<int>(w.lo, w.hi)(rng);
    const int size = std::uniform_int_distribution<int>(0, n)(rng);
    std::shuffle(order.begin(), order.end(), rng);
    VertexSet s;
    for (int i = 0; i < size; ++i) s = s.with(order[static_cast<std::size_t>(i)]);
    // Shrink to an edge so the probes exercise the axioms rather than
    // sitting in the vacuous region.
    while (!s.empty() && !chain.member(s, level)) {
      std::vector<Vertex> m = s.members();
      s = s.without(m[std::uniform_int_distribution<std::size_t>(0, m.size() - 1)(rng)]);
    }
    if (!chain.member(s, level)) continue;

    Certificate c;
    c.set = s;
    c.level = level;
    for (int up = level + 1; up <= w.hi; ++up) {
      if (!chain.member(s, up)) {
        c.kind = CertificateKind::Monotonicity;
        c.level = up - 1;
        return chain.approximate() ? make_suspect(c, "sampled oracle of an approximate chain") : c;
      }
    }
    if (s.empty()) continue;
    std::vector<Vertex> m = s.members();
    VertexSet t = s.without(m[std::uniform_int_distribution<std::size_t>(0, m.size() - 1)(rng)]);
    VertexSet random_sub(s.bits() & rng());
    for (VertexSet sub : {t, random_sub}) {
      if (!chain.member(sub, level)) {
        c.kind = CertificateKind::DownwardClosure;
        c.subset = sub;
        return chain.approximate() ? make_suspect(c, "sampled oracle of an approximate chain") : c;
      }
    }
  }
  return std::nullopt;
}

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void fail_at(int line, const std::string& msg) {
  throw InputError("line " + std::to_string(line) + ": " + msg);
}

}  // namespace

std::pair<std::vector<ExplicitHypergraph>, int> parse_explicit_levels(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  bool have_header = false;
  int n = 0;
  LevelWindow window;
  std::vector<std::optional<std::vector<VertexSet>>> edges;
  std::optional<int> current;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (!have_header) {
      std::string kw_n, kw_levels;
      if (!(ls >> kw_n >> n >> kw_levels >> window.lo >> window.hi) || kw_n != "n" || kw_levels != "levels")
        fail_at(line_no, "expected header 'n <n> levels <lo> <hi>'");
      std::string extra;
      if (ls >> extra) fail_at(line_no, "trailing text after header");
      if (n < 0 || n > kMaxVertices) fail_at(line_no, "ground set size out of range");
      if (window.lo > window.hi) fail_at(line_no, "empty level window");
      edges.resize(static_cast<std::size_t>(window.count()));
      have_header = true;
      continue;
    }
    if (line.rfind("level", 0) == 0) {
      std::string kw;
      std::string level_text;
      ls >> kw >> level_text;
      if (kw != "level" || level_text.empty() || level_text.back() != ':') fail_at(line_no, "expected 'level <l>:'");
      level_text.pop_back();
      int level = 0;
      try {
        std::size_t used = 0;
        level = std::stoi(level_text, &used);
        if (used != level_text.size()) throw std::invalid_argument("x");
      } catch (const std::exception&) {
        fail_at(line_no, "bad level number '" + level_text + "'");
      }
      if (!window.contains(level)) fail_at(line_no, "level " + level_text + " outside window " + to_string(window));
      auto& slot = edges[static_cast<std::size_t>(level - window.lo)];
      if (slot) fail_at(line_no, "level " + level_text + " listed twice");
      slot.emplace();
      current = level;
      continue;
    }
    if (!current) fail_at(line_no, "edge line before any 'level' line");
    VertexSet e;
    try {
      e = line == "{}" ? VertexSet{} : parse_vertex_set(line);
    } catch (const InputError& err) {
      fail_at(line_no, err.what());
    }
    if (!e.is_subset_of(VertexSet::range(n))) fail_at(line_no, "edge " + to_string(e) + " outside ground set");
    edges[static_cast<std::size_t>(*current - window.lo)]->push_back(e);
  }
  if (!have_header) throw InputError("empty chain file");

  std::vector<ExplicitHypergraph> levels;
  GroundSet ground(n);
  for (int l = window.lo; l <= window.hi; ++l) {
    const auto& slot = edges[static_cast<std::size_t>(l - window.lo)];
    if (!slot) throw InputError("level " + std::to_string(l) + " missing from chain file");
    try {
      levels.emplace_back(ground, *slot);
    } catch (const InputError& err) {
      throw InputError("level " + std::to_string(l) + ": " + err.what());
    }
  }
  return {std::move(levels), window.lo};
}

HypergraphChain parse_explicit_chain(std::string_view text) {
  auto [levels, first] = parse_explicit_levels(text);
  HypergraphChain chain = HypergraphChain::from_levels(std::move(levels), first, "explicit");
  if (auto cert = validate_chain(chain, 0, 0))
    throw InputError("chain not monotone: edge " + to_string(cert->set) + " of level " + std::to_string(cert->level) +
                     " is not an edge of level " + std::to_string(cert->level + 1));
  return chain;
}

std::string read_text_file(const std::string& path, std::string_view what) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open " + std::string(what) + " '" + path + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

HypergraphChain load_explicit_chain(const std::string& path) { return parse_explicit_chain(read_text_file(path, "chain file")); }

std::string format_explicit_chain(const HypergraphChain& chain) {
  if (chain.kind() != ChainKind::Explicit) throw UnsupportedError("only explicit chains have a text form");
  std::ostringstream out;
  const LevelWindow w = chain.window();
  out << "n " << chain.n() << " levels " << w.lo << ' ' << w.hi << '\n';
  for (int l = w.lo; l <= w.hi; ++l) {
    out << "\nlevel " << l << ":\n";
    for (VertexSet e : chain.levels()[static_cast<std::size_t>(l - w.lo)].maximal_edges()) {
      if (e.empty()) {
        out << "{}\n";
        continue;
      }
      bool first = true;
      e.for_each([&](Vertex v) {
        out << (first ? "" : " ") << v;
        first = false;
      });
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace qhelly
