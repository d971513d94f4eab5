#include "qhelly/vertex_set.hpp"

#include <cctype>

#include "qhelly/rational.hpp"

namespace qhelly {

namespace {

void check_vertex(Vertex v) {
  if (v < 0 || v >= kMaxVertices)
    throw InputError("vertex index " + std::to_string(v) + " outside 0.." + std::to_string(kMaxVertices - 1));
}

bool subsets_dfs(const std::vector<Vertex>& pool, std::size_t next, VertexSet current,
                 const std::function<bool(VertexSet)>& visit) {
  if (!visit(current)) return false;
  for (std::size_t i = next; i < pool.size(); ++i)
    if (!subsets_dfs(pool, i + 1, current.with(pool[i]), visit)) return false;
  return true;
}

}  // namespace

VertexSet::VertexSet(std::initializer_list<Vertex> vertices) {
  for (Vertex v : vertices) {
    check_vertex(v);
    bits_ |= std::uint64_t{1} << v;
  }
}

VertexSet VertexSet::range(int n) {
  if (n < 0 || n > kMaxVertices) throw InputError("ground set size " + std::to_string(n) + " unsupported");
  return VertexSet(n == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1));
}

VertexSet VertexSet::from_vector(const std::vector<Vertex>& vertices) {
  VertexSet s;
  for (Vertex v : vertices) s = s.with(v);
  return s;
}

VertexSet VertexSet::with(Vertex v) const {
  check_vertex(v);
  return VertexSet(bits_ | (std::uint64_t{1} << v));
}

VertexSet VertexSet::without(Vertex v) const {
  check_vertex(v);
  return VertexSet(bits_ & ~(std::uint64_t{1} << v));
}

std::vector<Vertex> VertexSet::members() const {
  std::vector<Vertex> out;
  out.reserve(static_cast<std::size_t>(size()));
  for_each([&](Vertex v) { out.push_back(v); });
  return out;
}

bool lex_less(VertexSet a, VertexSet b) {
  std::uint64_t diff = a.bits() ^ b.bits();
  if (diff == 0) return false;
  std::uint64_t low = diff & (~diff + 1);
  std::uint64_t above = ~((low << 1) - 1);
  // The first differing position holds `low` in exactly one of the sets; the
  // other set either continues with a larger element (and loses) or ends
  // there (and wins, being a prefix).
  if (a.bits() & low) return (b.bits() & above) != 0;
  return (a.bits() & above) == 0;
}

bool operator<(VertexSet a, VertexSet b) { return lex_less(a, b); }

std::string to_string(VertexSet s) {
  std::string out = "{";
  bool first = true;
  s.for_each([&](Vertex v) {
    if (!first) out += ',';
    out += std::to_string(v);
    first = false;
  });
  out += '}';
  return out;
}

VertexSet parse_vertex_set(std::string_view text) {
  VertexSet out;
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    for (char c : token)
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw InputError("bad vertex index '" + token + "' in '" + std::string(text) + "'");
    if (token.size() > 3) throw InputError("vertex index '" + token + "' out of range");
    Vertex v = std::stoi(token);
    check_vertex(v);
    if (out.contains(v)) throw InputError("duplicate vertex " + token + " in '" + std::string(text) + "'");
    out = out.with(v);
    token.clear();
  };
  for (char c : text) {
    if (c == '{' || c == '}' || c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else {
      token += c;
    }
  }
  flush();
  return out;
}

bool for_each_k_subset(VertexSet s, int k, const std::function<bool(VertexSet)>& visit) {
  const std::vector<Vertex> pool = s.members();
  const int n = static_cast<int>(pool.size());
  if (k < 0 || k > n) return true;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    VertexSet cur;
    for (int i : idx) cur = VertexSet(cur.bits() | (std::uint64_t{1} << pool[static_cast<std::size_t>(i)]));
    if (!visit(cur)) return false;
    int pos = k - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - k + pos) --pos;
    if (pos < 0) return true;
    ++idx[static_cast<std::size_t>(pos)];
    for (int j = pos + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

std::vector<VertexSet> k_subsets(VertexSet s, int k) {
  std::vector<VertexSet> out;
  for_each_k_subset(s, k, [&](VertexSet t) {
    out.push_back(t);
    return true;
  });
  return out;
}

bool for_each_subset_lex(VertexSet s, const std::function<bool(VertexSet)>& visit) {
  return subsets_dfs(s.members(), 0, VertexSet{}, visit);
}

}  // namespace qhelly
