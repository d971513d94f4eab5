#include "qhelly/hypergraph.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "qhelly/rational.hpp"

namespace qhelly {

GroundSet::GroundSet(int n, std::vector<std::string> labels) : n_(n), labels_(std::move(labels)) {
  if (n < 0 || n > kMaxVertices)
    throw InputError("ground set size " + std::to_string(n) + " outside 0.." + std::to_string(kMaxVertices));
  if (!labels_.empty() && static_cast<int>(labels_.size()) != n)
    throw InputError("ground set has " + std::to_string(n) + " vertices but " + std::to_string(labels_.size()) +
                     " labels");
}

std::string GroundSet::label(Vertex v) const {
  if (v >= 0 && v < static_cast<int>(labels_.size())) return labels_[static_cast<std::size_t>(v)];
  return std::to_string(v);
}

void GroundSet::check(VertexSet s) const {
  if (!s.is_subset_of(all()))
    throw InputError("set " + to_string(s) + " has a vertex outside the ground set of size " + std::to_string(n_));
}

std::vector<VertexSet> antichain_reduce(std::vector<VertexSet> sets) {
  // Larger sets first so each candidate only needs checking against kept ones.
  std::sort(sets.begin(), sets.end(), [](VertexSet a, VertexSet b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a < b;
  });
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  std::vector<VertexSet> kept;
  for (VertexSet s : sets) {
    bool dominated = std::any_of(kept.begin(), kept.end(), [&](VertexSet k) { return s.is_subset_of(k); });
    if (!dominated) kept.push_back(s);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

ExplicitHypergraph::ExplicitHypergraph(GroundSet ground, std::vector<VertexSet> maximal_edges)
    : ground_(std::move(ground)), maximal_(std::move(maximal_edges)) {
  for (VertexSet e : maximal_) ground_.check(e);
  std::sort(maximal_.begin(), maximal_.end());
  for (std::size_t i = 0; i < maximal_.size(); ++i) {
    for (std::size_t j = 0; j < maximal_.size(); ++j) {
      if (i == j) continue;
      if (maximal_[i].is_subset_of(maximal_[j]))
        throw InputError("not an antichain: maximal edge " + to_string(maximal_[i]) + " is contained in " +
                         to_string(maximal_[j]));
    }
  }
}

ExplicitHypergraph ExplicitHypergraph::from_edges(GroundSet ground, std::vector<VertexSet> edges) {
  return ExplicitHypergraph(std::move(ground), antichain_reduce(std::move(edges)));
}

ExplicitHypergraph ExplicitHypergraph::complete(GroundSet ground) {
  VertexSet all = ground.all();
  return ExplicitHypergraph(std::move(ground), {all});
}

bool ExplicitHypergraph::contains(VertexSet s) const {
  ground_.check(s);
  return std::any_of(maximal_.begin(), maximal_.end(), [&](VertexSet e) { return s.is_subset_of(e); });
}

ColorClasses::ColorClasses(std::vector<VertexSet> classes) : classes_(std::move(classes)) {
  if (classes_.empty()) throw InputError("at least one color class is required");
  for (std::size_t i = 0; i < classes_.size(); ++i)
    if (classes_[i].empty()) throw InputError("color class " + std::to_string(i + 1) + " is empty");
}

VertexSet ColorClasses::support() const {
  VertexSet out;
  for (VertexSet c : classes_) out = out | c;
  return out;
}

std::vector<VertexSet> colorful_selections(const ColorClasses& classes) {
  std::set<VertexSet> images;
  const auto& cls = classes.classes();
  std::function<void(std::size_t, VertexSet)> pick = [&](std::size_t i, VertexSet image) {
    if (i == cls.size()) {
      images.insert(image);
      return;
    }
    cls[i].for_each([&](Vertex v) { pick(i + 1, image.with(v)); });
  };
  pick(0, VertexSet{});
  return {images.begin(), images.end()};
}

}  // namespace qhelly
