#include "qhelly/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <boost/math/special_functions/beta.hpp>

#include "qhelly/parallel.hpp"

namespace qhelly {

// ---------------------------------------------------------------------------
// Boxes
// ---------------------------------------------------------------------------

Box::Box(std::vector<Interval> axes) : axes_(std::move(axes)) {
  if (axes_.empty()) throw InputError("box needs dimension >= 1");
  for (std::size_t i = 0; i < axes_.size(); ++i)
    if (axes_[i].lo > axes_[i].hi)
      throw InputError("box axis " + std::to_string(i) + " has lower bound " + to_string(axes_[i].lo) +
                       " above upper bound " + to_string(axes_[i].hi));
}

bool operator==(const Box& a, const Box& b) {
  if (a.axes_.size() != b.axes_.size()) return false;
  for (std::size_t i = 0; i < a.axes_.size(); ++i)
    if (a.axes_[i].lo != b.axes_[i].lo || a.axes_[i].hi != b.axes_[i].hi) return false;
  return true;
}

std::optional<Box> intersect_boxes(std::span<const Box> boxes) {
  if (boxes.empty()) throw InputError("intersect_boxes needs at least one box");
  const int d = boxes.front().dimension();
  std::vector<Interval> axes = boxes.front().axes();
  for (const Box& b : boxes.subspan(1)) {
    if (b.dimension() != d)
      throw InputError("box dimensions differ: " + std::to_string(d) + " vs " + std::to_string(b.dimension()));
    for (int i = 0; i < d; ++i) {
      auto& a = axes[static_cast<std::size_t>(i)];
      if (b.axis(i).lo > a.lo) a.lo = b.axis(i).lo;
      if (b.axis(i).hi < a.hi) a.hi = b.axis(i).hi;
    }
  }
  for (const auto& a : axes)
    if (a.lo > a.hi) return std::nullopt;
  return Box(std::move(axes));
}

Rational box_volume(const Box& box) {
  Rational v = 1;
  for (const auto& a : box.axes()) v *= a.hi - a.lo;
  return v;
}

Rational box_volume(const std::optional<Box>& box) { return box ? box_volume(*box) : Rational(0); }

// ---------------------------------------------------------------------------
// Convex polygons
// ---------------------------------------------------------------------------

namespace {

Rational cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool point_less(const Point2& a, const Point2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }

}  // namespace

ConvexPolygon::ConvexPolygon(std::vector<Point2> ccw_vertices) : shape_(Shape::Polygon), vertices_(std::move(ccw_vertices)) {
  const std::size_t m = vertices_.size();
  if (m < 3) throw InputError("polygon needs at least 3 vertices, got " + std::to_string(m));
  for (std::size_t i = 0; i < m; ++i) {
    const Point2& a = vertices_[i];
    const Point2& b = vertices_[(i + 1) % m];
    const Point2& c = vertices_[(i + 2) % m];
    if (cross(a, b, c) <= 0)
      throw InputError("polygon is not strictly convex and counterclockwise at vertex " + std::to_string((i + 1) % m));
  }
  // Left turns everywhere still allow a walk that winds twice.
  ConvexPolygon h = hull(vertices_);
  if (h.shape_ != Shape::Polygon || h.vertices_.size() != m) throw InputError("polygon vertices are not in convex position");
}

ConvexPolygon ConvexPolygon::hull(std::vector<Point2> points) {
  std::sort(points.begin(), points.end(), point_less);
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() <= 2) {
    ConvexPolygon r;
    if (points.size() == 1) return point(points[0]);
    if (points.size() == 2) return segment(points[0], points[1]);
    return r;
  }
  std::vector<Point2> h(2 * points.size());
  std::size_t k = 0;
  for (const auto& p : points) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0) --k;
    h[k++] = p;
  }
  for (std::size_t i = points.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], points[i]) <= 0) --k;
    h[k++] = points[i];
  }
  h.resize(k - 1);
  if (h.size() < 3) return segment(points.front(), points.back());
  ConvexPolygon r;
  r.shape_ = Shape::Polygon;
  r.vertices_ = std::move(h);
  return r;
}

ConvexPolygon ConvexPolygon::segment(Point2 a, Point2 b) {
  ConvexPolygon r;
  if (a == b) return point(std::move(a));
  if (point_less(b, a)) std::swap(a, b);
  r.shape_ = Shape::Segment;
  r.vertices_ = {std::move(a), std::move(b)};
  return r;
}

ConvexPolygon ConvexPolygon::point(Point2 p) {
  ConvexPolygon r;
  r.shape_ = Shape::Point;
  r.vertices_ = {std::move(p)};
  return r;
}

ConvexPolygon ConvexPolygon::from_box(const Box& box) {
  if (box.dimension() != 2) throw InputError("only 2-dimensional boxes convert to polygons");
  const auto& x = box.axis(0);
  const auto& y = box.axis(1);
  return hull({{x.lo, y.lo}, {x.hi, y.lo}, {x.hi, y.hi}, {x.lo, y.hi}});
}

std::vector<ConvexPolygon::HalfPlane> ConvexPolygon::halfplanes() const {
  std::vector<HalfPlane> out;
  auto edge = [&](const Point2& a, const Point2& b) {
    // Left of a->b: (b-a) x (p-a) >= 0.
    Rational dx = b.x - a.x, dy = b.y - a.y;
    out.push_back({dy, -dx, dy * a.x - dx * a.y});
  };
  switch (shape_) {
    case Shape::Empty:
      out.push_back({0, 0, -1});
      break;
    case Shape::Point: {
      const Point2& p = vertices_[0];
      out.push_back({1, 0, p.x});
      out.push_back({-1, 0, -p.x});
      out.push_back({0, 1, p.y});
      out.push_back({0, -1, -p.y});
      break;
    }
    case Shape::Segment: {
      const Point2& a = vertices_[0];
      const Point2& b = vertices_[1];
      edge(a, b);
      edge(b, a);
      Rational dx = b.x - a.x, dy = b.y - a.y;
      // (p - a).(b - a) >= 0 and (p - b).(b - a) <= 0
      out.push_back({-dx, -dy, -(dx * a.x + dy * a.y)});
      out.push_back({dx, dy, dx * b.x + dy * b.y});
      break;
    }
    case Shape::Polygon:
      for (std::size_t i = 0; i < vertices_.size(); ++i) edge(vertices_[i], vertices_[(i + 1) % vertices_.size()]);
      break;
  }
  return out;
}

namespace {

std::vector<Point2> clip(const std::vector<Point2>& subject, const ConvexPolygon::HalfPlane& h) {
  std::vector<Point2> out;
  const std::size_t m = subject.size();
  auto slack = [&](const Point2& p) -> Rational { return h.c - h.a * p.x - h.b * p.y; };  // >= 0 inside
  for (std::size_t i = 0; i < m; ++i) {
    const Point2& p = subject[i];
    const Point2& q = subject[(i + 1) % m];
    Rational sp = slack(p), sq = slack(q);
    bool in_p = sp >= 0, in_q = sq >= 0;
    if (in_p != in_q) {
      Rational t = sp / (sp - sq);
      out.push_back({p.x + (q.x - p.x) * t, p.y + (q.y - p.y) * t});
    }
    if (in_q) out.push_back(q);
  }
  return out;
}

}  // namespace

ConvexPolygon intersect_polygons(std::span<const ConvexPolygon> bodies) {
  if (bodies.empty()) throw InputError("intersect_polygons needs at least one polygon");
  std::vector<Point2> running = bodies.front().vertices();
  for (const ConvexPolygon& body : bodies.subspan(1)) {
    if (running.empty()) break;
    for (const auto& h : body.halfplanes()) {
      running = clip(running, h);
      if (running.empty()) break;
    }
  }
  if (running.empty()) return ConvexPolygon{};
  return ConvexPolygon::hull(std::move(running));
}

Rational polygon_area(const ConvexPolygon& polygon) {
  if (polygon.shape() != ConvexPolygon::Shape::Polygon) return 0;
  const auto& v = polygon.vertices();
  Rational twice = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2& a = v[i];
    const Point2& b = v[(i + 1) % v.size()];
    twice += a.x * b.y - a.y * b.x;
  }
  return twice / 2;
}

// ---------------------------------------------------------------------------
// Halfspace bodies
// ---------------------------------------------------------------------------

namespace {

struct Row {
  std::vector<Rational> a;
  Rational b;
};

/// Scales a row so its first nonzero coefficient has absolute value 1; used
/// to drop duplicate constraints during elimination.
void normalize_row(Row& r) {
  for (const auto& c : r.a) {
    if (c != 0) {
      Rational s = abs(c);
      for (auto& x : r.a) x /= s;
      r.b /= s;
      return;
    }
  }
}

bool row_less(const Row& x, const Row& y) {
  for (std::size_t i = 0; i < x.a.size(); ++i)
    if (x.a[i] != y.a[i]) return x.a[i] < y.a[i];
  return x.b < y.b;
}

bool same_lhs(const Row& x, const Row& y) {
  for (std::size_t i = 0; i < x.a.size(); ++i)
    if (x.a[i] != y.a[i]) return false;
  return true;
}

/// Keeps only the tightest right-hand side per left-hand side.
void dedupe(std::vector<Row>& rows) {
  for (auto& r : rows) normalize_row(r);
  std::sort(rows.begin(), rows.end(), row_less);
  std::vector<Row> out;
  for (auto& r : rows)
    if (out.empty() || !same_lhs(out.back(), r)) out.push_back(std::move(r));
  rows = std::move(out);
}

constexpr std::size_t kMaxEliminationRows = 20000;

/// Fourier-Motzkin: returns [lo, hi] of variable `keep`, or nullopt when the
/// system is infeasible. Throws when unbounded.
std::optional<Interval> project_axis(int d, const std::vector<Halfspace>& hs, int keep) {
  std::vector<Row> rows;
  for (const auto& h : hs) rows.push_back({h.normal, h.offset});
  for (int j = 0; j < d; ++j) {
    if (j == keep) continue;
    std::vector<Row> pos, neg, next;
    for (auto& r : rows) {
      const Rational& c = r.a[static_cast<std::size_t>(j)];
      if (c > 0) pos.push_back(std::move(r));
      else if (c < 0) neg.push_back(std::move(r));
      else next.push_back(std::move(r));
    }
    for (const auto& p : pos) {
      for (const auto& q : neg) {
        Rational cp = p.a[static_cast<std::size_t>(j)];
        Rational cq = -q.a[static_cast<std::size_t>(j)];
        Row r;
        r.a.resize(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) r.a[static_cast<std::size_t>(i)] = p.a[static_cast<std::size_t>(i)] * cq + q.a[static_cast<std::size_t>(i)] * cp;
        r.a[static_cast<std::size_t>(j)] = 0;
        r.b = p.b * cq + q.b * cp;
        next.push_back(std::move(r));
      }
    }
    dedupe(next);
    if (next.size() > kMaxEliminationRows) throw InputError("halfspace body too complex for bounding-box elimination");
    rows = std::move(next);
  }
  std::optional<Rational> lo, hi;
  for (const auto& r : rows) {
    const Rational& c = r.a[static_cast<std::size_t>(keep)];
    if (c == 0) {
      if (r.b < 0) return std::nullopt;
      continue;
    }
    Rational bound = r.b / c;
    if (c > 0) {
      if (!hi || bound < *hi) hi = bound;
    } else {
      if (!lo || bound > *lo) lo = bound;
    }
  }
  if (!lo || !hi) throw InputError("halfspace body is unbounded along axis " + std::to_string(keep));
  if (*lo > *hi) return std::nullopt;
  return Interval{*lo, *hi};
}

}  // namespace

HalfspaceBody::HalfspaceBody(int dimension, std::vector<Halfspace> halfspaces, std::optional<Box> bbox)
    : dimension_(dimension), halfspaces_(std::move(halfspaces)), bbox_(std::move(bbox)) {
  for (const auto& h : halfspaces_) {
    for (const auto& a : h.normal) normals_.push_back(a.get_d());
    offsets_.push_back(h.offset.get_d());
  }
}

HalfspaceBody HalfspaceBody::from_halfspaces(int dimension, std::vector<Halfspace> halfspaces) {
  if (dimension < 1) throw InputError("halfspace body needs dimension >= 1");
  for (const auto& h : halfspaces)
    if (static_cast<int>(h.normal.size()) != dimension)
      throw InputError("halfspace has " + std::to_string(h.normal.size()) + " coefficients, expected " +
                       std::to_string(dimension));
  std::vector<Interval> axes;
  for (int i = 0; i < dimension; ++i) {
    auto axis = project_axis(dimension, halfspaces, i);
    if (!axis) return HalfspaceBody(dimension, std::move(halfspaces), std::nullopt);
    axes.push_back(*axis);
  }
  return HalfspaceBody(dimension, std::move(halfspaces), Box(std::move(axes)));
}

HalfspaceBody HalfspaceBody::from_box(const Box& box) {
  const int d = box.dimension();
  std::vector<Halfspace> hs;
  for (int i = 0; i < d; ++i) {
    std::vector<Rational> up(static_cast<std::size_t>(d), Rational(0)), down = up;
    up[static_cast<std::size_t>(i)] = 1;
    down[static_cast<std::size_t>(i)] = -1;
    hs.push_back({up, box.axis(i).hi});
    hs.push_back({down, -box.axis(i).lo});
  }
  return HalfspaceBody(d, std::move(hs), box);
}

HalfspaceBody HalfspaceBody::from_polygon(const ConvexPolygon& polygon) {
  std::vector<Halfspace> hs;
  for (const auto& h : polygon.halfplanes()) hs.push_back({{h.a, h.b}, h.c});
  if (polygon.empty()) return HalfspaceBody(2, std::move(hs), std::nullopt);
  const auto& v = polygon.vertices();
  Interval x{v[0].x, v[0].x}, y{v[0].y, v[0].y};
  for (const auto& p : v) {
    if (p.x < x.lo) x.lo = p.x;
    if (p.x > x.hi) x.hi = p.x;
    if (p.y < y.lo) y.lo = p.y;
    if (p.y > y.hi) y.hi = p.y;
  }
  return HalfspaceBody(2, std::move(hs), Box({x, y}));
}

bool HalfspaceBody::contains(std::span<const double> x) const {
  const std::size_t d = static_cast<std::size_t>(dimension_);
  for (std::size_t h = 0; h < offsets_.size(); ++h) {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) s += normals_[h * d + i] * x[i];
    if (s > offsets_[h]) return false;
  }
  return true;
}

std::pair<double, double> clopper_pearson(std::uint64_t hits, std::uint64_t trials, double confidence) {
  if (trials == 0) return {0.0, 1.0};
  const double tail = (1.0 - confidence) / 2.0;
  const double x = static_cast<double>(hits);
  const double n = static_cast<double>(trials);
  double lo = hits == 0 ? 0.0 : boost::math::ibeta_inv(x, n - x + 1.0, tail);
  double hi = hits == trials ? 1.0 : boost::math::ibeta_inv(x + 1.0, n - x, 1.0 - tail);
  return {lo, hi};
}

VolumeEstimate mc_volume(std::span<const HalfspaceBody> bodies, std::uint64_t samples, const Rational& confidence,
                         std::uint64_t seed, int workers, int partitions) {
  if (bodies.empty()) throw InputError("mc_volume needs at least one body");
  if (confidence <= 0 || confidence >= 1) throw InputError("confidence must lie in (0,1)");
  if (partitions < 1) throw InputError("partition count must be positive");
  const int d = bodies.front().dimension();
  VolumeEstimate est;
  est.confidence = confidence;
  est.seed = seed;
  est.partitions = partitions;
  est.samples = samples;

  std::vector<Box> boxes;
  for (const auto& b : bodies) {
    if (b.dimension() != d) throw InputError("bodies of different dimensions");
    if (!b.bounding_box()) {
      est.exact_zero = true;
      return est;
    }
    boxes.push_back(*b.bounding_box());
  }
  std::optional<Box> common = intersect_boxes(boxes);
  if (!common || box_volume(*common) == 0) {
    est.exact_zero = true;
    return est;
  }
  if (samples == 0) throw InputError("mc_volume needs a positive sample count");

  std::vector<double> lo(static_cast<std::size_t>(d)), width(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    lo[static_cast<std::size_t>(i)] = common->axis(i).lo.get_d();
    width[static_cast<std::size_t>(i)] = Rational(common->axis(i).hi - common->axis(i).lo).get_d();
  }
  std::vector<std::uint64_t> hits(static_cast<std::size_t>(partitions), 0);
  parallel_for(static_cast<std::size_t>(partitions), workers, [&](std::size_t p) {
    const std::uint64_t share = samples / static_cast<std::uint64_t>(partitions) +
                                (p < samples % static_cast<std::uint64_t>(partitions) ? 1 : 0);
    std::mt19937_64 rng(mix_seed(seed, p));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> x(static_cast<std::size_t>(d));
    std::uint64_t h = 0;
    for (std::uint64_t s = 0; s < share; ++s) {
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = lo[i] + width[i] * unit(rng);
      bool in = true;
      for (const auto& b : bodies)
        if (!b.contains(x)) {
          in = false;
          break;
        }
      h += in ? 1 : 0;
    }
    hits[p] = h;
  });
  for (auto h : hits) est.hits += h;

  const Rational box_vol = box_volume(*common);
  est.estimate = ratio(Integer(static_cast<unsigned long>(est.hits)), Integer(static_cast<unsigned long>(samples))) * box_vol;
  auto [plo, phi] = clopper_pearson(est.hits, samples, confidence.get_d());
  est.lower = plo * box_vol.get_d();
  est.upper = phi * box_vol.get_d();
  // Rounding in the double conversion must not push the point estimate out.
  const double point = est.estimate.get_d();
  est.lower = std::min(est.lower, point);
  est.upper = std::max(est.upper, point);
  return est;
}

bool check_bounding_box(const HalfspaceBody& body, std::uint64_t samples, std::uint64_t seed) {
  if (!body.bounding_box()) return true;
  const Box& bb = *body.bounding_box();
  const int d = body.dimension();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> x(static_cast<std::size_t>(d));
  for (std::uint64_t s = 0; s < samples; ++s) {
    for (int i = 0; i < d; ++i) {
      double l = bb.axis(i).lo.get_d(), h = bb.axis(i).hi.get_d();
      double w = std::max(h - l, 1.0);
      x[static_cast<std::size_t>(i)] = (l - w) + 3.0 * w * unit(rng);
    }
    if (!body.contains(x)) continue;
    for (int i = 0; i < d; ++i) {
      Rational xi(x[static_cast<std::size_t>(i)]);
      if (xi < bb.axis(i).lo || xi > bb.axis(i).hi) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

namespace {

Rational grid_value(std::mt19937_64& rng, const Rational& from, const Rational& to, int grid) {
  const std::int64_t a = ceil_to_int(from * grid);
  const std::int64_t b = floor_to_int(to * grid);
  if (a > b) throw InputError("generator range [" + to_string(from) + "," + to_string(to) + "] holds no grid point");
  std::int64_t k = std::uniform_int_distribution<std::int64_t>(a, b)(rng);
  return ratio(Integer(static_cast<long>(k)), Integer(grid));
}

}  // namespace

std::vector<Box> random_boxes(int count, int dimension, const BoxGenParams& params, std::uint64_t seed) {
  if (count < 1) throw InputError("random_boxes needs a positive count");
  if (dimension < 1) throw InputError("random_boxes needs a positive dimension");
  if (params.grid < 1) throw InputError("grid must be positive");
  if (params.min_width < 0 || params.min_width > params.max_width) throw InputError("bad width range");
  std::mt19937_64 rng(seed);
  std::vector<Box> out;
  for (int c = 0; c < count; ++c) {
    std::vector<Interval> axes;
    for (int i = 0; i < dimension; ++i) {
      Rational lo = grid_value(rng, 0, params.span, params.grid);
      Rational w = grid_value(rng, params.min_width, params.max_width, params.grid);
      axes.push_back({lo, lo + w});
    }
    out.emplace_back(std::move(axes));
  }
  return out;
}

std::vector<ConvexPolygon> random_polygons(int count, int vertex_budget, const PolygonGenParams& params,
                                           std::uint64_t seed) {
  if (count < 1) throw InputError("random_polygons needs a positive count");
  if (vertex_budget < 3) throw InputError("random_polygons needs a vertex budget of at least 3");
  if (params.grid < 1) throw InputError("grid must be positive");
  std::mt19937_64 rng(seed);
  std::vector<ConvexPolygon> out;
  int attempts = 0;
  while (static_cast<int>(out.size()) < count) {
    if (++attempts > 1000 * count) throw InputError("random_polygons cannot produce non-degenerate hulls");
    std::vector<Point2> pts;
    for (int i = 0; i < vertex_budget; ++i)
      pts.push_back({grid_value(rng, 0, params.span, params.grid), grid_value(rng, 0, params.span, params.grid)});
    ConvexPolygon p = ConvexPolygon::hull(std::move(pts));
    if (!p.degenerate()) out.push_back(std::move(p));
  }
  return out;
}

int body_dimension(const Body& body) {
  return std::visit(
      [](const auto& b) -> int {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, ConvexPolygon>) return 2;
        else return b.dimension();
      },
      body);
}

// ---------------------------------------------------------------------------
// Body files
// ---------------------------------------------------------------------------

namespace {

struct BodyLine {
  int number;
  std::vector<std::string> tokens;
};

bool is_keyword(const std::string& t) { return t == "box" || t == "polygon" || t == "hpoly"; }

std::vector<Rational> numbers(const BodyLine& line, std::size_t expected) {
  if (line.tokens.size() != expected)
    throw InputError("line " + std::to_string(line.number) + ": expected " + std::to_string(expected) +
                     " numbers, got " + std::to_string(line.tokens.size()));
  std::vector<Rational> out;
  for (const auto& t : line.tokens) {
    try {
      out.push_back(parse_rational(t));
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(line.number) + ": " + e.what());
    }
  }
  return out;
}

int dimension_header(const BodyLine& line) {
  const auto& t = line.tokens;
  int d = 0;
  if (t.size() != 3 || t[1] != "d") throw InputError("line " + std::to_string(line.number) + ": expected '" + t[0] + " d <d>'");
  try {
    std::size_t used = 0;
    d = std::stoi(t[2], &used);
    if (used != t[2].size()) throw std::invalid_argument("x");
  } catch (const std::exception&) {
    throw InputError("line " + std::to_string(line.number) + ": bad dimension '" + t[2] + "'");
  }
  if (d < 1) throw InputError("line " + std::to_string(line.number) + ": dimension must be >= 1");
  return d;
}

}  // namespace

std::vector<Body> parse_bodies(std::string_view text) {
  std::vector<BodyLine> lines;
  std::istringstream in{std::string(text)};
  std::string raw;
  for (int number = 1; std::getline(in, raw); ++number) {
    std::istringstream ls(raw.substr(0, raw.find('#')));
    BodyLine line{number, {}};
    for (std::string tok; ls >> tok;) line.tokens.push_back(tok);
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }

  std::vector<Body> bodies;
  std::size_t i = 0;
  while (i < lines.size()) {
    const BodyLine& head = lines[i++];
    const std::string& kw = head.tokens[0];
    if (!is_keyword(kw)) throw InputError("line " + std::to_string(head.number) + ": expected 'box', 'polygon' or 'hpoly'");
    std::size_t end = i;
    while (end < lines.size() && !is_keyword(lines[end].tokens[0])) ++end;
    try {
      if (kw == "box") {
        const int d = dimension_header(head);
        if (end - i != static_cast<std::size_t>(d))
          throw InputError("line " + std::to_string(head.number) + ": box of dimension " + std::to_string(d) + " needs " +
                           std::to_string(d) + " interval lines");
        std::vector<Interval> axes;
        for (std::size_t j = i; j < end; ++j) {
          auto v = numbers(lines[j], 2);
          axes.push_back({v[0], v[1]});
        }
        bodies.emplace_back(Box(std::move(axes)));
      } else if (kw == "polygon") {
        if (head.tokens.size() != 1) throw InputError("line " + std::to_string(head.number) + ": trailing text after 'polygon'");
        std::vector<Point2> pts;
        for (std::size_t j = i; j < end; ++j) {
          auto v = numbers(lines[j], 2);
          pts.push_back({v[0], v[1]});
        }
        if (pts.empty()) throw InputError("line " + std::to_string(head.number) + ": polygon without vertices");
        if (pts.size() == 1) bodies.emplace_back(ConvexPolygon::point(pts[0]));
        else if (pts.size() == 2) bodies.emplace_back(ConvexPolygon::segment(pts[0], pts[1]));
        else bodies.emplace_back(ConvexPolygon(std::move(pts)));
      } else {
        const int d = dimension_header(head);
        std::vector<Halfspace> hs;
        for (std::size_t j = i; j < end; ++j) {
          auto v = numbers(lines[j], static_cast<std::size_t>(d) + 1);
          Rational b = v.back();
          v.pop_back();
          hs.push_back({std::move(v), b});
        }
        bodies.emplace_back(HalfspaceBody::from_halfspaces(d, std::move(hs)));
      }
    } catch (const InputError& e) {
      std::string msg = e.what();
      if (msg.rfind("line ", 0) == 0) throw;
      throw InputError("line " + std::to_string(head.number) + ": " + msg);
    }
    i = end;
  }
  return bodies;
}

std::vector<Body> load_bodies(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open body file '" + path + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_bodies(buf.str());
}

std::string format_bodies(std::span<const Body> bodies) {
  std::ostringstream out;
  for (const Body& body : bodies) {
    if (const auto* b = std::get_if<Box>(&body)) {
      out << "box d " << b->dimension() << '\n';
      for (const auto& a : b->axes()) out << to_string(a.lo) << ' ' << to_string(a.hi) << '\n';
    } else if (const auto* p = std::get_if<ConvexPolygon>(&body)) {
      if (p->empty()) throw InputError("the empty polygon has no text form");
      out << "polygon\n";
      for (const auto& v : p->vertices()) out << to_string(v.x) << ' ' << to_string(v.y) << '\n';
    } else {
      const auto& h = std::get<HalfspaceBody>(body);
      out << "hpoly d " << h.dimension() << '\n';
      for (const auto& s : h.halfspaces()) {
        for (const auto& a : s.normal) out << to_string(a) << ' ';
        out << to_string(s.offset) << '\n';
      }
    }
  }
  return out.str();
}

}  // namespace qhelly
