#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qhelly/rational.hpp"

namespace qhelly {

// ---------------------------------------------------------------------------
// Boxes
// ---------------------------------------------------------------------------

struct Interval {
  Rational lo;
  Rational hi;
};

/// Axis-parallel box with closed, exact intervals. Zero-width axes are
/// allowed and give volume 0.
class Box {
 public:
  explicit Box(std::vector<Interval> axes);

  int dimension() const { return static_cast<int>(axes_.size()); }
  const std::vector<Interval>& axes() const { return axes_; }
  const Interval& axis(int i) const { return axes_[static_cast<std::size_t>(i)]; }

  friend bool operator==(const Box& a, const Box& b);

 private:
  std::vector<Interval> axes_;
};

/// Per-axis interval intersection; nullopt when some axis is empty.
/// Throws InputError on an empty list or mixed dimensions.
std::optional<Box> intersect_boxes(std::span<const Box> boxes);

Rational box_volume(const Box& box);
Rational box_volume(const std::optional<Box>& box);

// ---------------------------------------------------------------------------
// Convex polygons
// ---------------------------------------------------------------------------

struct Point2 {
  Rational x;
  Rational y;
  friend bool operator==(const Point2& a, const Point2& b) { return a.x == b.x && a.y == b.y; }
};

/// Closed convex set in the plane: a strictly convex CCW polygon, or a
/// degenerate segment, point or empty set.
class ConvexPolygon {
 public:
  enum class Shape { Empty, Point, Segment, Polygon };

  ConvexPolygon() = default;

  /// Requires at least three vertices in counterclockwise order with every
  /// consecutive cross product strictly positive; throws InputError otherwise.
  explicit ConvexPolygon(std::vector<Point2> ccw_vertices);

  /// Convex hull of arbitrary points (collinear points dropped). May come out
  /// degenerate.
  static ConvexPolygon hull(std::vector<Point2> points);
  static ConvexPolygon segment(Point2 a, Point2 b);
  static ConvexPolygon point(Point2 p);
  static ConvexPolygon from_box(const Box& box);

  Shape shape() const { return shape_; }
  bool empty() const { return shape_ == Shape::Empty; }
  bool degenerate() const { return shape_ != Shape::Polygon; }
  const std::vector<Point2>& vertices() const { return vertices_; }

  /// Closed halfplanes a*x + b*y <= c whose intersection is this set.
  struct HalfPlane {
    Rational a, b, c;
  };
  std::vector<HalfPlane> halfplanes() const;

  friend bool operator==(const ConvexPolygon& a, const ConvexPolygon& b) {
    return a.shape_ == b.shape_ && a.vertices_ == b.vertices_;
  }

 private:
  Shape shape_ = Shape::Empty;
  std::vector<Point2> vertices_;
};

/// Clips the first body by every supporting halfplane of the others, exactly.
/// Boundary points are kept, so touching bodies intersect in a degenerate set.
ConvexPolygon intersect_polygons(std::span<const ConvexPolygon> bodies);

/// Shoelace area; 0 for degenerate shapes.
Rational polygon_area(const ConvexPolygon& polygon);

// ---------------------------------------------------------------------------
// Halfspace bodies and Monte Carlo volume
// ---------------------------------------------------------------------------

/// normal . x <= offset
struct Halfspace {
  std::vector<Rational> normal;
  Rational offset;
};

/// Bounded intersection of halfspaces with a bounding box that contains it.
class HalfspaceBody {
 public:
  /// Computes the tightest bounding box by Fourier-Motzkin elimination;
  /// throws InputError when the body is unbounded.
  static HalfspaceBody from_halfspaces(int dimension, std::vector<Halfspace> halfspaces);
  static HalfspaceBody from_box(const Box& box);
  static HalfspaceBody from_polygon(const ConvexPolygon& polygon);

  int dimension() const { return dimension_; }
  const std::vector<Halfspace>& halfspaces() const { return halfspaces_; }
  /// nullopt when the halfspaces have no common point.
  const std::optional<Box>& bounding_box() const { return bbox_; }

  /// Floating-point membership used by the samplers.
  bool contains(std::span<const double> x) const;

 private:
  HalfspaceBody(int dimension, std::vector<Halfspace> halfspaces, std::optional<Box> bbox);

  int dimension_ = 0;
  std::vector<Halfspace> halfspaces_;
  std::optional<Box> bbox_;
  std::vector<double> normals_;  // row-major copy for sampling
  std::vector<double> offsets_;
};

struct VolumeEstimate {
  Rational estimate;  // hits / samples * bounding box volume
  double lower = 0.0;
  double upper = 0.0;
  Rational confidence;
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
  std::uint64_t seed = 0;
  int partitions = 0;
  bool exact_zero = false;  // common bounding box is empty or flat
};

/// Default number of independent sampling substreams.
inline constexpr int kDefaultPartitions = 16;

/// Hit-or-miss estimate of vol(intersection of bodies) with a Clopper-Pearson
/// interval at `confidence`. Samples are split over a fixed number of seeded
/// substreams, so the result does not depend on `workers`.
VolumeEstimate mc_volume(std::span<const HalfspaceBody> bodies, std::uint64_t samples, const Rational& confidence,
                         std::uint64_t seed, int workers = 1, int partitions = kDefaultPartitions);

/// Samples points in the bounding box inflated by its own width on every side
/// and checks that every point accepted by the body lies in its bounding box.
bool check_bounding_box(const HalfspaceBody& body, std::uint64_t samples, std::uint64_t seed);

/// Two-sided Clopper-Pearson interval for a binomial proportion.
std::pair<double, double> clopper_pearson(std::uint64_t hits, std::uint64_t trials, double confidence);

// ---------------------------------------------------------------------------
// Instance generators and body files
// ---------------------------------------------------------------------------

/// Coordinates are multiples of 1/grid. Lower corners are drawn from
/// [0, span], widths from [min_width, max_width].
struct BoxGenParams {
  int grid = 16;
  Rational span = 1;
  Rational min_width = Rational(1, 2);
  Rational max_width = 1;
};

struct PolygonGenParams {
  int grid = 16;
  Rational span = 1;
};

std::vector<Box> random_boxes(int count, int dimension, const BoxGenParams& params, std::uint64_t seed);

/// Each polygon is the hull of `vertex_budget` random grid points; draws whose
/// hull is degenerate are discarded and redrawn.
std::vector<ConvexPolygon> random_polygons(int count, int vertex_budget, const PolygonGenParams& params,
                                           std::uint64_t seed);

using Body = std::variant<Box, ConvexPolygon, HalfspaceBody>;

int body_dimension(const Body& body);

/// Body file format: blocks starting with `box d <d>` (d lines `lo hi`),
/// `polygon` (CCW vertex lines `x y`; one or two lines give a point or a
/// segment) or `hpoly d <d>` (lines `a_1 ... a_d b` for a.x <= b).
/// Numbers are rationals `p/q`. `#` starts a comment.
std::vector<Body> parse_bodies(std::string_view text);
std::vector<Body> load_bodies(const std::string& path);
std::string format_bodies(std::span<const Body> bodies);

}  // namespace qhelly
