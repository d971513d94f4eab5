#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qhelly/builders.hpp"
#include "qhelly/verify.hpp"

namespace qhelly {

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct ReportRow {
  std::string chain_id;
  std::string operation;
  std::string parameters;
  std::string result;
  std::string certificate;
  std::string detail;  // multi-line text shown only in the summary format
  double seconds = 0.0;
};

struct Report {
  std::vector<ReportRow> rows;
  std::vector<std::string> warnings;
  bool violation = false;  // a violation certificate was emitted on an exact backend
};

/// Columns chain_id,operation,parameters,result,certificate (plus
/// wall_time_s when `timing`). Fields are quoted as needed.
std::string format_csv(const Report& report, bool timing = false);
std::string format_summary(const Report& report, bool timing = false);

// ---------------------------------------------------------------------------
// Scenarios
// ---------------------------------------------------------------------------

/// One line of a scenario: keyword, positional words and key=value pairs.
struct Directive {
  std::string keyword;
  std::vector<std::string> positional;
  std::map<std::string, std::string> params;
  int line = 0;

  bool has(const std::string& key) const { return params.count(key) > 0; }
  std::string text(const std::string& key, const std::string& fallback) const;
  std::string text(const std::string& key) const;  // required
  int integer(const std::string& key, int fallback) const;
  int integer(const std::string& key) const;
  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) const;
  Rational rational(const std::string& key, const Rational& fallback) const;
  Rational rational(const std::string& key) const;
};

/// Parses "word key=value ..." (values may not contain spaces).
Directive parse_directive(std::string_view line, int line_no);

/// Line-oriented scenario:
///   qhelly-scenario 1
///   seed <u64>
///   bodies file=<path> | bodies random-boxes count= dim= ... | bodies random-polygons count= vertices= ...
///   chain <explicit|nerve|quantitative|synthetic|complete|planted> key=value ...
///   subsample period=<m> anchor=<a>
///   op <operation> key=value ...
///   output <file name>
/// Relative paths resolve against the scenario's directory.
struct Scenario {
  std::filesystem::path base_dir;
  std::uint64_t seed = 0;
  std::optional<Directive> bodies;
  std::optional<Directive> chain;
  std::optional<Directive> subsample;
  std::vector<Directive> ops;
  std::optional<std::string> output;
};

Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir);
Scenario load_scenario(const std::string& path);

struct RunOptions {
  std::optional<std::uint64_t> seed;  // overrides the scenario seed
  int workers = 1;
};

/// Builds the chain, checks every operation's level range against its
/// window, then runs the operations in order.
Report run_scenario(const Scenario& scenario, const RunOptions& options);

/// Body list named by a `bodies` directive.
std::vector<Body> bodies_from(const Directive& d, const std::filesystem::path& base_dir, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Conjecture search
// ---------------------------------------------------------------------------

struct SearchSpec {
  enum class Property { Colorful, Fractional };
  enum class Shape { Intervals, Boxes, Polygons };
  Property property = Property::Colorful;
  int d = 1;
  int target = 2;
  std::vector<Rational> v{Rational(1, 2)};
  int trials = 10;
  int n = 6;
  Shape shape = Shape::Intervals;
  BoxGenParams boxes;
  PolygonGenParams polygons;
  int polygon_vertices = 5;
  LevelWindow window{0, 4};
  ClassUniverse universe;
  bool planted = false;  // replace the geometric chain by a planted synthetic one
  VolumeBackend backend;
  std::uint64_t seed = 0;
};

struct SearchResult {
  std::vector<ReportRow> rows;
  int findings = 0;
  int suspect = 0;
};

/// Runs the trials (in parallel, one seeded substream per trial) and
/// reports, in trial order, every re-validated finding, every observed
/// (alpha, beta) pair for the fractional property, and a closing row that
/// describes the searched universe.
SearchResult search_counterexample(const SearchSpec& spec, int workers = 1);

/// One-line description of a body, e.g. "[0/1,1/1]x[1/2,2/1]".
std::string describe_body(const Body& body);

}  // namespace qhelly
