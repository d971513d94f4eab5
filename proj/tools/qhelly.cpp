#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qhelly/experiments.hpp"
#include "qhelly/parallel.hpp"

using namespace qhelly;

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  int workers = 1;
  std::string out;
  std::string format = "csv";
  bool timing = false;
};

/// Adds key=value to a directive when the option was given.
struct DirectiveBuilder {
  Directive d;
  DirectiveBuilder(std::string keyword, std::string word) {
    d.keyword = std::move(keyword);
    d.positional.push_back(std::move(word));
    d.line = 0;
  }
  template <class T>
  DirectiveBuilder& set(const std::string& key, const std::optional<T>& v) {
    if (v) {
      if constexpr (std::is_same_v<T, std::string>) d.params[key] = *v;
      else d.params[key] = std::to_string(*v);
    }
    return *this;
  }
  DirectiveBuilder& put(const std::string& key, const std::string& v) {
    d.params[key] = v;
    return *this;
  }
};

struct ChainFlags {
  std::optional<std::string> chain_file;
  std::optional<std::string> bodies_file;
  std::string builder = "quantitative";
  std::optional<std::string> v;
  std::optional<std::string> window;
  std::optional<std::string> backend;
  std::optional<std::uint64_t> samples;
  std::optional<std::string> confidence;
  std::optional<int> period;
  std::optional<int> anchor;

  void attach(CLI::App* app, bool positional_chain = false) {
    if (positional_chain) app->add_option("chain-file", chain_file, "explicit chain file");
    else app->add_option("--chain", chain_file, "explicit chain file");
    app->add_option("--bodies", bodies_file, "bodies file for a geometric chain");
    app->add_option("--builder", builder, "nerve or quantitative")->check(CLI::IsMember({"nerve", "quantitative"}));
    app->add_option("--v", v, "threshold base v in (0,1), e.g. 1/2");
    app->add_option("--window", window, "level window lo:hi");
    app->add_option("--backend", backend, "volume backend")->check(CLI::IsMember({"exact", "mc"}));
    app->add_option("--samples", samples, "Monte Carlo samples");
    app->add_option("--confidence", confidence, "Monte Carlo confidence, e.g. 95/100");
    app->add_option("--subsample-period", period, "keep every m-th level");
    app->add_option("--subsample-anchor", anchor, "level mapped to output level 0");
  }

  void fill(Scenario& sc) const {
    if (chain_file && bodies_file) throw InputError("give either a chain file or --bodies, not both");
    if (chain_file) {
      sc.chain = DirectiveBuilder("chain", "explicit").put("file", *chain_file).d;
    } else if (bodies_file) {
      sc.bodies = DirectiveBuilder("bodies", "").put("file", *bodies_file).d;
      sc.bodies->positional.clear();
      DirectiveBuilder c("chain", builder);
      c.set("v", v).set("window", window).set("backend", backend).set("samples", samples).set("confidence", confidence);
      sc.chain = c.d;
    } else {
      throw InputError("no chain given (use --chain FILE or --bodies FILE)");
    }
    if (period) sc.subsample = DirectiveBuilder("subsample", "").set("period", period).set("anchor", anchor).d;
  }
};

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path.string());
  f << text;
}

int emit(const Report& report, const Globals& g, const std::string& csv_name) {
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  const std::string csv = format_csv(report, g.timing);
  const std::string summary = format_summary(report, g.timing);
  std::cout << (g.format == "summary" ? summary : csv);
  if (!g.out.empty()) {
    std::filesystem::create_directories(g.out);
    write_file(std::filesystem::path(g.out) / csv_name, csv);
    write_file(std::filesystem::path(g.out) / (std::filesystem::path(csv_name).stem().string() + ".summary.txt"), summary);
  }
  return report.violation ? 1 : 0;
}

int run(const Scenario& sc, const Globals& g) {
  RunOptions opt;
  opt.seed = g.seed;
  opt.workers = g.workers;
  return emit(run_scenario(sc, opt), g, sc.output.value_or("report.csv"));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and sampled verification of Helly-type properties of hypergraph chains"};
  app.set_help_flag("--help", "print this help message and exit");
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "seed overriding every scenario seed");
  app.add_option("--workers", g.workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "directory for report files");
  app.add_option("--format", g.format, "stdout format")->check(CLI::IsMember({"csv", "summary"}));
  app.add_flag("--timing", g.timing, "add a wall_time_s column");

  Scenario sc;
  ChainFlags chain;
  std::optional<std::string> level, set, k, h, alpha, threshold, epsilon, t, c, i;
  std::optional<std::uint64_t> samples_opt, budget;
  std::optional<int> max_size;
  std::string universe = "disjoint";
  std::string kind;
  bool no_enforce = false;

  auto* validate = app.add_subcommand("validate", "check the chain axioms");
  chain.attach(validate, true);
  std::optional<std::uint64_t> probe_samples;
  validate->add_option("--probes", probe_samples, "sampled (S, level) probes for implicit chains");

  auto* helly = app.add_subcommand("verify-helly", "verify a Helly number");
  chain.attach(helly);
  helly->add_option("--h", h, "Helly number")->required();
  helly->add_option("--level", level, "single level (default: every level)");

  auto* min_helly = app.add_subcommand("min-helly", "smallest Helly number the chain satisfies");
  chain.attach(min_helly);
  min_helly->add_option("--level", level, "single level (default: every level)");

  auto* colorful = app.add_subcommand("verify-colorful", "verify a Colorful Helly number at one level");
  chain.attach(colorful);
  colorful->add_option("--k", k, "number of classes")->required();
  colorful->add_option("--level", level, "level");
  colorful->add_option("--universe", universe, "disjoint or any")->check(CLI::IsMember({"disjoint", "any"}));
  colorful->add_option("--max-size", max_size, "largest class size (0 = unlimited)");
  colorful->add_option("--budget", budget, "tuple budget (0 = unlimited)");

  auto* fractional = app.add_subcommand("verify-fractional", "(alpha, beta) profile of a set");
  chain.attach(fractional);
  fractional->add_option("--k", k, "subset size")->required();
  fractional->add_option("--level", level, "level");
  fractional->add_option("--set", set, "vertex set such as {0,1,2} (default: all)");

  auto* lemma = app.add_subcommand("lemma-check", "check a counting lemma instance");
  chain.attach(lemma);
  lemma->add_option("kind", kind, "31a, 31b or 32")->required()->check(CLI::IsMember({"31a", "31b", "32"}));
  lemma->add_option("--level", level, "level");
  lemma->add_option("--k", k, "k")->required();
  lemma->add_option("--h", h, "h (31b)");
  lemma->add_option("--set", set, "vertex set (default: all)");
  lemma->add_option("--i", i, "family index (32, default k)");
  lemma->add_option("--t", t, "level of the step (32, default --level)");
  lemma->add_option("--c", c, "density constant (32)");
  lemma->add_flag("--no-enforce", no_enforce, "report unmet hypotheses instead of failing (32)");

  auto* theorem = app.add_subcommand("theorem", "run a theorem driver");
  chain.attach(theorem);
  theorem->add_option("kind", kind, "25 or 26")->required()->check(CLI::IsMember({"25", "26"}));
  theorem->add_option("--level", level, "level");
  theorem->add_option("--k", k, "k")->required();
  theorem->add_option("--h", h, "h (26)");
  theorem->add_option("--alpha", alpha, "alpha (25)");
  theorem->add_option("--threshold", threshold, "largest-edge threshold override (25)");
  theorem->add_option("--epsilon", epsilon, "epsilon (26)");
  theorem->add_option("--set", set, "vertex set (default: all)");

  auto* volume = app.add_subcommand("volume", "volume of the intersection of bodies");
  std::string bodies_file;
  std::string vol_backend = "exact";
  volume->add_option("bodies-file", bodies_file, "bodies file")->required();
  volume->add_option("--set", set, "body indices (default: all)");
  volume->add_option("--backend", vol_backend, "exact or mc")->check(CLI::IsMember({"exact", "mc"}));
  volume->add_option("--samples", samples_opt, "Monte Carlo samples");

  auto* gen = app.add_subcommand("gen", "print generated bodies or chains");
  gen->require_subcommand(1);
  std::optional<int> count, dim, grid, vertices, gen_n, edges;
  std::optional<std::string> span, min_width, max_width, density, gen_window;
  auto* gen_boxes = gen->add_subcommand("boxes", "random grid boxes");
  gen_boxes->add_option("--count", count)->required();
  gen_boxes->add_option("--dim", dim);
  gen_boxes->add_option("--grid", grid);
  gen_boxes->add_option("--span", span);
  gen_boxes->add_option("--min-width", min_width);
  gen_boxes->add_option("--max-width", max_width);
  auto* gen_polygons = gen->add_subcommand("polygons", "random convex grid polygons");
  gen_polygons->add_option("--count", count)->required();
  gen_polygons->add_option("--vertices", vertices);
  gen_polygons->add_option("--grid", grid);
  gen_polygons->add_option("--span", span);
  auto* gen_chain = gen->add_subcommand("chain", "random explicit chain");
  gen_chain->add_option("--n", gen_n);
  gen_chain->add_option("--window", gen_window);
  gen_chain->add_option("--density", density, "one value or a comma list per level");
  gen_chain->add_option("--edges", edges, "random sets per level (0 = n)");

  auto* search = app.add_subcommand("search-counterexample", "randomized search for Colorful or Fractional Helly failures");
  std::optional<std::string> property, s_d, target, v_list, trials, s_n, shape, s_window, s_backend;
  bool planted = false;
  search->add_option("--property", property, "colorful or fractional");
  search->add_option("--d", s_d, "dimension");
  search->add_option("--target", target, "target number (default 2d)");
  search->add_option("--v", v_list, "candidate v list, e.g. 1/2,1/3");
  search->add_option("--trials", trials, "trial budget");
  search->add_option("--n", s_n, "bodies per instance");
  search->add_option("--shape", shape, "intervals, boxes or polygons");
  search->add_option("--window", s_window, "level window lo:hi");
  search->add_option("--universe", universe, "disjoint or any")->check(CLI::IsMember({"disjoint", "any"}));
  search->add_option("--max-size", max_size, "largest class size");
  search->add_option("--budget", budget, "tuple budget per check");
  search->add_option("--backend", s_backend, "exact or mc");
  search->add_option("--samples", samples_opt, "Monte Carlo samples");
  search->add_flag("--planted", planted, "search planted synthetic chains instead");

  auto* run_cmd = app.add_subcommand("run", "run a scenario file");
  std::string scenario_path;
  run_cmd->add_option("scenario", scenario_path, "scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const std::uint64_t seed = g.seed.value_or(0);
    auto chain_op = [&](const std::string& op) {
      chain.fill(sc);
      DirectiveBuilder d("op", op);
      d.set("level", level).set("set", set).set("k", k).set("h", h);
      return d;
    };
    if (*validate) {
      sc.ops.push_back(chain_op("validate").set("samples", probe_samples).d);
    } else if (*helly) {
      sc.ops.push_back(chain_op("verify-helly").d);
    } else if (*min_helly) {
      sc.ops.push_back(chain_op("min-helly").d);
    } else if (*colorful) {
      sc.ops.push_back(chain_op("verify-colorful").put("universe", universe).set("max-size", max_size).set("budget", budget).d);
    } else if (*fractional) {
      sc.ops.push_back(chain_op("verify-fractional").d);
    } else if (*lemma) {
      auto d = chain_op("lemma-check").put("kind", kind).set("i", i).set("t", t).set("c", c);
      if (no_enforce) d.put("enforce", "false");
      sc.ops.push_back(d.d);
    } else if (*theorem) {
      auto d = chain_op(kind == "25" ? "theorem25" : "theorem26");
      d.set("alpha", alpha).set("threshold", threshold).set("epsilon", epsilon);
      sc.ops.push_back(d.d);
    } else if (*volume) {
      sc.bodies = DirectiveBuilder("bodies", "").put("file", bodies_file).d;
      sc.bodies->positional.clear();
      sc.ops.push_back(DirectiveBuilder("op", "volume").set("set", set).put("backend", vol_backend).set("samples", samples_opt).d);
    } else if (*search) {
      DirectiveBuilder d("op", "search-counterexample");
      d.set("property", property).set("d", s_d).set("target", target).set("v", v_list).set("trials", trials);
      d.set("n", s_n).set("shape", shape).set("window", s_window).set("backend", s_backend).set("samples", samples_opt);
      d.put("universe", universe).set("max-size", max_size).set("budget", budget);
      if (planted) d.put("planted", "true");
      sc.ops.push_back(d.d);
    } else if (*run_cmd) {
      return run(load_scenario(scenario_path), g);
    } else if (*gen) {
      std::string text;
      if (*gen_chain) {
        SyntheticChainSpec spec;
        spec.n = gen_n.value_or(spec.n);
        if (gen_window) {
          auto colon = gen_window->find(':');
          if (colon == std::string::npos) throw InputError("window must be lo:hi");
          spec.window = {std::stoi(gen_window->substr(0, colon)), std::stoi(gen_window->substr(colon + 1))};
        }
        if (density) {
          spec.density.clear();
          std::istringstream in(*density);
          for (std::string tok; std::getline(in, tok, ',');) spec.density.push_back(parse_rational(tok).get_d());
        }
        spec.edges_per_level = edges.value_or(0);
        spec.seed = mix_seed(seed, 2);
        text = format_explicit_chain(random_chain(spec));
      } else {
        DirectiveBuilder d("bodies", *gen_boxes ? "random-boxes" : "random-polygons");
        d.set("count", count).set("dim", dim).set("grid", grid).set("span", span);
        d.set("min-width", min_width).set("max-width", max_width).set("vertices", vertices);
        const std::vector<Body> bodies = bodies_from(d.d, {}, seed);
        text = format_bodies(bodies);
      }
      std::cout << text;
      if (!g.out.empty()) {
        std::filesystem::create_directories(g.out);
        write_file(std::filesystem::path(g.out) / (*gen_chain ? "chain.txt" : "bodies.txt"), text);
      }
      return 0;
    }
    sc.seed = seed;
    return run(sc, g);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const UnsupportedError& e) {
    std::cerr << "unsupported: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
