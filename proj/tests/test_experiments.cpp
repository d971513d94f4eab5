#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qhelly/experiments.hpp"

using namespace qhelly;

namespace {

const std::filesystem::path kScenarios = QHELLY_SCENARIOS;

Report run_text(const std::string& text, int workers = 1) {
  return run_scenario(parse_scenario(text, kScenarios), RunOptions{std::nullopt, workers});
}

std::string error_of(const std::string& text) {
  try {
    run_text(text);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

int cli(const std::string& args, std::string* out = nullptr) {
  const auto tmp = std::filesystem::temp_directory_path() / "qhelly_cli_test.out";
  const std::string cmd = std::string(QHELLY_CLI) + " " + args + " > " + tmp.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  if (out) {
    std::ifstream f(tmp);
    std::stringstream ss;
    ss << f.rdbuf();
    *out = ss.str();
  }
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("CSV output") {
  Report empty;
  CHECK(format_csv(empty) == "chain_id,operation,parameters,result,certificate\n");
  CHECK(format_csv(empty, true) == "chain_id,operation,parameters,result,certificate,wall_time_s\n");

  Report r;
  r.rows.push_back({"a,b", "op", "say \"hi\"", "ok", "1/9216", "detail", 0.5});
  CHECK(format_csv(r) == "chain_id,operation,parameters,result,certificate\n\"a,b\",op,\"say \"\"hi\"\"\",ok,1/9216\n");
  CHECK(format_summary(r).find("detail") != std::string::npos);
}

TEST_CASE("directive parsing") {
  auto d = parse_directive("op verify-helly h=2 level=-1", 7);
  CHECK(d.keyword == "op");
  CHECK(d.positional == std::vector<std::string>{"verify-helly"});
  CHECK(d.integer("h") == 2);
  CHECK(d.integer("level") == -1);
  CHECK(d.integer("missing", 9) == 9);
  CHECK(d.rational("x", Rational(1, 2)) == Rational(1, 2));
  CHECK_THROWS_AS(d.integer("nothing"), InputError);
  CHECK_THROWS_AS(parse_directive("op a=1 a=2", 1), InputError);
  CHECK_THROWS_AS(parse_directive("op a=1 word", 1), InputError);
  auto bad = parse_directive("op x h=two", 3);
  try {
    bad.integer("h");
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).rfind("line 3", 0) == 0);
  }
}

TEST_CASE("scenario parse errors carry line numbers") {
  CHECK_THROWS_AS(parse_scenario("", ""), InputError);
  CHECK_THROWS_AS(parse_scenario("qhelly-scenario 2\n", ""), InputError);
  CHECK_THROWS_AS(parse_scenario("seed 1\n", ""), InputError);
  CHECK(error_of("qhelly-scenario 1\nchain complete n=3\nfrobnicate\n").rfind("line 3", 0) == 0);
  CHECK(error_of("qhelly-scenario 1\nchain complete n=3 window=0:3\nop verify-colorful k=2 level=3\n").rfind("line 3", 0) == 0);
  CHECK(error_of("qhelly-scenario 1\n# comment\n\nop verify-helly h=2\n").rfind("line 4", 0) == 0);
  CHECK(error_of("qhelly-scenario 1\nchain complete n=3\nop dance\n").rfind("line 3", 0) == 0);
  CHECK(error_of("qhelly-scenario 1\nchain nerve\nop validate\n").rfind("line 2", 0) == 0);
  CHECK(error_of("qhelly-scenario 1\nchain complete n=3 window=0:3\nop theorem25 k=3 level=0 alpha=1/2\n").rfind("line 3", 0) == 0);
  CHECK(error_of("qhelly-scenario 1\nchain explicit file=data/does-not-exist.txt\n") != "");
}

TEST_CASE("complete chain scenario") {
  auto r = run_text("qhelly-scenario 1\nchain complete n=5 window=0:3\nop verify-helly h=1\n");
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].result == "ok");
  CHECK_FALSE(r.violation);
}

TEST_CASE("non-monotone explicit chain is rejected at build time") {
  auto r = run_scenario(load_scenario((kScenarios / "monotonicity_violation.txt").string()), {});
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].result == "rejected");
  CHECK(r.rows[0].certificate.find("{0,1,2}") != std::string::npos);
  CHECK(r.violation);
}

TEST_CASE("interval fractional scenario reports an (alpha, beta) table") {
  auto r = run_scenario(load_scenario((kScenarios / "intervals_fractional.txt").string()), {});
  int profiles = 0;
  for (const auto& row : r.rows)
    if (row.operation == "verify-fractional") {
      ++profiles;
      CHECK(row.result.rfind("alpha=", 0) == 0);
      CHECK(row.result.find(" beta=") != std::string::npos);
    }
  CHECK(profiles == 3);
  CHECK_FALSE(r.violation);
}

TEST_CASE("colorful verifier warns when the window is short") {
  auto r = run_text("qhelly-scenario 1\nchain complete n=4 window=0:2\nop verify-colorful k=2 level=0\n");
  CHECK(r.warnings.size() == 1);
}

TEST_CASE("search: intervals show no finding") {
  SearchSpec spec;
  spec.d = 1;
  spec.target = 2;
  spec.v = {Rational(1, 2), Rational(1, 3), Rational(9, 10)};
  spec.trials = 40;
  spec.n = 8;
  spec.window = {-1, 4};
  spec.seed = 3;
  auto r = search_counterexample(spec, 2);
  CHECK(r.findings == 0);
  CHECK(r.suspect == 0);
  REQUIRE_FALSE(r.rows.empty());
  CHECK(r.rows.back().result == "no-finding");
  CHECK(r.rows.back().parameters.find("universe=") != std::string::npos);
}

TEST_CASE("search: planted chains yield re-validated findings") {
  SearchSpec spec;
  spec.planted = true;
  spec.target = 2;
  spec.trials = 5;
  spec.n = 5;
  spec.window = {0, 3};
  auto r = search_counterexample(spec);
  CHECK(r.findings == 5);
  for (std::size_t i = 0; i + 1 < r.rows.size(); ++i) {
    CHECK(r.rows[i].result == "finding");
    CHECK(r.rows[i].certificate.find("colorful-violation") == 0);
  }
}

TEST_CASE("search: empty budget gives an empty report") {
  SearchSpec spec;
  spec.d = 2;
  spec.target = 4;
  spec.trials = 0;
  spec.shape = SearchSpec::Shape::Boxes;
  auto r = search_counterexample(spec);
  CHECK(r.rows.empty());
  Report rep;
  CHECK(format_csv(rep) == "chain_id,operation,parameters,result,certificate\n");
}

TEST_CASE("search: unsupported and invalid requests") {
  SearchSpec spec;
  spec.d = 3;
  spec.shape = SearchSpec::Shape::Boxes;
  CHECK_THROWS_AS(search_counterexample(spec), UnsupportedError);
  SearchSpec bad_v;
  bad_v.v = {Rational(1)};
  CHECK_THROWS_AS(search_counterexample(bad_v), InputError);
}

TEST_CASE("search: Monte Carlo findings are suspects only") {
  SearchSpec spec;
  spec.d = 2;
  spec.target = 2;
  spec.shape = SearchSpec::Shape::Polygons;
  spec.trials = 6;
  spec.n = 5;
  spec.backend.kind = VolumeBackend::Kind::MonteCarlo;
  spec.backend.samples = 4000;
  auto r = search_counterexample(spec);
  CHECK(r.findings == 0);
  for (const auto& row : r.rows) CHECK(row.result != "finding");
}

TEST_CASE("describe bodies") {
  CHECK(describe_body(Box({{0, 1}, {Rational(1, 2), 2}})) == "[0/1,1/1]x[1/2,2/1]");
  CHECK(describe_body(ConvexPolygon({{0, 0}, {1, 0}, {0, 1}})) == "(0/1,0/1)(1/1,0/1)(0/1,1/1)");
}

TEST_CASE("reports are identical across reruns and worker counts") {
  for (const auto& entry : std::filesystem::directory_iterator(kScenarios)) {
    if (entry.path().extension() != ".txt") continue;
    CAPTURE(entry.path().string());
    const Scenario sc = load_scenario(entry.path().string());
    const auto a = format_csv(run_scenario(sc, {std::nullopt, 1}));
    const auto b = format_csv(run_scenario(sc, {std::nullopt, 1}));
    const auto c = format_csv(run_scenario(sc, {std::nullopt, 4}));
    CHECK(a == b);
    CHECK(a == c);
  }
}

TEST_CASE("seed override changes random scenarios") {
  const Scenario sc = load_scenario((kScenarios / "intervals_fractional.txt").string());
  const auto a = format_csv(run_scenario(sc, {std::nullopt, 1}));
  const auto b = format_csv(run_scenario(sc, {std::uint64_t{999}, 1}));
  CHECK(a != b);
}

TEST_CASE("command line exit codes") {
  const std::string dir = kScenarios.string();
  std::string out;
  CHECK(cli("run " + dir + "/complete_helly.txt", &out) == 0);
  CHECK(out.rfind("chain_id,operation,parameters,result,certificate\n", 0) == 0);
  CHECK(cli("run " + dir + "/monotonicity_violation.txt") == 1);
  CHECK(cli("run " + dir + "/theorem25_planted.txt") == 1);
  CHECK(cli("run " + dir + "/search_planted.txt") == 0);
  CHECK(cli("run " + dir + "/search_empty_d2.txt", &out) == 0);
  CHECK(out == "chain_id,operation,parameters,result,certificate\n");
  CHECK(cli("run " + dir + "/does-not-exist.txt") == 2);
  CHECK(cli("frobnicate") == 2);
  CHECK(cli("validate " + dir + "/data/lemma_chain.txt") == 0);
  CHECK(cli("validate " + dir + "/data/nonmonotone_chain.txt") == 1);
  CHECK(cli("verify-helly --chain " + dir + "/data/lemma_chain.txt --h 2") == 0);
  CHECK(cli("verify-helly --chain " + dir + "/data/lemma_chain.txt --h 1") == 1);
  CHECK(cli("--timing run " + dir + "/complete_helly.txt", &out) == 0);
  CHECK(out.rfind("chain_id,operation,parameters,result,certificate,wall_time_s\n", 0) == 0);
  CHECK(cli("search-counterexample --d 2 --target 4 --trials 0 --shape boxes", &out) == 0);
  CHECK(out == "chain_id,operation,parameters,result,certificate\n");
  CHECK(cli("search-counterexample --d 3 --shape boxes") == 2);
}
