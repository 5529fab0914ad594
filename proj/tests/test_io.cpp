#include "support.hpp"

#include "tropls/io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <unistd.h>

using namespace testkit;
using namespace tropls::io;

namespace {

// Scratch directory removed at scope exit.
class Scratch {
 public:
  Scratch() {
    static int counter = 0;
    dir_ = std::filesystem::temp_directory_path() /
           ("tropls_io_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(dir_);
  }
  ~Scratch() { std::filesystem::remove_all(dir_); }
  Scratch(const Scratch&) = delete;
  Scratch& operator=(const Scratch&) = delete;

  std::string write(const std::string& name, const Json& j) const {
    auto path = (dir_ / name).string();
    std::ofstream(path) << j.dump();
    return path;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

 private:
  std::filesystem::path dir_;
};

struct Run {
  int code;
  std::string out, err;
  Json report() const { return Json::parse(out); }
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "tropls");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::size_t count_matches(const std::string& text, const std::string& pattern) {
  std::regex re(pattern);
  return static_cast<std::size_t>(std::distance(std::sregex_iterator(text.begin(), text.end(), re), std::sregex_iterator()));
}

}  // namespace

TEST(Io, RationalsAreExact) {
  EXPECT_EQ(rational_from_json(Json("3/2")), q(3, 2));
  EXPECT_EQ(rational_from_json(Json("-4/6")), q(-2, 3));
  EXPECT_EQ(rational_from_json(Json(7)), q(7));
  EXPECT_THROW(rational_from_json(Json(1.5)), InputError);
  EXPECT_THROW(rational_from_json(Json("1.5")), InputError);
  EXPECT_THROW(rational_from_json(Json("1e3")), InputError);
  EXPECT_THROW(rational_from_json(Json(true)), InputError);
  EXPECT_EQ(to_json(q(3, 2)), Json("3/2"));
  EXPECT_TRUE(ext_rational_from_json(Json("inf")).is_infinite());
}

TEST(Io, ErrorsNamePath) {
  Json g = {{"vertices", {"v"}}, {"edges", {{{"id", "c"}, {"ends", {"v", "v"}}, {"length", 0.5}}}}};
  try {
    graph_from_json(g, "graph");
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("graph/edges/0/length"), std::string::npos) << e.what();
  }
  Json bad_set = {{"n", 3}, {"bases", {{0, 5}}}};
  try {
    matroid_from_json(bad_set, "m");
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("m/bases/0/1"), std::string::npos) << e.what();
  }
}

TEST(Io, NonMatroidNamesBasisPair) {
  Json j = {{"n", 4}, {"bases", {{0, 1}, {2, 3}}}};
  try {
    matroid_from_json(j, "m");
    FAIL();
  } catch (const InputError& e) {
    std::string what = e.what();
    EXPECT_NE(what.find("{0,1}"), std::string::npos) << what;
    EXPECT_NE(what.find("{2,3}"), std::string::npos) << what;
  }
}

TEST(Io, MatroidPresentations) {
  Json lines = {{"n", 7}, {"rank", 3}, {"rank2_flats", {{0, 1, 2}, {0, 3, 4}, {0, 5, 6}, {1, 3, 5}, {1, 4, 6}, {2, 3, 6}, {2, 4, 5}}}};
  EXPECT_TRUE(matroid_iso(matroid_from_json(lines), fano()).has_value());
  Json circuits = {{"n", 8},
                   {"rank", 4},
                   {"nonspanning_circuits", {{0, 1, 2, 3}, {0, 3, 4, 5}, {1, 2, 4, 5}, {0, 3, 6, 7}, {1, 2, 6, 7}}}};
  EXPECT_TRUE(matroid_from_json(circuits) == vamos());
  for (const auto& m : loopless_matroids(4)) EXPECT_TRUE(matroid_from_json(to_json(m)) == m);
}

TEST(Io, RoundTrips) {
  std::mt19937_64 rng(seed());
  for (int trial = 0; trial < 20; ++trial) {
    GraphPtr g = random_graph(rng, 5, 3);
    GraphPtr back = graph_from_json(to_json(*g));
    EXPECT_TRUE(*back == *g);

    auto pts = lattice_points(*g, 2);
    std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
    Divisor d;
    for (int k = 0; k < 4; ++k) d.add(pts[pick(rng)], k % 2 ? -1 : 2);
    EXPECT_EQ(divisor_from_json(*g, to_json(*g, d)), d);
    for (const auto& p : pts) EXPECT_EQ(point_from_json(*g, to_json(*g, p)), p);

    // Reduction witnesses have interior breakpoints, which exercises the refinement format.
    PLFunction f = reduce(g, d + point_divisor(pts[0], 3), pts[pick(rng)]).witness;
    EXPECT_EQ(function_from_json(g, to_json(f)), f);
  }
  TropVector v{ExtRational(q(1, 2)), ExtRational::infinity(), ExtRational(0)};
  EXPECT_EQ(trop_vector_from_json(to_json(v)), v);
}

TEST(Io, FunctionWithoutRefinement) {
  auto g = interval(2);
  Json j = {{"values", {{"v", "0"}, {"w", "4"}}}};
  PLFunction f = function_from_json(g, j);
  EXPECT_EQ(f.eval(at(*g, "e", 1)), 2);
  Json missing = {{"values", {{"v", "0"}}}};
  EXPECT_THROW(function_from_json(g, missing), InputError);
  // Pieces that do not add up to the edge.
  Json short_piece = {{"refinement",
                       {{"vertices", {"v", "w", "m"}},
                        {"edges", {{{"id", "e.0"}, {"ends", {"v", "m"}}, {"length", "1/2"}},
                                   {{"id", "e.1"}, {"ends", {"m", "w"}}, {"length", "1"}}}}}},
                      {"values", {{"v", "0"}, {"m", "1/2"}, {"w", "3/2"}}}};
  EXPECT_THROW(function_from_json(g, short_piece), InputError);
}

TEST(Io, DotEmitters) {
  std::string interval_dot = graph_dot(*interval());
  EXPECT_EQ(count_matches(interval_dot, R"(\n  "[^"]+";)"), 2u);
  EXPECT_EQ(count_matches(interval_dot, " -- "), 1u);

  std::string levi = levi_dot(cartwright(Matroid::uniform(3, 4)));
  EXPECT_EQ(count_matches(levi, R"(\[shape=)"), 10u);
  EXPECT_EQ(count_matches(levi, R"(\[shape=box\])"), 6u);
  EXPECT_EQ(count_matches(levi, " -- "), 12u);

  std::string lattice = lattice_dot(Matroid::uniform(2, 3));
  EXPECT_EQ(count_matches(lattice, R"(\n  "[^"]+";)"), 5u);
  EXPECT_EQ(count_matches(lattice, " -> "), 6u);

  auto g = barbell_graph();
  std::string sub = sublevel_dot(PLFunction::constant(g), 0);
  EXPECT_EQ(count_matches(sub, "bold"), 3u);
  // Stable across calls.
  EXPECT_EQ(levi, levi_dot(cartwright(Matroid::uniform(3, 4))));
}

TEST(Io, CliRankOfFanoDivisor) {
  Scratch dir;
  LeviGraph levi = cartwright(fano());
  auto run = cli({"rank", "--graph", dir.write("g.json", to_json(*levi.graph)), "--divisor",
                  dir.write("d.json", to_json(*levi.graph, levi.divisor))});
  ASSERT_EQ(run.code, 0) << run.err;
  Json r = run.report();
  EXPECT_EQ(r["schema"], "tropls/1");
  EXPECT_EQ(r["results"]["rank"], 2);
  EXPECT_EQ(r["certification"]["denominator"], "1");
}

TEST(Io, CliBarbellCanonicalIsNotTls) {
  Scratch dir;
  auto g = barbell_graph();
  const MetricGraph& G = *g;
  Divisor k = canonical_divisor(G);
  Json gens = Json::array();
  gens.push_back(to_json(PLFunction::constant(g)));
  for (const Point& p : {vtx(G, "v"), vtx(G, "w"), at(G, "l", 1), at(G, "r", 1)}) gens.push_back(to_json(reduce(g, k, p).witness));
  std::vector<std::string> args{"tls-check", "--graph", dir.write("g.json", to_json(G)), "--divisor",
                                dir.write("k.json", to_json(G, k)), "--generators", dir.write("f.json", gens)};
  auto run = cli(args);
  EXPECT_EQ(run.code, 1) << run.err;
  Json r = run.report()["results"];
  EXPECT_EQ(r["is_tls"], false);
  EXPECT_EQ(r["r_ind"], 3);
  EXPECT_EQ(r["r_bn"], 1);
  // Byte-identical on a second run.
  EXPECT_EQ(cli(args).out, run.out);
}

TEST(Io, CliExitCodes) {
  EXPECT_EQ(cli({"frobnicate"}).code, 2);
  EXPECT_EQ(cli({}).code, 2);
  EXPECT_EQ(cli({"rank", "--graph", "/nonexistent.json", "--divisor", "/nonexistent.json"}).code, 2);
  EXPECT_EQ(cli({"example", "luo"}).code, 0);
  EXPECT_EQ(cli({"example", "nowhere"}).code, 2);
  EXPECT_EQ(cli({"example", "loop-of-loops", "--x", "9"}).code, 2);

  Scratch dir;
  Json bad = {{"n", 4}, {"bases", {{0, 1}, {2, 3}}}};
  auto run = cli({"adjoint", "--matroid", dir.write("m.json", bad)});
  EXPECT_EQ(run.code, 2);
  EXPECT_NE(run.err.find("{0,1}"), std::string::npos);
  EXPECT_TRUE(run.out.empty());
}

TEST(Io, CliAdjointAndDot) {
  Scratch dir;
  Matroid m = Matroid::uniform(3, 4);
  std::string mf = dir.write("m.json", to_json(m));
  auto run = cli({"adjoint", "--matroid", mf, "--dot", dir.path("w.dot")});
  ASSERT_EQ(run.code, 0) << run.err;
  Matroid w = matroid_from_json(run.report()["results"]["adjoint"]);
  EXPECT_TRUE(is_adjoint(w, m));
  std::ifstream dot(dir.path("w.dot"));
  std::string text((std::istreambuf_iterator<char>(dot)), std::istreambuf_iterator<char>());
  EXPECT_NE(text.find("digraph"), std::string::npos);

  EXPECT_EQ(cli({"adjoint", "--matroid", mf, "--candidate", dir.write("w.json", to_json(w))}).code, 0);
  EXPECT_EQ(cli({"adjoint", "--matroid", mf, "--candidate", dir.write("u.json", to_json(Matroid::uniform(3, 6)))}).code, 1);
}

TEST(Io, CliSeriesCommands) {
  Scratch dir;
  std::string u23 = dir.write("u23.json", to_json(Matroid::uniform(2, 3)));
  auto interval_run = cli({"interval-series", "--matroid", u23});
  ASSERT_EQ(interval_run.code, 0) << interval_run.err;
  EXPECT_EQ(interval_run.report()["results"]["series"]["r_bn"], 1);
  EXPECT_EQ(interval_run.report()["results"]["local_matroid_matches"], true);

  auto loop_run = cli({"loop-series", "--matroid", u23, "--denominator", "6"});
  ASSERT_EQ(loop_run.code, 0) << loop_run.err;
  EXPECT_EQ(loop_run.report()["results"]["series"]["is_tls"], true);

  // Realizability of the barbell constant fails on the bridge.
  auto g = barbell_graph();
  auto muw = cli({"canonical-realizable", "--graph", dir.write("g.json", to_json(*g)), "--function",
                  dir.write("f.json", to_json(PLFunction::constant(g)))});
  EXPECT_EQ(muw.code, 1) << muw.err;
  EXPECT_EQ(muw.report()["results"]["realizable"], false);

  auto local = cli({"local-matroid", "--graph", dir.write("t.json", to_json(*theta())), "--divisor",
                    dir.write("k.json", to_json(*theta(), canonical_divisor(*theta()))), "--generators",
                    dir.write("c.json", Json::array({to_json(PLFunction::constant(theta()))}))});
  EXPECT_EQ(local.code, 0) << local.err;
  EXPECT_EQ(local.report()["results"]["matroid"]["rank"], 1);
}
