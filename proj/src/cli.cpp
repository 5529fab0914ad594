#include "tropls/io.hpp"

#include <CLI11.hpp>
#include <boost/crc.hpp>

#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>

namespace tropls::io {

namespace {

// Command-line words and the bytes of every file read, folded into the report digest.
class Inputs {
 public:
  Json file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path + ": cannot open");
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    crc_.process_bytes(bytes.data(), bytes.size());
    try {
      return Json::parse(bytes);
    } catch (const Json::parse_error& e) {
      throw InputError(path + ": " + e.what());
    }
  }
  void text(const std::string& s) { crc_.process_bytes(s.data(), s.size() + 1); }
  std::string digest() const {
    std::ostringstream out;
    out << "crc32:" << std::hex << std::setw(8) << std::setfill('0') << crc_.checksum();
    return out.str();
  }

 private:
  boost::crc_32_type crc_;
};

struct Outcome {
  Json results;
  bool verdict = true;
  Json certification = Json::object();
  std::string dot;
};

std::optional<mpz_class> denominator_flag(long n) {
  if (n == 0) return std::nullopt;
  if (n < 0) throw InputError("--denominator must be positive");
  return mpz_class(n);
}

Json tls_json(const TlsReport& r) {
  return {{"r_ind", r.r_ind},
          {"r_bn", r.r_bn.rank},
          {"r_bn_at_double", r.r_bn.rank_at_double >= 0 ? Json(r.r_bn.rank_at_double) : Json(nullptr)},
          {"stable", r.r_bn.stable()},
          {"is_tls", r.is_tls}};
}

Json certification(const mpz_class& n) { return {{"denominator", n.get_str()}, {"max_candidates", max_candidates()}}; }

Json report_json(const ScenarioReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    Json x = {{"name", c.name}, {"passed", c.passed}};
    if (!c.detail.empty()) x["detail"] = c.detail;
    checks.push_back(x);
  }
  Json numbers = Json::object();
  for (const auto& [k, v] : r.numbers) numbers[k] = v;
  return {{"scenario", r.scenario}, {"passed", r.passed()}, {"checks", checks}, {"numbers", numbers}};
}

Json local_json(const MetricGraph& g, const LocalMatroidResult& loc) {
  Json comps = Json::array();
  for (const auto& c : loc.components) comps.push_back(to_json(g, c.sample(g)));
  Json flats = Json::array();
  for (ElementSet f : loc.flats) flats.push_back(elements(f));
  Json out = {{"component_samples", comps}, {"flats", flats}, {"loopless", loc.loopless}};
  if (loc.ok()) {
    out["matroid"] = to_json(*loc.matroid);
    Json prov = Json::array();
    for (const auto& [h, from] : loc.provenance) prov.push_back({{"hyperplane", elements(h)}, {"generators", from}});
    out["provenance"] = prov;
  } else {
    out["defect"] = loc.defect;
  }
  return out;
}

Matroid named_matroid(const std::string& name) {
  if (name == "u34") return Matroid::uniform(3, 4);
  if (name == "fano") return fano();
  if (name == "non-fano") return non_fano();
  if (name == "vamos") return vamos();
  if (name == "vamos-relaxed") return vamos_relaxed();
  throw InputError("unknown matroid name \"" + name + "\" (u34, fano, non-fano, vamos, vamos-relaxed)");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tropical linear series toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string dot_file;
  bool timing = false;
  app.add_option("--dot", dot_file, "Write a DOT drawing to this file");
  app.add_flag("--timing", timing, "Include wall-clock time in the report");

  Inputs inputs;
  std::function<Outcome()> action;
  std::string command;

  // Shared option storage; each subcommand binds what it needs.
  std::string graph_f, divisor_f, gens_f, matroid_f, adjoint_f, function_f, at, named, q1_f, q2_f, name;
  std::string l1 = "5", l2 = "4", l3 = "3", x = "3", length, circumference = "1";
  long denominator = 0;
  std::size_t cap = kDefaultGeneratorCap;
  unsigned seed = 1;
  int samples = 12;

  auto graph = [&] { return graph_from_json(inputs.file(graph_f), "graph"); };
  auto matroid = [&](const std::string& f) { return matroid_from_json(inputs.file(f), "matroid"); };

  auto* rank_cmd = app.add_subcommand("rank", "Baker-Norine rank of a divisor");
  rank_cmd->add_option("--graph", graph_f)->required();
  rank_cmd->add_option("--divisor", divisor_f)->required();
  rank_cmd->add_option("--denominator", denominator);
  rank_cmd->callback([&] {
    command = "rank";
    action = [&] {
      auto g = graph();
      Divisor d = divisor_from_json(*g, inputs.file(divisor_f), "divisor");
      auto r = rank(g, d, denominator_flag(denominator));
      Outcome o{{{"rank", r.rank}}, true, certification(r.denominator), graph_dot(*g)};
      return o;
    };
  });

  auto* reduce_cmd = app.add_subcommand("reduce", "Reduced form of a divisor at a point");
  reduce_cmd->add_option("--graph", graph_f)->required();
  reduce_cmd->add_option("--divisor", divisor_f)->required();
  reduce_cmd->add_option("--at", at, "vertex name, edge@offset, or point JSON")->required();
  reduce_cmd->callback([&] {
    command = "reduce";
    action = [&] {
      auto g = graph();
      Divisor d = divisor_from_json(*g, inputs.file(divisor_f), "divisor");
      Point q = point_from_text(*g, at);
      auto red = reduce(g, d, q);
      Outcome o{{{"reduced", to_json(*g, red.divisor)}, {"witness", to_json(red.witness)}}, true, Json::object(), graph_dot(*g)};
      return o;
    };
  });

  auto module_options = [&](CLI::App* c) {
    c->add_option("--graph", graph_f)->required();
    c->add_option("--divisor", divisor_f)->required();
    c->add_option("--generators", gens_f)->required();
    c->add_option("--cap", cap, "Generator cap");
  };
  auto load_module = [&] {
    auto g = graph();
    Divisor d = divisor_from_json(*g, inputs.file(divisor_f), "divisor");
    return TropSubmodule(d, functions_from_json(g, inputs.file(gens_f), "generators"), cap);
  };

  auto* tls_cmd = app.add_subcommand("tls-check", "Compare independence and Baker-Norine ranks");
  module_options(tls_cmd);
  tls_cmd->add_option("--denominator", denominator);
  tls_cmd->callback([&] {
    command = "tls-check";
    action = [&] {
      TropSubmodule s = load_module();
      auto rep = is_tls(s, denominator_flag(denominator));
      auto complex = cells(s);
      Json results = tls_json(rep);
      results["maximal_cell_dimensions"] = complex.maximal_dimensions();
      return Outcome{results, rep.is_tls, certification(rep.r_bn.denominator), cells_dot(complex)};
    };
  });

  auto* local_cmd = app.add_subcommand("local-matroid", "Local matroid at the base divisor");
  module_options(local_cmd);
  local_cmd->callback([&] {
    command = "local-matroid";
    action = [&] {
      TropSubmodule s = load_module();
      auto loc = local_matroid(s);
      Outcome o{local_json(*s.graph(), loc), loc.ok(), Json::object(), loc.ok() ? lattice_dot(*loc.matroid) : ""};
      return o;
    };
  });

  auto* cart_cmd = app.add_subcommand("cartwright", "Levi-graph divisor of a simple rank-3 matroid");
  cart_cmd->add_option("--matroid", matroid_f)->required();
  cart_cmd->add_option("--adjoint", adjoint_f, "Adjoint to build the series from (default: the free adjoint)");
  cart_cmd->callback([&] {
    command = "cartwright";
    action = [&] {
      Matroid m = matroid(matroid_f);
      LeviGraph levi = cartwright(m);
      auto r = rank(levi.graph, levi.divisor, mpz_class(1));
      Matroid w = adjoint_f.empty() ? free_adjoint(m) : matroid(adjoint_f);
      auto cs = cartwright_series_from_adjoint(m, w);
      TropSubmodule s(levi.divisor, cs.generators, cs.generators.size());
      auto tls = is_tls(s);
      bool nondeg = nondegenerate(levi.divisor, s).nondegenerate;
      auto local = local_matroid_on_lines(levi, s);
      bool matches = local && *local == w;
      Json results = {{"graph", to_json(*levi.graph)},
                      {"divisor", to_json(*levi.graph, levi.divisor)},
                      {"rank", r.rank},
                      {"adjoint", to_json(w)},
                      {"series", tls_json(tls)},
                      {"nondegenerate", nondeg},
                      {"local_matroid_is_adjoint", matches},
                      {"fano_restriction", has_fano_restriction(m)}};
      bool ok = r.rank == 2 && tls.is_tls && tls.r_bn.rank == 2 && nondeg && matches;
      return Outcome{results, ok, certification(r.denominator), levi_dot(levi)};
    };
  });

  auto* adj_cmd = app.add_subcommand("adjoint", "Free adjoint, or check a candidate adjoint");
  adj_cmd->add_option("--matroid", matroid_f)->required();
  adj_cmd->add_option("--candidate", adjoint_f);
  adj_cmd->callback([&] {
    command = "adjoint";
    action = [&] {
      Matroid m = matroid(matroid_f);
      if (!adjoint_f.empty()) {
        Matroid w = matroid(adjoint_f);
        bool ok = is_adjoint(w, m);
        return Outcome{{{"is_adjoint", ok}}, ok, Json::object(), lattice_dot(w)};
      }
      Matroid w = free_adjoint(m);
      return Outcome{{{"adjoint", to_json(w)}}, true, Json::object(), lattice_dot(w)};
    };
  });

  auto* muw_cmd = app.add_subcommand("canonical-realizable", "Realizability test for a function in R(K)");
  muw_cmd->add_option("--graph", graph_f)->required();
  muw_cmd->add_option("--function", function_f)->required();
  muw_cmd->callback([&] {
    command = "canonical-realizable";
    action = [&] {
      auto g = graph();
      PLFunction phi = function_from_json(g, inputs.file(function_f), "function");
      auto rep = muw_realizable(phi);
      Json inc = Json::array(), flat = Json::array();
      for (const auto& p : rep.inconvenient) inc.push_back({{"point", to_json(*g, p.point)}, {"on_cycle", p.on_cycle}});
      for (const auto& f : rep.horizontal)
        flat.push_back({{"edge", g->edge(f.edge).id}, {"from", to_json(f.lo)}, {"to", to_json(f.hi)}, {"on_cycle", f.on_cycle}});
      Rational level = rep.inconvenient.empty() ? phi.min_value() : phi.eval(rep.inconvenient.front().point);
      return Outcome{{{"realizable", rep.realizable}, {"inconvenient", inc}, {"horizontal", flat}},
                     rep.realizable,
                     Json::object(),
                     sublevel_dot(phi, level)};
    };
  });

  auto* interval_cmd = app.add_subcommand("interval-series", "Image of Trop(M) in R(dv) on an interval");
  interval_cmd->add_option("--matroid", matroid_f)->required();
  interval_cmd->add_option("--length", length, "Interval length (default n)");
  interval_cmd->add_option("--denominator", denominator);
  interval_cmd->callback([&] {
    command = "interval-series";
    action = [&] {
      Matroid m = matroid(matroid_f);
      if (m.size() == 0) throw InputError("matroid: the ground set is empty");
      auto p = interval_phi_prime(static_cast<int>(m.size()) - 1,
                                  length.empty() ? std::nullopt : std::optional<Rational>(parse_rational(length)));
      auto v = ValuatedMatroid::trop(m);
      TropSubmodule s = p.image(v, std::max(kDefaultGeneratorCap, v.generators().size()));
      auto tls = is_tls(s, denominator_flag(denominator), image_rank_bound(v));
      auto loc = local_matroid(s.translated(p.origin()));
      bool matches = loc.ok() && reversed(*loc.matroid) == m;
      Json results = {{"graph", to_json(*p.graph)},
                      {"divisor", to_json(*p.graph, p.base)},
                      {"generators", Json::array()},
                      {"series", tls_json(tls)},
                      {"local_matroid_matches", matches}};
      for (const auto& f : s.generators()) results["generators"].push_back(to_json(f));
      bool ok = tls.is_tls && tls.r_bn.rank == m.rank() - 1 && matches;
      return Outcome{results, ok, certification(tls.r_bn.denominator), graph_dot(*p.graph)};
    };
  });

  auto* loop_cmd = app.add_subcommand("loop-series", "Image of Trop(M) in R(dv) on a loop");
  loop_cmd->add_option("--matroid", matroid_f)->required();
  loop_cmd->add_option("--circumference", circumference);
  loop_cmd->add_option("--denominator", denominator);
  loop_cmd->callback([&] {
    command = "loop-series";
    action = [&] {
      Matroid m = matroid(matroid_f);
      auto p = loop_phi(static_cast<int>(m.size()), parse_rational(circumference));
      auto v = ValuatedMatroid::trop(m);
      TropSubmodule s = p.image(v, std::max(kDefaultGeneratorCap, v.generators().size()));
      auto tls = is_tls(s, denominator_flag(denominator), image_rank_bound(v));
      Json results = {{"graph", to_json(*p.graph)},
                      {"divisor", to_json(*p.graph, p.base)},
                      {"generators", Json::array()},
                      {"series", tls_json(tls)}};
      for (const auto& f : s.generators()) results["generators"].push_back(to_json(f));
      bool ok = tls.is_tls && tls.r_bn.rank == m.rank() - 1;
      return Outcome{results, ok, certification(tls.r_bn.denominator), graph_dot(*p.graph)};
    };
  });

  auto* ex_cmd = app.add_subcommand("example", "Run a scripted example");
  ex_cmd->add_option("name", name, "barbell, luo, loop-of-loops, vamos, vamos-relaxed, hyperelliptic-chain, cartwright")
      ->required();
  ex_cmd->add_option("--seed", seed);
  ex_cmd->add_option("--samples", samples);
  ex_cmd->add_option("--l1", l1);
  ex_cmd->add_option("--l2", l2);
  ex_cmd->add_option("--l3", l3);
  ex_cmd->add_option("--x", x);
  ex_cmd->add_option("--q1", q1_f);
  ex_cmd->add_option("--q2", q2_f);
  ex_cmd->add_option("--matroid", matroid_f);
  ex_cmd->add_option("--named", named, "u34, fano, non-fano");
  ex_cmd->callback([&] {
    command = "example";
    action = [&]() -> Outcome {
      ScenarioReport r;
      std::string dot;
      if (name == "barbell") {
        r = barbell_scenario(seed);
        dot = graph_dot(*barbell_graph(), name);
      } else if (name == "luo") {
        r = luo_scenario();
        dot = graph_dot(*luo_graph(), name);
      } else if (name == "loop-of-loops") {
        Rational a = parse_rational(l1), b = parse_rational(l2), c = parse_rational(l3);
        r = loop_of_loops_scenario(a, b, c, parse_rational(x));
        dot = graph_dot(*loop_of_loops_graph(a, b, c), name);
      } else if (name == "vamos") {
        r = vamos_scenario();
      } else if (name == "vamos-relaxed") {
        if (q1_f.empty() || q2_f.empty()) throw InputError("vamos-relaxed needs --q1 and --q2");
        r = vamos_relaxed_scenario(matroid(q1_f), matroid(q2_f));
      } else if (name == "hyperelliptic-chain") {
        if (samples < 2) throw InputError("--samples must be at least 2");
        r = hyperelliptic_chain_scenario(seed, samples);
        dot = graph_dot(*hyperelliptic_chain_graph(), name);
      } else if (name == "cartwright") {
        if (matroid_f.empty() == named.empty()) throw InputError("cartwright needs exactly one of --matroid and --named");
        Matroid m = named.empty() ? matroid(matroid_f) : named_matroid(named);
        r = cartwright_scenario(m);
        dot = levi_dot(cartwright(m));
      } else {
        throw InputError("unknown example \"" + name + "\"");
      }
      return Outcome{report_json(r), r.passed(), Json::object(), dot};
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 2;
  }

  try {
    auto start = std::chrono::steady_clock::now();
    for (int i = 1; i < argc; ++i) inputs.text(argv[i]);
    Outcome o = action();
    Json report = {{"schema", kSchema}, {"command", command}, {"inputs_digest", inputs.digest()}, {"results", o.results}};
    report["certification"] = o.certification;
    if (timing)
      report["wall_clock_ms"] =
          std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    out << report.dump(2) << '\n';
    if (!dot_file.empty()) {
      std::ofstream dot(dot_file);
      if (!dot) throw InputError(dot_file + ": cannot write");
      dot << (o.dot.empty() ? std::string("graph \"empty\" {}\n") : o.dot);
    }
    return o.verdict ? 0 : 1;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
  } catch (const CapExceeded& e) {
    err << "cap exceeded: " << e.what() << " (raise TROPLS_MAX_CANDIDATES)\n";
  }
  return 2;
}

}  // namespace tropls::io
