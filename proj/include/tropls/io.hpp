#pragma once

#include "tropls/constructions.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace tropls::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "tropls/1";

// Errors carry the JSON path of the offending value, e.g. "/edges/2/length".
Rational rational_from_json(const Json& j, const std::string& path = "");
Json to_json(const Rational& q);
ExtRational ext_rational_from_json(const Json& j, const std::string& path = "");
Json to_json(const ExtRational& q);

GraphPtr graph_from_json(const Json& j, const std::string& path = "");
Json to_json(const MetricGraph& g);

Point point_from_json(const MetricGraph& g, const Json& j, const std::string& path = "");
Json to_json(const MetricGraph& g, const Point& p);
// Command-line shorthand: a vertex name, "edge@offset", or inline point JSON.
Point point_from_text(const MetricGraph& g, const std::string& text);

Divisor divisor_from_json(const MetricGraph& g, const Json& j, const std::string& path = "");
Json to_json(const MetricGraph& g, const Divisor& d);

// The refinement subdivides the graph: an edge keeps its id when whole, and its pieces are
// named "<id>.0", "<id>.1", ... running from the tail. Without a refinement the function is linear on
// every edge and "values" lists the vertices only.
PLFunction function_from_json(const GraphPtr& g, const Json& j, const std::string& path = "");
Json to_json(const PLFunction& f);
std::vector<PLFunction> functions_from_json(const GraphPtr& g, const Json& j, const std::string& path = "");

// {"n", "rank", and one of "bases", "nonspanning_circuits", "rank2_flats"}.
Matroid matroid_from_json(const Json& j, const std::string& path = "");
Json to_json(const Matroid& m);

Json to_json(const TropVector& v);
TropVector trop_vector_from_json(const Json& j, const std::string& path = "");

Json read_json_file(const std::string& file);

std::string graph_dot(const MetricGraph& g, const std::string& name = "graph");
// Points and lines drawn as two node shapes.
std::string levi_dot(const LeviGraph& levi);
// Edges of the refinement where phi <= level are drawn bold.
std::string sublevel_dot(const PLFunction& phi, const Rational& level);
// Regions as nodes labelled with dimension and divisor type, joined when adjacent.
std::string cells_dot(const CellComplex& c);
// Hasse diagram of the flats.
std::string lattice_dot(const Matroid& m);

// Runs the command line; returns the exit code (0 verdict true, 1 verdict false, 2 bad input).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tropls::io
