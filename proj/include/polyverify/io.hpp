#pragma once

// JSON formats:
//   polytope     {"dim": n, "constraints": [{"w": [...], "c": r}, ...]}   (w·x + c <= 0)
//   arrangement  {"dim": n, "functionals": [{"w": [...], "c": r}, ...]}
//   relu network {"kind": "relu", "layers": [{"W": [[...]], "b": [...], "nonlinear": bool}, ...]}
//   tll network  {"kind": "tll", "n", "m", "N", "M",
//                 "components": [{"W_ell": [[...]], "b_ell": [...], "selectors": [[1-based], ...]}]}
//   problem      {"network": ..., "input_polytope": ..., "output_polytope": ...}

#include "polyverify/arrangement.hpp"
#include "polyverify/verifier.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace polyverify::io {

using nlohmann::json;

/// Reads and parses a JSON file; ParseError carries file:line:column.
json load_json_file(const std::filesystem::path& path);
json parse_json_text(const std::string& text, const std::string& origin = "<string>");

Polytope polytope_from_json(const json& j, const std::string& where = "polytope");
json to_json(const Polytope& p);

struct ArrangementSpec {
    std::size_t dim = 0;
    std::vector<LinearFunctional> functionals;
};
ArrangementSpec arrangement_from_json(const json& j, const std::string& where = "arrangement");
json to_json(const ArrangementSpec& a);

Network network_from_json(const json& j, const std::string& where = "network");
json to_json(const ReluNetwork& net);
json to_json(const TllNetwork& net);
json to_json(const Network& net);

VerificationProblem problem_from_json(const json& j);
json to_json(const VerificationProblem& p);

json to_json(const Verdict& v);
json to_json(const Tolerances& t);

}  // namespace polyverify::io
