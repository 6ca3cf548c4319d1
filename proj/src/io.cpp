#include "polyverify/io.hpp"

#include "polyverify/errors.hpp"

#include <fstream>
#include <sstream>

namespace polyverify::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ParseError(where + ": " + what);
}

const json& field(const json& j, const std::string& key, const std::string& where) {
    if (!j.is_object()) fail(where, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(where, "missing field '" + key + "'");
    return *it;
}

double number(const json& j, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number");
    return j.get<double>();
}

std::size_t count(const json& j, const std::string& where) {
    if (!j.is_number_integer() || j.get<long long>() < 0) fail(where, "expected a non-negative integer");
    return j.get<std::size_t>();
}

Vector vector_from(const json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array of numbers");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = number(j[i], where + "[" + std::to_string(i) + "]");
    }
    return v;
}

Matrix matrix_from(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) fail(where, "expected a non-empty array of rows");
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < j.size(); ++r) {
        const std::string at = where + "[" + std::to_string(r) + "]";
        const Vector row = vector_from(j[r], at);
        if (static_cast<std::size_t>(row.size()) != cols) {
            fail(at, "row has " + std::to_string(row.size()) + " entries, expected " + std::to_string(cols));
        }
        m.row(static_cast<Eigen::Index>(r)) = row.transpose();
    }
    return m;
}

json vector_json(const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

json matrix_json(const Matrix& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(vector_json(m.row(r).transpose()));
    return out;
}

std::vector<LinearFunctional> functionals_from(const json& j, std::size_t dim, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array");
    std::vector<LinearFunctional> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string at = where + "[" + std::to_string(i) + "]";
        Vector w = vector_from(field(j[i], "w", at), at + ".w");
        if (static_cast<std::size_t>(w.size()) != dim) {
            fail(at + ".w", "has " + std::to_string(w.size()) + " entries, expected dim " + std::to_string(dim));
        }
        const double c = number(field(j[i], "c", at), at + ".c");
        try {
            out.emplace_back(std::move(w), c);
        } catch (const DegenerateInput& e) {
            fail(at, e.what());
        }
    }
    return out;
}

json functional_json(const LinearFunctional& f) { return {{"w", vector_json(f.w())}, {"c", f.c()}}; }

}  // namespace

json parse_json_text(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1;
        std::size_t col = 1;
        const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < upto; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) +
                         ": malformed JSON (" + e.what() + ")");
    }
}

json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.string() + ": cannot open file");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_json_text(buffer.str(), path.string());
}

Polytope polytope_from_json(const json& j, const std::string& where) {
    const std::size_t dim = count(field(j, "dim", where), where + ".dim");
    if (dim == 0) fail(where + ".dim", "must be at least 1");
    return Polytope(dim, functionals_from(field(j, "constraints", where), dim, where + ".constraints"));
}

json to_json(const Polytope& p) {
    json cs = json::array();
    for (const auto& f : p.constraints()) cs.push_back(functional_json(f));
    return {{"dim", p.dim()}, {"constraints", cs}};
}

ArrangementSpec arrangement_from_json(const json& j, const std::string& where) {
    ArrangementSpec a;
    a.dim = count(field(j, "dim", where), where + ".dim");
    if (a.dim == 0) fail(where + ".dim", "must be at least 1");
    a.functionals = functionals_from(field(j, "functionals", where), a.dim, where + ".functionals");
    if (a.functionals.empty()) fail(where + ".functionals", "needs at least one functional");
    return a;
}

json to_json(const ArrangementSpec& a) {
    json fs = json::array();
    for (const auto& f : a.functionals) fs.push_back(functional_json(f));
    return {{"dim", a.dim}, {"functionals", fs}};
}

Network network_from_json(const json& j, const std::string& where) {
    const json& kind = field(j, "kind", where);
    if (!kind.is_string()) fail(where + ".kind", "expected a string");
    const auto k = kind.get<std::string>();
    try {
        if (k == "relu") {
            const json& layers = field(j, "layers", where);
            if (!layers.is_array() || layers.empty()) fail(where + ".layers", "expected a non-empty array");
            std::vector<Layer> out;
            for (std::size_t i = 0; i < layers.size(); ++i) {
                const std::string at = where + ".layers[" + std::to_string(i) + "]";
                const json& nl = field(layers[i], "nonlinear", at);
                if (!nl.is_boolean()) fail(at + ".nonlinear", "expected a boolean");
                out.push_back({matrix_from(field(layers[i], "W", at), at + ".W"),
                               vector_from(field(layers[i], "b", at), at + ".b"), nl.get<bool>()});
            }
            return ReluNetwork(std::move(out));
        }
        if (k == "tll") {
            const std::size_t n = count(field(j, "n", where), where + ".n");
            const std::size_t m = count(field(j, "m", where), where + ".m");
            const std::size_t N = count(field(j, "N", where), where + ".N");
            const std::size_t M = count(field(j, "M", where), where + ".M");
            const json& comps = field(j, "components", where);
            if (!comps.is_array() || comps.size() != m) {
                fail(where + ".components", "expected an array of m = " + std::to_string(m) + " components");
            }
            std::vector<TllComponent> out;
            for (std::size_t c = 0; c < comps.size(); ++c) {
                const std::string at = where + ".components[" + std::to_string(c) + "]";
                TllComponent comp;
                comp.W = matrix_from(field(comps[c], "W_ell", at), at + ".W_ell");
                comp.b = vector_from(field(comps[c], "b_ell", at), at + ".b_ell");
                if (static_cast<std::size_t>(comp.W.rows()) != N || static_cast<std::size_t>(comp.W.cols()) != n) {
                    fail(at + ".W_ell", "expected an N x n = " + std::to_string(N) + " x " + std::to_string(n) + " matrix");
                }
                const json& sel = field(comps[c], "selectors", at);
                if (!sel.is_array() || sel.size() != M) {
                    fail(at + ".selectors", "expected M = " + std::to_string(M) + " selector sets");
                }
                for (std::size_t s = 0; s < sel.size(); ++s) {
                    const std::string sat = at + ".selectors[" + std::to_string(s) + "]";
                    if (!sel[s].is_array()) fail(sat, "expected an array of 1-based indices");
                    std::vector<std::size_t> set;
                    for (std::size_t e = 0; e < sel[s].size(); ++e) {
                        const std::size_t idx = count(sel[s][e], sat + "[" + std::to_string(e) + "]");
                        if (idx < 1 || idx > N) fail(sat, "index " + std::to_string(idx) + " outside 1.." + std::to_string(N));
                        set.push_back(idx - 1);
                    }
                    comp.selectors.push_back(std::move(set));
                }
                out.push_back(std::move(comp));
            }
            return TllNetwork(std::move(out));
        }
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        fail(where, e.what());
    }
    fail(where + ".kind", "unknown network kind '" + k + "' (expected 'relu' or 'tll')");
}

json to_json(const ReluNetwork& net) {
    json layers = json::array();
    for (const auto& L : net.layers()) {
        layers.push_back({{"W", matrix_json(L.W)}, {"b", vector_json(L.b)}, {"nonlinear", L.nonlinear}});
    }
    return {{"kind", "relu"}, {"layers", layers}};
}

json to_json(const TllNetwork& net) {
    json comps = json::array();
    for (const auto& c : net.components()) {
        json sel = json::array();
        for (const auto& s : c.selectors) {
            json one = json::array();
            for (auto i : s) one.push_back(i + 1);
            sel.push_back(one);
        }
        comps.push_back({{"W_ell", matrix_json(c.W)}, {"b_ell", vector_json(c.b)}, {"selectors", sel}});
    }
    return {{"kind", "tll"}, {"n", net.input_dim()}, {"m", net.output_dim()},
            {"N", net.local_count()}, {"M", net.term_count()}, {"components", comps}};
}

json to_json(const Network& net) {
    return std::visit([](const auto& n) { return to_json(n); }, net);
}

VerificationProblem problem_from_json(const json& j) {
    return VerificationProblem{network_from_json(field(j, "network", "problem"), "network"),
                               polytope_from_json(field(j, "input_polytope", "problem"), "input_polytope"),
                               polytope_from_json(field(j, "output_polytope", "problem"), "output_polytope")};
}

json to_json(const VerificationProblem& p) {
    return {{"network", to_json(p.network)},
            {"input_polytope", to_json(p.input)},
            {"output_polytope", to_json(p.output)}};
}

json to_json(const Verdict& v) {
    json out;
    out["status"] = v.status == VerdictStatus::Sat ? "SAT" : "UNSAT";
    if (v.violation) {
        out["witness"] = vector_json(v.violation->witness);
        out["constraint_index"] = v.violation->constraint;
        out["margin"] = v.violation->margin;
    }
    if (!v.all_violations.empty()) {
        json all = json::array();
        for (const auto& x : v.all_violations) {
            all.push_back({{"witness", vector_json(x.witness)},
                           {"constraint_index", x.constraint},
                           {"margin", x.margin}});
        }
        out["violations"] = all;
    }
    out["regions_traversed"] = v.stats.regions_traversed;
    out["regions_verified"] = v.stats.regions_verified;
    out["lp_calls"] = v.stats.lp_calls;
    out["wall_time_ms"] = v.stats.wall_time_ms;
    out["marginal"] = v.stats.marginal;
    out["unconfirmed"] = v.stats.unconfirmed;
    out["thin_regions"] = v.stats.thin_regions;
    return out;
}

json to_json(const Tolerances& t) {
    return {{"zero", t.zero}, {"feasibility", t.feasibility}, {"interior", t.interior}, {"objective", t.objective}};
}

}  // namespace polyverify::io
