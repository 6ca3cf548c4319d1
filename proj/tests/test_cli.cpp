#include "polyverify/cli.hpp"
#include "polyverify/errors.hpp"
#include "polyverify/io.hpp"

#include <doctest.h>

#include <sstream>

using namespace polyverify;
namespace fs = std::filesystem;

namespace {

const fs::path fixtures = POLYVERIFY_FIXTURES;

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(cli::RunConfig cfg) {
    std::ostringstream out, err;
    cfg.threads = 1;
    int code = cli::run(cfg, out, err);
    return {code, out.str(), err.str()};
}

cli::RunConfig verify_bundle(const std::string& name) {
    cli::RunConfig cfg;
    cfg.command = cli::Subcommand::Verify;
    cfg.bundle = fixtures / name;
    return cfg;
}

std::string without_wall_time(const std::string& report) {
    auto j = io::json::parse(report);
    j.erase("wall_time_ms");
    return j.dump();
}

}  // namespace

TEST_CASE("polytope json round trip") {
    auto j = io::parse_json_text(R"({"dim": 2, "constraints": [{"w": [1, 0], "c": -1}, {"w": [0, -2], "c": 0}]})");
    auto p = io::polytope_from_json(j);
    CHECK(p.size() == 2);
    CHECK(p.contains(Vector::Zero(2), 0));
    auto back = io::polytope_from_json(io::to_json(p));
    CHECK(back.size() == 2);
    CHECK_THROWS_AS(io::polytope_from_json(io::parse_json_text(R"({"dim": 2, "constraints": [{"w": [1], "c": 0}]})")),
                    ParseError);
    CHECK_THROWS_AS(io::polytope_from_json(io::parse_json_text(R"({"constraints": []})")), ParseError);
}

TEST_CASE("malformed json reports a position") {
    try {
        io::load_json_file(fixtures / "malformed.json");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("malformed.json:3:") != std::string::npos);
    }
}

TEST_CASE("network json round trip") {
    auto bundle = io::load_json_file(fixtures / "abs_unsat.json");
    auto p = io::problem_from_json(bundle);
    REQUIRE(std::holds_alternative<TllNetwork>(p.network));
    CHECK(std::get<TllNetwork>(p.network).components()[0].selectors[1] == std::vector<std::size_t>{1});
    auto again = io::problem_from_json(io::to_json(p));
    CHECK(io::to_json(again) == io::to_json(p));
    auto bad = io::parse_json_text(R"({"kind": "tll", "n": 1, "m": 1, "N": 2, "M": 1,
        "components": [{"W_ell": [[1], [-1]], "b_ell": [0, 0], "selectors": [[0]]}]})");
    CHECK_THROWS_AS(io::network_from_json(bad), ParseError);
    CHECK_THROWS_AS(io::network_from_json(io::parse_json_text(R"({"kind": "cnn"})")), ParseError);
}

TEST_CASE("verify exit codes") {
    auto sat = run(verify_bundle("relu_sat.json"));
    CHECK(sat.code == cli::kSat);
    CHECK(io::json::parse(sat.out)["status"] == "SAT");

    auto unsat = run(verify_bundle("relu_unsat.json"));
    CHECK(unsat.code == cli::kUnsat);
    auto report = io::json::parse(unsat.out);
    CHECK(report["status"] == "UNSAT");
    CHECK(report.contains("witness"));
    CHECK(report["margin"].get<double>() == doctest::Approx(0.5));

    CHECK(run(verify_bundle("does_not_exist.json")).code == cli::kInputError);
    CHECK(run(verify_bundle("malformed.json")).code == cli::kInputError);
    CHECK(run(verify_bundle("abs_unsat.json")).code == cli::kUnsat);
    CHECK(run(verify_bundle("abs_sat.json")).code == cli::kSat);
}

TEST_CASE("verify with separate files and overrides") {
    cli::RunConfig cfg;
    cfg.network = fixtures / "relu_network.json";
    cfg.input_polytope = fixtures / "relu_input.json";
    cfg.output_polytope = fixtures / "relu_output_tight.json";
    cfg.check = true;
    cfg.tol.feasibility = 1e-8;
    cfg.tolerances_overridden = true;
    auto r = run(cfg);
    CHECK(r.code == cli::kUnsat);
    auto j = io::json::parse(r.out);
    CHECK(j["check"]["agreed"] == true);
    CHECK(j["tolerances"]["feasibility"].get<double>() == 1e-8);

    cli::RunConfig both = cfg;
    both.bundle = fixtures / "relu_sat.json";
    CHECK(run(both).code == cli::kInputError);
    cli::RunConfig partial;
    partial.network = fixtures / "relu_network.json";
    CHECK(run(partial).code == cli::kInputError);
}

TEST_CASE("reports are deterministic") {
    auto a = run(verify_bundle("abs_unsat.json"));
    auto b = run(verify_bundle("abs_unsat.json"));
    CHECK(without_wall_time(a.out) == without_wall_time(b.out));
}

TEST_CASE("enumerate") {
    cli::RunConfig cfg;
    cfg.command = cli::Subcommand::Enumerate;
    cfg.arrangement = fixtures / "two_lines.json";
    cfg.check = true;
    cfg.trace = true;
    auto r = run(cfg);
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("regions: 4\n") != std::string::npos);
    CHECK(r.out.find("agreed: true") != std::string::npos);
    CHECK(r.out.find("region 3 witness") != std::string::npos);

    cfg.arrangement = fixtures / "three_lines.json";
    CHECK(run(cfg).out.find("regions: 7\n") != std::string::npos);

    cfg.arrangement = fixtures / "four_lines.json";
    auto four = run(cfg);
    auto pos = four.out.find("regions: ");
    REQUIRE(pos != std::string::npos);
    CHECK(std::stoul(four.out.substr(pos + 9)) <= 11);
}

TEST_CASE("bench is deterministic and bounded") {
    cli::RunConfig cfg;
    cfg.command = cli::Subcommand::Bench;
    cfg.sizes = {4, 8, 16};
    cfg.seed = 42;
    auto strip = [](const std::string& csv) {
        std::istringstream in(csv);
        std::string line, out;
        while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + "\n";
        return out;
    };
    auto a = run(cfg);
    CHECK(a.code == cli::kOk);
    CHECK(strip(a.out) == strip(run(cfg).out));

    std::istringstream in(a.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "arch,size,seed,hyperplanes,regions,bound,lp_calls,wall_ms");
    long prev = -1;
    while (std::getline(in, line)) {
        std::vector<std::string> f;
        std::istringstream ls(line);
        for (std::string x; std::getline(ls, x, ',');) f.push_back(x);
        REQUIRE(f.size() == 8);
        CHECK(std::stol(f[4]) <= std::stol(f[5]));
        CHECK(std::stol(f[6]) > prev);
        prev = std::stol(f[6]);
    }

    cfg.arch = "tll";
    cfg.sizes = {2, 3, 4};
    cfg.terms = 2;
    cfg.outputs = 1;
    auto t = run(cfg);
    CHECK(t.code == cli::kOk);
}

TEST_CASE("seed resolution") {
    cli::RunConfig cfg;
    cfg.seed = 5;
    CHECK(cli::resolve_seed(cfg) == 5);
    cfg.seed.reset();
    ::setenv("POLYVERIFY_SEED", "17", 1);
    CHECK(cli::resolve_seed(cfg) == 17);
    ::unsetenv("POLYVERIFY_SEED");
    CHECK(cli::resolve_seed(cfg) == 0xC0FFEE);
}
