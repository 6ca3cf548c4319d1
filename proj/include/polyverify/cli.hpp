#pragma once

#include "polyverify/tolerances.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace polyverify::cli {

enum ExitCode : int { kSat = 0, kOk = 0, kUnsat = 1, kInputError = 2, kInternalError = 3 };

enum class Subcommand { Verify, Enumerate, Bench, Check };

struct RunConfig {
    Subcommand command = Subcommand::Verify;

    // Either a bundle, or network + input + output polytope files.
    std::optional<std::filesystem::path> bundle;
    std::optional<std::filesystem::path> network;
    std::optional<std::filesystem::path> input_polytope;
    std::optional<std::filesystem::path> output_polytope;
    std::optional<std::filesystem::path> arrangement;
    std::optional<std::filesystem::path> output_path;

    bool exhaustive = false;
    bool check = false;
    bool trace = false;
    std::size_t threads = 0;  // 0: hardware concurrency
    std::optional<std::uint64_t> seed;

    Tolerances tol{};
    bool tolerances_overridden = false;

    // bench
    std::string arch = "shallow";
    std::vector<std::size_t> sizes;
    std::size_t dim = 2;
    std::size_t outputs = 1;
    std::size_t terms = 2;
    std::size_t seeds = 1;
};

/// --seed, else $POLYVERIFY_SEED, else 0xC0FFEE.
std::uint64_t resolve_seed(const RunConfig& cfg);
std::size_t resolve_threads(const RunConfig& cfg);

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_enumerate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_bench(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err);

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace polyverify::cli
