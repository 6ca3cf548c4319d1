#include "polyverify/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

using polyverify::cli::RunConfig;
using polyverify::cli::Subcommand;

void add_common(CLI::App* app, RunConfig& cfg) {
    app->add_option("--threads", cfg.threads, "Worker threads (default: available parallelism; 1 = deterministic serial order)");
    app->add_option("--seed", cfg.seed, "RNG seed (falls back to $POLYVERIFY_SEED, then 0xC0FFEE)");
    app->add_option("-o,--out", cfg.output_path, "Write the report here instead of stdout");
    auto mark = [&cfg](auto) { cfg.tolerances_overridden = true; };
    app->add_option_function<double>("--eps-feas", [&cfg, mark](double v) { cfg.tol.feasibility = v; mark(v); },
                                     "LP feasibility / violation threshold (default 1e-9)");
    app->add_option_function<double>("--eps-int", [&cfg, mark](double v) { cfg.tol.interior = v; mark(v); },
                                      "Strict-interior margin for regions (default 1e-7)");
    app->add_option_function<double>("--eps-zero", [&cfg, mark](double v) { cfg.tol.zero = v; mark(v); },
                                     "Zero-normal rejection threshold (default 1e-12)");
    app->add_option_function<double>("--eps-obj", [&cfg, mark](double v) { cfg.tol.objective = v; mark(v); },
                                     "LP objective tolerance (default 1e-9)");
}

void add_problem_inputs(CLI::App* app, RunConfig& cfg) {
    auto* bundle = app->add_option("--bundle", cfg.bundle, "Problem bundle JSON")->check(CLI::ExistingFile);
    auto* net = app->add_option("--network", cfg.network, "Network JSON")->check(CLI::ExistingFile);
    auto* in = app->add_option("--input", cfg.input_polytope, "Input polytope JSON")->check(CLI::ExistingFile);
    auto* out = app->add_option("--output-polytope", cfg.output_polytope, "Output polytope JSON")->check(CLI::ExistingFile);
    bundle->excludes(net)->excludes(in)->excludes(out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact verification of shallow and two-level-lattice ReLU networks over polytopes"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* verify = app.add_subcommand("verify", "Decide whether net(P_x) lies inside P_y");
    add_problem_inputs(verify, cfg);
    add_common(verify, cfg);
    verify->add_flag("--exhaustive", cfg.exhaustive, "Collect every violated (region, constraint) pair");
    verify->add_flag("--check", cfg.check, "Cross-check against the brute-force oracles");
    verify->callback([&] { cfg.command = Subcommand::Verify; });

    auto* enumerate = app.add_subcommand("enumerate", "Enumerate the regions of a hyperplane arrangement");
    enumerate->add_option("--arrangement", cfg.arrangement, "Arrangement JSON")->required()->check(CLI::ExistingFile);
    add_common(enumerate, cfg);
    enumerate->add_flag("--trace", cfg.trace, "Print every region encoding and witness");
    enumerate->add_flag("--check", cfg.check, "Compare with brute-force enumeration");
    enumerate->callback([&] { cfg.command = Subcommand::Enumerate; });

    auto* bench = app.add_subcommand("bench", "Time full traversals of random instances (CSV)");
    bench->add_option("--arch", cfg.arch, "shallow or tll")->check(CLI::IsMember({"shallow", "tll"}));
    bench->add_option("--sizes", cfg.sizes, "Neuron counts (shallow) or local-function counts N (tll)")
        ->required()->delimiter(',');
    bench->add_option("--dim", cfg.dim, "Input dimension n");
    bench->add_option("--outputs", cfg.outputs, "Output dimension m");
    bench->add_option("--terms", cfg.terms, "Selector sets M (tll)");
    bench->add_option("--seeds", cfg.seeds, "Instances per size");
    add_common(bench, cfg);
    bench->callback([&] { cfg.command = Subcommand::Bench; });

    auto* check = app.add_subcommand("check", "Run the oracles against a problem or an arrangement");
    add_problem_inputs(check, cfg);
    check->add_option("--arrangement", cfg.arrangement, "Arrangement JSON")->check(CLI::ExistingFile);
    add_common(check, cfg);
    check->callback([&] { cfg.command = Subcommand::Check; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : polyverify::cli::kInputError;
    }
    return polyverify::cli::run(cfg, std::cout, std::cerr);
}
