#include "polyverify/cli.hpp"

#include "polyverify/errors.hpp"
#include "polyverify/generators.hpp"
#include "polyverify/io.hpp"
#include "polyverify/oracle.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

namespace polyverify::cli {

std::uint64_t resolve_seed(const RunConfig& cfg) {
    if (cfg.seed) return *cfg.seed;
    if (const char* env = std::getenv("POLYVERIFY_SEED"); env && *env) {
        try {
            return std::stoull(env, nullptr, 0);
        } catch (const std::exception&) {
            throw ParseError(std::string("POLYVERIFY_SEED is not an integer: ") + env);
        }
    }
    return kDefaultOracleSeed;
}

std::size_t resolve_threads(const RunConfig& cfg) {
    if (cfg.threads > 0) return cfg.threads;
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

// Maps the library's exception types onto exit codes.
template <typename Body>
int guarded(std::ostream& err, Body&& body) {
    try {
        return body();
    } catch (const InvariantViolation& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternalError;
    } catch (const LpIterationLimit& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternalError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
}

VerificationProblem load_problem(const RunConfig& cfg) {
    const bool separate = cfg.network || cfg.input_polytope || cfg.output_polytope;
    if (cfg.bundle && separate) {
        throw std::invalid_argument("give either --bundle or --network/--input/--output-polytope, not both");
    }
    if (cfg.bundle) return io::problem_from_json(io::load_json_file(*cfg.bundle));
    if (!(cfg.network && cfg.input_polytope && cfg.output_polytope)) {
        throw std::invalid_argument("need --bundle, or all of --network, --input and --output-polytope");
    }
    return VerificationProblem{io::network_from_json(io::load_json_file(*cfg.network)),
                               io::polytope_from_json(io::load_json_file(*cfg.input_polytope), "input_polytope"),
                               io::polytope_from_json(io::load_json_file(*cfg.output_polytope), "output_polytope")};
}

void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
    if (cfg.output_path) {
        std::ofstream file(*cfg.output_path);
        if (!file) throw std::runtime_error("cannot write " + cfg.output_path->string());
        file << text;
    } else {
        out << text;
    }
}

}  // namespace

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const VerificationProblem problem = load_problem(cfg);
        VerifyOptions opts;
        opts.exhaustive = cfg.exhaustive;
        opts.threads = resolve_threads(cfg);
        opts.seed = resolve_seed(cfg);
        opts.tol = cfg.tol;
        const Verdict verdict = verify(problem, opts);

        io::json report = io::to_json(verdict);
        if (cfg.tolerances_overridden) report["tolerances"] = io::to_json(cfg.tol);
        int code = verdict.status == VerdictStatus::Sat ? kSat : kUnsat;
        if (cfg.check) {
            const OracleReport check = check_verdict(problem, verdict, 10000, opts.seed, cfg.tol);
            report["check"] = {{"agreed", check.agreed}, {"details", check.details}};
            if (!check.agreed) code = kInternalError;
        }
        emit(cfg, out, report.dump(2) + "\n");
        return code;
    });
}

int cmd_enumerate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (!cfg.arrangement) throw std::invalid_argument("enumerate needs --arrangement");
        const auto spec = io::arrangement_from_json(io::load_json_file(*cfg.arrangement));
        const Arrangement a =
            build_arrangement(spec.functionals, ArrangementOptions{resolve_seed(cfg), 1000, cfg.tol});

        std::ostringstream text;
        std::ostringstream trace;
        trace << std::setprecision(17);
        TraversalOptions topts;
        topts.threads = cfg.trace ? 1 : resolve_threads(cfg);
        topts.tol = cfg.tol;
        const TraversalStats stats = traverse_regions(a, [&](const RegionGeometry& g) {
            if (cfg.trace) {
                trace << "region " << g.encoding.to_hex() << " witness";
                for (Eigen::Index i = 0; i < g.witness.size(); ++i) trace << ' ' << g.witness(i);
                trace << '\n';
            }
            return true;
        }, topts);

        const std::uint64_t bound = region_count_bound(a.size(), a.dim());
        text << "hyperplanes: " << a.size() << "\n";
        text << "dim: " << a.dim() << "\n";
        text << "regions: " << stats.regions << "\n";
        text << "bound: " << bound << "\n";
        text << "levels:";
        for (auto c : stats.level_counts) text << ' ' << c;
        text << "\n";
        text << "lp_calls: " << stats.lp_calls << "\n";
        if (stats.thin_regions > 0) text << "thin_regions: " << stats.thin_regions << "\n";
        text << trace.str();
        int code = kOk;
        if (cfg.check) {
            const OracleReport report = check_enumeration(a, cfg.tol);
            text << "agreed: " << (report.agreed ? "true" : "false") << "\n";
            if (!report.agreed) {
                text << "details: " << report.details << "\n";
                code = kInternalError;
            }
        }
        emit(cfg, out, text.str());
        if (stats.regions > bound) {
            err << "internal error: region count exceeds the arrangement bound\n";
            return static_cast<int>(kInternalError);
        }
        return code;
    });
}

int cmd_bench(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (cfg.sizes.empty()) throw std::invalid_argument("bench needs --sizes");
        if (cfg.arch != "shallow" && cfg.arch != "tll") {
            throw std::invalid_argument("bench --arch must be 'shallow' or 'tll'");
        }
        const std::uint64_t base_seed = resolve_seed(cfg);
        std::ostringstream csv;
        csv << "arch,size,seed,hyperplanes,regions,bound,lp_calls,wall_ms\n";
        for (std::size_t size : cfg.sizes) {
            for (std::size_t s = 0; s < std::max<std::size_t>(cfg.seeds, 1); ++s) {
                const std::uint64_t seed = base_seed + s;
                Rng rng(seed);
                Network net = cfg.arch == "shallow"
                                  ? Network(random_shallow_network(cfg.dim, size, cfg.outputs, rng))
                                  : Network(random_tll(cfg.dim, cfg.outputs, size, cfg.terms, rng));
                // An output box nothing can leave forces a full traversal.
                VerificationProblem p{std::move(net), box(cfg.dim, -1.0, 1.0), box(cfg.outputs, -1e9, 1e9)};
                VerifyOptions opts;
                opts.threads = resolve_threads(cfg);
                opts.seed = seed;
                opts.tol = cfg.tol;
                const Verdict v = verify(p, opts);
                const Arrangement a = build_arrangement(verification_functionals(p, cfg.tol),
                                                        ArrangementOptions{seed, 1000, cfg.tol});
                csv << cfg.arch << ',' << size << ',' << seed << ',' << a.size() << ','
                    << v.stats.regions_traversed << ',' << region_count_bound(a.size(), a.dim()) << ','
                    << v.stats.lp_calls << ',' << std::fixed << std::setprecision(3)
                    << v.stats.wall_time_ms << std::defaultfloat << '\n';
            }
        }
        emit(cfg, out, csv.str());
        return static_cast<int>(kOk);
    });
}

int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        io::json report;
        OracleReport result;
        if (cfg.arrangement) {
            const auto spec = io::arrangement_from_json(io::load_json_file(*cfg.arrangement));
            const Arrangement a =
                build_arrangement(spec.functionals, ArrangementOptions{resolve_seed(cfg), 1000, cfg.tol});
            result = check_enumeration(a, cfg.tol);
            report["mode"] = "enumerate";
        } else {
            const VerificationProblem problem = load_problem(cfg);
            VerifyOptions opts;
            opts.threads = resolve_threads(cfg);
            opts.seed = resolve_seed(cfg);
            opts.tol = cfg.tol;
            const Verdict verdict = verify(problem, opts);
            result = check_verdict(problem, verdict, 10000, opts.seed, cfg.tol);
            report["mode"] = "verify";
            report["status"] = verdict.status == VerdictStatus::Sat ? "SAT" : "UNSAT";
        }
        report["agreed"] = result.agreed;
        report["details"] = result.details;
        emit(cfg, out, report.dump(2) + "\n");
        return result.agreed ? static_cast<int>(kOk) : static_cast<int>(kInternalError);
    });
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    switch (cfg.command) {
        case Subcommand::Verify: return cmd_verify(cfg, out, err);
        case Subcommand::Enumerate: return cmd_enumerate(cfg, out, err);
        case Subcommand::Bench: return cmd_bench(cfg, out, err);
        case Subcommand::Check: return cmd_check(cfg, out, err);
    }
    return kInputError;
}

}  // namespace polyverify::cli
