// cspkit command-line front end: solve, bench, gen.
//
// Exit codes: 0 success, 1 unsat (solve), 2 usage/config error,
// 3 backend disagreement or invalid solution (bench).

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cspkit/bench.hpp"
#include "cspkit/problems.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUnsat = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDisagree = 3;

struct SolveArgs {
    std::string problem;
    int n = 0;
    int colors = 4;
    std::string graph_file;
    std::string backend;
    std::string heuristic = "ffc";
    bool all = false;
    std::uint64_t seed = 1;
    double timeout_s = 60;
};

int run_solve(const SolveArgs& a) {
    using namespace cspkit;
    const auto backend = parse_backend(a.backend);
    const auto heuristic = parse_heuristic(a.heuristic);
    if (!backend || !heuristic) {
        std::cerr << "error: unknown backend or heuristic\n";
        return kExitUsage;
    }
    Instance inst;
    if (a.problem == "queens") {
        if (a.n < 1) {
            std::cerr << "error: --n must be positive\n";
            return kExitUsage;
        }
        inst = Instance::queens(a.n);
    } else {
        Graph g;
        if (!a.graph_file.empty()) {
            g = read_dimacs_file(a.graph_file);
        } else {
            if (a.n < 1) {
                std::cerr << "error: coloring needs --graph or a positive --n\n";
                return kExitUsage;
            }
            g = gen_graph({a.n, 0.2, a.seed, 4});
        }
        inst = Instance::coloring(std::move(g), a.colors, a.seed);
    }

    RunOptions opts;
    opts.heuristic = *heuristic;
    opts.all = a.all;
    opts.timeout = std::chrono::milliseconds(static_cast<long long>(a.timeout_s * 1000));
    const auto out = run_backend(inst, *backend, opts);
    const auto spec = inst.spec();
    for (std::size_t i = 0; i < out.solutions.size(); ++i) {
        std::cout << "solution " << i + 1 << ":\n" << format_interpretation(spec, out.solutions[i]);
    }
    const auto& r = out.record;
    std::cout << "status=" << to_string(r.status) << " solutions=" << r.solutions
              << " backtracks=" << r.backtracks << " choices=" << r.choices
              << " time_ms=" << r.time_ms;
    if (r.arcs) std::cout << " arcs=" << *r.arcs;
    std::cout << '\n';
    if (r.invalid_solutions > 0) {
        std::cerr << "error: " << r.invalid_solutions << " solution(s) failed validation\n";
        return kExitDisagree;
    }
    if (r.status == RunStatus::Timeout) return kExitUnsat;
    return r.status == RunStatus::Unsat ? kExitUnsat : kExitOk;
}

int run_bench(const std::string& config, const std::string& csv, const std::string& series) {
    using namespace cspkit;
    const SuiteConfig cfg = config.empty() ? default_suite() : load_suite_config(config);
    const auto res = run_suite(cfg);
    if (res.records.empty()) {
        std::cerr << "error: configuration produced no runs\n";
        return kExitUsage;
    }
    emit_csv(res.records, csv);
    if (!series.empty()) emit_series(res.records, series);
    for (const auto& d : res.disagreements) std::cerr << "disagreement: " << d << '\n';
    for (const auto& d : res.invalid) std::cerr << "invalid: " << d << '\n';
    std::cout << res.records.size() << " runs written to " << csv << '\n';
    return res.ok() ? kExitOk : kExitDisagree;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constraint satisfaction toolkit: n-queens and graph coloring across backends"};
    app.require_subcommand(1);

    SolveArgs solve;
    auto* solve_cmd = app.add_subcommand("solve", "Solve one instance with one backend");
    solve_cmd->add_option("--problem", solve.problem, "Problem kind")
        ->required()
        ->check(CLI::IsMember({"queens", "coloring"}));
    solve_cmd->add_option("--n", solve.n, "Queens count, or vertex count of a generated graph");
    solve_cmd->add_option("--colors", solve.colors, "Number of colors")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--graph", solve.graph_file, "DIMACS graph file")->check(CLI::ExistingFile);
    solve_cmd->add_option("--backend", solve.backend, "fd|asp|abduce|mf|bt|gt")
        ->required()
        ->check(CLI::IsMember({"fd", "asp", "abduce", "mf", "bt", "gt"}));
    solve_cmd->add_option("--heuristic", solve.heuristic, "Variable selection for fd/abduce")
        ->check(CLI::IsMember({"ffc", "lex"}));
    solve_cmd->add_flag("--all", solve.all, "Enumerate every solution");
    solve_cmd->add_option("--seed", solve.seed, "Generator seed for --n coloring instances");
    solve_cmd->add_option("--timeout", solve.timeout_s, "Wall-clock limit in seconds")
        ->check(CLI::PositiveNumber);

    std::string config, csv, series;
    auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark sweep");
    bench_cmd->add_option("--config", config, "JSON sweep configuration (default sweep if omitted)")
        ->check(CLI::ExistingFile);
    bench_cmd->add_option("--out-csv", csv, "CSV output path")->required();
    bench_cmd->add_option("--out-series", series, "Directory for per-backend series files");

    int vertices = 0;
    double prob = 0.2;
    std::uint64_t gen_seed = 1;
    int classes = 4;
    std::string out_file;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a 4-colorable random graph (DIMACS)");
    gen_cmd->add_option("--vertices", vertices, "Vertex count")->required()->check(CLI::NonNegativeNumber);
    gen_cmd->add_option("--prob", prob, "Cross-class edge probability")->required()->check(CLI::Range(0.0, 1.0));
    gen_cmd->add_option("--seed", gen_seed, "Generator seed")->required();
    gen_cmd->add_option("--classes", classes, "Number of color classes")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--out", out_file, "Output file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*solve_cmd) return run_solve(solve);
        if (*bench_cmd) return run_bench(config, csv, series);
        if (*gen_cmd) {
            const auto g = cspkit::gen_graph({vertices, prob, gen_seed, classes});
            cspkit::write_dimacs_file(g, out_file);
            std::cout << "wrote " << g.n_vertices << " vertices, " << g.edge_count() << " edges to "
                      << out_file << '\n';
            return kExitOk;
        }
    } catch (const cspkit::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const cspkit::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const cspkit::CspError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
