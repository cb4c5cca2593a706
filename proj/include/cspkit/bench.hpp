#pragma once

// Benchmark harness: build instances, run backends under a timeout,
// validate every solution against the declarative spec, and emit CSV and
// per-backend series files.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cspkit/fd.hpp"
#include "cspkit/ir.hpp"
#include "cspkit/problems.hpp"

namespace cspkit {

enum class Backend { Fd, Asp, Abduce, Mf, Bt, Gt };
enum class ProblemKind { Queens, Coloring };
enum class RunStatus { Sat, Unsat, Timeout, Truncated };

const char* to_string(Backend b);
const char* to_string(ProblemKind p);
const char* to_string(RunStatus s);
const char* to_string(Heuristic h);
std::optional<Backend> parse_backend(std::string_view s);
std::optional<Heuristic> parse_heuristic(std::string_view s);

inline constexpr Backend kAllBackends[] = {Backend::Fd, Backend::Asp, Backend::Abduce,
                                           Backend::Mf, Backend::Bt,  Backend::Gt};

struct Instance {
    ProblemKind problem = ProblemKind::Queens;
    int param = 0;  // n for queens, vertex count for coloring
    int colors = 4;
    Graph graph;    // coloring only
    std::uint64_t seed = 0;

    CspSpec spec() const;
    static Instance queens(int n);
    static Instance coloring(Graph g, int colors, std::uint64_t seed = 0);
};

struct RunOptions {
    Heuristic heuristic = Heuristic::Ffc;
    bool all = false;
    std::chrono::milliseconds timeout{60'000};
};

struct RunRecord {
    ProblemKind problem = ProblemKind::Queens;
    int param = 0;
    std::optional<std::size_t> arcs;
    Backend backend = Backend::Fd;
    std::string heuristic;
    RunStatus status = RunStatus::Unsat;
    double time_ms = 0;
    std::uint64_t backtracks = 0;
    std::uint64_t choices = 0;
    std::size_t solutions = 0;
    std::uint64_t seed = 0;

    std::size_t invalid_solutions = 0;  // solutions failing the spec check
    std::uint64_t leaves_tested = 0;    // generate-and-test only
};

struct RunOutput {
    RunRecord record;
    std::vector<Interpretation> solutions;
};

RunOutput run_backend(const Instance& inst, Backend backend, const RunOptions& opts);

struct SweepRange {
    int from = 0;
    int to = 0;
    int step = 1;

    std::vector<int> values() const;
};

struct QueensSweep {
    Backend backend;
    SweepRange n;
};

struct SuiteConfig {
    std::vector<QueensSweep> queens;
    std::vector<Backend> coloring_backends;
    SweepRange coloring_vertices{10, 60, 10};
    double edge_prob = 0.2;
    int colors = 4;
    int classes = 4;
    std::uint64_t seed = 1;
    RunOptions run;
};

class ConfigError : public CspError {
public:
    using CspError::CspError;
};

SuiteConfig default_suite();
SuiteConfig parse_suite_config(std::string_view json_text);
SuiteConfig load_suite_config(const std::filesystem::path& path);

// Coloring instance for `vertices` under the suite's generator settings;
// the generator seed is config.seed + vertices.
Instance coloring_instance(const SuiteConfig& cfg, int vertices);

struct SuiteResult {
    std::vector<RunRecord> records;          // sorted by (problem, param, backend)
    std::vector<std::string> disagreements;  // sat/unsat conflicts per instance
    std::vector<std::string> invalid;        // runs that emitted a failing solution

    bool ok() const { return disagreements.empty() && invalid.empty(); }
};

SuiteResult run_suite(const SuiteConfig& cfg);

// Instances on which completing backends disagree on sat/unsat.
std::vector<std::string> find_disagreements(const std::vector<RunRecord>& records);

inline constexpr std::string_view kCsvHeader =
    "problem,param,arcs,backend,heuristic,status,time_ms,backtracks,choices,solutions,seed";

std::string to_csv(const std::vector<RunRecord>& records);
void emit_csv(const std::vector<RunRecord>& records, const std::filesystem::path& path);

// One file per (problem, backend): `<dir>/<problem>_<backend>.dat`, rows
// `param time_ms backtracks` sorted by param. Returns the files written.
std::vector<std::filesystem::path> emit_series(const std::vector<RunRecord>& records,
                                               const std::filesystem::path& dir);

}  // namespace cspkit
