#include "cspkit/bench.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "cspkit/abduction.hpp"
#include "cspkit/asp.hpp"
#include "cspkit/compile.hpp"
#include "cspkit/model_finder.hpp"

namespace cspkit {

const char* to_string(Backend b) {
    switch (b) {
    case Backend::Fd: return "fd";
    case Backend::Asp: return "asp";
    case Backend::Abduce: return "abduce";
    case Backend::Mf: return "mf";
    case Backend::Bt: return "bt";
    case Backend::Gt: return "gt";
    }
    return "?";
}

const char* to_string(ProblemKind p) { return p == ProblemKind::Queens ? "queens" : "coloring"; }

const char* to_string(RunStatus s) {
    switch (s) {
    case RunStatus::Sat: return "sat";
    case RunStatus::Unsat: return "unsat";
    case RunStatus::Timeout: return "timeout";
    case RunStatus::Truncated: return "truncated";
    }
    return "?";
}

const char* to_string(Heuristic h) { return h == Heuristic::Ffc ? "ffc" : "lex"; }

std::optional<Backend> parse_backend(std::string_view s) {
    for (auto b : kAllBackends)
        if (s == to_string(b)) return b;
    return std::nullopt;
}

std::optional<Heuristic> parse_heuristic(std::string_view s) {
    if (s == "ffc") return Heuristic::Ffc;
    if (s == "lex") return Heuristic::Lex;
    return std::nullopt;
}

CspSpec Instance::spec() const {
    return problem == ProblemKind::Queens ? queens_spec(param) : coloring_spec(graph, colors);
}

Instance Instance::queens(int n) {
    Instance i;
    i.problem = ProblemKind::Queens;
    i.param = n;
    return i;
}

Instance Instance::coloring(Graph g, int colors, std::uint64_t seed) {
    Instance i;
    i.problem = ProblemKind::Coloring;
    i.param = g.n_vertices;
    i.colors = colors;
    i.graph = std::move(g);
    i.seed = seed;
    return i;
}

namespace {

struct Raw {
    std::vector<Interpretation> solutions;
    SearchStatus status = SearchStatus::Complete;
    std::uint64_t backtracks = 0;
    std::uint64_t choices = 0;
    std::uint64_t leaves_tested = 0;
    std::string heuristic;
};

Raw from_fd(const FdResult& r, const std::function<Interpretation(const std::vector<int>&)>& decode,
            const char* heuristic) {
    Raw out;
    for (const auto& s : r.solutions) out.solutions.push_back(decode(s));
    out.status = r.status;
    out.backtracks = r.stats.backtracks;
    out.choices = r.stats.choices;
    out.leaves_tested = r.stats.leaves_tested;
    out.heuristic = heuristic;
    return out;
}

FdStore direct_store(const Instance& inst) {
    return inst.problem == ProblemKind::Queens ? queens_fd(inst.param)
                                               : coloring_fd(inst.graph, inst.colors);
}

Interpretation single_table(const std::vector<int>& s) { return Interpretation{{s}}; }

Raw run_raw(const Instance& inst, const CspSpec& spec, Backend backend, const RunOptions& opts,
            const SearchLimits& limits) {
    switch (backend) {
    case Backend::Fd:
    case Backend::Bt:
    case Backend::Gt: {
        LabelOptions lo;
        lo.limits = limits;
        lo.heuristic = backend == Backend::Fd ? opts.heuristic : Heuristic::Lex;
        lo.consistency = backend == Backend::Fd   ? Consistency::Ac3
                         : backend == Backend::Bt ? Consistency::CheckOnly
                                                  : Consistency::None;
        return from_fd(label(direct_store(inst), lo), single_table, to_string(lo.heuristic));
    }
    case Backend::Abduce: {
        auto red = reduce_to_fd(spec);
        if (red.inconsistent) return Raw{{}, SearchStatus::Complete, 0, 0, 0, to_string(opts.heuristic)};
        LabelOptions lo;
        lo.limits = limits;
        lo.heuristic = opts.heuristic;
        lo.consistency = Consistency::Ac3;
        auto res = label(std::move(red.store), lo);
        return from_fd(res, [&](const std::vector<int>& s) { return red.decode(s); },
                       to_string(opts.heuristic));
    }
    case Backend::Mf: {
        ModelFinderOptions mo;
        mo.limits = limits;
        auto res = find_models(spec, mo);
        return Raw{std::move(res.models), res.status, res.stats.backtracks, res.stats.choices, 0,
                   "cell-order"};
    }
    case Backend::Asp: {
        const auto t = functions_to_predicates(spec);
        const auto g = ground(add_open_declarations(t, true), spec);
        auto res = solve(g, limits);
        Raw out;
        for (const auto& m : res.models) out.solutions.push_back(decode_model(spec, t, g, m));
        out.status = res.status;
        out.backtracks = res.stats.backtracks;
        out.choices = res.stats.choices;
        out.heuristic = "denial-degree";
        return out;
    }
    }
    throw CspError("unknown backend");
}

}  // namespace

RunOutput run_backend(const Instance& inst, Backend backend, const RunOptions& opts) {
    const auto spec = inst.spec();
    const auto start = Clock::now();
    SearchLimits limits;
    limits.mode = opts.all ? SearchMode::All : SearchMode::First;
    limits.deadline = start + opts.timeout;

    Raw raw = run_raw(inst, spec, backend, opts, limits);
    const auto elapsed = Clock::now() - start;

    RunOutput out;
    auto& rec = out.record;
    rec.problem = inst.problem;
    rec.param = inst.param;
    if (inst.problem == ProblemKind::Coloring) rec.arcs = inst.graph.edge_count();
    rec.backend = backend;
    rec.heuristic = raw.heuristic;
    rec.time_ms = std::chrono::duration<double, std::milli>(elapsed).count();
    rec.backtracks = raw.backtracks;
    rec.choices = raw.choices;
    rec.leaves_tested = raw.leaves_tested;
    rec.seed = inst.seed;

    if (raw.status == SearchStatus::TimedOut) {
        rec.status = RunStatus::Timeout;
        return out;
    }
    for (const auto& s : raw.solutions)
        if (!check(spec, s).empty()) ++rec.invalid_solutions;
    rec.solutions = raw.solutions.size();
    if (raw.status == SearchStatus::Truncated)
        rec.status = RunStatus::Truncated;
    else
        rec.status = raw.solutions.empty() ? RunStatus::Unsat : RunStatus::Sat;
    out.solutions = std::move(raw.solutions);
    return out;
}

std::vector<int> SweepRange::values() const {
    if (step < 1) throw ConfigError("sweep step must be positive");
    std::vector<int> out;
    for (int v = from; v <= to; v += step) out.push_back(v);
    return out;
}

SuiteConfig default_suite() {
    SuiteConfig c;
    c.queens = {{Backend::Fd, {4, 20, 2}},  {Backend::Abduce, {4, 20, 2}},
                {Backend::Asp, {4, 12, 1}}, {Backend::Mf, {4, 12, 1}},
                {Backend::Bt, {4, 12, 1}},  {Backend::Gt, {4, 7, 1}}};
    c.coloring_backends = {Backend::Fd, Backend::Asp, Backend::Abduce, Backend::Mf, Backend::Bt};
    return c;
}

namespace {

Backend backend_from_json(const nlohmann::json& j) {
    if (!j.is_string()) throw ConfigError("backend must be a string");
    auto b = parse_backend(j.get<std::string>());
    if (!b) throw ConfigError("unknown backend '" + j.get<std::string>() + "'");
    return *b;
}

SweepRange range_from_json(const nlohmann::json& j, SweepRange dflt) {
    SweepRange r = dflt;
    r.from = j.value("from", r.from);
    r.to = j.value("to", r.to);
    r.step = j.value("step", r.step);
    if (r.step < 1) throw ConfigError("sweep step must be positive");
    if (r.from < 1) throw ConfigError("sweep must start at a positive size");
    return r;
}

}  // namespace

SuiteConfig parse_suite_config(std::string_view json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    SuiteConfig c = default_suite();
    try {
        if (j.contains("timeout_s"))
            c.run.timeout = std::chrono::milliseconds(
                static_cast<long long>(j.at("timeout_s").get<double>() * 1000.0));
        c.run.all = j.value("all", c.run.all);
        c.seed = j.value("seed", c.seed);
        if (j.contains("heuristic")) {
            auto h = parse_heuristic(j.at("heuristic").get<std::string>());
            if (!h) throw ConfigError("heuristic must be ffc or lex");
            c.run.heuristic = *h;
        }
        if (j.contains("queens")) {
            c.queens.clear();
            for (const auto& q : j.at("queens"))
                c.queens.push_back({backend_from_json(q.at("backend")), range_from_json(q, {4, 4, 1})});
        }
        if (j.contains("coloring")) {
            const auto& col = j.at("coloring");
            if (col.contains("backends")) {
                c.coloring_backends.clear();
                for (const auto& b : col.at("backends")) c.coloring_backends.push_back(backend_from_json(b));
            }
            c.coloring_vertices = range_from_json(col, c.coloring_vertices);
            c.edge_prob = col.value("edge_prob", c.edge_prob);
            c.colors = col.value("colors", c.colors);
            c.classes = col.value("classes", c.classes);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad config: ") + e.what());
    }
    if (c.run.timeout.count() <= 0) throw ConfigError("timeout must be positive");
    if (!(c.edge_prob >= 0 && c.edge_prob <= 1)) throw ConfigError("edge_prob outside [0,1]");
    if (c.colors < 1 || c.classes < 1) throw ConfigError("colors and classes must be positive");
    return c;
}

SuiteConfig load_suite_config(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config " + path.string());
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_suite_config(buf.str());
}

Instance coloring_instance(const SuiteConfig& cfg, int vertices) {
    GenConfig gen{vertices, cfg.edge_prob, cfg.seed + static_cast<std::uint64_t>(vertices), cfg.classes};
    return Instance::coloring(gen_graph(gen), cfg.colors, gen.seed);
}

namespace {

auto record_key(const RunRecord& r) {
    return std::tuple{static_cast<int>(r.problem), r.param, static_cast<int>(r.backend)};
}

}  // namespace

std::vector<std::string> find_disagreements(const std::vector<RunRecord>& records) {
    std::map<std::pair<int, int>, std::vector<const RunRecord*>> by_instance;
    for (const auto& r : records)
        if (r.status != RunStatus::Timeout)
            by_instance[{static_cast<int>(r.problem), r.param}].push_back(&r);
    std::vector<std::string> out;
    for (const auto& [key, runs] : by_instance) {
        const bool sat0 = runs.front()->status != RunStatus::Unsat;
        const bool agree = std::all_of(runs.begin(), runs.end(), [&](const RunRecord* r) {
            return (r->status != RunStatus::Unsat) == sat0;
        });
        if (agree) continue;
        std::ostringstream os;
        os << to_string(runs.front()->problem) << " param=" << key.second << ':';
        for (const auto* r : runs) os << ' ' << to_string(r->backend) << '=' << to_string(r->status);
        out.push_back(os.str());
    }
    return out;
}

SuiteResult run_suite(const SuiteConfig& cfg) {
    SuiteResult res;
    for (const auto& q : cfg.queens)
        for (int n : q.n.values())
            res.records.push_back(run_backend(Instance::queens(n), q.backend, cfg.run).record);
    for (int v : cfg.coloring_vertices.values()) {
        const auto inst = coloring_instance(cfg, v);
        for (auto b : cfg.coloring_backends) res.records.push_back(run_backend(inst, b, cfg.run).record);
    }
    std::stable_sort(res.records.begin(), res.records.end(),
                     [](const RunRecord& a, const RunRecord& b) { return record_key(a) < record_key(b); });
    res.disagreements = find_disagreements(res.records);
    for (const auto& r : res.records) {
        if (r.invalid_solutions == 0) continue;
        std::ostringstream os;
        os << to_string(r.problem) << " param=" << r.param << " backend=" << to_string(r.backend) << ": "
           << r.invalid_solutions << " invalid solution(s)";
        res.invalid.push_back(os.str());
    }
    return res;
}

std::string to_csv(const std::vector<RunRecord>& records) {
    std::ostringstream os;
    os << kCsvHeader << '\n';
    for (const auto& r : records) {
        os << to_string(r.problem) << ',' << r.param << ',';
        if (r.arcs) os << *r.arcs;
        os << ',' << to_string(r.backend) << ',' << r.heuristic << ',' << to_string(r.status) << ','
           << std::fixed << std::setprecision(3) << r.time_ms << ',' << r.backtracks << ','
           << r.choices << ',' << r.solutions << ',' << r.seed << '\n';
    }
    return os.str();
}

void emit_csv(const std::vector<RunRecord>& records, const std::filesystem::path& path) {
    if (records.empty()) throw CspError("refusing to write an empty record set");
    std::ofstream f(path);
    if (!f) throw CspError("cannot write " + path.string());
    f << to_csv(records);
    if (!f) throw CspError("write failed for " + path.string());
}

std::vector<std::filesystem::path> emit_series(const std::vector<RunRecord>& records,
                                               const std::filesystem::path& dir) {
    if (records.empty()) throw CspError("refusing to write an empty record set");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw CspError("cannot create " + dir.string() + ": " + ec.message());

    std::map<std::pair<std::string, std::string>, std::vector<const RunRecord*>> groups;
    for (const auto& r : records) groups[{to_string(r.problem), to_string(r.backend)}].push_back(&r);

    std::vector<std::filesystem::path> written;
    for (auto& [key, rows] : groups) {
        std::stable_sort(rows.begin(), rows.end(),
                         [](const RunRecord* a, const RunRecord* b) { return a->param < b->param; });
        const auto path = dir / (key.first + "_" + key.second + ".dat");
        std::ofstream f(path);
        if (!f) throw CspError("cannot write " + path.string());
        for (const auto* r : rows)
            f << r->param << ' ' << std::fixed << std::setprecision(3) << r->time_ms << ' '
              << r->backtracks << '\n';
        if (!f) throw CspError("write failed for " + path.string());
        written.push_back(path);
    }
    return written;
}

}  // namespace cspkit
