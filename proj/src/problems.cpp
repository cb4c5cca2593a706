#include "cspkit/problems.hpp"

#include <fstream>
#include <random>
#include <sstream>

namespace cspkit {

void Graph::add_edge(int u, int v) {
    if (u == v) throw CspError("self-loop on vertex " + std::to_string(u));
    if (u < 0 || v < 0 || u >= n_vertices || v >= n_vertices)
        throw CspError("edge endpoint out of range");
    edges.insert({std::min(u, v), std::max(u, v)});
}

Graph triangle() { return complete_graph(3); }

Graph complete_graph(int n) {
    Graph g{n, {}};
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
    return g;
}

int class_of(const GenConfig& cfg, int vertex) { return vertex % cfg.classes; }

Graph gen_graph(const GenConfig& cfg) {
    if (cfg.n_vertices < 0) throw CspError("negative vertex count");
    if (!(cfg.edge_prob >= 0.0 && cfg.edge_prob <= 1.0)) throw CspError("edge probability outside [0,1]");
    if (cfg.classes < 1) throw CspError("class count must be positive");
    std::mt19937_64 rng(cfg.seed);
    Graph g{cfg.n_vertices, {}};
    for (int u = 0; u < cfg.n_vertices; ++u) {
        for (int v = u + 1; v < cfg.n_vertices; ++v) {
            if (class_of(cfg, u) == class_of(cfg, v)) continue;
            const double draw = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            if (draw < cfg.edge_prob) g.add_edge(u, v);
        }
    }
    return g;
}

namespace {

std::vector<std::string> one_based_names(int n) {
    std::vector<std::string> names;
    for (int i = 1; i <= n; ++i) names.push_back(std::to_string(i));
    return names;
}

}  // namespace

CspSpec queens_spec(int n) {
    if (n < 1) throw CspError("queens needs n >= 1");
    CspSpec s;
    s.sorts.push_back({"col", n, one_based_names(n)});
    s.sorts.push_back({"row", n, one_based_names(n)});
    s.funcs.push_back({"pos", {0}, 1});
    const auto c1 = Expr::var(0), c2 = Expr::var(1);
    const auto p1 = Expr::apply(0, c1), p2 = Expr::apply(0, c2);
    s.axioms.push_back({"safe",
                        {{"C1", 0}, {"C2", 0}},
                        {Comparison{CmpOp::Lt, c1, c2}},
                        {Comparison{CmpOp::Ne, p1, p2},
                         Comparison{CmpOp::Ne, Expr::abs(p1 - p2), c2 - c1}}});
    return s;
}

CspSpec coloring_spec(const Graph& g, int k) {
    if (k < 1) throw CspError("coloring needs k >= 1");
    CspSpec s;
    s.sorts.push_back({"vertex", g.n_vertices, one_based_names(g.n_vertices)});
    s.sorts.push_back({"color", k, one_based_names(k)});
    s.funcs.push_back({"col", {0}, 1});
    FactRelation edge{"edge", {0, 0}, {}};
    for (const auto& [u, v] : g.edges) edge.tuples.insert({u, v});
    s.relations.push_back(std::move(edge));
    s.axioms.push_back({"proper",
                        {{"V1", 0}, {"V2", 0}},
                        {RelAtom{0, {0, 1}}},
                        {Comparison{CmpOp::Ne, Expr::apply(0, Expr::var(0)),
                                    Expr::apply(0, Expr::var(1))}}});
    return s;
}

FdStore queens_fd(int n) {
    if (n < 1) throw CspError("queens needs n >= 1");
    FdStore store;
    for (int i = 0; i < n; ++i) store.add_var(0, n - 1);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const auto x = static_cast<FdVarId>(i), y = static_cast<FdVarId>(j);
            // A wipe-out leaves an empty domain behind; labeling then finds nothing.
            (void)store.post(NotEqual{x, y});
            (void)store.post(AbsDiffNotEqual{x, y, j - i});
        }
    }
    return store;
}

FdStore coloring_fd(const Graph& g, int k) {
    if (k < 1) throw CspError("coloring needs k >= 1");
    FdStore store;
    for (int v = 0; v < g.n_vertices; ++v) store.add_var(0, k - 1);
    for (const auto& [u, v] : g.edges)
        (void)store.post(NotEqual{static_cast<FdVarId>(u), static_cast<FdVarId>(v)});
    return store;
}

ParseError::ParseError(std::size_t line, const std::string& msg)
    : CspError("line " + std::to_string(line) + ": " + msg), line_(line) {}

Graph read_dimacs(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    Graph g;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag == "c") continue;
        if (tag == "p") {
            std::string format;
            long long n = -1, m = -1;
            if (have_header) throw ParseError(lineno, "duplicate problem line");
            if (!(ls >> format >> n >> m) || (format != "edge" && format != "col") || n < 0 || m < 0)
                throw ParseError(lineno, "malformed problem line");
            g.n_vertices = static_cast<int>(n);
            have_header = true;
        } else if (tag == "e") {
            if (!have_header) throw ParseError(lineno, "edge before problem line");
            long long u = 0, v = 0;
            if (!(ls >> u >> v)) throw ParseError(lineno, "malformed edge line");
            if (u < 1 || v < 1 || u > g.n_vertices || v > g.n_vertices)
                throw ParseError(lineno, "edge endpoint out of range");
            if (u == v) throw ParseError(lineno, "self-loop");
            g.add_edge(static_cast<int>(u - 1), static_cast<int>(v - 1));
        } else {
            throw ParseError(lineno, "unknown line type '" + tag + "'");
        }
        std::string extra;
        if (ls >> extra) throw ParseError(lineno, "trailing tokens");
    }
    if (!have_header) throw ParseError(lineno, "missing problem line");
    return g;
}

std::string write_dimacs(const Graph& g) {
    std::ostringstream os;
    os << "p edge " << g.n_vertices << ' ' << g.edges.size() << '\n';
    for (const auto& [u, v] : g.edges) os << "e " << u + 1 << ' ' << v + 1 << '\n';
    return os.str();
}

Graph read_dimacs_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw CspError("cannot open " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return read_dimacs(buf.str());
}

void write_dimacs_file(const Graph& g, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw CspError("cannot write " + path);
    f << write_dimacs(g);
    if (!f) throw CspError("write failed for " + path);
}

}  // namespace cspkit
