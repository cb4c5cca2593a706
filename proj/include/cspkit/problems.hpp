#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cspkit/fd.hpp"
#include "cspkit/ir.hpp"

namespace cspkit {

struct Graph {
    int n_vertices = 0;
    std::set<std::pair<int, int>> edges;  // normalized: first < second

    void add_edge(int u, int v);
    std::size_t edge_count() const { return edges.size(); }

    friend bool operator==(const Graph&, const Graph&) = default;
};

Graph triangle();
Graph complete_graph(int n);

struct GenConfig {
    int n_vertices = 10;
    double edge_prob = 0.2;
    std::uint64_t seed = 1;
    int classes = 4;
};

// Vertices are split round-robin into cfg.classes classes (v % classes).
// Cross-class pairs (u < v, lexicographic order) are drawn from
// std::mt19937_64 seeded with cfg.seed: one 64-bit output per pair, its top
// 53 bits scaled to [0, 1), accepted when below edge_prob. Intra-class pairs
// are never drawn, so the class map is a proper coloring.
Graph gen_graph(const GenConfig& cfg);

int class_of(const GenConfig& cfg, int vertex);

// Sorts: "col" and "row" of size n (display names 1..n); pos: col -> row;
// axiom C1 < C2 -> pos(C1) != pos(C2), |pos(C1) - pos(C2)| != C2 - C1.
CspSpec queens_spec(int n);

// Sorts "vertex" (n) and "color" (k); fact relation edge/2; col: vertex ->
// color; axiom edge(V1,V2) -> col(V1) != col(V2).
CspSpec coloring_spec(const Graph& g, int k);

// Direct finite-domain models of the same problems, one variable per
// column / vertex.
FdStore queens_fd(int n);
FdStore coloring_fd(const Graph& g, int k);

class ParseError : public CspError {
public:
    ParseError(std::size_t line, const std::string& msg);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// DIMACS "col" format: `c` comments, one `p edge N M` header, `e U V` lines
// with 1-based vertices.
Graph read_dimacs(std::string_view text);
std::string write_dimacs(const Graph& g);

Graph read_dimacs_file(const std::string& path);
void write_dimacs_file(const Graph& g, const std::string& path);

}  // namespace cspkit
