#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rivalnet {

using NodeId = std::int32_t;

/* Undirected simple graph over nodes 0..n-1, stored as sorted adjacency
 * lists. Self loops and parallel edges are rejected at construction.
 * Nodes of degree zero are legal; no connectivity is assumed anywhere. */
class Graph {
public:
    Graph() = default;
    explicit Graph(NodeId node_count) : adj_(checked_count(node_count)) {}

    /* Builds from an edge list. Duplicate pairs (in either orientation) and
     * self loops cause an exception; ids must lie in [0, node_count). */
    static Graph from_edges(NodeId node_count,
                            const std::vector<std::pair<NodeId, NodeId>>& edges);

    NodeId node_count() const { return static_cast<NodeId>(adj_.size()); }
    std::size_t edge_count() const { return edge_count_; }

    std::span<const NodeId> neighbors(NodeId i) const {
        check_node(i);
        return adj_[static_cast<std::size_t>(i)];
    }

    std::size_t degree(NodeId i) const {
        check_node(i);
        return adj_[static_cast<std::size_t>(i)].size();
    }

    /* Binary search on the sorted adjacency row. */
    bool has_edge(NodeId i, NodeId j) const;

    /* Inserts an edge that is known to be absent; keeps rows sorted. */
    void add_edge(NodeId i, NodeId j);

private:
    static std::size_t checked_count(NodeId n) {
        if (n < 0) throw std::invalid_argument("Graph: negative node count");
        return static_cast<std::size_t>(n);
    }

    void check_node(NodeId i) const;

    std::vector<std::vector<NodeId>> adj_;
    std::size_t edge_count_ = 0;
};

/* Discrete power-law degree model P(k) = C k^{-exponent} on 1..max_degree. */
struct DegreeModel {
    double exponent = 0.0;
    double normalization = 0.0; // C
    int max_degree = 0;

    /* Requires exponent > 1 and max_degree >= 1; computes C so the pmf sums
     * to one over the support. */
    static DegreeModel with_support(double exponent, int max_degree);

    double pmf(int k) const;
    double mean_degree() const;
};

struct LoadedGraph {
    Graph graph;
    /* original_ids[i] is the id the input file used for node i; input ids
     * are remapped onto 0..n-1 in ascending order. */
    std::vector<std::int64_t> original_ids;
};

/* Reads a whitespace-separated edge list. Text after '#' on any line is
 * ignored; blank lines are skipped. Duplicate edges and self loops are
 * dropped silently, but every id mentioned becomes a node. Malformed lines
 * and empty inputs raise std::runtime_error naming the offending line. */
LoadedGraph load_edge_list(const std::string& path);

/* Writes one "u v" line per edge with u < v, ordered by (u, v). Nodes of
 * degree zero do not appear, so loading the output recovers the graph only
 * up to trailing isolated nodes. */
void write_edge_list(const std::string& path, const Graph& g);

/* Degree sequence drawn i.i.d. from DegreeModel(lambda, n-1) by inverting
 * the cumulative table, with one unit shaved off a maximal entry if the
 * total comes out odd (stub counts must be even). */
std::vector<int> sample_degree_sequence(NodeId n, double lambda, std::uint64_t seed);

/* Configuration-model graph over a sample_degree_sequence draw, realized
 * by stub matching. Stub pairs forming self loops or parallel edges are
 * rejected and re-matched in later rounds; pairs that keep colliding are
 * grafted in by splitting an existing edge (degrees are preserved). The
 * few stubs that resist even that are discarded, which can leave isolated
 * nodes. Heavy-tailed draws (lambda near 1) routinely exceed what any
 * simple graph can realize, so the output's mean degree can sit well below
 * the model mean; the gap is a property of the degree sequence, not of the
 * matcher. */
Graph generate_power_law(NodeId n, double lambda, std::uint64_t seed);

} // namespace rivalnet
