#pragma once

#include "rivalnet/graph.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rivalnet {

/* Second-order random walk controls. return_bias (often written p) scales
 * stepping back to the previous node, inout_bias (q) scales stepping to
 * nodes not adjacent to it. Both at 1 reduce to a plain uniform walk. */
struct WalkParams {
    double return_bias = 1.0;
    double inout_bias = 1.0;
    int walk_length = 80;    // nodes per walk, including the start
    int walks_per_node = 10;
    int window = 10;         // co-occurrence radius, in walk positions

    void validate() const;
};

using Walk = std::vector<NodeId>;

/* walks_per_node walks from every node. The first step is uniform over
 * neighbors; later steps weight a candidate x reached from v (having
 * arrived via u) by 1/return_bias if x == u, by 1 if x is adjacent to u,
 * and by 1/inout_bias otherwise. A walk from an isolated node is just the
 * singleton [start]. Walk (node, repeat) pairs get independent RNG
 * streams, so the output is reproducible and order-independent. */
std::vector<Walk> sample_walks(const Graph& g, const WalkParams& params, std::uint64_t seed);

/* Co-occurrence multisets: j is counted in of(i) once for every walk
 * position of i that has j within `window` positions, j != i. The
 * construction is symmetric: count(i, j) == count(j, i). */
class NeighborhoodSet {
public:
    struct Entry {
        NodeId node;
        std::int32_t count;
    };

    static NeighborhoodSet from_walks(std::span<const Walk> walks, int window,
                                      NodeId node_count);

    std::span<const Entry> of(NodeId i) const { return entries_[static_cast<std::size_t>(i)]; }
    std::int64_t size_of(NodeId i) const { return totals_[static_cast<std::size_t>(i)]; }
    NodeId node_count() const { return static_cast<NodeId>(entries_.size()); }

private:
    std::vector<std::vector<Entry>> entries_;
    std::vector<std::int64_t> totals_;
};

/* Dense row-major embedding matrix, one dim-vector per node. */
struct EmbeddingSet {
    int dim = 0;
    NodeId nodes = 0;
    std::vector<double> data;

    std::span<const double> vec(NodeId i) const {
        return {data.data() + static_cast<std::size_t>(i) * dim, static_cast<std::size_t>(dim)};
    }
    std::span<double> vec(NodeId i) {
        return {data.data() + static_cast<std::size_t>(i) * dim, static_cast<std::size_t>(dim)};
    }
};

double squared_distance(std::span<const double> a, std::span<const double> b);

/* Training objective: with l(i,j) = squared distance,
 *   sum_i [ -sum_{j in N(i)} l(i,j) - |N(i)| log sum_w exp(-l(i,w)) ],
 * the log running over every node w (including w == i). Maximized by
 * gradient ascent. O(n^2 dim) per evaluation. */
double objective(const EmbeddingSet& emb, const NeighborhoodSet& nbhd);

/* Gradient of the objective in the layout of EmbeddingSet::data. Sums to
 * zero across nodes coordinate-wise (the objective is translation
 * invariant). */
std::vector<double> objective_gradient(const EmbeddingSet& emb, const NeighborhoodSet& nbhd);

struct OptimizeOptions {
    int dim = 8;
    int epochs = 10;
    double learning_rate = 1e-3;
};

/* Full pipeline: walks -> neighborhoods -> full-batch gradient ascent from
 * a uniform [-0.5/dim, 0.5/dim] initialization. Throws if the objective
 * leaves the finite range, naming the epoch. */
EmbeddingSet optimize(const Graph& g, const WalkParams& walk_params,
                      const OptimizeOptions& options, std::uint64_t seed);

/* Isotropic Gaussian fit. mean is the coordinate-wise average, variance
 * the per-coordinate mean squared deviation (1/(n*dim) sum_i |v_i - u|^2).
 * Requires at least two nodes and a non-degenerate cloud. */
struct LatentModel {
    std::vector<double> mean;
    double variance = 0.0;
};

LatentModel fit_gaussian(const EmbeddingSet& emb);

/* Text persistence: header "n dim", then one "id v_1 ... v_dim" line per
 * node in id order. Round-trips exactly. */
void write_embeddings(const std::string& path, const EmbeddingSet& emb);
EmbeddingSet read_embeddings(const std::string& path);

} // namespace rivalnet
