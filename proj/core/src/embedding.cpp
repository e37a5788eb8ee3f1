#include "rivalnet/embedding.hpp"

#include "rivalnet/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace rivalnet {

void WalkParams::validate() const {
    if (!(return_bias > 0.0) || !(inout_bias > 0.0)) {
        throw std::invalid_argument("WalkParams: biases must be positive");
    }
    if (walk_length < 2) throw std::invalid_argument("WalkParams: walk_length must be >= 2");
    if (walks_per_node < 1) throw std::invalid_argument("WalkParams: walks_per_node must be >= 1");
    if (window < 1) throw std::invalid_argument("WalkParams: window must be >= 1");
    if (window >= walk_length) {
        throw std::invalid_argument("WalkParams: window must be smaller than walk_length");
    }
}

namespace {

Walk sample_one_walk(const Graph& g, const WalkParams& params, NodeId start, Rng& rng) {
    Walk walk;
    walk.push_back(start);
    if (g.degree(start) == 0) return walk;

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> cumulative;

    auto first = g.neighbors(start);
    walk.push_back(first[static_cast<std::size_t>(unit(rng) * first.size()) % first.size()]);

    while (static_cast<int>(walk.size()) < params.walk_length) {
        NodeId prev = walk[walk.size() - 2];
        NodeId here = walk.back();
        auto candidates = g.neighbors(here);

        cumulative.clear();
        double total = 0.0;
        for (NodeId x : candidates) {
            double w;
            if (x == prev) {
                w = 1.0 / params.return_bias;
            } else if (g.has_edge(prev, x)) {
                w = 1.0;
            } else {
                w = 1.0 / params.inout_bias;
            }
            total += w;
            cumulative.push_back(total);
        }
        double u = unit(rng) * total;
        auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
        std::size_t idx = std::min(static_cast<std::size_t>(it - cumulative.begin()),
                                   candidates.size() - 1);
        walk.push_back(candidates[idx]);
    }
    return walk;
}

} // namespace

std::vector<Walk> sample_walks(const Graph& g, const WalkParams& params, std::uint64_t seed) {
    params.validate();
    std::vector<Walk> walks;
    walks.reserve(static_cast<std::size_t>(g.node_count()) * params.walks_per_node);
    for (int repeat = 0; repeat < params.walks_per_node; ++repeat) {
        for (NodeId v = 0; v < g.node_count(); ++v) {
            std::uint64_t stream = static_cast<std::uint64_t>(repeat) * g.node_count() +
                                   static_cast<std::uint64_t>(v);
            Rng rng = derive_rng(seed, stream);
            walks.push_back(sample_one_walk(g, params, v, rng));
        }
    }
    return walks;
}

NeighborhoodSet NeighborhoodSet::from_walks(std::span<const Walk> walks, int window,
                                            NodeId node_count) {
    if (window < 1) throw std::invalid_argument("NeighborhoodSet: window must be >= 1");
    std::vector<std::unordered_map<NodeId, std::int32_t>> counts(
        static_cast<std::size_t>(node_count));
    for (const Walk& walk : walks) {
        int len = static_cast<int>(walk.size());
        for (int pos = 0; pos < len; ++pos) {
            NodeId i = walk[static_cast<std::size_t>(pos)];
            int hi = std::min(len - 1, pos + window);
            for (int other = pos + 1; other <= hi; ++other) {
                NodeId j = walk[static_cast<std::size_t>(other)];
                if (i == j) continue;
                ++counts[static_cast<std::size_t>(i)][j];
                ++counts[static_cast<std::size_t>(j)][i];
            }
        }
    }

    NeighborhoodSet out;
    out.entries_.resize(counts.size());
    out.totals_.assign(counts.size(), 0);
    for (std::size_t i = 0; i < counts.size(); ++i) {
        auto& row = out.entries_[i];
        row.reserve(counts[i].size());
        for (const auto& [node, count] : counts[i]) {
            row.push_back({node, count});
            out.totals_[i] += count;
        }
        std::sort(row.begin(), row.end(),
                  [](const Entry& a, const Entry& b) { return a.node < b.node; });
    }
    return out;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        double d = a[k] - b[k];
        s += d * d;
    }
    return s;
}

namespace {

/* Softmax denominators S_i = sum_w exp(-l(i,w)); the self term contributes
 * exp(0), so S_i >= 1 and the logs below are safe. */
std::vector<double> softmax_denominators(const EmbeddingSet& emb) {
    const NodeId n = emb.nodes;
    std::vector<double> s(static_cast<std::size_t>(n), 0.0);
    for (NodeId i = 0; i < n; ++i) {
        double acc = 0.0;
        for (NodeId w = 0; w < n; ++w) {
            acc += std::exp(-squared_distance(emb.vec(i), emb.vec(w)));
        }
        s[static_cast<std::size_t>(i)] = acc;
    }
    return s;
}

} // namespace

double objective(const EmbeddingSet& emb, const NeighborhoodSet& nbhd) {
    if (emb.nodes != nbhd.node_count()) {
        throw std::invalid_argument("objective: embedding/neighborhood size mismatch");
    }
    std::vector<double> s = softmax_denominators(emb);
    double total = 0.0;
    for (NodeId i = 0; i < emb.nodes; ++i) {
        double pair_term = 0.0;
        for (const auto& e : nbhd.of(i)) {
            pair_term += e.count * squared_distance(emb.vec(i), emb.vec(e.node));
        }
        total -= pair_term;
        total -= static_cast<double>(nbhd.size_of(i)) * std::log(s[static_cast<std::size_t>(i)]);
    }
    return total;
}

std::vector<double> objective_gradient(const EmbeddingSet& emb, const NeighborhoodSet& nbhd) {
    if (emb.nodes != nbhd.node_count()) {
        throw std::invalid_argument("objective_gradient: embedding/neighborhood size mismatch");
    }
    const NodeId n = emb.nodes;
    const int dim = emb.dim;
    std::vector<double> grad(emb.data.size(), 0.0);
    std::vector<double> s = softmax_denominators(emb);

    /* Pair attraction: d/dv of -count * l(i,j), applied to both endpoints. */
    for (NodeId i = 0; i < n; ++i) {
        auto vi = emb.vec(i);
        double* gi = grad.data() + static_cast<std::size_t>(i) * dim;
        for (const auto& e : nbhd.of(i)) {
            auto vj = emb.vec(e.node);
            double* gj = grad.data() + static_cast<std::size_t>(e.node) * dim;
            for (int k = 0; k < dim; ++k) {
                double pull = -2.0 * e.count * (vi[k] - vj[k]);
                gi[k] += pull;
                gj[k] -= pull;
            }
        }
    }

    /* Softmax repulsion: d/dv of -|N(i)| log S_i, for both i and each w. */
    for (NodeId i = 0; i < n; ++i) {
        double weight = static_cast<double>(nbhd.size_of(i));
        if (weight == 0.0) continue;
        auto vi = emb.vec(i);
        double* gi = grad.data() + static_cast<std::size_t>(i) * dim;
        double inv_s = 1.0 / s[static_cast<std::size_t>(i)];
        for (NodeId w = 0; w < n; ++w) {
            if (w == i) continue;
            auto vw = emb.vec(w);
            double p = std::exp(-squared_distance(vi, vw)) * inv_s;
            double c = 2.0 * weight * p;
            double* gw = grad.data() + static_cast<std::size_t>(w) * dim;
            for (int k = 0; k < dim; ++k) {
                double diff = vi[k] - vw[k];
                gi[k] += c * diff;
                gw[k] -= c * diff;
            }
        }
    }
    return grad;
}

EmbeddingSet optimize(const Graph& g, const WalkParams& walk_params,
                      const OptimizeOptions& options, std::uint64_t seed) {
    if (options.dim < 1) throw std::invalid_argument("optimize: dim must be >= 1");
    if (options.epochs < 1) throw std::invalid_argument("optimize: epochs must be >= 1");
    if (!(options.learning_rate > 0.0)) {
        throw std::invalid_argument("optimize: learning_rate must be positive");
    }

    std::vector<Walk> walks = sample_walks(g, walk_params, seed);
    NeighborhoodSet nbhd =
        NeighborhoodSet::from_walks(walks, walk_params.window, g.node_count());

    EmbeddingSet emb;
    emb.dim = options.dim;
    emb.nodes = g.node_count();
    emb.data.resize(static_cast<std::size_t>(emb.nodes) * emb.dim);
    Rng rng = derive_rng(seed, 0x9a7e);
    double half = 0.5 / options.dim;
    std::uniform_real_distribution<double> init(-half, half);
    for (double& x : emb.data) x = init(rng);

    for (int epoch = 0; epoch < options.epochs; ++epoch) {
        std::vector<double> grad = objective_gradient(emb, nbhd);
        for (std::size_t k = 0; k < emb.data.size(); ++k) {
            emb.data[k] += options.learning_rate * grad[k];
        }
        double value = objective(emb, nbhd);
        if (!std::isfinite(value)) {
            throw std::runtime_error("optimize: objective diverged at epoch " +
                                     std::to_string(epoch));
        }
    }
    return emb;
}

LatentModel fit_gaussian(const EmbeddingSet& emb) {
    if (emb.nodes < 2) throw std::invalid_argument("fit_gaussian: need at least two nodes");
    LatentModel model;
    model.mean.assign(static_cast<std::size_t>(emb.dim), 0.0);
    for (NodeId i = 0; i < emb.nodes; ++i) {
        auto v = emb.vec(i);
        for (int k = 0; k < emb.dim; ++k) model.mean[static_cast<std::size_t>(k)] += v[k];
    }
    for (double& m : model.mean) m /= emb.nodes;

    double ss = 0.0;
    for (NodeId i = 0; i < emb.nodes; ++i) {
        auto v = emb.vec(i);
        for (int k = 0; k < emb.dim; ++k) {
            double d = v[k] - model.mean[static_cast<std::size_t>(k)];
            ss += d * d;
        }
    }
    model.variance = ss / (static_cast<double>(emb.nodes) * emb.dim);
    if (!(model.variance > 0.0)) {
        throw std::runtime_error("fit_gaussian: degenerate cloud, all vectors coincide");
    }
    return model;
}

void write_embeddings(const std::string& path, const EmbeddingSet& emb) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_embeddings: cannot open " + path);
    out << emb.nodes << ' ' << emb.dim << '\n';
    char buf[32];
    for (NodeId i = 0; i < emb.nodes; ++i) {
        out << i;
        for (double x : emb.vec(i)) {
            std::snprintf(buf, sizeof buf, "%.17g", x);
            out << ' ' << buf;
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write_embeddings: write failed for " + path);
}

EmbeddingSet read_embeddings(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_embeddings: cannot open " + path);
    NodeId n;
    int dim;
    if (!(in >> n >> dim) || n < 1 || dim < 1) {
        throw std::runtime_error("read_embeddings: bad header in " + path);
    }
    EmbeddingSet emb;
    emb.nodes = n;
    emb.dim = dim;
    emb.data.resize(static_cast<std::size_t>(n) * dim);
    for (NodeId i = 0; i < n; ++i) {
        NodeId id;
        if (!(in >> id) || id != i) {
            throw std::runtime_error("read_embeddings: " + path + ": expected row for node " +
                                     std::to_string(i));
        }
        for (int k = 0; k < dim; ++k) {
            if (!(in >> emb.data[static_cast<std::size_t>(i) * dim + k])) {
                throw std::runtime_error("read_embeddings: " + path +
                                         ": truncated row for node " + std::to_string(i));
            }
        }
    }
    return emb;
}

} // namespace rivalnet
