#include "rivalnet/latent.hpp"

#include "rivalnet/gamma.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>

namespace rivalnet {

DistanceLaw DistanceLaw::for_model(int dim, double variance) {
    if (dim < 1) throw std::invalid_argument("DistanceLaw: dim must be >= 1");
    if (!(variance > 0.0)) throw std::invalid_argument("DistanceLaw: variance must be positive");
    return DistanceLaw{dim / 2.0, 1.0 / (4.0 * variance)};
}

double DistanceLaw::pdf(double z) const {
    if (z < 0.0) return 0.0;
    if (z == 0.0) {
        if (shape > 1.0) return 0.0;
        if (shape == 1.0) return rate;
        return std::numeric_limits<double>::infinity();
    }
    double log_pdf = shape * std::log(rate) + (shape - 1.0) * std::log(z) - rate * z -
                     std::lgamma(shape);
    return std::exp(log_pdf);
}

double DistanceLaw::cdf(double z) const {
    if (z <= 0.0) return 0.0;
    return gamma_p(shape, rate * z);
}

double distance_pdf(double z, int dim, double variance) {
    return DistanceLaw::for_model(dim, variance).pdf(z);
}

double connect_probability(double range, double variance, int dim) {
    if (!(range > 0.0)) throw std::domain_error("connect_probability: range must be positive");
    DistanceLaw law = DistanceLaw::for_model(dim, variance);
    double p = law.cdf(range);
    /* The true value is strictly between 0 and 1 for any positive range;
     * keep callers out of the rounded-off boundaries. */
    const double lowest = std::numeric_limits<double>::min();
    if (p <= 0.0) return lowest;
    double below_one = std::nextafter(1.0, 0.0);
    if (p >= 1.0) return below_one;
    return p;
}

double connect_probability_approx(double range, double variance, int dim) {
    if (!(range > 0.0)) {
        throw std::domain_error("connect_probability_approx: range must be positive");
    }
    if (dim < 1 || !(variance > 0.0)) {
        throw std::domain_error("connect_probability_approx: bad model parameters");
    }
    double a = dim / 2.0 - 1.0;
    double x = range / (4.0 * variance);
    if (std::fabs(x - a) <= 1.0) {
        throw std::domain_error("connect_probability_approx: expansion needs |x - a| > 1, got x=" +
                                std::to_string(x) + " a=" + std::to_string(a));
    }
    double u = x - a;
    double bracket = 1.0 - a / (u * u) + 2.0 * a / (u * u * u);
    /* Assembled in logs; the leading factor overflows well before the
     * result is meaningful otherwise. */
    double log_mag = -x + (a + 1.0) * std::log(x) - std::log(std::fabs(u));
    double tail = std::copysign(std::exp(log_mag), u) * bracket;
    return std::tgamma(dim / 2.0) - tail;
}

ApproxComparison compare_connect_probability(double range, double variance, int dim) {
    ApproxComparison cmp;
    cmp.approx = connect_probability_approx(range, variance, dim);
    cmp.exact = connect_probability(range, variance, dim);
    cmp.relative_error = std::fabs(cmp.approx - cmp.exact) / cmp.exact;
    return cmp;
}

double overload_time(double capacity, double connect_prob) {
    if (!(capacity > 0.0)) throw std::domain_error("overload_time: capacity must be positive");
    if (!(connect_prob > 0.0) || connect_prob > 1.0) {
        throw std::domain_error("overload_time: connect probability must lie in (0, 1]");
    }
    return capacity / connect_prob;
}

OverloadParams OverloadParams::from(double capacity, double connect_prob) {
    return OverloadParams{capacity, connect_prob, overload_time(capacity, connect_prob)};
}

Graph recover_links(const Graph& g, const EmbeddingSet& emb, double range) {
    if (emb.nodes != g.node_count()) {
        throw std::invalid_argument("recover_links: embedding covers " +
                                    std::to_string(emb.nodes) + " nodes, graph has " +
                                    std::to_string(g.node_count()));
    }

    const NodeId n = g.node_count();
    std::vector<std::vector<NodeId>> extra(static_cast<std::size_t>(n));
    for (NodeId i = 0; i < n; ++i) {
        auto vi = emb.vec(i);
        for (NodeId j = i + 1; j < n; ++j) {
            if (squared_distance(vi, emb.vec(j)) < range && !g.has_edge(i, j)) {
                extra[static_cast<std::size_t>(i)].push_back(j);
            }
        }
    }

    Graph out = g;
    for (NodeId i = 0; i < n; ++i) {
        for (NodeId j : extra[static_cast<std::size_t>(i)]) out.add_edge(i, j);
    }
    return out;
}

void write_recovered_edge_list(const std::string& path, const Graph& recovered,
                               const Graph& original) {
    if (recovered.node_count() != original.node_count()) {
        throw std::invalid_argument("write_recovered_edge_list: node count mismatch");
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_recovered_edge_list: cannot open " + path);
    for (NodeId u = 0; u < recovered.node_count(); ++u) {
        for (NodeId v : recovered.neighbors(u)) {
            if (v <= u) continue;
            out << u << ' ' << v;
            if (!original.has_edge(u, v)) out << " # latent";
            out << '\n';
        }
    }
    if (!out) throw std::runtime_error("write_recovered_edge_list: write failed for " + path);
}

} // namespace rivalnet
