#include "rivalnet/graph.hpp"

#include "rivalnet/rng.hpp"

#include <algorithm>
#include <numeric>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace rivalnet {

namespace {

std::uint64_t edge_key(NodeId a, NodeId b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
}

} // namespace

void Graph::check_node(NodeId i) const {
    if (i < 0 || static_cast<std::size_t>(i) >= adj_.size()) {
        throw std::out_of_range("Graph: node " + std::to_string(i) + " out of range [0, " +
                                std::to_string(adj_.size()) + ")");
    }
}

bool Graph::has_edge(NodeId i, NodeId j) const {
    check_node(i);
    check_node(j);
    const auto& row = adj_[static_cast<std::size_t>(i)];
    return std::binary_search(row.begin(), row.end(), j);
}

void Graph::add_edge(NodeId i, NodeId j) {
    check_node(i);
    check_node(j);
    if (i == j) throw std::invalid_argument("Graph: self loop on node " + std::to_string(i));
    auto& ri = adj_[static_cast<std::size_t>(i)];
    auto pos = std::lower_bound(ri.begin(), ri.end(), j);
    if (pos != ri.end() && *pos == j) {
        throw std::invalid_argument("Graph: duplicate edge " + std::to_string(i) + "-" +
                                    std::to_string(j));
    }
    ri.insert(pos, j);
    auto& rj = adj_[static_cast<std::size_t>(j)];
    rj.insert(std::lower_bound(rj.begin(), rj.end(), i), i);
    ++edge_count_;
}

Graph Graph::from_edges(NodeId node_count,
                        const std::vector<std::pair<NodeId, NodeId>>& edges) {
    Graph g(node_count);
    for (const auto& [u, v] : edges) g.add_edge(u, v);
    return g;
}

DegreeModel DegreeModel::with_support(double exponent, int max_degree) {
    if (!(exponent > 1.0)) {
        throw std::invalid_argument("DegreeModel: exponent must exceed 1, got " +
                                    std::to_string(exponent));
    }
    if (max_degree < 1) throw std::invalid_argument("DegreeModel: empty degree support");
    double z = 0.0;
    for (int k = 1; k <= max_degree; ++k) z += std::pow(static_cast<double>(k), -exponent);
    return DegreeModel{exponent, 1.0 / z, max_degree};
}

double DegreeModel::pmf(int k) const {
    if (k < 1 || k > max_degree) return 0.0;
    return normalization * std::pow(static_cast<double>(k), -exponent);
}

double DegreeModel::mean_degree() const {
    double m = 0.0;
    for (int k = 1; k <= max_degree; ++k) m += k * pmf(k);
    return m;
}

LoadedGraph load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_edge_list: cannot open " + path);

    std::vector<std::pair<std::int64_t, std::int64_t>> raw;
    std::string line;
    std::size_t line_no = 0;
    std::map<std::int64_t, NodeId> ids; // ordered: ascending original id
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::int64_t u, v;
        if (!(ls >> u)) continue; // blank or comment-only line
        if (!(ls >> v)) {
            throw std::runtime_error("load_edge_list: " + path + " line " +
                                     std::to_string(line_no) + ": expected two ids");
        }
        std::string extra;
        if (ls >> extra) {
            throw std::runtime_error("load_edge_list: " + path + " line " +
                                     std::to_string(line_no) + ": trailing token '" + extra + "'");
        }
        if (u < 0 || v < 0) {
            throw std::runtime_error("load_edge_list: " + path + " line " +
                                     std::to_string(line_no) + ": negative id");
        }
        ids.emplace(u, 0);
        ids.emplace(v, 0);
        raw.emplace_back(u, v);
    }
    if (ids.empty()) throw std::runtime_error("load_edge_list: " + path + " holds no edges");

    LoadedGraph out;
    out.original_ids.reserve(ids.size());
    NodeId next = 0;
    for (auto& [orig, mapped] : ids) {
        mapped = next++;
        out.original_ids.push_back(orig);
    }

    Graph g(static_cast<NodeId>(ids.size()));
    std::unordered_set<std::uint64_t> seen;
    for (const auto& [u, v] : raw) {
        if (u == v) continue;
        NodeId a = ids[u], b = ids[v];
        if (seen.insert(edge_key(a, b)).second) g.add_edge(a, b);
    }
    out.graph = std::move(g);
    return out;
}

void write_edge_list(const std::string& path, const Graph& g) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_edge_list: cannot open " + path);
    for (NodeId u = 0; u < g.node_count(); ++u) {
        for (NodeId v : g.neighbors(u)) {
            if (v > u) out << u << ' ' << v << '\n';
        }
    }
    if (!out) throw std::runtime_error("write_edge_list: write failed for " + path);
}

std::vector<int> sample_degree_sequence(NodeId n, double lambda, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("sample_degree_sequence: need at least two nodes");
    DegreeModel model = DegreeModel::with_support(lambda, n - 1);

    /* Cumulative table; inversion by binary search. */
    std::vector<double> cdf(static_cast<std::size_t>(model.max_degree));
    double acc = 0.0;
    for (int k = 1; k <= model.max_degree; ++k) {
        acc += model.pmf(k);
        cdf[static_cast<std::size_t>(k - 1)] = acc;
    }
    cdf.back() = 1.0;

    Rng rng = derive_rng(seed, 0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<int> degree(static_cast<std::size_t>(n));
    long long total = 0;
    for (auto& d : degree) {
        auto it = std::lower_bound(cdf.begin(), cdf.end(), unit(rng));
        d = static_cast<int>(it - cdf.begin()) + 1;
        total += d;
    }
    if (total % 2 != 0) {
        /* Stub count must be even; shave one off a maximal entry. */
        auto it = std::max_element(degree.begin(), degree.end());
        --*it;
    }
    return degree;
}

Graph generate_power_law(NodeId n, double lambda, std::uint64_t seed) {
    std::vector<int> degree = sample_degree_sequence(n, lambda, seed);
    Rng rng = derive_rng(seed, 1);

    std::vector<NodeId> stubs;
    stubs.reserve(static_cast<std::size_t>(
        std::accumulate(degree.begin(), degree.end(), std::size_t{0})));
    for (NodeId v = 0; v < n; ++v) {
        for (int k = 0; k < degree[static_cast<std::size_t>(v)]; ++k) stubs.push_back(v);
    }

    std::vector<std::pair<NodeId, NodeId>> edges;
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(stubs.size());
    constexpr int kMatchRounds = 64;
    for (int round = 0; round < kMatchRounds && stubs.size() >= 2; ++round) {
        std::shuffle(stubs.begin(), stubs.end(), rng);
        std::vector<NodeId> rejected;
        for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
            NodeId u = stubs[i], v = stubs[i + 1];
            if (u == v || !seen.insert(edge_key(u, v)).second) {
                rejected.push_back(u);
                rejected.push_back(v);
                continue;
            }
            edges.emplace_back(u, v);
        }
        if (stubs.size() % 2 != 0) rejected.push_back(stubs.back());
        if (rejected.size() == stubs.size()) break; // no progress; swap repair takes over
        stubs = std::move(rejected);
    }

    /* Stubs still unmatched sit on saturated hubs whose random partners are
     * all duplicates by now, so plain re-pairing stalls. Graft each leftover
     * pair in by splitting an existing edge (x, y) into (u, x) and (v, y):
     * degrees stay intact and the edge count rises by one. Pairs that resist
     * repeated grafting attempts are dropped for good. */
    if (stubs.size() >= 2 && !edges.empty()) {
        std::shuffle(stubs.begin(), stubs.end(), rng);
        std::uniform_int_distribution<std::size_t> coin(0, 1);
        for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
            NodeId u = stubs[i], v = stubs[i + 1];
            constexpr int kGraftAttempts = 200;
            for (int attempt = 0; attempt < kGraftAttempts; ++attempt) {
                std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
                std::size_t e = pick(rng);
                auto [x, y] = edges[e];
                if (coin(rng) == 1) std::swap(x, y);
                if (x == u || x == v || y == u || y == v) continue;
                if (seen.contains(edge_key(u, x)) || seen.contains(edge_key(v, y))) continue;
                seen.erase(edge_key(x, y));
                seen.insert(edge_key(u, x));
                seen.insert(edge_key(v, y));
                edges[e] = {u, x};
                edges.emplace_back(v, y);
                break;
            }
        }
    }
    return Graph::from_edges(n, edges);
}

} // namespace rivalnet
