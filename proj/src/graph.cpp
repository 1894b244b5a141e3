#include "dualdec/graph.hpp"

#include <algorithm>
#include <sstream>

#include "dualdec/errors.hpp"
#include "dualdec/rng.hpp"

namespace dualdec {

int Graph::neighbor_pos(int i, int j) const {
    const auto& nbrs = adjacency[i];
    auto it = std::lower_bound(nbrs.begin(), nbrs.end(), j);
    if (it == nbrs.end() || *it != j) return -1;
    return static_cast<int>(it - nbrs.begin());
}

Graph make_graph(int n, std::vector<std::pair<int, int>> edges) {
    if (n < 1) throw InvalidSize("graph: node count must be >= 1, got " + std::to_string(n));
    for (auto& [i, j] : edges) {
        if (i == j) throw InvalidSize("graph: self-loop at node " + std::to_string(i + 1));
        if (i < 0 || j < 0 || i >= n || j >= n)
            throw InvalidSize("graph: node out of range in edge (" + std::to_string(i + 1) + ", " +
                              std::to_string(j + 1) + ")");
        if (i > j) std::swap(i, j);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    Graph g;
    g.n = n;
    g.edges = std::move(edges);
    g.adjacency.assign(n, {});
    for (auto [i, j] : g.edges) {
        g.adjacency[i].push_back(j);
        g.adjacency[j].push_back(i);
    }
    for (auto& nbrs : g.adjacency) std::sort(nbrs.begin(), nbrs.end());
    return g;
}

bool is_connected(const Graph& g) {
    if (g.n <= 1) return true;
    std::vector<char> seen(g.n, 0);
    std::vector<int> stack = {0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : g.adjacency[v]) {
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                stack.push_back(w);
            }
        }
    }
    return reached == g.n;
}

Graph complete(int n) {
    if (n < 2) throw InvalidSize("complete: need n >= 2, got " + std::to_string(n));
    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    return make_graph(n, std::move(edges));
}

Graph ring(int n) {
    if (n < 3) throw InvalidSize("ring: need n >= 3, got " + std::to_string(n));
    std::vector<std::pair<int, int>> edges;
    edges.reserve(n);
    for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
    return make_graph(n, std::move(edges));
}

Graph erdos_renyi(int n, double p, std::uint64_t seed, int max_retries, int* retries_out) {
    if (n < 2) throw InvalidSize("erdos_renyi: need n >= 2, got " + std::to_string(n));
    if (p < 0.0 || p > 1.0)
        throw InvalidSize("erdos_renyi: p must lie in [0, 1], got " + std::to_string(p));

    Rng base(seed);
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        Rng rng = base.split(static_cast<std::uint64_t>(attempt));
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng.bernoulli(p)) edges.emplace_back(i, j);
        Graph g = make_graph(n, std::move(edges));
        if (is_connected(g)) {
            if (retries_out) *retries_out = attempt;
            return g;
        }
    }
    throw ConnectivityFailure("erdos_renyi: no connected sample in " +
                              std::to_string(max_retries) + " attempts (n=" + std::to_string(n) +
                              ", p=" + std::to_string(p) + "); p is likely too small");
}

DirectedEdgeIndex::DirectedEdgeIndex(const Graph& g) : n_(g.n) {
    pairs_.reserve(2 * g.edges.size());
    for (auto [i, j] : g.edges) {
        lookup_[static_cast<std::int64_t>(i) * n_ + j] = static_cast<int>(pairs_.size());
        pairs_.emplace_back(i, j);
        lookup_[static_cast<std::int64_t>(j) * n_ + i] = static_cast<int>(pairs_.size());
        pairs_.emplace_back(j, i);
    }
}

int DirectedEdgeIndex::index(int i, int j) const {
    auto it = lookup_.find(static_cast<std::int64_t>(i) * n_ + j);
    if (it == lookup_.end())
        throw InvalidSize("directed edge index: (" + std::to_string(i + 1) + ", " +
                          std::to_string(j + 1) + ") is not an edge");
    return it->second;
}

std::string to_edge_list(const Graph& g) {
    std::ostringstream out;
    for (auto [i, j] : g.edges) out << (i + 1) << ' ' << (j + 1) << '\n';
    return out.str();
}

Graph graph_from_edge_list(const std::string& text, int n) {
    std::vector<std::pair<int, int>> edges;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        long i = 0, j = 0;
        if (!(ls >> i)) continue;  // blank line
        if (!(ls >> j))
            throw InvalidSize("edge list line " + std::to_string(lineno) +
                              ": expected two node ids, got '" + line + "'");
        std::string rest;
        if (ls >> rest)
            throw InvalidSize("edge list line " + std::to_string(lineno) + ": trailing text '" +
                              rest + "'");
        if (i < 1 || j < 1 || i > n || j > n)
            throw InvalidSize("edge list line " + std::to_string(lineno) + ": node out of 1.." +
                              std::to_string(n));
        edges.emplace_back(static_cast<int>(i - 1), static_cast<int>(j - 1));
    }
    return make_graph(n, std::move(edges));
}

}  // namespace dualdec
