#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace dualdec {

/// Undirected communication topology over nodes {0, ..., n-1}.
/// Nodes are 0-based internally; all text IO (edge lists, logs) is 1-based.
/// Immutable after construction; safe to share across concurrent readers.
struct Graph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;     ///< unordered pairs stored as (i, j), i < j, sorted
    std::vector<std::vector<int>> adjacency;    ///< sorted neighbor lists

    int edge_count() const { return static_cast<int>(edges.size()); }
    int degree(int i) const { return static_cast<int>(adjacency[i].size()); }

    /// Position of neighbor j inside adjacency[i]; -1 when (i, j) is not an edge.
    int neighbor_pos(int i, int j) const;
};

/// Validates node range, rejects self-loops, dedups, builds adjacency.
Graph make_graph(int n, std::vector<std::pair<int, int>> edges);

bool is_connected(const Graph& g);

Graph complete(int n);
Graph ring(int n);

/// G(n, p) conditioned on connectivity by rejection: each attempt draws a
/// fresh deterministic substream; gives up after `max_retries` attempts.
Graph erdos_renyi(int n, double p, std::uint64_t seed, int max_retries = 1000,
                  int* retries_out = nullptr);

/// Dense index over ordered pairs (i, j) with {i, j} an edge: both directions
/// of every edge are present and the index is a bijection onto [0, 2|E|).
class DirectedEdgeIndex {
   public:
    explicit DirectedEdgeIndex(const Graph& g);

    int count() const { return static_cast<int>(pairs_.size()); }
    int index(int i, int j) const;
    const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }

   private:
    std::vector<std::pair<int, int>> pairs_;
    std::unordered_map<std::int64_t, int> lookup_;
    int n_ = 0;
};

/// One "i j" pair per line, 1-based, i < j.
std::string to_edge_list(const Graph& g);
/// Parse the edge-list block; node ids must lie in 1..n.
Graph graph_from_edge_list(const std::string& text, int n);

}  // namespace dualdec
