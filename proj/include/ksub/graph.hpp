#ifndef KSUB_GRAPH_HPP
#define KSUB_GRAPH_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ksub {

/// Immutable undirected simple graph with dense node ids 0..n-1.
/// Adjacency lists are sorted ascending; no self-loops, no parallel edges.
/// All queries are pure reads, safe for concurrent use.
class Graph {
public:
    Graph() = default;

    /// Build from a list of (u,v) pairs over ids 0..n-1.
    /// Self-loops and duplicate edges are dropped.
    static Graph from_edges(std::uint32_t n,
                            std::vector<std::pair<std::uint32_t, std::uint32_t>> edges);

    /// Same, but records the caller's id-remap table (one original id per
    /// dense node id) instead of the identity mapping.
    static Graph from_edges(std::uint32_t n,
                            std::vector<std::pair<std::uint32_t, std::uint32_t>> edges,
                            std::vector<std::uint64_t> original_ids);

    /// Parse "u v" per line, '#' comments ignored. Ids are remapped to
    /// 0..n-1 in first-appearance order; the remap table is retained.
    static Graph from_edge_list(std::string_view text);

    std::uint32_t node_count() const { return n_; }
    std::uint64_t edge_count() const { return m_; }

    std::span<const std::uint32_t> neighbors(std::uint32_t v) const;
    std::uint32_t degree(std::uint32_t v) const;
    std::uint32_t max_degree() const;
    bool has_edge(std::uint32_t u, std::uint32_t v) const;

    bool connected() const;

    /// Exact diameter via BFS from every node. Throws on disconnected input.
    std::uint32_t diameter() const;

    /// True iff the subgraph induced by `nodes` (sorted, distinct) is
    /// connected. O(k^2 log Delta) for |nodes| = k. Throws on empty input.
    bool is_connected_induced(std::span<const std::uint32_t> nodes) const;

    /// Original ids before dense remapping (identity for from_edges).
    const std::vector<std::uint64_t>& original_ids() const { return original_ids_; }

    /// Flat edge list (u < v), in adjacency order.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges() const;

private:
    std::uint32_t n_ = 0;
    std::uint64_t m_ = 0;
    std::vector<std::vector<std::uint32_t>> adj_;
    std::vector<std::uint64_t> original_ids_;
};

} // namespace ksub

#endif
