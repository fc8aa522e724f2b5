#ifndef KSUB_DATASETS_HPP
#define KSUB_DATASETS_HPP

#include <cstdint>
#include <string_view>
#include <vector>

#include "ksub/graph.hpp"
#include "ksub/rng.hpp"

namespace ksub {

/// Zachary's karate club graph (34 nodes, 78 edges), embedded.
const Graph& karate();

/// Barabasi-Albert preferential attachment: seed clique on m+1 nodes, then
/// each new node attaches to m distinct existing nodes drawn proportional
/// to current degree (duplicates redrawn). Deterministic per (n, m, seed).
Graph generate_ba(std::uint32_t n, std::uint32_t m, std::uint64_t seed);

struct SignedEdge {
    std::uint32_t src = 0; // dense remapped ids
    std::uint32_t dst = 0;
    int rating = 0;
    std::int64_t time = 0;
};

/// Directed weighted edge list plus its undirected signed projection.
/// Projection sign: negative iff at least one negative directed edge
/// exists between the pair; otherwise positive.
class SignedGraph {
public:
    const std::vector<SignedEdge>& directed_edges() const { return directed_; }
    const Graph& projection() const { return projection_; }
    bool edge_negative(std::uint32_t u, std::uint32_t v) const;

    /// Node pairs whose directed edges all carry rating exactly 0; such
    /// pairs project to positive and are worth flagging in reports.
    std::uint64_t zero_rating_pairs() const { return zero_rating_pairs_; }

    /// Directed edges whose rating falls outside the [-10,10] scale;
    /// kept, but callers should warn.
    std::uint64_t out_of_range_ratings() const { return out_of_range_ratings_; }

    friend SignedGraph load_signed_snap(std::string_view text);

private:
    std::vector<SignedEdge> directed_;
    Graph projection_;
    std::vector<std::uint64_t> negative_pairs_; // sorted keys u<<32|v, u<v
    std::uint64_t zero_rating_pairs_ = 0;
    std::uint64_t out_of_range_ratings_ = 0;
};

/// Parse comma-separated "SOURCE,TARGET,RATING,TIME" lines.
SignedGraph load_signed_snap(std::string_view text);

} // namespace ksub

#endif
