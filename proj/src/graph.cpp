#include "ksub/graph.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <queue>
#include <stdexcept>
#include <unordered_map>

namespace ksub {

Graph Graph::from_edges(std::uint32_t n,
                        std::vector<std::pair<std::uint32_t, std::uint32_t>> edges) {
    Graph g;
    g.n_ = n;
    g.adj_.assign(n, {});
    for (auto& [u, v] : edges) {
        if (u >= n || v >= n)
            throw std::invalid_argument("edge endpoint out of range");
        if (u == v)
            continue;
        g.adj_[u].push_back(v);
        g.adj_[v].push_back(u);
    }
    for (auto& nbrs : g.adj_) {
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
        g.m_ += nbrs.size();
    }
    g.m_ /= 2;
    g.original_ids_.resize(n);
    for (std::uint32_t v = 0; v < n; ++v)
        g.original_ids_[v] = v;
    return g;
}

Graph Graph::from_edges(std::uint32_t n,
                        std::vector<std::pair<std::uint32_t, std::uint32_t>> edges,
                        std::vector<std::uint64_t> original_ids) {
    if (original_ids.size() != n)
        throw std::invalid_argument("original_ids size must equal node count");
    Graph g = from_edges(n, std::move(edges));
    g.original_ids_ = std::move(original_ids);
    return g;
}

Graph Graph::from_edge_list(std::string_view text) {
    std::unordered_map<std::uint64_t, std::uint32_t> remap;
    std::vector<std::uint64_t> original;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;

    auto intern = [&](std::uint64_t id) {
        auto [it, inserted] = remap.try_emplace(id, static_cast<std::uint32_t>(original.size()));
        if (inserted)
            original.push_back(id);
        return it->second;
    };

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos)
            eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;

        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string_view::npos || line[start] == '#')
            continue;

        std::uint64_t ids[2];
        const char* p = line.data() + start;
        const char* end = line.data() + line.size();
        for (int i = 0; i < 2; ++i) {
            while (p != end && (*p == ' ' || *p == '\t'))
                ++p;
            auto [next, ec] = std::from_chars(p, end, ids[i]);
            if (ec != std::errc{} || next == p)
                throw std::invalid_argument("malformed edge list at line " +
                                            std::to_string(line_no));
            p = next;
        }
        while (p != end && (*p == ' ' || *p == '\t' || *p == '\r'))
            ++p;
        if (p != end)
            throw std::invalid_argument("malformed edge list at line " +
                                        std::to_string(line_no) + ": trailing tokens");
        const std::uint32_t u = intern(ids[0]);
        const std::uint32_t v = intern(ids[1]);
        edges.emplace_back(u, v);
    }
    if (original.empty())
        throw std::invalid_argument("empty edge list");

    Graph g = from_edges(static_cast<std::uint32_t>(original.size()), std::move(edges));
    g.original_ids_ = std::move(original);
    return g;
}

std::span<const std::uint32_t> Graph::neighbors(std::uint32_t v) const {
    if (v >= n_)
        throw std::invalid_argument("node id out of range");
    return adj_[v];
}

std::uint32_t Graph::degree(std::uint32_t v) const {
    if (v >= n_)
        throw std::invalid_argument("node id out of range");
    return static_cast<std::uint32_t>(adj_[v].size());
}

std::uint32_t Graph::max_degree() const {
    if (n_ == 0)
        throw std::invalid_argument("empty graph");
    std::uint32_t best = 0;
    for (const auto& nbrs : adj_)
        best = std::max(best, static_cast<std::uint32_t>(nbrs.size()));
    return best;
}

bool Graph::has_edge(std::uint32_t u, std::uint32_t v) const {
    if (u >= n_ || v >= n_)
        throw std::invalid_argument("node id out of range");
    const auto& nbrs = adj_[u];
    return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

namespace {

// BFS eccentricity of src; returns UINT32_MAX if not all nodes reached.
std::uint32_t eccentricity(const std::vector<std::vector<std::uint32_t>>& adj,
                           std::uint32_t src, std::vector<std::uint32_t>& dist) {
    dist.assign(adj.size(), UINT32_MAX);
    dist[src] = 0;
    std::queue<std::uint32_t> q;
    q.push(src);
    std::uint32_t ecc = 0;
    std::size_t seen = 1;
    while (!q.empty()) {
        std::uint32_t u = q.front();
        q.pop();
        for (std::uint32_t w : adj[u]) {
            if (dist[w] == UINT32_MAX) {
                dist[w] = dist[u] + 1;
                ecc = std::max(ecc, dist[w]);
                ++seen;
                q.push(w);
            }
        }
    }
    return seen == adj.size() ? ecc : UINT32_MAX;
}

} // namespace

bool Graph::connected() const {
    if (n_ == 0)
        return false;
    std::vector<std::uint32_t> dist;
    return eccentricity(adj_, 0, dist) != UINT32_MAX;
}

std::uint32_t Graph::diameter() const {
    if (n_ == 0)
        throw std::invalid_argument("empty graph");
    std::vector<std::uint32_t> dist;
    std::uint32_t diam = 0;
    for (std::uint32_t v = 0; v < n_; ++v) {
        std::uint32_t ecc = eccentricity(adj_, v, dist);
        if (ecc == UINT32_MAX)
            throw std::runtime_error(
                "graph is disconnected: process components separately or pass a "
                "--diameter override");
        diam = std::max(diam, ecc);
    }
    return diam;
}

bool Graph::is_connected_induced(std::span<const std::uint32_t> nodes) const {
    const std::size_t k = nodes.size();
    if (k == 0)
        throw std::invalid_argument("empty node set");
    if (k == 1)
        return true;

    // Small-k BFS over an adjacency bitmask per member.
    std::uint32_t adj_bits[32];
    if (k > 32)
        throw std::invalid_argument("induced connectivity check limited to 32 nodes");
    for (std::size_t i = 0; i < k; ++i) {
        std::uint32_t bits = 0;
        for (std::size_t j = i + 1; j < k; ++j)
            if (has_edge(nodes[i], nodes[j]))
                bits |= 1u << j;
        adj_bits[i] = bits;
    }
    for (std::size_t i = 1; i < k; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (adj_bits[j] & (1u << i))
                adj_bits[i] |= 1u << j;

    std::uint32_t visited = 1;
    std::uint32_t frontier = 1;
    while (frontier != 0) {
        std::uint32_t next = 0;
        while (frontier != 0) {
            std::uint32_t i = static_cast<std::uint32_t>(std::countr_zero(frontier));
            frontier &= frontier - 1;
            next |= adj_bits[i] & ~visited;
        }
        visited |= next;
        frontier = next;
    }
    return visited == (k == 32 ? ~0u : (1u << k) - 1);
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> Graph::edges() const {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    out.reserve(m_);
    for (std::uint32_t u = 0; u < n_; ++u)
        for (std::uint32_t v : adj_[u])
            if (u < v)
                out.emplace_back(u, v);
    return out;
}

} // namespace ksub
