#include "ksub/datasets.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace ksub {

namespace {

constexpr std::pair<std::uint32_t, std::uint32_t> kKarateEdges[] = {
    {0, 1},   {0, 2},   {0, 3},   {0, 4},   {0, 5},   {0, 6},   {0, 7},
    {0, 8},   {0, 10},  {0, 11},  {0, 12},  {0, 13},  {0, 17},  {0, 19},
    {0, 21},  {0, 31},  {1, 2},   {1, 3},   {1, 7},   {1, 13},  {1, 17},
    {1, 19},  {1, 21},  {1, 30},  {2, 3},   {2, 7},   {2, 8},   {2, 9},
    {2, 13},  {2, 27},  {2, 28},  {2, 32},  {3, 7},   {3, 12},  {3, 13},
    {4, 6},   {4, 10},  {5, 6},   {5, 10},  {5, 16},  {6, 16},  {8, 30},
    {8, 32},  {8, 33},  {9, 33},  {13, 33}, {14, 32}, {14, 33}, {15, 32},
    {15, 33}, {18, 32}, {18, 33}, {19, 33}, {20, 32}, {20, 33}, {22, 32},
    {22, 33}, {23, 25}, {23, 27}, {23, 29}, {23, 32}, {23, 33}, {24, 25},
    {24, 27}, {24, 31}, {25, 31}, {26, 29}, {26, 33}, {27, 33}, {28, 31},
    {28, 33}, {29, 32}, {29, 33}, {30, 32}, {30, 33}, {31, 32}, {31, 33},
    {32, 33},
};

} // namespace

const Graph& karate() {
    static const Graph g = [] {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> edges(
            std::begin(kKarateEdges), std::end(kKarateEdges));
        Graph built = Graph::from_edges(34, std::move(edges));
        // Embedded-data checks: |V|, |E|, and connectivity.
        if (built.node_count() != 34 || built.edge_count() != 78 || !built.connected())
            throw std::logic_error("embedded karate graph is corrupt");
        return built;
    }();
    return g;
}

Graph generate_ba(std::uint32_t n, std::uint32_t m, std::uint64_t seed) {
    if (m < 1 || n <= m)
        throw std::invalid_argument("generate_ba requires n > m >= 1");
    Rng rng(derive_seed(seed, 0xba));

    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    // Each edge endpoint appears once; uniform draws are degree-proportional.
    std::vector<std::uint32_t> endpoints;
    edges.reserve(static_cast<std::size_t>(m) * n);
    endpoints.reserve(2 * edges.capacity());

    const std::uint32_t seed_nodes = m + 1;
    for (std::uint32_t u = 0; u < seed_nodes; ++u) {
        for (std::uint32_t v = u + 1; v < seed_nodes; ++v) {
            edges.emplace_back(u, v);
            endpoints.push_back(u);
            endpoints.push_back(v);
        }
    }

    std::vector<std::uint32_t> chosen;
    for (std::uint32_t t = seed_nodes; t < n; ++t) {
        chosen.clear();
        while (chosen.size() < m) {
            std::uint32_t cand = endpoints[rng.below(endpoints.size())];
            if (std::find(chosen.begin(), chosen.end(), cand) == chosen.end())
                chosen.push_back(cand);
        }
        for (std::uint32_t v : chosen) {
            edges.emplace_back(v, t);
            endpoints.push_back(v);
            endpoints.push_back(t);
        }
    }
    return Graph::from_edges(n, std::move(edges));
}

bool SignedGraph::edge_negative(std::uint32_t u, std::uint32_t v) const {
    if (u > v)
        std::swap(u, v);
    const std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | v;
    return std::binary_search(negative_pairs_.begin(), negative_pairs_.end(), key);
}

SignedGraph load_signed_snap(std::string_view text) {
    SignedGraph sg;
    std::unordered_map<std::uint64_t, std::uint32_t> remap;
    std::vector<std::uint64_t> original;
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
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string_view::npos || line[start] == '#')
            continue;

        std::int64_t fields[4];
        const char* p = line.data() + start;
        const char* end = line.data() + line.size();
        for (int i = 0; i < 4; ++i) {
            auto [next, ec] = std::from_chars(p, end, fields[i]);
            if (ec != std::errc{} || next == p)
                throw std::invalid_argument("malformed signed edge list at line " +
                                            std::to_string(line_no));
            p = next;
            if (i < 3) {
                if (p == end || *p != ',')
                    throw std::invalid_argument("malformed signed edge list at line " +
                                                std::to_string(line_no) +
                                                ": expected 4 comma-separated fields");
                ++p;
            }
        }
        if (fields[0] < 0 || fields[1] < 0)
            throw std::invalid_argument("malformed signed edge list at line " +
                                        std::to_string(line_no) + ": negative node id");
        SignedEdge e;
        e.src = intern(static_cast<std::uint64_t>(fields[0]));
        e.dst = intern(static_cast<std::uint64_t>(fields[1]));
        e.rating = static_cast<int>(fields[2]);
        e.time = fields[3];
        if (e.rating < -10 || e.rating > 10)
            ++sg.out_of_range_ratings_;
        sg.directed_.push_back(e);
    }
    if (sg.directed_.empty())
        throw std::invalid_argument("empty signed edge list");

    // Undirected projection: collapse pairs, then assign signs with
    // negative-edge precedence.
    std::unordered_map<std::uint64_t, std::pair<bool, bool>> pair_signs; // {neg, nonzero}
    std::vector<std::pair<std::uint32_t, std::uint32_t>> proj_edges;
    for (const SignedEdge& e : sg.directed_) {
        if (e.src == e.dst)
            continue;
        std::uint32_t u = std::min(e.src, e.dst), v = std::max(e.src, e.dst);
        const std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | v;
        auto [it, inserted] = pair_signs.try_emplace(key, std::pair<bool, bool>{false, false});
        if (inserted)
            proj_edges.emplace_back(u, v);
        it->second.first |= e.rating < 0;
        it->second.second |= e.rating != 0;
    }
    for (const auto& [key, flags] : pair_signs) {
        if (flags.first)
            sg.negative_pairs_.push_back(key);
        if (!flags.second)
            ++sg.zero_rating_pairs_;
    }
    std::sort(sg.negative_pairs_.begin(), sg.negative_pairs_.end());

    const std::uint32_t n = static_cast<std::uint32_t>(original.size());
    Graph proj = Graph::from_edges(n, std::move(proj_edges), std::move(original));
    sg.projection_ = std::move(proj);
    return sg;
}

} // namespace ksub
