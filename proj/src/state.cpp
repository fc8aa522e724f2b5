#include "ksub/state.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

#include <json.hpp>

namespace ksub {

SubgraphState::SubgraphState(std::initializer_list<std::uint32_t> ids) {
    for (std::uint32_t id : ids)
        insert(id);
}

SubgraphState SubgraphState::from_sorted(std::span<const std::uint32_t> ids) {
    if (ids.size() > kMaxNodes)
        throw std::invalid_argument("state exceeds max supported size");
    SubgraphState s;
    s.size_ = static_cast<std::uint32_t>(ids.size());
    std::copy(ids.begin(), ids.end(), s.v_.begin());
    for (std::uint32_t i = 1; i < s.size_; ++i)
        if (s.v_[i - 1] >= s.v_[i])
            throw std::invalid_argument("state ids must be strictly ascending");
    return s;
}

bool SubgraphState::contains(std::uint32_t id) const {
    const auto* end = v_.data() + size_;
    return std::binary_search(v_.data(), end, id);
}

void SubgraphState::insert(std::uint32_t id) {
    if (size_ >= kMaxNodes)
        throw std::invalid_argument("state exceeds max supported size");
    std::uint32_t i = size_;
    while (i > 0 && v_[i - 1] > id) {
        v_[i] = v_[i - 1];
        --i;
    }
    if (i > 0 && v_[i - 1] == id)
        throw std::invalid_argument("duplicate node id in state");
    v_[i] = id;
    ++size_;
}

void SubgraphState::erase(std::uint32_t id) {
    auto* end = v_.data() + size_;
    auto* it = std::lower_bound(v_.data(), end, id);
    if (it == end || *it != id)
        throw std::invalid_argument("node id not in state");
    std::uint32_t i = static_cast<std::uint32_t>(it - v_.data());
    for (; i + 1 < size_; ++i)
        v_[i] = v_[i + 1];
    --size_;
}

SubgraphState SubgraphState::swapped(std::uint32_t out, std::uint32_t in) const {
    SubgraphState s = *this;
    s.erase(out);
    s.insert(in);
    return s;
}

bool SubgraphState::operator==(const SubgraphState& o) const {
    return size_ == o.size_ &&
           std::equal(v_.begin(), v_.begin() + size_, o.v_.begin());
}

std::strong_ordering SubgraphState::operator<=>(const SubgraphState& o) const {
    return std::lexicographical_compare_three_way(
        v_.begin(), v_.begin() + size_, o.v_.begin(), o.v_.begin() + o.size_);
}

std::string SubgraphState::to_string() const {
    std::string s = "{";
    for (std::uint32_t i = 0; i < size_; ++i) {
        if (i)
            s += ',';
        s += std::to_string(v_[i]);
    }
    s += '}';
    return s;
}

std::size_t SubgraphStateHash::operator()(const SubgraphState& s) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull + s.size();
    for (std::uint32_t i = 0; i < s.size(); ++i) {
        h ^= s[i] + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        h *= 0xff51afd7ed558ccdull;
    }
    return static_cast<std::size_t>(h ^ (h >> 33));
}

bool is_valid_state(const Graph& g, const SubgraphState& h) {
    if (h.size() == 0 || h.size() > g.node_count())
        return false;
    for (std::uint32_t i = 0; i < h.size(); ++i) {
        if (h[i] >= g.node_count())
            return false;
        if (i > 0 && h[i - 1] >= h[i])
            return false;
    }
    return g.is_connected_induced(h.nodes());
}

void require_valid_state(const Graph& g, const SubgraphState& h) {
    if (!is_valid_state(g, h))
        throw std::invalid_argument("invalid subgraph state " + h.to_string());
}

namespace {

// Visits each candidate swap (u out, w in) yielding a valid neighbor state.
// Candidates are (u, w) with w in N(V_H \ {u}) \ V_H, deduplicated per u,
// then filtered by induced connectivity. Distinct (u, w) give distinct sets.
template <typename Fn>
void for_each_neighbor(const Graph& g, const SubgraphState& h, Fn&& fn) {
    const std::uint32_t k = h.size();
    if (k == 1) {
        // G^(1) is G itself.
        for (std::uint32_t w : g.neighbors(h[0]))
            fn(h[0], w);
        return;
    }
    thread_local std::vector<std::uint32_t> cand;
    for (std::uint32_t i = 0; i < k; ++i) {
        const std::uint32_t u = h[i];
        SubgraphState rest = h;
        rest.erase(u);
        cand.clear();
        for (std::uint32_t x : rest.nodes()) {
            for (std::uint32_t w : g.neighbors(x)) {
                if (!h.contains(w))
                    cand.push_back(w);
            }
        }
        std::sort(cand.begin(), cand.end());
        std::uint32_t prev = UINT32_MAX;
        for (const std::uint32_t w : cand) {
            if (w == prev)
                continue;
            prev = w;
            SubgraphState next = rest;
            next.insert(w);
            if (g.is_connected_induced(next.nodes()))
                fn(u, w);
        }
    }
}

} // namespace

void state_neighbors(const Graph& g, const SubgraphState& h,
                     std::vector<SubgraphState>& out) {
    require_valid_state(g, h);
    out.clear();
    for_each_neighbor(g, h, [&](std::uint32_t u, std::uint32_t w) {
        out.push_back(h.swapped(u, w));
    });
    // Canonical order, so an index drawn against this list selects the same
    // state as the same index drawn against a materialized adjacency row.
    std::sort(out.begin(), out.end());
}

std::vector<SubgraphState> state_neighbors(const Graph& g, const SubgraphState& h) {
    std::vector<SubgraphState> out;
    state_neighbors(g, h, out);
    return out;
}

std::uint32_t state_degree(const Graph& g, const SubgraphState& h) {
    require_valid_state(g, h);
    std::uint32_t d = 0;
    for_each_neighbor(g, h, [&](std::uint32_t, std::uint32_t) { ++d; });
    return d;
}

std::uint32_t removable_count(const Graph& g, const SubgraphState& h) {
    if (h.size() < 2)
        throw std::invalid_argument("removable_count requires k >= 2");
    require_valid_state(g, h);
    if (h.size() == 2)
        return 2;
    std::uint32_t m = 0;
    for (std::uint32_t i = 0; i < h.size(); ++i) {
        SubgraphState rest = h;
        rest.erase(h[i]);
        if (g.is_connected_induced(rest.nodes()))
            ++m;
    }
    return m;
}

std::uint64_t StateGraph::edge_count() const {
    std::uint64_t sum = 0;
    for (const auto& a : adjacency)
        sum += a.size();
    return sum / 2;
}

std::uint32_t StateGraph::max_degree() const {
    std::uint32_t best = 0;
    for (const auto& a : adjacency)
        best = std::max(best, static_cast<std::uint32_t>(a.size()));
    return best;
}

std::uint32_t StateGraph::index_of(const SubgraphState& s) const {
    auto it = std::lower_bound(states.begin(), states.end(), s);
    if (it == states.end() || !(*it == s))
        return UINT32_MAX;
    return static_cast<std::uint32_t>(it - states.begin());
}

bool StateGraph::connected() const {
    if (states.empty())
        return false;
    std::vector<char> seen(states.size(), 0);
    std::queue<std::uint32_t> q;
    q.push(0);
    seen[0] = 1;
    std::size_t count = 1;
    while (!q.empty()) {
        std::uint32_t u = q.front();
        q.pop();
        for (std::uint32_t w : adjacency[u]) {
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                q.push(w);
            }
        }
    }
    return count == states.size();
}

std::uint32_t StateGraph::diameter() const {
    if (states.empty())
        throw std::invalid_argument("empty state graph");
    std::vector<std::uint32_t> dist(states.size());
    std::uint32_t diam = 0;
    for (std::uint32_t src = 0; src < states.size(); ++src) {
        std::fill(dist.begin(), dist.end(), UINT32_MAX);
        dist[src] = 0;
        std::queue<std::uint32_t> q;
        q.push(src);
        std::size_t seen = 1;
        while (!q.empty()) {
            std::uint32_t u = q.front();
            q.pop();
            for (std::uint32_t w : adjacency[u]) {
                if (dist[w] == UINT32_MAX) {
                    dist[w] = dist[u] + 1;
                    diam = std::max(diam, dist[w]);
                    ++seen;
                    q.push(w);
                }
            }
        }
        if (seen != states.size())
            throw std::runtime_error("state graph is disconnected");
    }
    return diam;
}

std::string StateGraph::to_json() const {
    nlohmann::json j;
    j["k"] = k;
    auto& js = j["states"] = nlohmann::json::array();
    for (const auto& s : states) {
        nlohmann::json ids = nlohmann::json::array();
        for (std::uint32_t v : s.nodes())
            ids.push_back(v);
        js.push_back(std::move(ids));
    }
    auto& je = j["edges"] = nlohmann::json::array();
    for (std::uint32_t i = 0; i < adjacency.size(); ++i)
        for (std::uint32_t w : adjacency[i])
            if (i < w)
                je.push_back({i, w});
    return j.dump();
}

namespace {

// ESU-style expansion: each connected k-subset is emitted exactly once.
struct Enumerator {
    const Graph& g;
    std::uint32_t k;
    std::uint64_t cap;
    std::vector<SubgraphState>& out;
    std::vector<char> blocked; // in subgraph or already-seen neighborhood
    SubgraphState sub;

    void run() {
        blocked.assign(g.node_count(), 0);
        for (std::uint32_t v = 0; v < g.node_count(); ++v) {
            sub = SubgraphState{};
            sub.insert(v);
            if (k == 1) {
                emit();
                continue;
            }
            std::vector<std::uint32_t> ext;
            std::vector<std::uint32_t> marked;
            blocked[v] = 1;
            marked.push_back(v);
            for (std::uint32_t w : g.neighbors(v)) {
                if (w > v) {
                    ext.push_back(w);
                    blocked[w] = 1;
                    marked.push_back(w);
                }
            }
            extend(v, ext);
            for (std::uint32_t x : marked)
                blocked[x] = 0;
        }
    }

    void extend(std::uint32_t root, std::vector<std::uint32_t>& ext) {
        while (!ext.empty()) {
            std::uint32_t w = ext.back();
            ext.pop_back();
            sub.insert(w);
            if (sub.size() == k) {
                emit();
            } else {
                std::vector<std::uint32_t> next_ext = ext;
                std::vector<std::uint32_t> marked;
                for (std::uint32_t u : g.neighbors(w)) {
                    if (u > root && !blocked[u]) {
                        next_ext.push_back(u);
                        blocked[u] = 1;
                        marked.push_back(u);
                    }
                }
                extend(root, next_ext);
                for (std::uint32_t x : marked)
                    blocked[x] = 0;
            }
            sub.erase(w);
        }
    }

    void emit() {
        if (out.size() >= cap)
            throw std::runtime_error("state enumeration exceeded cap of " +
                                     std::to_string(cap) + " states");
        out.push_back(sub);
    }
};

} // namespace

StateGraph enumerate_states(const Graph& g, std::uint32_t k, std::uint64_t cap) {
    if (k < 1 || k >= g.node_count())
        throw std::invalid_argument("enumerate_states requires 1 <= k < |V|");
    if (k > SubgraphState::kMaxNodes)
        throw std::invalid_argument("k exceeds max supported state size");

    StateGraph sg;
    sg.k = k;
    Enumerator en{g, k, cap, sg.states, {}, {}};
    en.run();
    std::sort(sg.states.begin(), sg.states.end());

    sg.adjacency.resize(sg.states.size());
    std::vector<SubgraphState> nbrs;
    for (std::uint32_t i = 0; i < sg.states.size(); ++i) {
        state_neighbors(g, sg.states[i], nbrs);
        auto& row = sg.adjacency[i];
        row.reserve(nbrs.size());
        for (const auto& f : nbrs) {
            std::uint32_t j = sg.index_of(f);
            if (j == UINT32_MAX)
                throw std::logic_error("neighbor state missing from enumeration");
            row.push_back(j);
        }
        std::sort(row.begin(), row.end());
    }
    return sg;
}

} // namespace ksub
