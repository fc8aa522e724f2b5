#ifndef KSUB_STATE_HPP
#define KSUB_STATE_HPP

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ksub/graph.hpp"

namespace ksub {

/// A connected k-node induced subgraph in canonical form: node ids sorted
/// strictly ascending. Fixed capacity keeps chain steps allocation-free.
class SubgraphState {
public:
    static constexpr std::size_t kMaxNodes = 16;

    SubgraphState() = default;
    SubgraphState(std::initializer_list<std::uint32_t> ids);
    static SubgraphState from_sorted(std::span<const std::uint32_t> ids);

    std::uint32_t size() const { return size_; }
    std::uint32_t operator[](std::uint32_t i) const { return v_[i]; }
    std::span<const std::uint32_t> nodes() const { return {v_.data(), size_}; }
    bool contains(std::uint32_t id) const;

    /// Canonical insert; id must not already be present.
    void insert(std::uint32_t id);
    void erase(std::uint32_t id);

    /// This set with `out` removed and `in` added, in canonical form.
    SubgraphState swapped(std::uint32_t out, std::uint32_t in) const;

    bool operator==(const SubgraphState& o) const;
    std::strong_ordering operator<=>(const SubgraphState& o) const;

    std::string to_string() const;

private:
    std::uint32_t size_ = 0;
    std::array<std::uint32_t, kMaxNodes> v_{};
};

struct SubgraphStateHash {
    std::size_t operator()(const SubgraphState& s) const;
};

/// Checks size, id range, distinctness+order, and induced connectivity.
bool is_valid_state(const Graph& g, const SubgraphState& h);
void require_valid_state(const Graph& g, const SubgraphState& h);

/// All states F with |V_H ∩ V_F| = k-1, canonical, no duplicates.
void state_neighbors(const Graph& g, const SubgraphState& h,
                     std::vector<SubgraphState>& out);
std::vector<SubgraphState> state_neighbors(const Graph& g, const SubgraphState& h);

/// |state_neighbors(g,h)| without materializing the list.
std::uint32_t state_degree(const Graph& g, const SubgraphState& h);

/// Number of nodes whose removal keeps the induced subgraph connected;
/// equals the number of connected (k-1)-subgraphs of h. Always in [2, k].
std::uint32_t removable_count(const Graph& g, const SubgraphState& h);

/// The k-state graph, materialized. States are sorted; adjacency holds
/// indices into `states`.
class StateGraph {
public:
    std::uint32_t k = 0;
    std::vector<SubgraphState> states;
    std::vector<std::vector<std::uint32_t>> adjacency;

    std::uint64_t edge_count() const;
    std::uint32_t degree(std::uint32_t i) const {
        return static_cast<std::uint32_t>(adjacency[i].size());
    }
    std::uint32_t max_degree() const;

    /// Index of a state in `states`, or UINT32_MAX when absent.
    std::uint32_t index_of(const SubgraphState& s) const;

    bool connected() const;
    std::uint32_t diameter() const;

    /// {"k":int,"states":[[ids]],"edges":[[i,j]]}
    std::string to_json() const;
};

/// Materialize V^(k) and E^(k) by connected-subset expansion (each subset
/// visited once). Throws when more than `cap` states are found.
StateGraph enumerate_states(const Graph& g, std::uint32_t k,
                            std::uint64_t cap = 1'000'000);

} // namespace ksub

#endif
