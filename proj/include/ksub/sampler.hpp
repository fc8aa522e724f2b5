#ifndef KSUB_SAMPLER_HPP
#define KSUB_SAMPLER_HPP

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ksub/bounds.hpp"
#include "ksub/graph.hpp"
#include "ksub/rng.hpp"
#include "ksub/state.hpp"

namespace ksub {

enum class Method { mcmc, psrw, rss, rss_plus };

Method parse_method(std::string_view token); // "mcmc"|"psrw"|"rss"|"rss+"
std::string_view method_token(Method m);

struct SamplerConfig {
    double epsilon = 0.05;
    std::uint64_t seed = 0;
    double step_ratio = 1.0;             // multiplier on theoretical step counts
    std::uint64_t rejection_cap = 1'000'000;
    std::uint64_t psrw_redraw_steps = 1; // chain steps between PSRW redraws
    std::uint64_t max_steps = 0;         // explicit chain-step cap, 0 = none

    void validate() const;
};

/// ceil(step_ratio * bound), clamped by cfg.max_steps. Throws when the
/// scaled bound is unrepresentable and no cap is set.
std::uint64_t planned_steps(const BoundResult& bound, const SamplerConfig& cfg);

/// Shared per-graph precomputation: edge tables for the k=2 base cases and
/// optional materialized state-graph caches for O(1) degree/neighbor
/// lookups. Immutable once caches are attached; safe to share across
/// concurrently running chains.
class SamplerContext {
public:
    explicit SamplerContext(const Graph& g);
    SamplerContext(Graph&&) = delete; // the context only borrows the graph

    const Graph& graph() const { return *g_; }

    /// Upper bound on diam(G) used in the walk bounds: the override if
    /// set, otherwise the exact diameter (computed once, lazily).
    std::uint32_t diameter_bound() const;
    void set_diameter_override(std::uint32_t d) { diam_override_ = d; }

    void attach_cache(const StateGraph& sg);
    const StateGraph* cache_for(std::uint32_t k) const;

    SubgraphState uniform_edge(Rng& rng) const;
    /// Edge (u,v) with probability proportional to d(u)+d(v)-2, i.e. its
    /// degree in G^(2), via a precomputed cumulative-weight table.
    SubgraphState degree_prop_edge(Rng& rng) const;

    std::uint32_t degree_of(const SubgraphState& h) const;
    /// Uniformly random G^(k)-neighbor of h; requires degree(h) > 0.
    SubgraphState random_neighbor(const SubgraphState& h, Rng& rng) const;

    BoundInputs bound_inputs(std::uint32_t k, double epsilon, bool needs_diam) const;

    /// Seed-deterministic start state: greedy BFS expansion from a
    /// uniformly drawn edge until `size` nodes are collected.
    SubgraphState random_connected_state(std::uint32_t size, Rng& rng) const;

private:
    const Graph* g_;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges_;
    std::vector<std::uint64_t> cum_weight_; // prefix sums of d(u)+d(v)-2
    std::uint64_t total_weight_ = 0;
    std::map<std::uint32_t, const StateGraph*> caches_;
    std::optional<std::uint32_t> diam_override_;
    mutable std::optional<std::uint32_t> diam_exact_;
    mutable std::once_flag diam_once_;
};

/// Lazy Metropolis-Hastings walk on G^(k) with uniform stationary
/// distribution. Exposed as a class so experiments can thin one chain.
class McmcChain {
public:
    McmcChain(const SamplerContext& ctx, std::uint32_t k,
              const SamplerConfig& cfg, Rng& rng);
    void advance(std::uint64_t steps, Rng& rng);
    const SubgraphState& current() const { return current_; }

private:
    const SamplerContext* ctx_;
    const StateGraph* cache_;
    std::uint32_t cache_index_ = UINT32_MAX;
    SubgraphState current_;
    std::vector<SubgraphState> nbrs_; // uncached mode only
};

/// Lazy simple random walk on G^(k-1) plus the edge-to-subgraph lift.
class PsrwChain {
public:
    PsrwChain(const SamplerContext& ctx, std::uint32_t k,
              const SamplerConfig& cfg, Rng& rng);
    void advance(std::uint64_t steps, Rng& rng);
    /// Draw a uniform k-subgraph: lift the current edge, accept with
    /// 1/C(m,2), advance `psrw_redraw_steps` per rejection.
    SubgraphState draw(const SamplerConfig& cfg, Rng& rng);

private:
    const SamplerContext* ctx_;
    const StateGraph* cache_;
    std::uint32_t cache_index_ = UINT32_MAX;
    std::uint32_t k_;
    SubgraphState current_;
    std::vector<SubgraphState> nbrs_;
};

SubgraphState mcmc_sampling(const SamplerContext& ctx, std::uint32_t k,
                            const SamplerConfig& cfg, Rng& rng);

enum class RecursionMode { rss, rss_plus };

SubgraphState uniform_sampling(const SamplerContext& ctx, std::uint32_t k,
                               const SamplerConfig& cfg, Rng& rng,
                               RecursionMode mode);

SubgraphState degree_prop_sampling(const SamplerContext& ctx, std::uint32_t k,
                                   const SamplerConfig& cfg, Rng& rng);

SubgraphState degree_prop_sampling_plus(const SamplerContext& ctx, std::uint32_t k,
                                        const SamplerConfig& cfg, Rng& rng);

SubgraphState psrw_sampling(const SamplerContext& ctx, std::uint32_t k,
                            const SamplerConfig& cfg, Rng& rng);

/// Uniform k-subgraph draw with the method's own machinery.
SubgraphState sample_once(const SamplerContext& ctx, std::uint32_t k,
                          Method method, const SamplerConfig& cfg, Rng& rng);

} // namespace ksub

#endif
