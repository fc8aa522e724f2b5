#include "ksub/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ksub {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed ^ (stream * 0x9e3779b97f4a7c15ull + 0x632be59bd9b4e019ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

Method parse_method(std::string_view token) {
    if (token == "mcmc")
        return Method::mcmc;
    if (token == "psrw")
        return Method::psrw;
    if (token == "rss")
        return Method::rss;
    if (token == "rss+")
        return Method::rss_plus;
    throw std::invalid_argument("unknown sampler token: " + std::string(token));
}

std::string_view method_token(Method m) {
    switch (m) {
    case Method::mcmc: return "mcmc";
    case Method::psrw: return "psrw";
    case Method::rss: return "rss";
    case Method::rss_plus: return "rss+";
    }
    return "?";
}

void SamplerConfig::validate() const {
    if (!(epsilon > 0.0) || epsilon >= 1.0)
        throw std::invalid_argument("epsilon must lie in (0,1)");
    if (!(step_ratio >= 0.0) || step_ratio > 1.0)
        throw std::invalid_argument("step_ratio must lie in [0,1]");
    if (rejection_cap == 0)
        throw std::invalid_argument("rejection_cap must be positive");
    if (psrw_redraw_steps == 0)
        throw std::invalid_argument("psrw_redraw_steps must be positive");
}

std::uint64_t planned_steps(const BoundResult& bound, const SamplerConfig& cfg) {
    if (cfg.step_ratio == 0.0)
        return 0;
    constexpr double kLimit = 4.611686018427387904e18; // 2^62
    const double scaled = bound.overflow
                              ? std::numeric_limits<double>::infinity()
                              : cfg.step_ratio * bound.value;
    if (!(scaled <= kLimit)) {
        if (cfg.max_steps > 0)
            return cfg.max_steps;
        throw std::runtime_error(
            "theoretical step count is not representable; lower --step-ratio or "
            "set an explicit step cap");
    }
    std::uint64_t steps = static_cast<std::uint64_t>(std::ceil(scaled));
    if (cfg.max_steps > 0)
        steps = std::min(steps, cfg.max_steps);
    return steps;
}

SamplerContext::SamplerContext(const Graph& g) : g_(&g) {
    edges_ = g.edges();
    if (edges_.empty())
        throw std::invalid_argument("graph has no edges");
    cum_weight_.reserve(edges_.size());
    std::uint64_t acc = 0;
    for (auto [u, v] : edges_) {
        acc += g.degree(u) + g.degree(v) - 2;
        cum_weight_.push_back(acc);
    }
    total_weight_ = acc;
}

std::uint32_t SamplerContext::diameter_bound() const {
    if (diam_override_)
        return *diam_override_;
    std::call_once(diam_once_, [&] { diam_exact_ = g_->diameter(); });
    return *diam_exact_;
}

void SamplerContext::attach_cache(const StateGraph& sg) {
    caches_[sg.k] = &sg;
}

const StateGraph* SamplerContext::cache_for(std::uint32_t k) const {
    auto it = caches_.find(k);
    return it == caches_.end() ? nullptr : it->second;
}

SubgraphState SamplerContext::uniform_edge(Rng& rng) const {
    auto [u, v] = edges_[rng.below(edges_.size())];
    return SubgraphState{u, v};
}

SubgraphState SamplerContext::degree_prop_edge(Rng& rng) const {
    if (total_weight_ == 0)
        return uniform_edge(rng); // every 2-state is isolated in G^(2)
    const std::uint64_t t = rng.below(total_weight_);
    auto it = std::upper_bound(cum_weight_.begin(), cum_weight_.end(), t);
    auto [u, v] = edges_[static_cast<std::size_t>(it - cum_weight_.begin())];
    return SubgraphState{u, v};
}

std::uint32_t SamplerContext::degree_of(const SubgraphState& h) const {
    if (h.size() == 2)
        return g_->degree(h[0]) + g_->degree(h[1]) - 2;
    if (const StateGraph* sg = cache_for(h.size())) {
        std::uint32_t i = sg->index_of(h);
        if (i != UINT32_MAX)
            return sg->degree(i);
    }
    return state_degree(*g_, h);
}

SubgraphState SamplerContext::random_neighbor(const SubgraphState& h, Rng& rng) const {
    if (h.size() == 2) {
        // Neighbors of {a,b}: {a,w} for w in N(a)\{b} and {b,w} for w in N(b)\{a}.
        const std::uint32_t a = h[0], b = h[1];
        const std::uint32_t da = g_->degree(a), db = g_->degree(b);
        const std::uint64_t total = static_cast<std::uint64_t>(da) + db - 2;
        if (total == 0)
            throw std::runtime_error("state " + h.to_string() + " has no neighbors");
        std::uint64_t i = rng.below(total);
        std::uint32_t keep, from, skip;
        if (i < da - 1) {
            keep = a;
            from = a;
            skip = b;
        } else {
            i -= da - 1;
            keep = b;
            from = b;
            skip = a;
        }
        auto nbrs = g_->neighbors(from);
        const auto skip_pos = static_cast<std::uint64_t>(
            std::lower_bound(nbrs.begin(), nbrs.end(), skip) - nbrs.begin());
        const std::uint32_t w = nbrs[i < skip_pos ? i : i + 1];
        return SubgraphState{keep, w};
    }
    if (const StateGraph* sg = cache_for(h.size())) {
        std::uint32_t i = sg->index_of(h);
        if (i != UINT32_MAX) {
            const auto& row = sg->adjacency[i];
            if (row.empty())
                throw std::runtime_error("state " + h.to_string() + " has no neighbors");
            return sg->states[row[rng.below(row.size())]];
        }
    }
    std::vector<SubgraphState> nbrs = state_neighbors(*g_, h);
    if (nbrs.empty())
        throw std::runtime_error("state " + h.to_string() + " has no neighbors");
    return nbrs[rng.below(nbrs.size())];
}

BoundInputs SamplerContext::bound_inputs(std::uint32_t k, double epsilon,
                                         bool needs_diam) const {
    BoundInputs b;
    b.k = k;
    b.delta = g_->max_degree();
    b.diam = needs_diam ? diameter_bound() : 1;
    b.n = g_->node_count();
    b.epsilon = epsilon;
    return b;
}

SubgraphState SamplerContext::random_connected_state(std::uint32_t size,
                                                     Rng& rng) const {
    if (size == 0 || size > g_->node_count())
        throw std::invalid_argument("state size out of range");
    SubgraphState start = uniform_edge(rng);
    if (size == 1)
        return SubgraphState{start[0]};

    SubgraphState s = start;
    std::vector<std::uint32_t> order{start[0], start[1]};
    std::size_t head = 0;
    while (s.size() < size) {
        if (head == order.size())
            throw std::runtime_error("component too small for requested state size");
        std::uint32_t x = order[head++];
        for (std::uint32_t w : g_->neighbors(x)) {
            if (!s.contains(w)) {
                s.insert(w);
                order.push_back(w);
                if (s.size() == size)
                    break;
            }
        }
    }
    return s;
}

namespace {

SubgraphState merge_states(const SubgraphState& v, const SubgraphState& u) {
    SubgraphState h = v;
    for (std::uint32_t x : u.nodes())
        if (!h.contains(x))
            h.insert(x);
    return h;
}

SubgraphState whole_graph_state(const Graph& g) {
    if (!g.connected())
        throw std::invalid_argument("k = |V| requires a connected graph");
    SubgraphState s;
    for (std::uint32_t v = 0; v < g.node_count(); ++v)
        s.insert(v);
    return s;
}

double choose2(std::uint32_t m) {
    return 0.5 * static_cast<double>(m) * (static_cast<double>(m) - 1.0);
}

} // namespace

McmcChain::McmcChain(const SamplerContext& ctx, std::uint32_t k,
                     const SamplerConfig& cfg, Rng& rng)
    : ctx_(&ctx), cache_(ctx.cache_for(k)) {
    (void)cfg;
    current_ = ctx.random_connected_state(k, rng);
    if (cache_) {
        cache_index_ = cache_->index_of(current_);
        if (cache_index_ == UINT32_MAX)
            throw std::logic_error("start state missing from attached cache");
    } else {
        state_neighbors(ctx.graph(), current_, nbrs_);
    }
}

void McmcChain::advance(std::uint64_t steps, Rng& rng) {
    if (cache_) {
        const StateGraph& sg = *cache_;
        for (std::uint64_t s = 0; s < steps; ++s) {
            if (rng.uniform01() < 0.5) {
                const auto& row = sg.adjacency[cache_index_];
                if (row.empty())
                    continue;
                const std::uint32_t next = row[rng.below(row.size())];
                const double dc = static_cast<double>(row.size());
                const double dn = static_cast<double>(sg.degree(next));
                if (rng.uniform01() < dc / dn)
                    cache_index_ = next;
            }
        }
        current_ = sg.states[cache_index_];
        return;
    }
    for (std::uint64_t s = 0; s < steps; ++s) {
        if (rng.uniform01() < 0.5) {
            if (nbrs_.empty())
                continue;
            const SubgraphState& next = nbrs_[rng.below(nbrs_.size())];
            const double dc = static_cast<double>(nbrs_.size());
            const double dn = static_cast<double>(state_degree(ctx_->graph(), next));
            if (rng.uniform01() < dc / dn) {
                current_ = next;
                state_neighbors(ctx_->graph(), current_, nbrs_);
            }
        }
    }
}

SubgraphState mcmc_sampling(const SamplerContext& ctx, std::uint32_t k,
                            const SamplerConfig& cfg, Rng& rng) {
    cfg.validate();
    const std::uint32_t n = ctx.graph().node_count();
    if (k < 2 || k > n)
        throw std::invalid_argument("mcmc_sampling requires 2 <= k <= |V|");
    if (k == n)
        return whole_graph_state(ctx.graph());
    const std::uint64_t steps =
        planned_steps(bound_mcmc(ctx.bound_inputs(k, cfg.epsilon, true)), cfg);
    McmcChain chain(ctx, k, cfg, rng);
    chain.advance(steps, rng);
    return chain.current();
}

SubgraphState uniform_sampling(const SamplerContext& ctx, std::uint32_t k,
                               const SamplerConfig& cfg, Rng& rng,
                               RecursionMode mode) {
    cfg.validate();
    const std::uint32_t n = ctx.graph().node_count();
    if (k < 2 || k > n)
        throw std::invalid_argument("uniform_sampling requires 2 <= k <= |V|");
    if (k == n)
        return whole_graph_state(ctx.graph());
    if (k == 2)
        return ctx.uniform_edge(rng);

    for (std::uint64_t attempt = 0; attempt < cfg.rejection_cap; ++attempt) {
        SubgraphState v = mode == RecursionMode::rss
                              ? degree_prop_sampling(ctx, k - 1, cfg, rng)
                              : degree_prop_sampling_plus(ctx, k - 1, cfg, rng);
        SubgraphState u = ctx.random_neighbor(v, rng);
        SubgraphState h = merge_states(v, u);
        const std::uint32_t m = removable_count(ctx.graph(), h);
        if (rng.uniform01() < 1.0 / choose2(m))
            return h;
    }
    throw std::runtime_error("uniform_sampling exceeded the rejection cap");
}

SubgraphState degree_prop_sampling(const SamplerContext& ctx, std::uint32_t k,
                                   const SamplerConfig& cfg, Rng& rng) {
    cfg.validate();
    if (k == 2)
        return ctx.degree_prop_edge(rng);
    const std::uint64_t steps =
        planned_steps(bound_degree_prop(ctx.bound_inputs(k, cfg.epsilon, false)), cfg);

    SubgraphState v_c = uniform_sampling(ctx, k, cfg, rng, RecursionMode::rss);
    double d_c = static_cast<double>(ctx.degree_of(v_c));
    for (std::uint64_t s = 0; s < steps; ++s) {
        if (rng.uniform01() < 0.5) {
            SubgraphState v_n = uniform_sampling(ctx, k, cfg, rng, RecursionMode::rss);
            const double d_n = static_cast<double>(ctx.degree_of(v_n));
            if (d_c == 0.0 || rng.uniform01() < d_n / d_c) {
                v_c = v_n;
                d_c = d_n;
            }
        }
    }
    return v_c;
}

SubgraphState degree_prop_sampling_plus(const SamplerContext& ctx, std::uint32_t k,
                                        const SamplerConfig& cfg, Rng& rng) {
    cfg.validate();
    if (k == 2)
        return ctx.degree_prop_edge(rng);
    const std::uint64_t steps =
        planned_steps(bound_rss_plus(ctx.bound_inputs(k, cfg.epsilon, false)), cfg);

    auto propose = [&](SubgraphState& h, double& f) {
        SubgraphState v = degree_prop_sampling_plus(ctx, k - 1, cfg, rng);
        SubgraphState u = ctx.random_neighbor(v, rng);
        h = merge_states(v, u);
        const double d = static_cast<double>(ctx.degree_of(h));
        const std::uint32_t m = removable_count(ctx.graph(), h);
        f = d / choose2(m);
    };

    SubgraphState h_c;
    double f_c = 0.0;
    propose(h_c, f_c);
    for (std::uint64_t s = 0; s < steps; ++s) {
        if (rng.uniform01() < 0.5)
            continue;
        SubgraphState h_n;
        double f_n = 0.0;
        propose(h_n, f_n);
        if (f_c == 0.0 || rng.uniform01() < f_n / f_c) {
            h_c = h_n;
            f_c = f_n;
        }
    }
    return h_c;
}

PsrwChain::PsrwChain(const SamplerContext& ctx, std::uint32_t k,
                     const SamplerConfig& cfg, Rng& rng)
    : ctx_(&ctx), cache_(ctx.cache_for(k - 1)), k_(k) {
    (void)cfg;
    current_ = ctx.random_connected_state(k - 1, rng);
    if (cache_) {
        cache_index_ = cache_->index_of(current_);
        if (cache_index_ == UINT32_MAX)
            throw std::logic_error("start state missing from attached cache");
    } else if (current_.size() > 2) {
        state_neighbors(ctx.graph(), current_, nbrs_);
    }
}

void PsrwChain::advance(std::uint64_t steps, Rng& rng) {
    if (cache_) {
        const StateGraph& sg = *cache_;
        for (std::uint64_t s = 0; s < steps; ++s) {
            if (rng.uniform01() < 0.5) {
                const auto& row = sg.adjacency[cache_index_];
                if (!row.empty())
                    cache_index_ = row[rng.below(row.size())];
            }
        }
        current_ = sg.states[cache_index_];
        return;
    }
    for (std::uint64_t s = 0; s < steps; ++s) {
        if (rng.uniform01() < 0.5) {
            if (current_.size() == 2) {
                current_ = ctx_->random_neighbor(current_, rng);
            } else {
                if (nbrs_.empty())
                    continue;
                current_ = nbrs_[rng.below(nbrs_.size())];
                state_neighbors(ctx_->graph(), current_, nbrs_);
            }
        }
    }
}

SubgraphState PsrwChain::draw(const SamplerConfig& cfg, Rng& rng) {
    for (std::uint64_t attempt = 0; attempt < cfg.rejection_cap; ++attempt) {
        SubgraphState u = ctx_->random_neighbor(current_, rng);
        SubgraphState h = merge_states(current_, u);
        const std::uint32_t m = removable_count(ctx_->graph(), h);
        if (rng.uniform01() < 1.0 / choose2(m))
            return h;
        advance(cfg.psrw_redraw_steps, rng);
    }
    throw std::runtime_error("psrw_sampling exceeded the rejection cap");
}

SubgraphState psrw_sampling(const SamplerContext& ctx, std::uint32_t k,
                            const SamplerConfig& cfg, Rng& rng) {
    cfg.validate();
    const std::uint32_t n = ctx.graph().node_count();
    if (k < 3 || k > n)
        throw std::invalid_argument("psrw_sampling requires 3 <= k <= |V|");
    if (k == n)
        return whole_graph_state(ctx.graph());
    const std::uint64_t steps =
        planned_steps(bound_psrw(ctx.bound_inputs(k, cfg.epsilon, true)), cfg);
    PsrwChain chain(ctx, k, cfg, rng);
    chain.advance(steps, rng);
    return chain.draw(cfg, rng);
}

SubgraphState sample_once(const SamplerContext& ctx, std::uint32_t k,
                          Method method, const SamplerConfig& cfg, Rng& rng) {
    switch (method) {
    case Method::mcmc:
        return mcmc_sampling(ctx, k, cfg, rng);
    case Method::psrw:
        return psrw_sampling(ctx, k, cfg, rng);
    case Method::rss:
        return uniform_sampling(ctx, k, cfg, rng, RecursionMode::rss);
    case Method::rss_plus:
        return uniform_sampling(ctx, k, cfg, rng, RecursionMode::rss_plus);
    }
    throw std::logic_error("unreachable");
}

} // namespace ksub
