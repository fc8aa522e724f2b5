#include "ksub/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace ksub {

double loss(std::span<const std::uint64_t> counts, std::uint64_t total,
            std::uint64_t num_states) {
    if (total == 0 || num_states == 0)
        throw std::invalid_argument("loss requires total > 0 and num_states > 0");
    if (counts.size() > num_states)
        throw std::invalid_argument("more counts than states");
    const double uniform = 1.0 / static_cast<double>(num_states);
    double acc = 0.0;
    for (std::uint64_t c : counts)
        acc += std::abs(static_cast<double>(c) / static_cast<double>(total) - uniform);
    acc += static_cast<double>(num_states - counts.size()) * uniform;
    return 0.5 * acc;
}

std::string SampleReport::to_json() const {
    nlohmann::json j;
    j["sampler"] = sampler;
    j["k"] = k;
    j["epsilon"] = epsilon;
    j["step_ratio"] = step_ratio;
    j["seed"] = seed;
    j["total"] = total;
    j["loss"] = loss_value;
    j["wall_ns"] = wall_ns;
    j["counts"] = counts;
    return j.dump();
}

namespace {

/// Split `total` draws over `chunks` nearly-equal pieces and run
/// `work(chunk_index, chunk_draws)` for each, optionally across threads.
/// Chunk outputs must not alias; determinism comes from per-chunk seeds.
template <class Work>
void run_chunked(std::uint32_t chunks, std::uint32_t jobs, std::uint64_t total,
                 Work&& work) {
    if (chunks == 0)
        throw std::invalid_argument("chunks must be positive");
    auto chunk_draws = [&](std::uint32_t c) {
        return total / chunks + (c < total % chunks ? 1 : 0);
    };
    const std::uint32_t workers = std::max<std::uint32_t>(1, std::min(jobs, chunks));
    if (workers == 1) {
        for (std::uint32_t c = 0; c < chunks; ++c)
            work(c, chunk_draws(c));
        return;
    }
    std::atomic<std::uint32_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::uint32_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::uint32_t c = next.fetch_add(1);
                if (c >= chunks)
                    return;
                try {
                    work(c, chunk_draws(c));
                } catch (...) {
                    std::scoped_lock lk(error_mu);
                    if (!first_error)
                        first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool)
        t.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

bool is_walk_method(Method m) { return m == Method::mcmc || m == Method::psrw; }

std::uint64_t walk_burn_steps(const SamplerContext& ctx, std::uint32_t k,
                              Method method, const SamplerConfig& cfg) {
    const BoundInputs in = ctx.bound_inputs(k, cfg.epsilon, true);
    const BoundResult b = method == Method::mcmc ? bound_mcmc(in) : bound_psrw(in);
    return planned_steps(b, cfg);
}

/// Emit `draws` states into `sink`. Walk samplers pay the step budget once
/// as burn-in and then thin one chain; recursive samplers draw
/// independently.
template <class Sink>
void emit_draws(const SamplerContext& ctx, std::uint32_t k, Method method,
                const SamplerConfig& cfg, std::uint64_t chunk_seed,
                std::uint64_t draws, std::uint64_t thin, Sink&& sink) {
    if (draws == 0)
        return;
    Rng rng(chunk_seed);
    if (is_walk_method(method) && k < ctx.graph().node_count()) {
        const std::uint64_t burn = walk_burn_steps(ctx, k, method, cfg);
        if (burn <= thin) {
            // Budgets at or below the thinning interval: per-draw chains
            // keep the low-budget bias the step-ratio experiments study.
            for (std::uint64_t i = 0; i < draws; ++i)
                sink(sample_once(ctx, k, method, cfg, rng));
            return;
        }
        if (method == Method::mcmc) {
            McmcChain chain(ctx, k, cfg, rng);
            chain.advance(burn, rng);
            sink(chain.current());
            for (std::uint64_t i = 1; i < draws; ++i) {
                chain.advance(thin, rng);
                sink(chain.current());
            }
        } else {
            PsrwChain chain(ctx, k, cfg, rng);
            chain.advance(burn, rng);
            sink(chain.draw(cfg, rng));
            for (std::uint64_t i = 1; i < draws; ++i) {
                chain.advance(thin, rng);
                sink(chain.draw(cfg, rng));
            }
        }
        return;
    }
    for (std::uint64_t i = 0; i < draws; ++i)
        sink(sample_once(ctx, k, method, cfg, rng));
}

} // namespace

std::vector<std::uint64_t> draw_tallies(const SamplerContext& ctx,
                                        const StateGraph& oracle, Method method,
                                        const SamplerConfig& cfg,
                                        std::uint64_t total_samples,
                                        const ExperimentOptions& opts) {
    cfg.validate();
    std::vector<std::vector<std::uint64_t>> per_chunk(
        opts.chunks, std::vector<std::uint64_t>(oracle.states.size(), 0));
    run_chunked(opts.chunks, opts.jobs, total_samples,
                [&](std::uint32_t c, std::uint64_t draws) {
                    auto& counts = per_chunk[c];
                    emit_draws(ctx, oracle.k, method, cfg,
                               derive_seed(cfg.seed, c + 1), draws,
                               opts.chain_thin, [&](const SubgraphState& s) {
                                   const std::uint32_t i = oracle.index_of(s);
                                   if (i == UINT32_MAX)
                                       throw std::logic_error(
                                           "sampled state missing from the oracle: " +
                                           s.to_string());
                                   ++counts[i];
                               });
                });
    std::vector<std::uint64_t> counts(oracle.states.size(), 0);
    for (const auto& part : per_chunk)
        for (std::size_t i = 0; i < counts.size(); ++i)
            counts[i] += part[i];
    return counts;
}

std::vector<SampleReport> uniformity_experiment(const SamplerContext& ctx,
                                                const StateGraph& oracle,
                                                Method method, SamplerConfig cfg,
                                                std::uint64_t samples_per_state,
                                                const ExperimentOptions& opts) {
    if (opts.runs == 0)
        throw std::invalid_argument("runs must be positive");
    const std::uint64_t total = samples_per_state * oracle.states.size();
    std::vector<SampleReport> reports;
    reports.reserve(opts.runs);
    for (std::uint32_t r = 0; r < opts.runs; ++r) {
        SamplerConfig run_cfg = cfg;
        run_cfg.seed = derive_seed(cfg.seed, 0x5eed0000ull + r);
        const auto t0 = std::chrono::steady_clock::now();
        std::vector<std::uint64_t> counts =
            draw_tallies(ctx, oracle, method, run_cfg, total, opts);
        const auto t1 = std::chrono::steady_clock::now();

        SampleReport rep;
        rep.sampler = std::string(method_token(method));
        rep.k = oracle.k;
        rep.epsilon = cfg.epsilon;
        rep.step_ratio = cfg.step_ratio;
        rep.seed = run_cfg.seed;
        rep.total = total;
        rep.loss_value = loss(counts, total, oracle.states.size());
        rep.counts = std::move(counts);
        rep.wall_ns = static_cast<std::uint64_t>(
            std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
        reports.push_back(std::move(rep));
    }
    return reports;
}

std::vector<SweepPoint> step_ratio_sweep(const SamplerContext& ctx,
                                         const StateGraph& oracle, Method method,
                                         SamplerConfig cfg,
                                         std::span<const double> ratios,
                                         std::uint64_t samples_per_state,
                                         const ExperimentOptions& opts) {
    const std::uint64_t total = samples_per_state * oracle.states.size();
    std::vector<SweepPoint> points;
    points.reserve(ratios.size());
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        SamplerConfig pt_cfg = cfg;
        pt_cfg.step_ratio = ratios[i];
        pt_cfg.seed = derive_seed(cfg.seed, 0x7a7e0000ull + i);
        std::vector<std::uint64_t> counts =
            draw_tallies(ctx, oracle, method, pt_cfg, total, opts);
        points.push_back({ratios[i], loss(counts, total, oracle.states.size())});
    }
    return points;
}

namespace {

using steady = std::chrono::steady_clock;

template <class F>
double time_seconds(F&& f) {
    const auto t0 = steady::now();
    f();
    return std::chrono::duration<double>(steady::now() - t0).count();
}

double choose2(std::uint32_t m) {
    return 0.5 * static_cast<double>(m) * (static_cast<double>(m) - 1.0);
}

/// Per-method cost model for settings too slow to run: measure the
/// primitive operations on probe states, then expand the samplers'
/// recursions with the theoretical step counts.
struct CostModel {
    const SamplerContext* ctx;
    SamplerConfig cfg;
    Rng rng;
    std::vector<std::vector<SubgraphState>> probes; // probes[j]: states of size j

    CostModel(const SamplerContext& c, const SamplerConfig& config, std::uint32_t k)
        : ctx(&c), cfg(config), rng(derive_seed(config.seed, 0xbe9c)) {
        probes.resize(k + 1);
        const std::uint32_t probe_count = 12;
        for (std::uint32_t j = 2; j <= k; ++j)
            for (std::uint32_t i = 0; i < probe_count; ++i)
                probes[j].push_back(ctx->random_connected_state(j, rng));
    }

    double mean_over(std::uint32_t j, auto&& per_state) {
        double secs = time_seconds([&] {
            for (const SubgraphState& s : probes[j])
                per_state(s);
        });
        return secs / static_cast<double>(probes[j].size());
    }

    /// Expected lift attempts: 1 / E[1/C(m,2)] over probe states of size j.
    double tries(std::uint32_t j) {
        double inv = 0.0;
        for (const SubgraphState& s : probes[j])
            inv += 1.0 / choose2(removable_count(ctx->graph(), s));
        return static_cast<double>(probes[j].size()) / inv;
    }

    double neighbor_cost(std::uint32_t j) {
        return mean_over(j, [&](const SubgraphState& s) {
            volatile std::uint32_t sink = ctx->random_neighbor(s, rng)[0];
            (void)sink;
        });
    }

    double degree_cost(std::uint32_t j) {
        return mean_over(j, [&](const SubgraphState& s) {
            volatile std::uint32_t sink = ctx->degree_of(s);
            (void)sink;
        });
    }

    double removable_cost(std::uint32_t j) {
        return mean_over(j, [&](const SubgraphState& s) {
            volatile std::uint32_t sink = removable_count(ctx->graph(), s);
            (void)sink;
        });
    }

    double scaled_bound(const BoundResult& b) const {
        double steps = cfg.step_ratio * b.value; // value is finite or +inf
        if (cfg.max_steps > 0)
            steps = std::min(steps, static_cast<double>(cfg.max_steps));
        return steps;
    }

    double base_edge_cost(bool degree_prop) {
        const int reps = 64;
        double secs = time_seconds([&] {
            for (int i = 0; i < reps; ++i) {
                SubgraphState s =
                    degree_prop ? ctx->degree_prop_edge(rng) : ctx->uniform_edge(rng);
                volatile std::uint32_t sink = s[0];
                (void)sink;
            }
        });
        return secs / reps;
    }

    /// T_U(j) / T_D(j) for the mutually recursive sampler; T_P(j) for the
    /// non-rejecting variant.
    double estimate_rss(std::uint32_t k) {
        double t_d = base_edge_cost(true);
        double t_u = base_edge_cost(false);
        for (std::uint32_t j = 3; j <= k; ++j) {
            // T_U(j) lifts from the degree-prop sampler one level down;
            // T_D(j) runs its chain, half the steps proposing fresh
            // uniform draws plus a degree evaluation.
            t_u = tries(j) * (t_d + neighbor_cost(j - 1) + removable_cost(j));
            if (j == k)
                break;
            const double steps =
                scaled_bound(bound_degree_prop(ctx->bound_inputs(j, cfg.epsilon, false)));
            t_d = t_u + steps * 0.5 * (t_u + degree_cost(j));
        }
        return t_u;
    }

    double estimate_rss_plus(std::uint32_t k) {
        double t_p = base_edge_cost(true); // level 2
        for (std::uint32_t j = 3; j < k; ++j) {
            const double propose =
                t_p + neighbor_cost(j - 1) + degree_cost(j) + removable_cost(j);
            const double steps =
                scaled_bound(bound_rss_plus(ctx->bound_inputs(j, cfg.epsilon, false)));
            t_p = propose * (1.0 + 0.5 * steps);
        }
        if (k == 2)
            return base_edge_cost(false);
        return tries(k) * (t_p + neighbor_cost(k - 1) + removable_cost(k));
    }

    double estimate_walk(std::uint32_t k, Method method, std::uint64_t measure_steps) {
        const BoundInputs in = ctx->bound_inputs(k, cfg.epsilon, true);
        const BoundResult b = method == Method::mcmc ? bound_mcmc(in) : bound_psrw(in);
        const double steps = scaled_bound(b);
        double per_step;
        if (method == Method::mcmc) {
            McmcChain chain(*ctx, k, cfg, rng);
            per_step = time_seconds([&] { chain.advance(measure_steps, rng); }) /
                       static_cast<double>(measure_steps);
        } else {
            PsrwChain chain(*ctx, k, cfg, rng);
            per_step = time_seconds([&] { chain.advance(measure_steps, rng); }) /
                       static_cast<double>(measure_steps);
        }
        double total = steps * per_step;
        if (method == Method::psrw)
            total += tries(k) * (neighbor_cost(k - 1) + removable_cost(k));
        return total;
    }
};

} // namespace

BenchResult bench_sampling_time(const SamplerContext& ctx, std::uint32_t k,
                                Method method, const SamplerConfig& cfg,
                                std::uint32_t reps, std::uint64_t measure_steps,
                                double budget_seconds) {
    cfg.validate();
    if (reps == 0 || measure_steps == 0)
        throw std::invalid_argument("reps and measure_steps must be positive");

    CostModel model(ctx, cfg, k);
    double estimate;
    switch (method) {
    case Method::rss:
        estimate = model.estimate_rss(k);
        break;
    case Method::rss_plus:
        estimate = model.estimate_rss_plus(k);
        break;
    default:
        estimate = model.estimate_walk(k, method, measure_steps);
        break;
    }

    BenchResult result;
    result.method = method;
    result.k = k;
    if (!(estimate * reps <= budget_seconds)) {
        result.seconds_per_sample = estimate;
        result.estimated = true;
        return result;
    }
    Rng rng(derive_seed(cfg.seed, 0xbe9d));
    const double secs = time_seconds([&] {
        for (std::uint32_t i = 0; i < reps; ++i) {
            volatile std::uint32_t sink = sample_once(ctx, k, method, cfg, rng)[0];
            (void)sink;
        }
    });
    result.seconds_per_sample = secs / reps;
    result.estimated = false;
    return result;
}

namespace {

std::uint32_t induced_edges(const Graph& g, const SubgraphState& h,
                            std::uint32_t degrees[SubgraphState::kMaxNodes]) {
    std::uint32_t edges = 0;
    for (std::uint32_t i = 0; i < h.size(); ++i)
        degrees[i] = 0;
    for (std::uint32_t i = 0; i < h.size(); ++i)
        for (std::uint32_t j = i + 1; j < h.size(); ++j)
            if (g.has_edge(h[i], h[j])) {
                ++edges;
                ++degrees[i];
                ++degrees[j];
            }
    return edges;
}

} // namespace

MotifK3 classify_motif_k3(const SignedGraph& sg, const SubgraphState& h) {
    if (h.size() != 3)
        throw std::invalid_argument("k=3 motif classification needs 3 nodes");
    const Graph& g = sg.projection();
    std::uint32_t deg[SubgraphState::kMaxNodes];
    const std::uint32_t edges = induced_edges(g, h, deg);
    if (edges == 2)
        return MotifK3::open_triplet;
    if (edges != 3)
        throw std::invalid_argument("state " + h.to_string() +
                                    " is not a connected triple");
    std::uint32_t negatives = 0;
    negatives += sg.edge_negative(h[0], h[1]);
    negatives += sg.edge_negative(h[0], h[2]);
    negatives += sg.edge_negative(h[1], h[2]);
    return negatives % 2 == 0 ? MotifK3::triangle_balanced
                              : MotifK3::triangle_unbalanced;
}

MotifK4 classify_motif_k4(const Graph& g, const SubgraphState& h) {
    switch (k4_iso_class(g, h)) {
    case IsoClassK4::path: return MotifK4::line_shaped;
    case IsoClassK4::clique: return MotifK4::clique;
    default: return MotifK4::other;
    }
}

IsoClassK4 k4_iso_class(const Graph& g, const SubgraphState& h) {
    if (h.size() != 4)
        throw std::invalid_argument("k=4 classification needs 4 nodes");
    std::uint32_t deg[SubgraphState::kMaxNodes];
    const std::uint32_t edges = induced_edges(g, h, deg);
    std::sort(deg, deg + 4);
    switch (edges) {
    case 3:
        return deg[3] == 3 ? IsoClassK4::star : IsoClassK4::path;
    case 4:
        return deg[3] == 3 ? IsoClassK4::paw : IsoClassK4::cycle;
    case 5:
        return IsoClassK4::diamond;
    case 6:
        return IsoClassK4::clique;
    default:
        throw std::invalid_argument("state " + h.to_string() +
                                    " is not a connected 4-subgraph");
    }
}

std::string_view iso_class_name(IsoClassK4 c) {
    switch (c) {
    case IsoClassK4::path: return "line_shaped";
    case IsoClassK4::star: return "star";
    case IsoClassK4::paw: return "paw";
    case IsoClassK4::cycle: return "cycle";
    case IsoClassK4::diamond: return "diamond";
    case IsoClassK4::clique: return "clique";
    }
    return "?";
}

MotifTallyK3 tally_motifs_k3(const SignedGraph& sg,
                             std::span<const SubgraphState> samples) {
    MotifTallyK3 t;
    for (const SubgraphState& s : samples) {
        switch (classify_motif_k3(sg, s)) {
        case MotifK3::open_triplet:
            ++t.open_triplet;
            break;
        case MotifK3::triangle_balanced:
            ++t.triangle;
            ++t.balanced_triangle;
            break;
        case MotifK3::triangle_unbalanced:
            ++t.triangle;
            break;
        }
    }
    return t;
}

MotifTallyK4 tally_motifs_k4(const Graph& g,
                             std::span<const SubgraphState> samples) {
    MotifTallyK4 t;
    for (const SubgraphState& s : samples) {
        switch (classify_motif_k4(g, s)) {
        case MotifK4::line_shaped: ++t.line_shaped; break;
        case MotifK4::clique: ++t.clique; break;
        case MotifK4::other: ++t.other; break;
        }
    }
    return t;
}

std::vector<MotifFrequencyRow> motif_frequency_experiment(
    const SamplerContext& ctx, const SignedGraph* signs, std::uint32_t k,
    Method method, SamplerConfig cfg, std::uint64_t num_samples,
    std::span<const std::uint64_t> step_schedule,
    const ExperimentOptions& opts) {
    if (k != 3 && k != 4)
        throw std::invalid_argument("motif classes are defined for k in {3,4}");
    cfg.validate();

    auto classify = [&](const SubgraphState& s) -> std::string {
        if (k == 3) {
            if (signs) {
                switch (classify_motif_k3(*signs, s)) {
                case MotifK3::open_triplet: return "open_triplet";
                case MotifK3::triangle_balanced: return "balanced_triangle";
                case MotifK3::triangle_unbalanced: return "unbalanced_triangle";
                }
            }
            std::uint32_t deg[SubgraphState::kMaxNodes];
            return induced_edges(ctx.graph(), s, deg) == 3 ? "triangle"
                                                           : "open_triplet";
        }
        return std::string(iso_class_name(k4_iso_class(ctx.graph(), s)));
    };

    std::vector<MotifFrequencyRow> rows;
    rows.reserve(step_schedule.size());
    for (std::size_t p = 0; p < step_schedule.size(); ++p) {
        const std::uint64_t budget = step_schedule[p];
        SamplerConfig pt_cfg = cfg;
        if (budget == 0)
            pt_cfg.step_ratio = 0.0;
        else
            pt_cfg.max_steps = budget;
        pt_cfg.seed = derive_seed(cfg.seed, 0x30714000ull + p);

        std::vector<std::map<std::string, std::uint64_t>> per_chunk(opts.chunks);
        run_chunked(opts.chunks, opts.jobs, num_samples,
                    [&](std::uint32_t c, std::uint64_t draws) {
                        Rng rng(derive_seed(pt_cfg.seed, c + 1));
                        auto& counts = per_chunk[c];
                        for (std::uint64_t i = 0; i < draws; ++i) {
                            SubgraphState s = sample_once(ctx, k, method, pt_cfg, rng);
                            ++counts[classify(s)];
                        }
                    });
        MotifFrequencyRow row;
        row.steps = budget;
        row.samples = num_samples;
        for (const auto& part : per_chunk)
            for (const auto& [name, c] : part)
                row.counts[name] += c;
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace ksub
