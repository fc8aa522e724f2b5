#ifndef KSUB_EVALUATION_HPP
#define KSUB_EVALUATION_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ksub/datasets.hpp"
#include "ksub/sampler.hpp"
#include "ksub/state.hpp"

namespace ksub {

/// Half the L1 distance between the empirical distribution (counts/total)
/// and the uniform distribution over num_states states. States missing
/// from `counts` (shorter vector) contribute their full 1/num_states.
double loss(std::span<const std::uint64_t> counts, std::uint64_t total,
            std::uint64_t num_states);

struct ExperimentOptions {
    std::uint32_t runs = 10;
    std::uint32_t jobs = 1;
    /// Sample draws are split into this many independently seeded chunks;
    /// results are identical for any jobs value.
    std::uint32_t chunks = 32;
    /// Walk samplers (mcmc, psrw) pay their step budget once as burn-in
    /// per chunk, then emit draws every chain_thin steps.
    std::uint64_t chain_thin = 500;
};

struct SampleReport {
    std::string sampler;
    std::uint32_t k = 0;
    double epsilon = 0.0;
    double step_ratio = 1.0;
    std::uint64_t seed = 0;
    std::uint64_t total = 0;
    std::vector<std::uint64_t> counts; // aligned with the oracle state order
    double loss_value = 0.0;
    std::uint64_t wall_ns = 0;

    std::string to_json() const;
};

/// Tally `total_samples` draws against the oracle state list.
std::vector<std::uint64_t> draw_tallies(const SamplerContext& ctx,
                                        const StateGraph& oracle, Method method,
                                        const SamplerConfig& cfg,
                                        std::uint64_t total_samples,
                                        const ExperimentOptions& opts);

/// Per run: N_s = samples_per_state * |V^(k)| draws, tallied and scored.
std::vector<SampleReport> uniformity_experiment(const SamplerContext& ctx,
                                                const StateGraph& oracle,
                                                Method method, SamplerConfig cfg,
                                                std::uint64_t samples_per_state,
                                                const ExperimentOptions& opts);

struct SweepPoint {
    double ratio = 0.0;
    double loss_value = 0.0;
};

std::vector<SweepPoint> step_ratio_sweep(const SamplerContext& ctx,
                                         const StateGraph& oracle, Method method,
                                         SamplerConfig cfg,
                                         std::span<const double> ratios,
                                         std::uint64_t samples_per_state,
                                         const ExperimentOptions& opts);

struct BenchResult {
    Method method = Method::rss;
    std::uint32_t k = 0;
    double seconds_per_sample = 0.0;
    bool estimated = false; // true: extrapolated from a step/cost probe
};

/// Per-sample wall time. Cheap settings are measured directly over `reps`
/// samples; expensive ones are extrapolated from `measure_steps` chain
/// steps (walk samplers) or a recursive cost model (rss, rss+), and
/// flagged estimated.
BenchResult bench_sampling_time(const SamplerContext& ctx, std::uint32_t k,
                                Method method, const SamplerConfig& cfg,
                                std::uint32_t reps = 10,
                                std::uint64_t measure_steps = 100,
                                double budget_seconds = 0.5);

enum class MotifK3 { open_triplet, triangle_unbalanced, triangle_balanced };
enum class MotifK4 { line_shaped, clique, other };
/// The six connected 4-node graphs, by induced edge count and degrees.
enum class IsoClassK4 { path, star, paw, cycle, diamond, clique };

MotifK3 classify_motif_k3(const SignedGraph& sg, const SubgraphState& h);
MotifK4 classify_motif_k4(const Graph& g, const SubgraphState& h);
IsoClassK4 k4_iso_class(const Graph& g, const SubgraphState& h);
std::string_view iso_class_name(IsoClassK4 c);

struct MotifTallyK3 {
    std::uint64_t open_triplet = 0;
    std::uint64_t triangle = 0;          // all triangles
    std::uint64_t balanced_triangle = 0; // subset of triangle
};
struct MotifTallyK4 {
    std::uint64_t line_shaped = 0;
    std::uint64_t clique = 0;
    std::uint64_t other = 0;
};

MotifTallyK3 tally_motifs_k3(const SignedGraph& sg,
                             std::span<const SubgraphState> samples);
MotifTallyK4 tally_motifs_k4(const Graph& g,
                             std::span<const SubgraphState> samples);

struct MotifFrequencyRow {
    std::uint64_t steps = 0;   // per-chain step budget at this point
    std::uint64_t samples = 0;
    std::map<std::string, std::uint64_t> counts; // per class name
};

/// For each budget in step_schedule, draw num_samples states with chain
/// steps capped at that budget and tally motif classes. `signs` may be
/// null; k=3 balance classes then treat every edge as positive.
std::vector<MotifFrequencyRow> motif_frequency_experiment(
    const SamplerContext& ctx, const SignedGraph* signs, std::uint32_t k,
    Method method, SamplerConfig cfg, std::uint64_t num_samples,
    std::span<const std::uint64_t> step_schedule,
    const ExperimentOptions& opts);

} // namespace ksub

#endif
