#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ksub/datasets.hpp"
#include "ksub/evaluation.hpp"
#include "ksub/graph.hpp"
#include "ksub/sampler.hpp"

namespace {

using nlohmann::json;

struct Manifest {
    std::string subcommand;
    std::string graph_spec = "karate";
    std::uint32_t k = 3;
    std::string method = "rss";
    double epsilon = 0.05;
    std::uint64_t seed = 0;
    double step_ratio = 1.0;
    std::uint64_t n = 100;
    std::uint32_t runs = 10;
    std::uint32_t diameter = 0; // 0 = compute exactly
    std::uint32_t jobs = 1;
    std::string out;
    std::string format = "json";
    std::uint64_t max_steps = 0;
    std::uint64_t samples_per_state = 1000;
    std::vector<std::uint32_t> cache_levels;

    json to_json() const {
        json j;
        j["subcommand"] = subcommand;
        j["graph"] = graph_spec;
        j["k"] = k;
        j["method"] = method;
        j["epsilon"] = epsilon;
        j["seed"] = seed;
        j["step_ratio"] = step_ratio;
        j["n"] = n;
        j["runs"] = runs;
        j["diameter"] = diameter;
        j["jobs"] = jobs;
        j["out"] = out;
        j["format"] = format;
        j["max_steps"] = max_steps;
        j["samples_per_state"] = samples_per_state;
        return j;
    }
};

/// Dataset mini-language: karate | ba:N:M | file:path | signed:path.
struct Dataset {
    const ksub::Graph* graph = nullptr;
    std::unique_ptr<ksub::Graph> owned;
    std::unique_ptr<ksub::SignedGraph> signed_graph;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Dataset load_dataset(const std::string& spec, std::uint64_t seed) {
    Dataset d;
    if (spec == "karate") {
        d.graph = &ksub::karate();
        return d;
    }
    if (spec.rfind("ba:", 0) == 0) {
        std::uint32_t n = 0, m = 0;
        char colon = 0;
        std::istringstream ss(spec.substr(3));
        if (!(ss >> n >> colon >> m) || colon != ':' || !ss.eof())
            throw std::runtime_error("bad dataset spec: " + spec +
                                     " (expected ba:N:M)");
        d.owned = std::make_unique<ksub::Graph>(ksub::generate_ba(n, m, seed));
        d.graph = d.owned.get();
        return d;
    }
    if (spec.rfind("file:", 0) == 0) {
        d.owned = std::make_unique<ksub::Graph>(
            ksub::Graph::from_edge_list(slurp(spec.substr(5))));
        d.graph = d.owned.get();
        return d;
    }
    if (spec.rfind("signed:", 0) == 0) {
        d.signed_graph = std::make_unique<ksub::SignedGraph>(
            ksub::load_signed_snap(slurp(spec.substr(7))));
        d.graph = &d.signed_graph->projection();
        return d;
    }
    throw std::runtime_error("unknown dataset spec: " + spec);
}

struct Output {
    std::ofstream file;
    std::ostream* os = &std::cout;

    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file.open(path, std::ios::binary);
            if (!file)
                throw std::runtime_error("cannot write " + path);
            os = &file;
        }
    }
    std::ostream& stream() { return *os; }
};

void emit_header(std::ostream& os, const Manifest& m) {
    if (m.format == "csv")
        os << "# manifest: " << m.to_json().dump() << "\n";
    else
        os << json{{"manifest", m.to_json()}}.dump() << "\n";
}

ksub::SamplerConfig sampler_config(const Manifest& m) {
    ksub::SamplerConfig cfg;
    cfg.epsilon = m.epsilon;
    cfg.seed = m.seed;
    cfg.step_ratio = m.step_ratio;
    cfg.max_steps = m.max_steps;
    return cfg;
}

ksub::ExperimentOptions experiment_options(const Manifest& m) {
    ksub::ExperimentOptions opts;
    opts.runs = m.runs;
    opts.jobs = m.jobs;
    return opts;
}

/// Materialize the requested state-graph levels so chains use O(1)
/// degree/neighbor lookups.
std::vector<std::unique_ptr<ksub::StateGraph>> attach_caches(
    ksub::SamplerContext& ctx, const ksub::Graph& g,
    const std::vector<std::uint32_t>& levels) {
    std::vector<std::unique_ptr<ksub::StateGraph>> keep;
    for (std::uint32_t level : levels) {
        keep.push_back(
            std::make_unique<ksub::StateGraph>(ksub::enumerate_states(g, level)));
        ctx.attach_cache(*keep.back());
    }
    return keep;
}

json state_to_json(const ksub::Graph& g, const ksub::SubgraphState& s) {
    json ids = json::array();
    for (std::uint32_t v : s.nodes())
        ids.push_back(g.original_ids()[v]);
    return ids;
}

int cmd_sample(const Manifest& m) {
    Dataset d = load_dataset(m.graph_spec, m.seed);
    ksub::SamplerContext ctx(*d.graph);
    if (m.diameter > 0)
        ctx.set_diameter_override(m.diameter);
    auto caches = attach_caches(ctx, *d.graph, m.cache_levels);
    const ksub::Method method = ksub::parse_method(m.method);
    const ksub::SamplerConfig cfg = sampler_config(m);
    cfg.validate();

    Output out(m.out);
    emit_header(out.stream(), m);
    ksub::Rng rng(cfg.seed);
    for (std::uint64_t i = 0; i < m.n; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        ksub::SubgraphState s = ksub::sample_once(ctx, m.k, method, cfg, rng);
        const auto dt = std::chrono::steady_clock::now() - t0;
        json rec;
        rec["index"] = i;
        rec["nodes"] = state_to_json(*d.graph, s);
        rec["wall_ns"] =
            std::chrono::duration_cast<std::chrono::nanoseconds>(dt).count();
        out.stream() << rec.dump() << "\n";
    }
    return 0;
}

int cmd_enumerate(const Manifest& m, std::uint64_t cap) {
    Dataset d = load_dataset(m.graph_spec, m.seed);
    ksub::StateGraph sg = ksub::enumerate_states(*d.graph, m.k, cap);
    std::cout << "states " << sg.states.size() << "\n"
              << "edges " << sg.edge_count() << "\n";
    if (sg.connected())
        std::cout << "diameter " << sg.diameter() << "\n";
    else
        std::cout << "diameter disconnected\n";
    if (!m.out.empty()) {
        Output out(m.out);
        out.stream() << sg.to_json() << "\n";
    }
    return 0;
}

int cmd_uniformity(const Manifest& m) {
    Dataset d = load_dataset(m.graph_spec, m.seed);
    ksub::SamplerContext ctx(*d.graph);
    if (m.diameter > 0)
        ctx.set_diameter_override(m.diameter);
    ksub::StateGraph oracle = ksub::enumerate_states(*d.graph, m.k);
    ctx.attach_cache(oracle);
    std::unique_ptr<ksub::StateGraph> lower;
    if (m.method == "psrw" && m.k > 3) {
        lower = std::make_unique<ksub::StateGraph>(
            ksub::enumerate_states(*d.graph, m.k - 1));
        ctx.attach_cache(*lower);
    }

    auto reports = ksub::uniformity_experiment(
        ctx, oracle, ksub::parse_method(m.method), sampler_config(m),
        m.samples_per_state, experiment_options(m));

    double mean = 0.0, sq = 0.0;
    for (const auto& r : reports)
        mean += r.loss_value;
    mean /= reports.size();
    for (const auto& r : reports)
        sq += (r.loss_value - mean) * (r.loss_value - mean);
    const double stddev =
        reports.size() > 1 ? std::sqrt(sq / (reports.size() - 1)) : 0.0;

    Output out(m.out);
    emit_header(out.stream(), m);
    if (m.format == "csv") {
        out.stream() << "run,seed,total,loss,wall_ns\n";
        for (std::size_t i = 0; i < reports.size(); ++i) {
            const auto& r = reports[i];
            out.stream() << i << "," << r.seed << "," << r.total << ","
                         << r.loss_value << "," << r.wall_ns << "\n";
        }
        out.stream() << "# mean_loss " << mean << " stddev " << stddev << "\n";
    } else {
        for (const auto& r : reports)
            out.stream() << r.to_json() << "\n";
        out.stream() << json{{"mean_loss", mean}, {"stddev", stddev}}.dump()
                     << "\n";
    }
    return 0;
}

int cmd_sweep(const Manifest& m, const std::vector<double>& ratios) {
    Dataset d = load_dataset(m.graph_spec, m.seed);
    ksub::SamplerContext ctx(*d.graph);
    if (m.diameter > 0)
        ctx.set_diameter_override(m.diameter);
    ksub::StateGraph oracle = ksub::enumerate_states(*d.graph, m.k);
    ctx.attach_cache(oracle);

    auto points = ksub::step_ratio_sweep(ctx, oracle, ksub::parse_method(m.method),
                                         sampler_config(m), ratios,
                                         m.samples_per_state,
                                         experiment_options(m));
    Output out(m.out);
    emit_header(out.stream(), m);
    if (m.format == "csv") {
        out.stream() << "ratio,loss\n";
        for (const auto& p : points)
            out.stream() << p.ratio << "," << p.loss_value << "\n";
    } else {
        for (const auto& p : points)
            out.stream() << json{{"ratio", p.ratio}, {"loss", p.loss_value}}.dump()
                         << "\n";
    }
    return 0;
}

int cmd_bench(const Manifest& m) {
    Dataset d = load_dataset(m.graph_spec, m.seed);
    ksub::SamplerContext ctx(*d.graph);
    if (m.diameter > 0)
        ctx.set_diameter_override(m.diameter);
    auto caches = attach_caches(ctx, *d.graph, m.cache_levels);
    auto r = ksub::bench_sampling_time(ctx, m.k, ksub::parse_method(m.method),
                                       sampler_config(m));
    Output out(m.out);
    emit_header(out.stream(), m);
    out.stream() << json{{"method", m.method},
                         {"k", m.k},
                         {"seconds_per_sample", r.seconds_per_sample},
                         {"estimated", r.estimated}}
                        .dump()
                 << "\n";
    return 0;
}

int cmd_motifs(const Manifest& m, const std::vector<std::uint64_t>& schedule) {
    Dataset d = load_dataset(m.graph_spec, m.seed);
    ksub::SamplerContext ctx(*d.graph);
    if (m.diameter > 0)
        ctx.set_diameter_override(m.diameter);
    auto caches = attach_caches(ctx, *d.graph, m.cache_levels);
    if (d.signed_graph) {
        if (d.signed_graph->zero_rating_pairs() > 0)
            std::cerr << "warning: " << d.signed_graph->zero_rating_pairs()
                      << " node pairs carry only zero ratings (projected positive)\n";
        if (d.signed_graph->out_of_range_ratings() > 0)
            std::cerr << "warning: " << d.signed_graph->out_of_range_ratings()
                      << " ratings outside [-10,10] kept as-is\n";
    }

    std::vector<std::uint64_t> sched = schedule;
    if (sched.empty())
        sched.push_back(UINT64_MAX); // full theoretical budget
    auto rows = ksub::motif_frequency_experiment(
        ctx, d.signed_graph.get(), m.k, ksub::parse_method(m.method),
        sampler_config(m), m.n, sched, experiment_options(m));

    Output out(m.out);
    emit_header(out.stream(), m);
    for (const auto& row : rows) {
        json j;
        if (row.steps == UINT64_MAX)
            j["steps"] = "full";
        else
            j["steps"] = row.steps;
        j["samples"] = row.samples;
        for (const auto& [name, c] : row.counts) {
            j["counts"][name] = c;
            j["ratios"][name] =
                static_cast<double>(c) / static_cast<double>(row.samples);
        }
        out.stream() << j.dump() << "\n";
    }
    return 0;
}

int cmd_bounds(const Manifest& m, const ksub::BoundInputs& in) {
    auto render = [](const ksub::BoundResult& r) {
        json j;
        j["log_value"] = r.log_value;
        j["value"] = r.value;
        j["overflow"] = r.overflow;
        if (!r.overflow)
            j["steps"] = r.steps;
        return j;
    };
    json j;
    j["mcmc"] = render(ksub::bound_mcmc(in));
    j["degree_prop"] = render(ksub::bound_degree_prop(in));
    j["rss_plus"] = render(ksub::bound_rss_plus(in));
    if (in.k >= 3)
        j["psrw"] = render(ksub::bound_psrw(in));

    Output out(m.out);
    if (m.format == "csv") {
        emit_header(out.stream(), m);
        out.stream() << "bound,value,overflow\n";
        for (const auto& [name, r] : j.items())
            out.stream() << name << "," << r["value"].get<double>() << ","
                         << (r["overflow"].get<bool>() ? 1 : 0) << "\n";
    } else {
        out.stream() << json{{"manifest", m.to_json()}, {"bounds", j}}.dump(2)
                     << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"uniform connected k-subgraph sampling toolkit"};
    app.require_subcommand(1);

    Manifest m;
    std::uint64_t cap = 1'000'000;
    std::vector<double> ratios{0.0, 1e-3, 1e-2, 1e-1, 1.0};
    std::vector<std::uint64_t> schedule;
    ksub::BoundInputs bin;
    bin.k = 3;
    bin.delta = 2;
    bin.diam = 3;
    bin.n = 4;

    auto add_common = [&](CLI::App* sub, bool with_method = true) {
        sub->add_option("--graph", m.graph_spec,
                        "dataset: karate | ba:N:M | file:path | signed:path");
        sub->add_option("--k", m.k, "subgraph size")->check(CLI::Range(2u, 16u));
        if (with_method)
            sub->add_option("--method", m.method, "mcmc | psrw | rss | rss+");
        sub->add_option("--eps", m.epsilon, "total-variation target");
        sub->add_option("--seed", m.seed, "rng seed");
        sub->add_option("--step-ratio", m.step_ratio,
                        "fraction of the theoretical step count");
        sub->add_option("--max-steps", m.max_steps, "explicit chain-step cap");
        sub->add_option("--diameter", m.diameter,
                        "upper bound on diam(G), skips the exact computation");
        sub->add_option("--jobs", m.jobs, "worker threads");
        sub->add_option("--out", m.out, "output path (default stdout)");
        sub->add_option("--format", m.format, "json | csv")
            ->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--cache", m.cache_levels,
                        "state-graph levels to materialize for O(1) lookups");
    };

    CLI::App* sample = app.add_subcommand("sample", "draw k-subgraphs");
    add_common(sample);
    sample->add_option("--n", m.n, "number of samples");

    CLI::App* enumerate = app.add_subcommand("enumerate", "materialize G^(k)");
    add_common(enumerate, false);
    enumerate->add_option("--cap", cap, "abort beyond this many states");

    CLI::App* uniformity =
        app.add_subcommand("uniformity", "loss vs the uniform distribution");
    add_common(uniformity);
    uniformity->add_option("--runs", m.runs, "independent repetitions");
    uniformity->add_option("--samples-per-state", m.samples_per_state,
                           "N_s = this * |V^(k)|");

    CLI::App* sweep = app.add_subcommand("sweep", "loss as step budget grows");
    add_common(sweep);
    sweep->add_option("--ratios", ratios, "step ratios to evaluate");
    sweep->add_option("--samples-per-state", m.samples_per_state,
                      "N_s = this * |V^(k)|");

    CLI::App* bench = app.add_subcommand("bench", "per-sample wall time");
    add_common(bench);

    CLI::App* motifs = app.add_subcommand("motifs", "motif class frequencies");
    add_common(motifs);
    motifs->add_option("--n", m.n, "samples per schedule point");
    motifs->add_option("--steps", schedule,
                       "chain-step budgets (omit for the full budget)");

    CLI::App* bounds = app.add_subcommand("bounds", "closed-form step bounds");
    bounds->add_option("--k", bin.k, "subgraph size");
    bounds->add_option("--delta", bin.delta, "max degree");
    bounds->add_option("--diam", bin.diam, "graph diameter");
    bounds->add_option("--n", bin.n, "node count");
    bounds->add_option("--eps", bin.epsilon, "total-variation target");
    bounds->add_option("--out", m.out, "output path (default stdout)");
    bounds->add_option("--format", m.format, "json | csv")
        ->check(CLI::IsMember({"json", "csv"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (sample->parsed()) {
            m.subcommand = "sample";
            return cmd_sample(m);
        }
        if (enumerate->parsed()) {
            m.subcommand = "enumerate";
            return cmd_enumerate(m, cap);
        }
        if (uniformity->parsed()) {
            m.subcommand = "uniformity";
            return cmd_uniformity(m);
        }
        if (sweep->parsed()) {
            m.subcommand = "sweep";
            return cmd_sweep(m, ratios);
        }
        if (bench->parsed()) {
            m.subcommand = "bench";
            return cmd_bench(m);
        }
        if (motifs->parsed()) {
            m.subcommand = "motifs";
            return cmd_motifs(m, schedule);
        }
        if (bounds->parsed()) {
            m.subcommand = "bounds";
            m.k = bin.k;
            m.epsilon = bin.epsilon;
            return cmd_bounds(m, bin);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
