#include "abcselect/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>

#include "abcselect/models/gaussian.hpp"

namespace abcselect {

using nlohmann::json;

const char* to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::SelectParams: return "select_params";
        case ExperimentKind::SelectJoint: return "select_joint";
        case ExperimentKind::BfScatter: return "bf_scatter";
        case ExperimentKind::PosteriorCheck: return "posterior_check";
    }
    return "?";
}

namespace {

ExperimentKind parse_kind(const std::string& s) {
    if (s == "select_params") return ExperimentKind::SelectParams;
    if (s == "select_joint") return ExperimentKind::SelectJoint;
    if (s == "bf_scatter") return ExperimentKind::BfScatter;
    if (s == "posterior_check") return ExperimentKind::PosteriorCheck;
    throw ConfigError("unknown experiment kind '" + s +
                      "' (select_params, select_joint, bf_scatter, posterior_check)");
}

SelectionAlgorithm parse_algorithm(const std::string& s) {
    if (s == "exhaustive") return SelectionAlgorithm::Exhaustive;
    if (s == "greedy") return SelectionAlgorithm::Greedy;
    if (s == "stochastic") return SelectionAlgorithm::Stochastic;
    throw ConfigError("unknown selection algorithm '" + s +
                      "' (exhaustive, greedy, stochastic)");
}

const char* to_string(SelectionAlgorithm a) {
    switch (a) {
        case SelectionAlgorithm::Exhaustive: return "exhaustive";
        case SelectionAlgorithm::Greedy: return "greedy";
        case SelectionAlgorithm::Stochastic: return "stochastic";
    }
    return "?";
}

CriterionMode parse_mode(const std::string& s) {
    if (s == "ks") return CriterionMode::KS;
    if (s == "chi2") return CriterionMode::CHI2;
    if (s == "kl_bootstrap") return CriterionMode::KL_BOOTSTRAP;
    throw ConfigError("unknown criterion mode '" + s + "' (ks, chi2, kl_bootstrap)");
}

const char* to_string(CriterionMode m) {
    switch (m) {
        case CriterionMode::KS: return "ks";
        case CriterionMode::CHI2: return "chi2";
        case CriterionMode::KL_BOOTSTRAP: return "kl_bootstrap";
    }
    return "?";
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    return j.at(key).get<T>();
}

std::string line_context(const std::string& text, std::size_t byte_pos) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte_pos && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

std::vector<std::string> subset_to_names(const StatisticPool& pool,
                                         const StatisticSubset& subset) {
    std::vector<std::string> names;
    for (int i : subset) names.push_back(pool.at(i).name);
    return names;
}

}  // namespace

void ExperimentSpec::validate() const {
    if (replicates < 1) throw ConfigError("replicates must be >= 1");
    if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
    if (pool_name.empty()) throw ConfigError("pool must not be empty");
    const StatisticPool pool = make_pool(pool_name);

    if (model_names.empty()) throw ConfigError("at least one model is required");
    std::vector<ModelSpec> models;
    for (const auto& name : model_names) models.push_back(make_model(name, registry));
    if (pool.size() > 0) {
        const DatasetKind pool_kind = pool.at(0).expects;
        for (const auto& m : models)
            if (m.output_kind != pool_kind)
                throw ConfigError("model '" + m.name + "' produces " +
                                  std::string(to_string(m.output_kind)) + " but pool '" +
                                  pool_name + "' expects " + to_string(pool_kind));
    }

    if (dataset_path.empty()) {
        if (true_model.empty())
            throw ConfigError("either true_model or dataset_path must be given");
        const ModelSpec tm = make_model(true_model, registry);
        if (true_params.size() != tm.param_dim)
            throw ConfigError("true_params has dimension " + std::to_string(true_params.size()) +
                              " but model '" + true_model + "' expects " +
                              std::to_string(tm.param_dim));
    }

    switch (kind) {
        case ExperimentKind::SelectJoint:
            if (model_names.size() < 2)
                throw ConfigError("select_joint requires at least two models");
            break;
        case ExperimentKind::BfScatter:
            if (model_names != std::vector<std::string>{"gauss1", "gauss2"})
                throw ConfigError("bf_scatter requires models [gauss1, gauss2] "
                                  "(the analytic Bayes factor exists only there)");
            if (subset_names.empty()) throw ConfigError("bf_scatter requires a subset");
            break;
        case ExperimentKind::PosteriorCheck:
            if (subset_names.empty()) throw ConfigError("posterior_check requires a subset");
            break;
        case ExperimentKind::SelectParams:
            break;
    }
    for (const auto& s : subset_names) pool.index_of(s);  // throws on a bad name

    if (!model_weights.empty() && model_weights.size() != model_names.size())
        throw ConfigError("model_weights must match the model list length");
    selection.validate();
}

ExperimentSpec validate_spec(const std::string& config_text) {
    json j;
    try {
        j = json::parse(config_text);
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse error at " + line_context(config_text, e.byte) + ": " +
                          e.what());
    }
    ExperimentSpec spec;
    try {
        spec.kind = parse_kind(j.at("kind").get<std::string>());
        spec.model_names = j.at("models").get<std::vector<std::string>>();
        spec.pool_name = j.at("pool").get<std::string>();
        spec.true_model = get_or<std::string>(j, "true_model", "");
        if (j.contains("true_params")) {
            const auto v = j.at("true_params").get<std::vector<double>>();
            spec.true_params = Eigen::Map<const Eigen::VectorXd>(
                v.data(), static_cast<Eigen::Index>(v.size()));
        }
        spec.dataset_path = get_or<std::string>(j, "dataset_path", "");
        spec.replicates = get_or<int>(j, "replicates", 1);
        spec.master_seed = get_or<std::uint64_t>(j, "seed", 0);
        spec.output_dir = get_or<std::string>(j, "output_dir", "out");
        spec.subset_names = get_or<std::vector<std::string>>(j, "subset", {});
        spec.model_weights = get_or<std::vector<double>>(j, "model_weights", {});

        if (j.contains("selection")) {
            const json& s = j.at("selection");
            spec.selection.algorithm =
                parse_algorithm(get_or<std::string>(s, "algorithm", "stochastic"));
            spec.selection.eps_stop = get_or<double>(s, "eps_stop", 0.05);
            spec.selection.order_dependency = get_or<bool>(s, "order_dependency", true);
            spec.selection.shuffle_seed = get_or<std::uint64_t>(s, "shuffle_seed", 0);
            spec.selection.auto_kl_for_multidim = get_or<bool>(s, "auto_kl_for_multidim", true);
            if (s.contains("criterion")) {
                const json& c = s.at("criterion");
                spec.selection.criterion.mode = parse_mode(get_or<std::string>(c, "mode", "ks"));
                spec.selection.criterion.p_threshold = get_or<double>(c, "p_threshold", 0.01);
                spec.selection.criterion.bootstrap_replicates =
                    get_or<int>(c, "bootstrap_replicates", 100);
                spec.selection.criterion.knn_k = get_or<int>(c, "knn_k", 4);
            }
            if (s.contains("abc")) {
                const json& a = s.at("abc");
                spec.selection.abc.epsilon = get_or<double>(a, "epsilon", 0.1);
                spec.selection.abc.target_particles =
                    get_or<std::size_t>(a, "target_particles", 500);
                spec.selection.abc.max_proposals =
                    get_or<std::size_t>(a, "max_proposals", 1000000);
                spec.selection.abc.quantile = get_or<bool>(a, "quantile", false);
                spec.selection.abc.workers = get_or<int>(a, "workers", 1);
            }
        }
        if (j.contains("registry")) {
            const json& r = j.at("registry");
            if (r.contains("gaussian")) {
                const json& g = r.at("gaussian");
                spec.registry.gaussian.sigma1 = get_or<double>(g, "sigma1", 0.3);
                spec.registry.gaussian.sigma2 = get_or<double>(g, "sigma2", 0.6);
                spec.registry.gaussian.prior_std = get_or<double>(g, "prior_std", 2.0);
                spec.registry.gaussian.sample_size = get_or<int>(g, "sample_size", 15);
            }
            if (r.contains("coalescent")) {
                const json& c = r.at("coalescent");
                spec.registry.coalescent_sample_size = get_or<int>(c, "sample_size", 100);
                spec.registry.theta_lo = get_or<double>(c, "theta_lo", 5.0);
                spec.registry.theta_hi = get_or<double>(c, "theta_hi", 30.0);
            }
            if (r.contains("walk"))
                spec.registry.walk_steps = get_or<int>(r.at("walk"), "steps", 200);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field error: ") + e.what());
    }
    spec.validate();
    return spec;
}

json spec_to_json(const ExperimentSpec& spec) {
    json j;
    j["kind"] = to_string(spec.kind);
    j["models"] = spec.model_names;
    j["pool"] = spec.pool_name;
    j["true_model"] = spec.true_model;
    j["true_params"] = std::vector<double>(spec.true_params.data(),
                                           spec.true_params.data() + spec.true_params.size());
    j["dataset_path"] = spec.dataset_path;
    j["replicates"] = spec.replicates;
    j["seed"] = spec.master_seed;
    j["output_dir"] = spec.output_dir;
    j["subset"] = spec.subset_names;
    j["model_weights"] = spec.model_weights;
    j["selection"] = {
        {"algorithm", to_string(spec.selection.algorithm)},
        {"eps_stop", spec.selection.eps_stop},
        {"order_dependency", spec.selection.order_dependency},
        {"shuffle_seed", spec.selection.shuffle_seed},
        {"auto_kl_for_multidim", spec.selection.auto_kl_for_multidim},
        {"criterion",
         {{"mode", to_string(spec.selection.criterion.mode)},
          {"p_threshold", spec.selection.criterion.p_threshold},
          {"bootstrap_replicates", spec.selection.criterion.bootstrap_replicates},
          {"knn_k", spec.selection.criterion.knn_k}}},
        {"abc",
         {{"epsilon", spec.selection.abc.epsilon},
          {"target_particles", spec.selection.abc.target_particles},
          {"max_proposals", spec.selection.abc.max_proposals},
          {"quantile", spec.selection.abc.quantile},
          {"workers", spec.selection.abc.workers}}}};
    j["registry"] = {
        {"gaussian",
         {{"sigma1", spec.registry.gaussian.sigma1},
          {"sigma2", spec.registry.gaussian.sigma2},
          {"prior_std", spec.registry.gaussian.prior_std},
          {"sample_size", spec.registry.gaussian.sample_size}}},
        {"coalescent",
         {{"sample_size", spec.registry.coalescent_sample_size},
          {"theta_lo", spec.registry.theta_lo},
          {"theta_hi", spec.registry.theta_hi}}},
        {"walk", {{"steps", spec.registry.walk_steps}}}};
    return j;
}

namespace {

json trace_to_json(const SelectionTrace& trace, const StatisticPool& pool) {
    json events = json::array();
    for (const auto& e : trace.events) {
        const char* kind = e.kind == TraceEvent::Kind::Accepted   ? "accepted"
                           : e.kind == TraceEvent::Kind::Rejected ? "rejected"
                                                                  : "pruned";
        events.push_back({{"kind", kind},
                          {"statistic", e.statistic},
                          {"value", e.value},
                          {"p_value", e.p_value}});
    }
    json out = {{"events", std::move(events)},
                {"final_subset", subset_to_names(pool, trace.final_subset)},
                {"abc_runs", trace.abc_runs},
                {"cache_hits", trace.cache_hits},
                {"total_proposals", trace.total_proposals},
                {"total_accepted", trace.total_accepted}};
    if (!trace.subset_divergences.empty()) {
        json divs = json::array();
        for (const auto& [subset, kl] : trace.subset_divergences)
            divs.push_back({{"subset", subset_to_names(pool, subset)}, {"kl", kl}});
        out["subset_divergences"] = std::move(divs);
    }
    return out;
}

struct ExperimentContext {
    const ExperimentSpec& spec;
    StatisticPool pool;
    std::vector<ModelSpec> models;
    std::optional<ModelSpec> truth;
    std::optional<Dataset> shared_data;
    StatisticSubset fixed_subset;
    bool replicate_parallel = false;
};

Dataset observed_for(const ExperimentContext& ctx, RngStream rep_stream) {
    if (ctx.shared_data) return *ctx.shared_data;
    RngStream sim_stream = rep_stream.substream("observed");
    return ctx.truth->simulate(ctx.spec.true_params, sim_stream);
}

void run_selection_kinds(const ExperimentContext& ctx, const Dataset& data,
                         const SelectionConfig& sel, RngStream rep_stream,
                         ReplicateOutcome& out) {
    if (ctx.spec.kind == ExperimentKind::SelectParams) {
        StatisticSubset union_set;
        for (std::size_t m = 0; m < ctx.models.size(); ++m) {
            RngStream s = rep_stream.substream("select", m);
            SelectionResult r;
            switch (sel.algorithm) {
                case SelectionAlgorithm::Exhaustive:
                    r = select_exhaustive(ctx.models[m], ctx.pool, data, sel, s);
                    break;
                case SelectionAlgorithm::Greedy:
                    r = select_greedy(ctx.models[m], ctx.pool, data, sel, s);
                    break;
                case SelectionAlgorithm::Stochastic:
                    r = select_stochastic(ctx.models[m], ctx.pool, data, sel, s);
                    break;
            }
            out.per_model.push_back(r.subset);
            out.abc_runs += r.trace.abc_runs;
            out.simulations += r.trace.total_proposals;
            for (int i : r.subset)
                if (std::find(union_set.begin(), union_set.end(), i) == union_set.end())
                    union_set.push_back(i);
            out.traces.push_back(std::move(r.trace));
        }
        std::sort(union_set.begin(), union_set.end());
        out.selected = std::move(union_set);
        return;
    }

    ModelSelectionResult r =
        select_for_models(ctx.models, ctx.pool, data, sel, rep_stream.substream("joint"));
    out.selected = r.subset;
    out.per_model = r.per_model;
    out.additional = r.additional;
    // Phases share one runner, so the joint trace carries cumulative totals.
    out.abc_runs = r.trace.abc_runs;
    out.simulations = r.trace.total_proposals;
    out.traces = std::move(r.model_traces);
    out.traces.push_back(std::move(r.trace));
}

void run_bf_scatter(const ExperimentContext& ctx, const Dataset& data,
                    const SelectionConfig& sel, RngStream rep_stream, ReplicateOutcome& out) {
    AbcConfig cfg = sel.abc;
    cfg.seed = stream_fingerprint(rep_stream.substream("bf"));
    const SummaryVector obs = evaluate_subset(ctx.pool, ctx.fixed_subset, data,
                                              RngStream(cfg.seed).substream("noise"));
    const ParticleSet particles = abc_joint(ctx.models, ctx.pool, ctx.fixed_subset, obs, cfg,
                                            ctx.spec.model_weights);
    out.log_bf_abc = std::log(bayes_factor_from_particles(particles, 0, 1));
    out.log_bf_true =
        analytic_log_bayes_factor(data.real_vector(), ctx.spec.registry.gaussian);
    out.abc_runs = 1;
    out.simulations = particles.proposals();
    out.acceptance_rate = particles.acceptance_rate();
    out.selected = ctx.fixed_subset;
}

void run_posterior_check(const ExperimentContext& ctx, const Dataset& data,
                         const SelectionConfig& sel, RngStream rep_stream,
                         ReplicateOutcome& out) {
    AbcConfig cfg = sel.abc;
    cfg.seed = stream_fingerprint(rep_stream.substream("posterior"));
    const SummaryVector obs = evaluate_subset(ctx.pool, ctx.fixed_subset, data,
                                              RngStream(cfg.seed).substream("noise"));
    const ParticleSet particles =
        abc_parameter(ctx.models[0], ctx.pool, ctx.fixed_subset, obs, cfg);
    out.abc_runs = 1;
    out.simulations = particles.proposals();
    out.acceptance_rate = particles.acceptance_rate();
    out.selected = ctx.fixed_subset;

    const std::string& name = ctx.models[0].name;
    if (name == "gauss1" || name == "gauss2") {
        const auto& g = ctx.spec.registry.gaussian;
        const double sigma = name == "gauss1" ? g.sigma1 : g.sigma2;
        const NormalPosterior post =
            conjugate_posterior(data.real_vector(), sigma, g.prior_std);
        RngStream oracle = rep_stream.substream("oracle");
        Eigen::VectorXd draws(5000);
        for (Eigen::Index i = 0; i < draws.size(); ++i)
            draws[i] = post.mean + std::sqrt(post.variance) * oracle.normal();
        const SampleCloud cloud = particles.parameter_cloud();
        out.ks_p = ks_two_sample(cloud.col(0), draws).p_value;
    }
}

void write_frequencies_csv(const std::string& path,
                           const std::vector<std::pair<std::string, int>>& freq, int r_total) {
    std::ofstream f(path);
    f << "statistic,name,count,R\n";
    for (std::size_t i = 0; i < freq.size(); ++i)
        f << i << "," << freq[i].first << "," << freq[i].second << "," << r_total << "\n";
}

}  // namespace

RunReport run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    const auto t_start = std::chrono::steady_clock::now();

    ExperimentContext ctx{spec, make_pool(spec.pool_name), {}, {}, {}, {}, false};
    for (const auto& name : spec.model_names)
        ctx.models.push_back(make_model(name, spec.registry));
    if (!spec.dataset_path.empty())
        ctx.shared_data = load_dataset(spec.dataset_path);
    else
        ctx.truth = make_model(spec.true_model, spec.registry);
    for (const auto& s : spec.subset_names) ctx.fixed_subset.push_back(ctx.pool.index_of(s));

    const int workers = std::max(1, spec.selection.abc.workers);
    ctx.replicate_parallel = workers > 1 && spec.replicates > 1;

    RunReport report;
    report.spec = spec;
    report.replicates.resize(static_cast<std::size_t>(spec.replicates));

    auto run_one = [&](int r) {
        ReplicateOutcome out;
        out.index = r;
        try {
            RngStream rep_stream = RngStream(spec.master_seed)
                                       .substream("replicate", static_cast<std::uint64_t>(r));
            SelectionConfig sel = spec.selection;
            sel.abc.workers = ctx.replicate_parallel ? 1 : workers;
            const Dataset data = observed_for(ctx, rep_stream);
            switch (spec.kind) {
                case ExperimentKind::SelectParams:
                case ExperimentKind::SelectJoint:
                    run_selection_kinds(ctx, data, sel, rep_stream, out);
                    break;
                case ExperimentKind::BfScatter:
                    run_bf_scatter(ctx, data, sel, rep_stream, out);
                    break;
                case ExperimentKind::PosteriorCheck:
                    run_posterior_check(ctx, data, sel, rep_stream, out);
                    break;
            }
        } catch (const std::exception& e) {
            out.failed = true;
            out.error = e.what();
        }
        report.replicates[static_cast<std::size_t>(r)] = std::move(out);
    };

    if (ctx.replicate_parallel) {
        std::atomic<int> next{0};
        std::vector<std::thread> threads;
        for (int w = 0; w < workers; ++w)
            threads.emplace_back([&] {
                for (int r = next.fetch_add(1); r < spec.replicates; r = next.fetch_add(1))
                    run_one(r);
            });
        for (auto& t : threads) t.join();
    } else {
        for (int r = 0; r < spec.replicates; ++r) run_one(r);
    }

    // Aggregate per-statistic counts over successful replicates.
    const int w = ctx.pool.size();
    std::vector<int> freq(static_cast<std::size_t>(w), 0);
    std::vector<int> params_freq(static_cast<std::size_t>(w), 0);
    std::vector<int> additional_freq(static_cast<std::size_t>(w), 0);
    for (const auto& rep : report.replicates) {
        if (rep.failed) continue;
        report.total_simulations += rep.simulations;
        for (int i : rep.selected) ++freq[static_cast<std::size_t>(i)];
        for (int i : rep.additional) ++additional_freq[static_cast<std::size_t>(i)];
        std::vector<bool> seen(static_cast<std::size_t>(w), false);
        for (const auto& subset : rep.per_model)
            for (int i : subset) seen[static_cast<std::size_t>(i)] = true;
        for (int i = 0; i < w; ++i)
            if (seen[static_cast<std::size_t>(i)]) ++params_freq[static_cast<std::size_t>(i)];
    }
    for (int i = 0; i < w; ++i) {
        const std::string& name = ctx.pool.at(i).name;
        report.frequencies.emplace_back(name, freq[static_cast<std::size_t>(i)]);
        if (spec.kind == ExperimentKind::SelectJoint) {
            report.params_frequencies.emplace_back(name, params_freq[static_cast<std::size_t>(i)]);
            report.additional_frequencies.emplace_back(
                name, additional_freq[static_cast<std::size_t>(i)]);
        }
    }
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

    // Persist outputs.
    namespace fs = std::filesystem;
    fs::create_directories(spec.output_dir);
    const std::string base = spec.output_dir + "/";
    {
        std::ofstream f(base + "report.json");
        f << report_to_json(report).dump(2) << "\n";
    }
    write_frequencies_csv(base + "frequencies.csv", report.frequencies, spec.replicates);
    if (spec.kind == ExperimentKind::SelectJoint) {
        write_frequencies_csv(base + "params_frequencies.csv", report.params_frequencies,
                              spec.replicates);
        write_frequencies_csv(base + "joint_additional_frequencies.csv",
                              report.additional_frequencies, spec.replicates);
    }
    if (spec.kind == ExperimentKind::BfScatter) {
        std::ofstream f(base + "bf_scatter.csv");
        f << "replicate,log_bf_true,log_bf_abc\n";
        for (const auto& rep : report.replicates) {
            if (rep.failed) continue;
            f << rep.index << "," << rep.log_bf_true << "," << rep.log_bf_abc << "\n";
        }
    }
    if (spec.kind == ExperimentKind::PosteriorCheck) {
        std::ofstream f(base + "posterior_check.csv");
        f << "replicate,ks_p,accepted,proposals\n";
        for (const auto& rep : report.replicates) {
            if (rep.failed) continue;
            f << rep.index << "," << rep.ks_p << ","
              << static_cast<std::size_t>(rep.acceptance_rate *
                                          static_cast<double>(rep.simulations) +
                                          0.5)
              << "," << rep.simulations << "\n";
        }
    }
    return report;
}

json report_to_json(const RunReport& report) {
    const StatisticPool pool = make_pool(report.spec.pool_name);
    json reps = json::array();
    for (const auto& r : report.replicates) {
        json jr = {{"index", r.index},
                   {"failed", r.failed},
                   {"selected", subset_to_names(pool, r.selected)},
                   {"abc_runs", r.abc_runs},
                   {"simulations", r.simulations}};
        if (r.failed) jr["error"] = r.error;
        if (!r.per_model.empty()) {
            json pm = json::array();
            for (const auto& s : r.per_model) pm.push_back(subset_to_names(pool, s));
            jr["per_model"] = std::move(pm);
        }
        if (!r.additional.empty() || report.spec.kind == ExperimentKind::SelectJoint)
            jr["additional"] = subset_to_names(pool, r.additional);
        if (std::isfinite(r.log_bf_abc)) {
            jr["log_bf_true"] = r.log_bf_true;
            jr["log_bf_abc"] = r.log_bf_abc;
        }
        if (std::isfinite(r.ks_p)) jr["ks_p"] = r.ks_p;
        if (std::isfinite(r.acceptance_rate)) jr["acceptance_rate"] = r.acceptance_rate;
        if (!r.traces.empty()) {
            json traces = json::array();
            for (const auto& t : r.traces) traces.push_back(trace_to_json(t, pool));
            jr["traces"] = std::move(traces);
        }
        reps.push_back(std::move(jr));
    }

    const auto freq_json = [](const std::vector<std::pair<std::string, int>>& freq) {
        json out = json::array();
        for (std::size_t i = 0; i < freq.size(); ++i)
            out.push_back(
                {{"statistic", i}, {"name", freq[i].first}, {"count", freq[i].second}});
        return out;
    };

    json j;
    j["schema_version"] = report.schema_version;
    j["spec"] = spec_to_json(report.spec);
    j["aggregates"] = {{"frequencies", freq_json(report.frequencies)},
                       {"total_simulations", report.total_simulations},
                       {"wall_seconds", report.wall_seconds}};
    if (!report.params_frequencies.empty())
        j["aggregates"]["params_frequencies"] = freq_json(report.params_frequencies);
    if (!report.additional_frequencies.empty())
        j["aggregates"]["additional_frequencies"] = freq_json(report.additional_frequencies);
    j["replicates"] = std::move(reps);
    return j;
}

Dataset load_dataset(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open dataset file '" + path + "'");
    std::stringstream buffer;
    buffer << f.rdbuf();
    const std::string content = buffer.str();
    const std::uint64_t id = hash_label(content);

    std::istringstream in(content);
    std::string first_line;
    std::getline(in, first_line);
    while (!first_line.empty() && (first_line.back() == '\r' || first_line.back() == ' '))
        first_line.pop_back();

    if (first_line == "t,x,y") {
        std::vector<std::array<double, 2>> rows;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream ls(line);
            double t, x, y;
            if (!(ls >> t >> x >> y))
                throw ConfigError("bad trajectory row in '" + path + "': " + line);
            rows.push_back({x, y});
        }
        Trajectory traj(static_cast<Eigen::Index>(rows.size()), 2);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            traj(static_cast<Eigen::Index>(i), 0) = rows[i][0];
            traj(static_cast<Eigen::Index>(i), 1) = rows[i][1];
        }
        return Dataset(std::move(traj), id);
    }

    {
        std::istringstream header(first_line);
        long n = 0, sites = 0;
        if ((header >> n >> sites) && header.eof() && n >= 2 && sites >= 0) {
            HaplotypeMatrix h(n, sites);
            std::string line;
            for (long r = 0; r < n; ++r) {
                if (!std::getline(in, line))
                    throw ConfigError("haplotype file '" + path + "' ended early");
                while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
                    line.pop_back();
                if (static_cast<long>(line.size()) != sites)
                    throw ConfigError("haplotype row " + std::to_string(r) + " in '" + path +
                                      "' has wrong length");
                for (long c = 0; c < sites; ++c) {
                    const char ch = line[static_cast<std::size_t>(c)];
                    if (ch != '0' && ch != '1')
                        throw ConfigError("haplotype entries must be 0 or 1");
                    h(r, c) = static_cast<std::uint8_t>(ch - '0');
                }
            }
            return Dataset(std::move(h), id);
        }
    }

    std::vector<double> values;
    std::istringstream all(content);
    double v;
    while (all >> v) values.push_back(v);
    if (values.empty()) throw ConfigError("dataset file '" + path + "' contains no values");
    RealVector y = Eigen::Map<const Eigen::VectorXd>(values.data(),
                                                     static_cast<Eigen::Index>(values.size()));
    return Dataset(std::move(y), id);
}

void save_dataset(const Dataset& data, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write dataset file '" + path + "'");
    f.precision(17);
    switch (data.kind()) {
        case DatasetKind::RealVector: {
            const RealVector& y = data.real_vector();
            for (Eigen::Index i = 0; i < y.size(); ++i) f << y[i] << "\n";
            break;
        }
        case DatasetKind::HaplotypeMatrix: {
            const HaplotypeMatrix& h = data.haplotypes();
            f << h.rows() << " " << h.cols() << "\n";
            for (Eigen::Index r = 0; r < h.rows(); ++r) {
                for (Eigen::Index c = 0; c < h.cols(); ++c) f << (h(r, c) ? '1' : '0');
                f << "\n";
            }
            break;
        }
        case DatasetKind::Trajectory: {
            const Trajectory& t = data.trajectory();
            f << "t,x,y\n";
            for (Eigen::Index i = 0; i < t.rows(); ++i)
                f << i << "," << t(i, 0) << "," << t(i, 1) << "\n";
            break;
        }
    }
}

}  // namespace abcselect
