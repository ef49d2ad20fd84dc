#include "abcselect/selection.hpp"

#include <algorithm>
#include <limits>

#include "abcselect/knn.hpp"

namespace abcselect {

void SelectionConfig::validate() const {
    if (!(eps_stop > 0.0)) throw InvariantError("eps_stop must be positive");
    criterion.validate();
    abc.validate();
}

namespace {

StatisticSubset sorted_copy(StatisticSubset s) {
    std::sort(s.begin(), s.end());
    return s;
}

StatisticSubset sorted_union(const StatisticSubset& a, const StatisticSubset& b) {
    StatisticSubset out = a;
    out.insert(out.end(), b.begin(), b.end());
    return sorted_copy(std::move(out));
}

StatisticSubset complement(int pool_size, const StatisticSubset& taken) {
    std::vector<bool> in(static_cast<std::size_t>(pool_size), false);
    for (int i : taken) in[static_cast<std::size_t>(i)] = true;
    StatisticSubset out;
    for (int i = 0; i < pool_size; ++i)
        if (!in[static_cast<std::size_t>(i)]) out.push_back(i);
    return out;
}

bool is_test_mode(CriterionMode m) { return m != CriterionMode::KL_BOOTSTRAP; }

TraceEvent make_event(TraceEvent::Kind kind, const std::string& name,
                      const CriterionDecision& d, CriterionMode mode) {
    TraceEvent e;
    e.kind = kind;
    e.statistic = name;
    if (is_test_mode(mode))
        e.p_value = d.evidence;
    else
        e.value = d.evidence;
    return e;
}

void finish_trace(SelectionTrace& trace, const SubsetRunner& runner,
                  const StatisticSubset& final_subset) {
    trace.final_subset = final_subset;
    trace.abc_runs = runner.abc_runs();
    trace.cache_hits = runner.cache_hits();
    trace.total_proposals = runner.total_proposals();
    trace.total_accepted = runner.total_accepted();
}

}  // namespace

SubsetRunner::SubsetRunner(std::vector<ModelSpec> models, const StatisticPool& pool,
                           const Dataset& observed, const SelectionConfig& cfg,
                           RngStream stream)
    : models_(std::move(models)), pool_(pool), observed_(observed), cfg_(cfg),
      stream_(stream) {
    if (models_.empty()) throw InvariantError("SubsetRunner needs at least one model");
    if (pool_.size() > 64) throw InvariantError("statistic pools are limited to 64 entries");
}

std::uint64_t SubsetRunner::subset_mask(const StatisticSubset& subset) const {
    pool_.check_subset(subset);
    std::uint64_t mask = 0;
    for (int i : subset) mask |= (1ull << static_cast<unsigned>(i));
    return mask;
}

std::shared_ptr<const ParticleSet> SubsetRunner::run_scoped(int scope,
                                                            const StatisticSubset& subset_in) {
    const StatisticSubset subset = sorted_copy(subset_in);
    const auto key = std::make_pair(scope, subset_mask(subset));
    if (auto it = cache_.find(key); it != cache_.end()) {
        ++cache_hits_;
        return it->second;
    }
    AbcConfig run_cfg = cfg_.abc;
    run_cfg.seed = stream_fingerprint(
        stream_.substream("abcrun", static_cast<std::uint64_t>(scope + 1)).substream(key.second));
    const SummaryVector obs_summary =
        evaluate_subset(pool_, subset, observed_, RngStream(run_cfg.seed).substream("noise"));
    ParticleSet particles =
        scope < 0 ? abc_joint(models_, pool_, subset, obs_summary, run_cfg)
                  : abc_parameter(models_[static_cast<std::size_t>(scope)], pool_, subset,
                                  obs_summary, run_cfg);
    ++abc_runs_;
    total_proposals_ += particles.proposals();
    total_accepted_ += particles.size();
    auto shared = std::make_shared<const ParticleSet>(std::move(particles));
    cache_.emplace(key, shared);
    return shared;
}

std::shared_ptr<const ParticleSet> SubsetRunner::run_for_model(int model_index,
                                                               const StatisticSubset& subset) {
    if (model_index < 0 || model_index >= static_cast<int>(models_.size()))
        throw InvariantError("model index out of range");
    return run_scoped(model_index, subset);
}

std::shared_ptr<const ParticleSet> SubsetRunner::run_joint(const StatisticSubset& subset) {
    return run_scoped(-1, subset);
}

CriterionConfig SubsetRunner::effective_criterion(int model_index) const {
    CriterionConfig cc = cfg_.criterion;
    if (cc.mode == CriterionMode::KS && cfg_.auto_kl_for_multidim &&
        models_[static_cast<std::size_t>(model_index)].param_dim > 1)
        cc.mode = CriterionMode::KL_BOOTSTRAP;
    return cc;
}

double SubsetRunner::bootstrap_delta_for(int model_index, const SampleCloud& posterior_with,
                                         const StatisticSubset& subset_without) {
    const StatisticSubset subset = sorted_copy(subset_without);
    const auto key = std::make_pair(model_index, subset_mask(subset));
    auto it = boot_cache_.find(key);
    if (it == boot_cache_.end()) {
        RngStream boot_stream =
            stream_.substream("bootstrap", static_cast<std::uint64_t>(model_index))
                .substream(key.second);
        SampleCloud pooled = bootstrap_pooled_cloud(
            pool_, subset, models_[static_cast<std::size_t>(model_index)], observed_,
            cfg_.abc, cfg_.criterion, boot_stream);
        it = boot_cache_.emplace(key, std::make_shared<const SampleCloud>(std::move(pooled)))
                 .first;
    }
    return kl_knn(posterior_with, *it->second, cfg_.criterion.knn_k);
}

namespace {

/// Test whether adding `candidate` to `base` moves model `mi`'s parameter
/// posterior, under the runner's effective criterion.
CriterionDecision test_parameter_addition(SubsetRunner& runner, int mi,
                                          const StatisticSubset& base, int candidate,
                                          CriterionMode& mode_out) {
    const StatisticSubset without = sorted_copy(base);
    const StatisticSubset with = sorted_union(without, {candidate});
    const auto p_with = runner.run_for_model(mi, with);
    const auto p_without = runner.run_for_model(mi, without);
    const CriterionConfig cc = runner.effective_criterion(mi);
    mode_out = cc.mode;
    std::optional<double> delta;
    if (cc.mode == CriterionMode::KL_BOOTSTRAP)
        delta = runner.bootstrap_delta_for(mi, p_with->parameter_cloud(), without);
    return criterion(*p_with, *p_without, cc, PosteriorMarginal::Parameters, 0, delta);
}

/// Model-marginal variant: does adding `candidate` on top of (kept_base U
/// extra) move the model-index posterior of the joint run?
CriterionDecision test_model_addition(SubsetRunner& runner, const StatisticSubset& base,
                                      int candidate) {
    const StatisticSubset without = sorted_copy(base);
    const StatisticSubset with = sorted_union(without, {candidate});
    const auto p_with = runner.run_joint(with);
    const auto p_without = runner.run_joint(without);
    return criterion(*p_with, *p_without, runner.config().criterion, PosteriorMarginal::Model,
                     static_cast<int>(runner.models().size()));
}

SelectionResult stochastic_on(SubsetRunner& runner, int mi, RngStream order) {
    const StatisticPool& pool = runner.pool();
    const int w = pool.size();
    if (w == 0) throw InvariantError("cannot select from an empty pool");
    SelectionTrace trace;
    try {
        order = order.substream(runner.config().shuffle_seed);

        StatisticSubset accepted;  // acceptance order
        const int first = static_cast<int>(order.uniform_int(static_cast<std::uint64_t>(w)));
        accepted.push_back(first);
        trace.events.push_back({TraceEvent::Kind::Accepted, pool.at(first).name,
                                std::nan(""), std::nan("")});

        StatisticSubset candidates = complement(w, accepted);
        bool accepted_this_pass = true;
        while (accepted_this_pass) {
            accepted_this_pass = false;
            while (!candidates.empty()) {
                const std::size_t pick_at =
                    order.uniform_int(static_cast<std::uint64_t>(candidates.size()));
                const int pick = candidates[pick_at];
                candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(pick_at));

                CriterionMode mode = CriterionMode::KS;
                const CriterionDecision d =
                    test_parameter_addition(runner, mi, accepted, pick, mode);
                trace.events.push_back(make_event(d.accept ? TraceEvent::Kind::Accepted
                                                           : TraceEvent::Kind::Rejected,
                                                  pool.at(pick).name, d, mode));
                if (!d.accept) continue;

                if (runner.config().order_dependency && !accepted.empty())
                    accepted = prune_order_dependency(runner, mi, accepted, pick, &trace);
                else
                    accepted.push_back(pick);
                candidates = complement(w, accepted);
                accepted_this_pass = true;
                break;
            }
        }
        finish_trace(trace, runner, accepted);
        return {accepted, trace};
    } catch (const Error& e) {
        finish_trace(trace, runner, trace.final_subset);
        throw SelectionError(std::string("stochastic selection failed: ") + e.what(), trace);
    }
}

}  // namespace

StatisticSubset prune_order_dependency(SubsetRunner& runner, int model_index,
                                       const StatisticSubset& accepted, int last,
                                       SelectionTrace* trace) {
    for (int s : accepted)
        if (s == last) throw InvariantError("order-dependency: `last` is already accepted");
    StatisticSubset kept{last};
    for (int s : accepted) {
        CriterionMode mode = CriterionMode::KS;
        const CriterionDecision d = test_parameter_addition(runner, model_index, kept, s, mode);
        if (d.accept) {
            kept.push_back(s);
        } else if (trace) {
            trace->events.push_back(
                make_event(TraceEvent::Kind::Pruned, runner.pool().at(s).name, d, mode));
        }
    }
    return kept;
}

SelectionResult select_stochastic(const ModelSpec& model, const StatisticPool& pool,
                                  const Dataset& observed, const SelectionConfig& cfg,
                                  RngStream stream) {
    SubsetRunner runner({model}, pool, observed, cfg, stream.substream("runner"));
    return stochastic_on(runner, 0, stream.substream("order"));
}

SelectionResult select_greedy(const ModelSpec& model, const StatisticPool& pool,
                              const Dataset& observed, const SelectionConfig& cfg,
                              RngStream stream) {
    const int w = pool.size();
    if (w == 0) throw InvariantError("cannot select from an empty pool");
    SubsetRunner runner({model}, pool, observed, cfg, stream.substream("runner"));
    SelectionTrace trace;
    try {
        const int k = cfg.criterion.knn_k;

        // Seed with the statistic whose posterior has minimum entropy.
        int first = 0;
        double best_h = std::numeric_limits<double>::infinity();
        for (int i = 0; i < w; ++i) {
            const auto p = runner.run_for_model(0, {i});
            const double h = entropy_knn(p->parameter_cloud(), k);
            if (h < best_h) {
                best_h = h;
                first = i;
            }
        }
        StatisticSubset chosen{first};
        trace.events.push_back(
            {TraceEvent::Kind::Accepted, pool.at(first).name, best_h, std::nan("")});

        for (;;) {
            const StatisticSubset remaining = complement(w, chosen);
            if (remaining.empty()) break;
            const auto p_base = runner.run_for_model(0, sorted_copy(chosen));
            int best = -1;
            double best_kl = -std::numeric_limits<double>::infinity();
            for (int u : remaining) {
                const auto p_with = runner.run_for_model(0, sorted_union(chosen, {u}));
                const double kl =
                    kl_knn(p_with->parameter_cloud(), p_base->parameter_cloud(), k);
                if (kl > best_kl) {
                    best_kl = kl;
                    best = u;
                }
            }
            if (best_kl <= cfg.eps_stop) {
                trace.events.push_back(
                    {TraceEvent::Kind::Rejected, pool.at(best).name, best_kl, std::nan("")});
                break;
            }
            chosen.push_back(best);
            trace.events.push_back(
                {TraceEvent::Kind::Accepted, pool.at(best).name, best_kl, std::nan("")});
        }
        finish_trace(trace, runner, chosen);
        return {chosen, trace};
    } catch (const Error& e) {
        finish_trace(trace, runner, trace.final_subset);
        throw SelectionError(std::string("greedy selection failed: ") + e.what(), trace);
    }
}

SelectionResult select_exhaustive(const ModelSpec& model, const StatisticPool& pool,
                                  const Dataset& observed, const SelectionConfig& cfg,
                                  RngStream stream) {
    const int w = pool.size();
    if (w == 0) throw InvariantError("cannot select from an empty pool");
    if (w > 12)
        throw InvariantError("exhaustive selection is limited to pools of width 12 "
                             "(2^w ABC runs); use the greedy or stochastic algorithm");
    SubsetRunner runner({model}, pool, observed, cfg, stream.substream("runner"));
    SelectionTrace trace;
    try {
        const int k = cfg.criterion.knn_k;
        const auto p_full = runner.run_for_model(0, pool.full_subset());
        const SampleCloud full_cloud = p_full->parameter_cloud();

        struct Entry {
            StatisticSubset subset;
            double kl;
        };
        std::vector<Entry> entries;
        const std::uint64_t n_subsets = 1ull << static_cast<unsigned>(w);
        for (std::uint64_t mask = 1; mask < n_subsets; ++mask) {
            StatisticSubset subset;
            for (int i = 0; i < w; ++i)
                if (mask & (1ull << static_cast<unsigned>(i))) subset.push_back(i);
            const auto p = runner.run_for_model(0, subset);
            const double kl = kl_knn(full_cloud, p->parameter_cloud(), k);
            entries.push_back({subset, kl});
            trace.subset_divergences.emplace_back(subset, kl);
        }

        // Smallest qualifying subset; ties resolved by lexicographic index order.
        std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
            if (a.subset.size() != b.subset.size()) return a.subset.size() < b.subset.size();
            return std::lexicographical_compare(a.subset.begin(), a.subset.end(),
                                                b.subset.begin(), b.subset.end());
        });
        const Entry* best = nullptr;
        for (const Entry& e : entries) {
            if (e.kl <= cfg.eps_stop) {
                best = &e;
                break;
            }
        }
        if (!best) best = &entries.back();  // full pool always qualifies in practice

        for (int i : best->subset)
            trace.events.push_back(
                {TraceEvent::Kind::Accepted, pool.at(i).name, best->kl, std::nan("")});
        finish_trace(trace, runner, best->subset);
        return {best->subset, trace};
    } catch (const Error& e) {
        finish_trace(trace, runner, trace.final_subset);
        throw SelectionError(std::string("exhaustive selection failed: ") + e.what(), trace);
    }
}

namespace {

/// Order-dependency pass on the model marginal: M* is always kept; earlier
/// phase-2 acceptances are re-tested given (M* U kept).
StatisticSubset prune_model_marginal(SubsetRunner& runner, const StatisticSubset& always_kept,
                                     const StatisticSubset& accepted, int last,
                                     SelectionTrace& trace) {
    StatisticSubset kept{last};
    for (int s : accepted) {
        const CriterionDecision d =
            test_model_addition(runner, sorted_union(always_kept, kept), s);
        if (d.accept) {
            kept.push_back(s);
        } else {
            trace.events.push_back(make_event(TraceEvent::Kind::Pruned,
                                              runner.pool().at(s).name, d,
                                              CriterionMode::CHI2));
        }
    }
    return kept;
}

}  // namespace

ModelSelectionResult select_for_models(const std::vector<ModelSpec>& models,
                                       const StatisticPool& pool, const Dataset& observed,
                                       const SelectionConfig& cfg, RngStream stream) {
    if (models.size() < 2)
        throw InvariantError("select_for_models requires at least two models");
    SubsetRunner runner(models, pool, observed, cfg, stream.substream("runner"));

    ModelSelectionResult result;
    // Phase 1: per-model sufficient sets, pooled into M*.
    for (std::size_t m = 0; m < models.size(); ++m) {
        SelectionResult r = stochastic_on(runner, static_cast<int>(m),
                                          stream.substream("phase1", m));
        result.per_model.push_back(r.subset);
        result.model_traces.push_back(std::move(r.trace));
    }
    StatisticSubset pooled;
    for (const auto& s : result.per_model) pooled = sorted_union(pooled, s);

    // Phase 2: admit statistics that move the model-index posterior.
    SelectionTrace& trace = result.trace;
    try {
        RngStream order = stream.substream("phase2").substream(cfg.shuffle_seed);
        StatisticSubset additional;  // acceptance order
        StatisticSubset candidates = complement(pool.size(), pooled);
        bool accepted_this_pass = true;
        while (accepted_this_pass) {
            accepted_this_pass = false;
            while (!candidates.empty()) {
                const std::size_t pick_at =
                    order.uniform_int(static_cast<std::uint64_t>(candidates.size()));
                const int pick = candidates[pick_at];
                candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(pick_at));

                const CriterionDecision d =
                    test_model_addition(runner, sorted_union(pooled, additional), pick);
                trace.events.push_back(make_event(d.accept ? TraceEvent::Kind::Accepted
                                                           : TraceEvent::Kind::Rejected,
                                                  pool.at(pick).name, d, CriterionMode::CHI2));
                if (!d.accept) continue;

                if (cfg.order_dependency && !additional.empty())
                    additional = prune_model_marginal(runner, pooled, additional, pick, trace);
                else
                    additional.push_back(pick);
                candidates = complement(pool.size(), sorted_union(pooled, additional));
                accepted_this_pass = true;
                break;
            }
        }
        result.additional = additional;
        result.subset = sorted_union(pooled, additional);
        finish_trace(trace, runner, result.subset);
        return result;
    } catch (const Error& e) {
        finish_trace(trace, runner, trace.final_subset);
        throw SelectionError(std::string("model-selection phase failed: ") + e.what(), trace);
    }
}

}  // namespace abcselect
