// selection.hpp — Construction of (approximately) sufficient statistic sets.
//
// Five procedures over a statistic pool, a simulable model (or model set)
// and one observed dataset:
//
//   select_exhaustive  — ABC posterior for every nonempty subset; return the
//                        smallest subset whose posterior sits within eps_stop
//                        (in kNN-KL) of the full-pool posterior.
//   select_greedy      — seed with the lowest-posterior-entropy statistic,
//                        then repeatedly add the statistic whose inclusion
//                        maximizes the KL divergence from the current
//                        posterior, stopping when the best addition moves
//                        the posterior by at most eps_stop.
//   select_stochastic  — random first statistic; test randomly drawn
//                        candidates with the acceptance criterion; each
//                        acceptance resets the candidate pool and may
//                        trigger order-dependency pruning.
//   prune_order_dependency — re-test earlier acceptances given the newest
//                        statistic; keep only those that still add
//                        information.
//   select_for_models  — per-model stochastic selection pooled into M*,
//                        then a second stochastic pass that admits
//                        statistics which move the model-index posterior
//                        (Pearson criterion), keeping M* throughout.
//
// ABC runs are cached per (scope, subset); the cache key and every random
// decision are derived from the run's base stream, so replaying with the
// same seed reproduces the identical trace and subset.
#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "abcselect/abc_engine.hpp"
#include "abcselect/criterion.hpp"
#include "abcselect/dataset.hpp"
#include "abcselect/errors.hpp"
#include "abcselect/model_spec.hpp"
#include "abcselect/statistic_pool.hpp"

namespace abcselect {

enum class SelectionAlgorithm { Exhaustive, Greedy, Stochastic };

struct SelectionConfig {
    SelectionAlgorithm algorithm = SelectionAlgorithm::Stochastic;
    CriterionConfig criterion;
    /// Template for every ABC run; the seed field is re-derived per run.
    AbcConfig abc;
    /// Stopping tolerance for the greedy/exhaustive KL comparisons.
    double eps_stop = 0.05;
    /// Run order-dependency pruning after each stochastic acceptance.
    bool order_dependency = true;
    /// Extra entropy folded into the candidate-order stream.
    std::uint64_t shuffle_seed = 0;
    /// Multi-parameter posteriors switch the KS criterion to KL_BOOTSTRAP
    /// (per-dimension KS is only an approximation for one parameter).
    bool auto_kl_for_multidim = true;

    void validate() const;
};

struct TraceEvent {
    enum class Kind { Accepted, Rejected, Pruned };
    Kind kind = Kind::Rejected;
    std::string statistic;
    /// Criterion value: KL estimate or posterior entropy, NaN if none.
    double value = std::nan("");
    /// Deciding p-value, NaN when the decision was not test-based.
    double p_value = std::nan("");
};

struct SelectionTrace {
    std::vector<TraceEvent> events;
    StatisticSubset final_subset;
    std::size_t abc_runs = 0;          // engine invocations
    std::size_t cache_hits = 0;        // subset revisits served from cache
    std::size_t total_proposals = 0;   // simulations consumed by those runs
    std::size_t total_accepted = 0;    // particles produced by those runs
    /// Exhaustive audit: KL(full posterior || subset posterior) per subset.
    std::vector<std::pair<StatisticSubset, double>> subset_divergences;
};

/// A selection step failed (usually an exhausted ABC budget); carries the
/// partial trace accumulated so far.
class SelectionError : public Error {
public:
    SelectionError(const std::string& msg, SelectionTrace partial)
        : Error(msg), partial_(std::move(partial)) {}
    const SelectionTrace& partial_trace() const noexcept { return partial_; }

private:
    SelectionTrace partial_;
};

/// Cached ABC runs over subsets for one observed dataset.  Each (scope,
/// subset) pair maps to exactly one engine run whose seed is derived from
/// the base stream, so revisits are exact replays.  Scope -1 is the joint
/// model space; scopes >= 0 are single models.
class SubsetRunner {
public:
    SubsetRunner(std::vector<ModelSpec> models, const StatisticPool& pool,
                 const Dataset& observed, const SelectionConfig& cfg, RngStream stream);

    std::shared_ptr<const ParticleSet> run_for_model(int model_index,
                                                     const StatisticSubset& subset);
    std::shared_ptr<const ParticleSet> run_joint(const StatisticSubset& subset);

    /// Bootstrap threshold for testing `subset_with` posterior against the
    /// pooled resampled-data posteriors under `subset_without`.
    double bootstrap_delta_for(int model_index, const SampleCloud& posterior_with,
                               const StatisticSubset& subset_without);

    const std::vector<ModelSpec>& models() const noexcept { return models_; }
    const StatisticPool& pool() const noexcept { return pool_; }
    const Dataset& observed() const noexcept { return observed_; }
    const SelectionConfig& config() const noexcept { return cfg_; }
    std::size_t abc_runs() const noexcept { return abc_runs_; }
    std::size_t cache_hits() const noexcept { return cache_hits_; }
    std::size_t total_proposals() const noexcept { return total_proposals_; }
    std::size_t total_accepted() const noexcept { return total_accepted_; }

    /// Effective criterion configuration for a model's parameter marginal.
    CriterionConfig effective_criterion(int model_index) const;

private:
    std::uint64_t subset_mask(const StatisticSubset& subset) const;
    std::shared_ptr<const ParticleSet> run_scoped(int scope, const StatisticSubset& subset);

    std::vector<ModelSpec> models_;
    const StatisticPool& pool_;
    const Dataset& observed_;
    SelectionConfig cfg_;
    RngStream stream_;
    std::map<std::pair<int, std::uint64_t>, std::shared_ptr<const ParticleSet>> cache_;
    std::map<std::pair<int, std::uint64_t>, std::shared_ptr<const SampleCloud>> boot_cache_;
    std::size_t abc_runs_ = 0;
    std::size_t cache_hits_ = 0;
    std::size_t total_proposals_ = 0;
    std::size_t total_accepted_ = 0;
};

struct SelectionResult {
    StatisticSubset subset;
    SelectionTrace trace;
};

SelectionResult select_exhaustive(const ModelSpec& model, const StatisticPool& pool,
                                  const Dataset& observed, const SelectionConfig& cfg,
                                  RngStream stream);

SelectionResult select_greedy(const ModelSpec& model, const StatisticPool& pool,
                              const Dataset& observed, const SelectionConfig& cfg,
                              RngStream stream);

SelectionResult select_stochastic(const ModelSpec& model, const StatisticPool& pool,
                                  const Dataset& observed, const SelectionConfig& cfg,
                                  RngStream stream);

/// Order-dependency pass: given previously accepted statistics (in
/// acceptance order) and the newest acceptance `last` (not among them),
/// keep `last` and re-admit each earlier statistic only if it still moves
/// the posterior given the set retained so far.  Returns the retained
/// subset, `last` first.
StatisticSubset prune_order_dependency(SubsetRunner& runner, int model_index,
                                       const StatisticSubset& accepted, int last,
                                       SelectionTrace* trace = nullptr);

struct ModelSelectionResult {
    /// Final statistic set for model selection: union of per-model subsets
    /// plus the statistics admitted by the model-marginal pass.
    StatisticSubset subset;
    std::vector<StatisticSubset> per_model;
    /// Statistics added for the joint space beyond the per-model union.
    StatisticSubset additional;
    SelectionTrace trace;  // model-marginal phase events
    std::vector<SelectionTrace> model_traces;
};

ModelSelectionResult select_for_models(const std::vector<ModelSpec>& models,
                                       const StatisticPool& pool, const Dataset& observed,
                                       const SelectionConfig& cfg, RngStream stream);

}  // namespace abcselect
