// abc_engine.hpp — Rejection ABC with a deterministic parallel budget.
//
// Proposals are indexed 0..max_proposals-1 and each proposal's random
// stream is keyed by (seed, index), so the accepted set is a pure function
// of the configuration: identical across reruns and across worker counts.
// Acceptance compares the summary-space distance (the Euclidean norm of
// shifted log differences) against epsilon; quantile mode instead runs the
// full budget and keeps the target_particles closest proposals.
#pragma once

#include <cstdint>
#include <vector>

#include "abcselect/distance.hpp"
#include "abcselect/model_spec.hpp"
#include "abcselect/particle_set.hpp"
#include "abcselect/statistic_pool.hpp"

namespace abcselect {

struct AbcConfig {
    double epsilon = 0.1;
    std::size_t target_particles = 500;
    std::size_t max_proposals = 1000000;
    std::uint64_t seed = 0;
    int workers = 1;
    /// Accept the target_particles smallest distances out of max_proposals
    /// instead of thresholding on epsilon.
    bool quantile = false;

    void validate() const;
};

/// Sample the ABC posterior of one model's parameters given the observed
/// summary.  The observed summary must have been evaluated on `subset`.
/// In threshold mode, stops at target_particles acceptances or at the
/// proposal budget; throws EpsilonTooTightError if nothing is accepted.
ParticleSet abc_parameter(const ModelSpec& model, const StatisticPool& pool,
                          const StatisticSubset& subset, const SummaryVector& observed,
                          const AbcConfig& cfg);

/// Joint model/parameter sampling: each proposal draws a model index from
/// `model_weights` (uniform when empty), then parameters from that model's
/// prior.  The marginal model posterior is the per-model acceptance
/// fraction of the returned set.
ParticleSet abc_joint(const std::vector<ModelSpec>& models, const StatisticPool& pool,
                      const StatisticSubset& subset, const SummaryVector& observed,
                      const AbcConfig& cfg, const std::vector<double>& model_weights = {});

/// Half-count-smoothed acceptance ratio (count(m1)+1/2)/(count(m2)+1/2).
/// Under uniform model priors this estimates the Bayes factor of m1 vs m2.
double bayes_factor_from_particles(const ParticleSet& particles, int m1, int m2);

}  // namespace abcselect
