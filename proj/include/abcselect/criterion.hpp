// criterion.hpp — The statistic-acceptance criterion and its bootstrap
// threshold.
//
// The criterion decides whether two ABC posteriors differ enough that the
// statistic distinguishing them carries information.  Continuous parameter
// posteriors are compared by per-dimension Kolmogorov-Smirnov tests
// (Bonferroni-corrected) or by the kNN KL estimate against a bootstrap
// threshold; discrete model posteriors are compared by a Pearson
// chi-square test on acceptance counts.
#pragma once

#include <optional>
#include <vector>

#include "abcselect/abc_engine.hpp"
#include "abcselect/dataset.hpp"
#include "abcselect/knn.hpp"
#include "abcselect/particle_set.hpp"
#include "abcselect/stat_tests.hpp"

namespace abcselect {

enum class CriterionMode { KS, CHI2, KL_BOOTSTRAP };
enum class PosteriorMarginal { Parameters, Model };

struct CriterionConfig {
    CriterionMode mode = CriterionMode::KS;
    /// Significance threshold for the KS / chi-square route.
    double p_threshold = 0.01;
    /// Bootstrap replicate count B for the KL route.
    int bootstrap_replicates = 100;
    /// k for the kNN estimators.
    int knn_k = 4;

    void validate() const;
};

struct CriterionDecision {
    bool accept = false;
    /// The deciding p-value (test modes) or KL estimate (KL mode).
    double evidence = 0.0;
};

/// Decide whether posterior_with differs from posterior_without.
///
/// Parameters marginal: KS per parameter dimension with Bonferroni
/// correction (accept when any corrected p falls below the threshold), or,
/// in KL_BOOTSTRAP mode, accept when kl_knn(with, without) strictly
/// exceeds `delta_k` (required in that mode; see bootstrap_delta).
///
/// Model marginal: Pearson chi-square on the two model-index count vectors
/// over `model_count` models.
CriterionDecision criterion(const ParticleSet& posterior_with,
                            const ParticleSet& posterior_without, const CriterionConfig& cfg,
                            PosteriorMarginal marginal, int model_count = 0,
                            std::optional<double> delta_k = std::nullopt);

/// Nonparametric resample of a dataset, preserving its exchangeable
/// structure: i.i.d. entries for a RealVector, columns (sites) for a
/// HaplotypeMatrix, step increments for a Trajectory.
Dataset resample_dataset(const Dataset& data, RngStream stream);

/// Row-concatenation of particle clouds of equal dimension.
SampleCloud pool_clouds(const std::vector<SampleCloud>& clouds);

/// Resample the observed dataset B times, run ABC on each replicate with
/// subset_without, and pool the resulting particle clouds.  The pooled
/// cloud estimates the data-averaged posterior under subset_without.
SampleCloud bootstrap_pooled_cloud(const StatisticPool& pool,
                                   const StatisticSubset& subset_without,
                                   const ModelSpec& model, const Dataset& observed,
                                   const AbcConfig& abc_template, const CriterionConfig& cfg,
                                   RngStream stream);

/// Bootstrap threshold delta_k = kl_knn(posterior_with, pooled cloud).
double bootstrap_delta(const SampleCloud& posterior_with, const StatisticPool& pool,
                       const StatisticSubset& subset_without, const ModelSpec& model,
                       const Dataset& observed, const AbcConfig& abc_template,
                       const CriterionConfig& cfg, RngStream stream);

}  // namespace abcselect
