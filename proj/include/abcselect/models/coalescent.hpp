// coalescent.hpp — Structured coalescent simulator with infinite-sites
// mutation, and the eleven-statistic population-genetics pool.
//
// Time runs backward in coalescent units of 2N generations: each lineage
// pair coalesces at rate 1 and mutations fall on branches at rate theta/2
// per lineage per unit time (Hudson's convention).  Three demographies:
//
//   Constant  — k active lineages coalesce at rate k(k-1)/2.
//   ExpGrowth — population N(t) = N0 exp(-gamma t) looking backward; event
//               times come from inverting the integrated intensity in
//               closed form, so there is no time-stepping error.
//   TwoIsland — within-deme coalescence at rate k_i(k_i-1)/2 per deme plus
//               migration of each lineage at rate m/2.
//
// Every mutation creates a new segregating site (infinite sites); columns
// of the returned haplotype matrix are ordered by mutation time.
#pragma once

#include <vector>

#include "abcselect/dataset.hpp"
#include "abcselect/model_spec.hpp"
#include "abcselect/statistic_pool.hpp"

namespace abcselect {

enum class CoalescentScenario { Constant, ExpGrowth, TwoIsland };

struct CoalescentSpec {
    CoalescentScenario scenario = CoalescentScenario::Constant;
    /// Number of sampled chromosomes n.
    int sample_size = 100;
    /// Population mutation rate theta.
    double theta = 20.0;
    /// Growth rate gamma (ExpGrowth only).
    double growth_rate = 0.4;
    /// Scaled migration rate m (TwoIsland only).
    double migration_rate = 10.0;
    /// Sample size in deme 1 (TwoIsland); -1 means an even split.
    int deme1_size = -1;

    void validate() const;
    int deme1() const { return deme1_size >= 0 ? deme1_size : sample_size / 2; }
};

struct GenealogyEvent {
    enum class Kind { Coalescence, Migration };
    double time = 0.0;
    Kind kind = Kind::Coalescence;
    /// Coalescence: the two merging node ids.  Migration: the moving node
    /// in lineage_a, demes in deme_from/deme_to.
    int lineage_a = -1;
    int lineage_b = -1;
    int deme_from = -1;
    int deme_to = -1;
};

/// A binary genealogy over nodes 0..2n-2; leaves are 0..n-1 at time 0 and
/// internal nodes are created in coalescence order, so every parent id
/// exceeds its children's ids.  The root is node 2n-2.
struct Genealogy {
    int sample_size = 0;
    std::vector<GenealogyEvent> events;
    std::vector<int> parent;        // -1 for the root
    std::vector<double> node_time;  // coalescent units

    int node_count() const { return 2 * sample_size - 1; }
    int root() const { return node_count() - 1; }
    double total_branch_length() const;
    int coalescence_count() const;
};

Genealogy simulate_genealogy(const CoalescentSpec& spec, RngStream& rng);

/// Genealogy plus Poisson(theta/2 * tree length) infinite-sites mutations.
Dataset simulate_coalescent(const CoalescentSpec& spec, RngStream& rng);

/// The eleven summary statistics S1..S11 on a haplotype matrix:
///   S1  segregating sites          S2  distinct haplotypes
///   S3  haplotype homozygosity     S4  average SNP homozygosity
///   S5  most common haplotype count
///   S6  mean pairwise differences  S7  singleton haplotypes
///   S8  singleton SNPs             S9  mean r^2 over site pairs
///   S10 four-gamete violation fraction
///   S11 uninformative noise, rho ~ U[0,1]
/// S9 and S10 are defined as 0 when fewer than two sites exist.
StatisticPool popgen_pool();

/// The three competing demographic models sharing the prior
/// theta ~ U(theta_lo, theta_hi): "coal-const", "coal-growth" (gamma =
/// 0.4), "coal-island" (m = 10).
std::vector<ModelSpec> coalescent_models(double theta_lo = 5.0, double theta_hi = 30.0,
                                         int sample_size = 100);

}  // namespace abcselect
