// experiment.hpp — Declarative batch experiments and their reports.
//
// An ExperimentSpec names models and a pool from the registry, a
// data-generating truth, budgets and seeds; run_experiment() executes R
// independent replicates (in parallel when asked) and writes
//   <outdir>/report.json       — full results and the resolved config echo
//   <outdir>/frequencies.csv   — per-statistic selection counts
// plus kind-specific side tables (bf_scatter.csv, posterior_check.csv,
// params_frequencies.csv, joint_additional_frequencies.csv).
//
// Replicate r derives every stream from (master seed, r), so reports are
// reproducible for any worker count; frequencies.csv is byte-stable.
#pragma once

#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <vector>

#include "abcselect/dataset.hpp"
#include "abcselect/registry.hpp"
#include "abcselect/selection.hpp"

namespace abcselect {

enum class ExperimentKind { SelectParams, SelectJoint, BfScatter, PosteriorCheck };

const char* to_string(ExperimentKind k);

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::SelectParams;
    std::vector<std::string> model_names;
    std::string pool_name;
    /// Data-generating truth: a registry model with fixed parameters, or an
    /// external dataset dump used for every replicate.
    std::string true_model;
    Eigen::VectorXd true_params;
    std::string dataset_path;
    int replicates = 1;
    SelectionConfig selection;
    std::uint64_t master_seed = 0;
    std::string output_dir = "out";
    /// Statistic names for the fixed-subset kinds (BfScatter, PosteriorCheck).
    std::vector<std::string> subset_names;
    /// Model prior weights for joint sampling; empty means uniform.
    std::vector<double> model_weights;
    RegistryOptions registry;

    void validate() const;
};

/// Parse a JSON configuration, apply defaults and cross-check every name
/// and invariant.  Throws ConfigError; never returns a partial spec.
ExperimentSpec validate_spec(const std::string& config_text);

/// Resolved-spec echo; parsing this JSON again reproduces the spec.
nlohmann::json spec_to_json(const ExperimentSpec& spec);

struct ReplicateOutcome {
    int index = 0;
    bool failed = false;
    std::string error;
    StatisticSubset selected;                // final statistic set
    std::vector<StatisticSubset> per_model;  // phase-1 / per-model subsets
    StatisticSubset additional;              // joint phase-2 additions
    std::vector<SelectionTrace> traces;
    double log_bf_true = std::nan("");
    double log_bf_abc = std::nan("");
    double ks_p = std::nan("");
    std::size_t abc_runs = 0;
    std::size_t simulations = 0;
    double acceptance_rate = std::nan("");
};

struct RunReport {
    int schema_version = 1;
    ExperimentSpec spec;  // resolved
    std::vector<ReplicateOutcome> replicates;
    /// Count, per pool statistic, of replicates whose final set contains it.
    std::vector<std::pair<std::string, int>> frequencies;
    /// SelectJoint only: counts over the per-model union M*.
    std::vector<std::pair<std::string, int>> params_frequencies;
    /// SelectJoint only: counts over the phase-2 additions.
    std::vector<std::pair<std::string, int>> additional_frequencies;
    std::size_t total_simulations = 0;
    double wall_seconds = 0.0;
};

/// Execute the experiment and write its outputs under spec.output_dir.
RunReport run_experiment(const ExperimentSpec& spec);

/// Report serialization (also written as <outdir>/report.json).
nlohmann::json report_to_json(const RunReport& report);

/// Dataset dump formats: haplotype matrices as an "N N_S" header plus one
/// 0/1 line per sequence; trajectories as CSV with header "t,x,y"; real
/// vectors as one value per line.
Dataset load_dataset(const std::string& path);
void save_dataset(const Dataset& data, const std::string& path);

}  // namespace abcselect
