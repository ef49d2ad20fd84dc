#include "abcselect/criterion.hpp"

#include <algorithm>
#include <cmath>

#include "abcselect/errors.hpp"

namespace abcselect {

void CriterionConfig::validate() const {
    if (!(p_threshold > 0.0 && p_threshold < 1.0))
        throw InvariantError("criterion p threshold must lie in (0,1)");
    if (bootstrap_replicates < 20) throw InvariantError("bootstrap replicate count must be >= 20");
    if (knn_k < 1) throw InvariantError("knn k must be >= 1");
}

namespace {

CriterionDecision criterion_ks(const SampleCloud& with, const SampleCloud& without,
                               double threshold) {
    if (with.cols() != without.cols())
        throw DimMismatchError("posterior parameter dimensions differ");
    const int dims = static_cast<int>(with.cols());
    double min_corrected = 1.0;
    for (int d = 0; d < dims; ++d) {
        const TestResult r = ks_two_sample(with.col(d), without.col(d));
        min_corrected = std::min(min_corrected, std::min(1.0, r.p_value * dims));
    }
    return {min_corrected < threshold, min_corrected};
}

}  // namespace

CriterionDecision criterion(const ParticleSet& posterior_with,
                            const ParticleSet& posterior_without, const CriterionConfig& cfg,
                            PosteriorMarginal marginal, int model_count,
                            std::optional<double> delta_k) {
    if (posterior_with.empty() || posterior_without.empty())
        throw InvariantError("criterion requires nonempty particle sets");

    if (marginal == PosteriorMarginal::Model) {
        if (model_count < 2)
            throw InvariantError("model-marginal criterion needs a model count >= 2");
        const TestResult r = pearson_chi2(posterior_with.model_counts(model_count),
                                          posterior_without.model_counts(model_count));
        return {r.p_value < cfg.p_threshold, r.p_value};
    }

    switch (cfg.mode) {
        case CriterionMode::KS:
            return criterion_ks(posterior_with.parameter_cloud(),
                                posterior_without.parameter_cloud(), cfg.p_threshold);
        case CriterionMode::KL_BOOTSTRAP: {
            if (!delta_k)
                throw InvariantError("KL_BOOTSTRAP criterion needs delta_k (see bootstrap_delta)");
            const double kl = kl_knn(posterior_with.parameter_cloud(),
                                     posterior_without.parameter_cloud(), cfg.knn_k);
            return {kl > *delta_k, kl};
        }
        case CriterionMode::CHI2:
            throw InvariantError("CHI2 criterion applies to the model marginal only");
    }
    throw InvariantError("unknown criterion mode");
}

Dataset resample_dataset(const Dataset& data, RngStream stream) {
    const std::uint64_t new_id = stream_fingerprint(stream);
    switch (data.kind()) {
        case DatasetKind::RealVector: {
            const RealVector& v = data.real_vector();
            RealVector out(v.size());
            for (Eigen::Index i = 0; i < v.size(); ++i)
                out[i] = v[static_cast<Eigen::Index>(stream.uniform_int(
                    static_cast<std::uint64_t>(v.size())))];
            return Dataset(std::move(out), new_id);
        }
        case DatasetKind::HaplotypeMatrix: {
            const HaplotypeMatrix& h = data.haplotypes();
            HaplotypeMatrix out(h.rows(), h.cols());
            for (Eigen::Index j = 0; j < h.cols(); ++j)
                out.col(j) = h.col(static_cast<Eigen::Index>(
                    stream.uniform_int(static_cast<std::uint64_t>(h.cols()))));
            return Dataset(std::move(out), new_id);
        }
        case DatasetKind::Trajectory: {
            const Trajectory& t = data.trajectory();
            const Eigen::Index steps = t.rows() - 1;
            Trajectory out(t.rows(), 2);
            out.row(0) = t.row(0);
            for (Eigen::Index i = 0; i < steps; ++i) {
                const Eigen::Index pick = static_cast<Eigen::Index>(
                    stream.uniform_int(static_cast<std::uint64_t>(steps)));
                out.row(i + 1) = out.row(i) + (t.row(pick + 1) - t.row(pick));
            }
            return Dataset(std::move(out), new_id);
        }
    }
    throw InvariantError("unknown dataset kind");
}

SampleCloud pool_clouds(const std::vector<SampleCloud>& clouds) {
    if (clouds.empty()) throw InvariantError("pool_clouds: no clouds given");
    const Eigen::Index dim = clouds.front().cols();
    Eigen::Index total = 0;
    for (const auto& c : clouds) {
        if (c.cols() != dim) throw DimMismatchError("pooled clouds must share a dimension");
        total += c.rows();
    }
    SampleCloud out(total, dim);
    Eigen::Index at = 0;
    for (const auto& c : clouds) {
        out.middleRows(at, c.rows()) = c;
        at += c.rows();
    }
    return out;
}

SampleCloud bootstrap_pooled_cloud(const StatisticPool& pool,
                                   const StatisticSubset& subset_without,
                                   const ModelSpec& model, const Dataset& observed,
                                   const AbcConfig& abc_template, const CriterionConfig& cfg,
                                   RngStream stream) {
    std::vector<SampleCloud> clouds;
    clouds.reserve(static_cast<std::size_t>(cfg.bootstrap_replicates));
    for (int b = 0; b < cfg.bootstrap_replicates; ++b) {
        const Dataset replicate =
            resample_dataset(observed, stream.substream("resample", static_cast<std::uint64_t>(b)));
        AbcConfig run_cfg = abc_template;
        run_cfg.seed =
            stream_fingerprint(stream.substream("abc", static_cast<std::uint64_t>(b)));
        const SummaryVector obs_summary = evaluate_subset(
            pool, subset_without, replicate, RngStream(run_cfg.seed).substream("noise"));
        const ParticleSet particles =
            abc_parameter(model, pool, subset_without, obs_summary, run_cfg);
        clouds.push_back(particles.parameter_cloud());
    }
    return pool_clouds(clouds);
}

double bootstrap_delta(const SampleCloud& posterior_with, const StatisticPool& pool,
                       const StatisticSubset& subset_without, const ModelSpec& model,
                       const Dataset& observed, const AbcConfig& abc_template,
                       const CriterionConfig& cfg, RngStream stream) {
    return kl_knn(posterior_with,
                  bootstrap_pooled_cloud(pool, subset_without, model, observed, abc_template,
                                         cfg, stream),
                  cfg.knn_k);
}

}  // namespace abcselect
