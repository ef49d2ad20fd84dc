#include "abcselect/abc_engine.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "abcselect/errors.hpp"

namespace abcselect {

namespace {

constexpr std::size_t kBlockSize = 4096;

struct EvalResult {
    double distance = std::numeric_limits<double>::infinity();
    int model = 0;
    Eigen::VectorXd theta;
};

/// Evaluates proposal i as a pure function of (seed, i).
class ProposalEvaluator {
public:
    ProposalEvaluator(const std::vector<ModelSpec>& models, std::vector<double> cum_weights,
                      const StatisticPool& pool, const StatisticSubset& subset,
                      const SummaryVector& observed, const AbcConfig& cfg)
        : models_(models),
          cum_weights_(std::move(cum_weights)),
          pool_(pool),
          subset_(subset),
          observed_(observed),
          bounds_(pool.subset_lower_bounds(subset)),
          root_(cfg.seed),
          noise_root_(root_.substream("noise")) {}

    const Eigen::VectorXd& bounds() const noexcept { return bounds_; }

    EvalResult operator()(std::size_t index) const {
        RngStream prop = root_.substream("proposal", index);
        EvalResult r;
        r.model = pick_model(prop);
        const ModelSpec& model = models_[static_cast<std::size_t>(r.model)];
        RngStream prior_stream = prop.substream("prior");
        RngStream sim_stream = prop.substream("sim");
        r.theta = model.sample_prior(prior_stream);
        const Dataset data = model.simulate(r.theta, sim_stream);
        const SummaryVector sim_summary = evaluate_subset(pool_, subset_, data, noise_root_);
        r.distance = summary_distance(observed_, sim_summary, bounds_);
        return r;
    }

private:
    int pick_model(RngStream& prop) const {
        if (models_.size() == 1) return 0;
        const double u = prop.substream("model").uniform();
        const auto it = std::upper_bound(cum_weights_.begin(), cum_weights_.end(), u);
        const auto idx = std::min<std::size_t>(
            static_cast<std::size_t>(it - cum_weights_.begin()), models_.size() - 1);
        return static_cast<int>(idx);
    }

    const std::vector<ModelSpec>& models_;
    std::vector<double> cum_weights_;
    const StatisticPool& pool_;
    const StatisticSubset& subset_;
    const SummaryVector& observed_;
    Eigen::VectorXd bounds_;
    RngStream root_;
    RngStream noise_root_;
};

/// Fill results[i - begin] for i in [begin, end); output is independent of
/// the worker count because slots are indexed by proposal.
void evaluate_block(const ProposalEvaluator& eval, std::size_t begin, std::size_t end,
                    int workers, std::vector<EvalResult>& results) {
    const std::size_t count = end - begin;
    results.resize(count);
    const int used = std::max(1, std::min<int>(workers, static_cast<int>(count)));
    if (used == 1) {
        for (std::size_t i = 0; i < count; ++i) results[i] = eval(begin + i);
        return;
    }
    const std::size_t chunk = (count + static_cast<std::size_t>(used) - 1) /
                              static_cast<std::size_t>(used);
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(used));
    for (int w = 0; w < used; ++w) {
        const std::size_t lo = static_cast<std::size_t>(w) * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        threads.emplace_back([&, lo, hi, w] {
            try {
                for (std::size_t i = lo; i < hi; ++i) results[i] = eval(begin + i);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

ParticleSet run_threshold(const ProposalEvaluator& eval, const AbcConfig& cfg) {
    ParticleSet out;
    out.reserve(cfg.target_particles);
    double min_distance = std::numeric_limits<double>::infinity();
    std::vector<EvalResult> block;
    std::size_t consumed = 0;
    for (std::size_t begin = 0; begin < cfg.max_proposals; begin += kBlockSize) {
        const std::size_t end = std::min(cfg.max_proposals, begin + kBlockSize);
        evaluate_block(eval, begin, end, cfg.workers, block);
        for (std::size_t i = 0; i < end - begin; ++i) {
            consumed = begin + i + 1;
            EvalResult& r = block[i];
            min_distance = std::min(min_distance, r.distance);
            if (r.distance <= cfg.epsilon) {
                out.add(r.model, std::move(r.theta));
                if (out.size() == cfg.target_particles) {
                    out.set_run_info(consumed, cfg.epsilon);
                    return out;
                }
            }
        }
    }
    if (out.empty()) throw EpsilonTooTightError(cfg.epsilon, min_distance, cfg.max_proposals);
    out.set_run_info(cfg.max_proposals, cfg.epsilon);
    return out;
}

ParticleSet run_quantile(const ProposalEvaluator& eval, const AbcConfig& cfg) {
    struct Candidate {
        double distance;
        std::size_t index;
        int model;
        Eigen::VectorXd theta;
    };
    const auto closer = [](const Candidate& a, const Candidate& b) {
        return a.distance != b.distance ? a.distance < b.distance : a.index < b.index;
    };

    std::vector<Candidate> best;
    std::vector<EvalResult> block;
    for (std::size_t begin = 0; begin < cfg.max_proposals; begin += kBlockSize) {
        const std::size_t end = std::min(cfg.max_proposals, begin + kBlockSize);
        evaluate_block(eval, begin, end, cfg.workers, block);
        for (std::size_t i = 0; i < end - begin; ++i) {
            EvalResult& r = block[i];
            if (std::isfinite(r.distance))
                best.push_back({r.distance, begin + i, r.model, std::move(r.theta)});
        }
        if (best.size() > cfg.target_particles + kBlockSize) {
            auto nth = best.begin() + static_cast<std::ptrdiff_t>(cfg.target_particles);
            std::nth_element(best.begin(), nth, best.end(), closer);
            best.resize(cfg.target_particles);
        }
    }
    if (best.empty())
        throw EpsilonTooTightError(std::numeric_limits<double>::infinity(),
                                   std::numeric_limits<double>::infinity(),
                                   cfg.max_proposals);
    std::sort(best.begin(), best.end(), closer);
    if (best.size() > cfg.target_particles) best.resize(cfg.target_particles);
    const double realized_eps = best.back().distance;
    // Report particles in proposal order.
    std::sort(best.begin(), best.end(),
              [](const Candidate& a, const Candidate& b) { return a.index < b.index; });
    ParticleSet out;
    out.reserve(best.size());
    for (auto& c : best) out.add(c.model, std::move(c.theta));
    out.set_run_info(cfg.max_proposals, realized_eps);
    return out;
}

ParticleSet run_abc(const std::vector<ModelSpec>& models, const std::vector<double>& weights,
                    const StatisticPool& pool, const StatisticSubset& subset,
                    const SummaryVector& observed, const AbcConfig& cfg) {
    cfg.validate();
    pool.check_subset(subset);
    if (observed.size() != pool.subset_width(subset))
        throw LengthMismatchError("observed summary length does not match subset width");

    std::vector<double> cum;
    if (models.size() > 1) {
        std::vector<double> w = weights;
        if (w.empty()) w.assign(models.size(), 1.0);
        if (w.size() != models.size())
            throw InvariantError("model weight vector length does not match model count");
        double total = 0.0;
        for (double x : w) {
            if (x < 0.0) throw InvariantError("model weights must be non-negative");
            total += x;
        }
        if (total <= 0.0) throw InvariantError("model weights sum to zero");
        double acc = 0.0;
        for (double x : w) {
            acc += x / total;
            cum.push_back(acc);
        }
    }

    ProposalEvaluator eval(models, std::move(cum), pool, subset, observed, cfg);
    const Eigen::VectorXd& bounds = eval.bounds();
    for (Eigen::Index i = 0; i < observed.size(); ++i)
        if (!(observed[i] - bounds[i] + 1.0 > 0.0))
            throw InvariantError("observed summary component " + std::to_string(i) +
                                 " falls below its declared lower bound; the log distance "
                                 "is undefined there");

    return cfg.quantile ? run_quantile(eval, cfg) : run_threshold(eval, cfg);
}

}  // namespace

void AbcConfig::validate() const {
    if (!quantile && !(epsilon > 0.0)) throw InvariantError("epsilon must be positive");
    if (target_particles == 0) throw InvariantError("target_particles must be positive");
    if (max_proposals < target_particles)
        throw InvariantError("max_proposals must be at least target_particles");
    if (workers < 1) throw InvariantError("workers must be positive");
}

ParticleSet abc_parameter(const ModelSpec& model, const StatisticPool& pool,
                          const StatisticSubset& subset, const SummaryVector& observed,
                          const AbcConfig& cfg) {
    const std::vector<ModelSpec> models{model};
    return run_abc(models, {}, pool, subset, observed, cfg);
}

ParticleSet abc_joint(const std::vector<ModelSpec>& models, const StatisticPool& pool,
                      const StatisticSubset& subset, const SummaryVector& observed,
                      const AbcConfig& cfg, const std::vector<double>& model_weights) {
    if (models.empty()) throw InvariantError("abc_joint requires at least one model");
    return run_abc(models, model_weights, pool, subset, observed, cfg);
}

double bayes_factor_from_particles(const ParticleSet& particles, int m1, int m2) {
    std::size_t c1 = 0, c2 = 0;
    for (std::size_t i = 0; i < particles.size(); ++i) {
        if (particles.model_index(i) == m1) ++c1;
        if (particles.model_index(i) == m2) ++c2;
    }
    return (static_cast<double>(c1) + 0.5) / (static_cast<double>(c2) + 0.5);
}

}  // namespace abcselect
