#include "abcselect/models/gaussian.hpp"

#include <cmath>
#include <numbers>

#include "abcselect/errors.hpp"

namespace abcselect {

void GaussianPairSpec::validate() const {
    if (!(sigma1 > 0.0) || !(sigma2 > 0.0)) throw InvariantError("sigmas must be positive");
    if (sigma1 == sigma2) throw InvariantError("sigma1 must differ from sigma2");
    if (!(prior_std > 0.0)) throw InvariantError("prior std must be positive");
    if (sample_size < 2) throw InvariantError("sample size must be at least 2");
}

Dataset simulate_gaussian(double mu, double sigma, int d, RngStream& rng) {
    if (d < 2) throw InvariantError("simulate_gaussian needs d >= 2");
    RealVector y(d);
    for (int i = 0; i < d; ++i) y[i] = rng.normal(mu, sigma);
    return Dataset(std::move(y), stream_fingerprint(rng));
}

StatisticPool gaussian_pool() {
    StatisticPool pool("gaussian5");
    pool.add({"mean", 1, DatasetKind::RealVector, 0.0,
              [](const Dataset& d, RngStream&) {
                  return Eigen::VectorXd::Constant(1, d.real_vector().mean());
              }});
    pool.add({"S2", 1, DatasetKind::RealVector, 0.0,
              [](const Dataset& d, RngStream&) {
                  const RealVector& y = d.real_vector();
                  const double s2 = (y.array() - y.mean()).square().sum();
                  return Eigen::VectorXd::Constant(1, s2);
              }});
    pool.add({"range", 1, DatasetKind::RealVector, 0.0,
              [](const Dataset& d, RngStream&) {
                  const RealVector& y = d.real_vector();
                  return Eigen::VectorXd::Constant(1, y.maxCoeff() - y.minCoeff());
              }});
    pool.add({"max", 1, DatasetKind::RealVector, 0.0,
              [](const Dataset& d, RngStream&) {
                  return Eigen::VectorXd::Constant(1, d.real_vector().maxCoeff());
              }});
    pool.add({"noise", 1, DatasetKind::RealVector, 0.0,
              [](const Dataset&, RngStream& rng) {
                  return Eigen::VectorXd::Constant(1, rng.uniform(0.0, 2.0));
              }});
    return pool;
}

double analytic_log_bayes_factor(const RealVector& y, const GaussianPairSpec& spec) {
    spec.validate();
    const double d = static_cast<double>(y.size());
    const double ybar = y.mean();
    const double s2 = (y.array() - ybar).square().sum();
    const double a2 = spec.prior_std * spec.prior_std;
    const double v1 = spec.sigma1 * spec.sigma1;
    const double v2 = spec.sigma2 * spec.sigma2;

    double log_bf = -d * (std::log(spec.sigma1) - std::log(spec.sigma2));
    log_bf += -0.5 * s2 / v1 + 0.5 * s2 / v2;
    log_bf += -0.5 * ybar * ybar / (a2 + v1 / d) + 0.5 * ybar * ybar / (a2 + v2 / d);
    log_bf += 0.5 * (std::log(1.0 / a2 + d / v2) - std::log(1.0 / a2 + d / v1));
    return log_bf;
}

double analytic_bayes_factor(const RealVector& y, const GaussianPairSpec& spec) {
    return std::exp(analytic_log_bayes_factor(y, spec));
}

NormalPosterior conjugate_posterior(const RealVector& y, double sigma, double prior_std) {
    if (y.size() < 1) throw InvariantError("conjugate_posterior needs data");
    const double d = static_cast<double>(y.size());
    const double data_precision = d / (sigma * sigma);
    const double prior_precision = 1.0 / (prior_std * prior_std);
    NormalPosterior post;
    post.variance = 1.0 / (data_precision + prior_precision);
    post.mean = y.mean() * data_precision * post.variance;
    return post;
}

std::vector<ModelSpec> gaussian_models(const GaussianPairSpec& spec) {
    spec.validate();
    const double a = spec.prior_std;
    const auto prior_sampler = [a](RngStream& rng) {
        return Eigen::VectorXd::Constant(1, rng.normal(0.0, a));
    };
    const auto prior_density = [a](const Eigen::VectorXd& theta) {
        const double z = theta[0] / a;
        return std::exp(-0.5 * z * z) / (a * std::sqrt(2.0 * std::numbers::pi));
    };
    const auto make = [&](const char* name, double sigma, int d) {
        ModelSpec m;
        m.name = name;
        m.param_dim = 1;
        m.output_kind = DatasetKind::RealVector;
        m.sample_prior = prior_sampler;
        m.prior_density = prior_density;
        m.simulate = [sigma, d](const Eigen::VectorXd& theta, RngStream& rng) {
            return simulate_gaussian(theta[0], sigma, d, rng);
        };
        return m;
    };
    return {make("gauss1", spec.sigma1, spec.sample_size),
            make("gauss2", spec.sigma2, spec.sample_size)};
}

}  // namespace abcselect
