// gaussian.hpp — Two-model normal testbed with analytic oracles.
//
// Two models share an unknown mean mu with conjugate prior N(0, a^2) and
// differ only in their fixed standard deviations.  The mean is sufficient
// for mu within either model; the pair {mean, S^2} is sufficient for the
// joint model/parameter space.  The Bayes factor and the posterior of mu
// are available in closed form, which makes this family the calibration
// target for the ABC engine and the selection algorithms.
#pragma once

#include <vector>

#include "abcselect/dataset.hpp"
#include "abcselect/model_spec.hpp"
#include "abcselect/statistic_pool.hpp"

namespace abcselect {

struct GaussianPairSpec {
    double sigma1 = 0.3;
    double sigma2 = 0.6;
    /// Prior standard deviation a of mu ~ N(0, a^2).
    double prior_std = 2.0;
    /// Sample size d of each dataset.
    int sample_size = 15;

    void validate() const;
};

/// d i.i.d. draws from N(mu, sigma^2).
Dataset simulate_gaussian(double mu, double sigma, int d, RngStream& rng);

/// The five-statistic pool: mean, S^2 = sum (y_i - ybar)^2, range, max,
/// and an uninformative noise statistic u ~ U(0, 2).
StatisticPool gaussian_pool();

/// log Bayes factor of model 1 (sigma1) against model 2 (sigma2), in
/// closed form; depends on the data only through ybar and S^2.
double analytic_log_bayes_factor(const RealVector& y, const GaussianPairSpec& spec);

/// exp(analytic_log_bayes_factor).
double analytic_bayes_factor(const RealVector& y, const GaussianPairSpec& spec);

struct NormalPosterior {
    double mean = 0.0;
    double variance = 1.0;
};

/// Conjugate posterior of mu given y under fixed sigma and prior N(0, a^2):
/// N( ybar (d/sigma^2) / (d/sigma^2 + 1/a^2), (d/sigma^2 + 1/a^2)^-1 ).
NormalPosterior conjugate_posterior(const RealVector& y, double sigma, double prior_std);

/// The model pair as simulable specs ("gauss1", "gauss2"), sharing the
/// prior mu ~ N(0, a^2).
std::vector<ModelSpec> gaussian_models(const GaussianPairSpec& spec);

}  // namespace abcselect
