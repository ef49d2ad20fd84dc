// stat_tests.hpp — Two-sample tests and the special functions they need.
#pragma once

#include <Eigen/Dense>

namespace abcselect {

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov test.  D is the exact sup-norm distance of
/// the empirical CDFs; the p-value uses the asymptotic Kolmogorov
/// distribution with the standard effective-sample-size correction.
/// Requires at least 5 points per sample.
TestResult ks_two_sample(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Pearson chi-square homogeneity test on a 2 x q contingency table of
/// counts.  When the table has a zero expected count, 1/2 is added to every
/// cell before computing the statistic.  p-value from the chi-square
/// distribution with q-1 degrees of freedom.
TestResult pearson_chi2(const Eigen::VectorXi& counts_a, const Eigen::VectorXi& counts_b);

/// Survival function of the Kolmogorov distribution, Q(lambda) =
/// 2 * sum_{j>=1} (-1)^(j-1) exp(-2 j^2 lambda^2).
double kolmogorov_q(double lambda);

/// Regularized incomplete gamma functions P(a,x) and Q(a,x) = 1 - P(a,x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

/// CDF of the chi-square distribution with df degrees of freedom.
double chi2_cdf(double x, double df);

/// Digamma function (real argument > 0).
double digamma(double x);

}  // namespace abcselect
