// distance.hpp — The summary-space distance.
//
// Summaries are compared on log scale so that acceptance reflects relative
// rather than absolute differences and no per-statistic scale needs to be
// known up front.  Statistics that can reach zero or negative values are
// made log-safe by the declared-bound shift v -> v - L + 1, which maps the
// statistic's range [L, inf) onto [1, inf).
#pragma once

#include <Eigen/Dense>

#include "abcselect/statistic_pool.hpp"

namespace abcselect {

/// Sum of squared log differences: sum_i (log a_i - log b_i)^2.
/// A symmetric premetric; requires positive entries.  Non-positive entries
/// yield +infinity (such a pair is never within any finite tolerance).
double log_square_distance(const SummaryVector& a, const SummaryVector& b);

/// Same, after the per-component shift v -> v - lower_bound + 1.
double log_square_distance(const SummaryVector& a, const SummaryVector& b,
                           const Eigen::VectorXd& lower_bounds);

/// The metric form used for ABC acceptance: the Euclidean norm of the
/// componentwise log differences of shifted summaries,
/// sqrt(log_square_distance(a, b, lower_bounds)).
double summary_distance(const SummaryVector& a, const SummaryVector& b,
                        const Eigen::VectorXd& lower_bounds);

}  // namespace abcselect
