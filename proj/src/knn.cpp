#include "abcselect/knn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "abcselect/errors.hpp"
#include "abcselect/rng.hpp"
#include "abcselect/stat_tests.hpp"

namespace abcselect {

namespace {

/// Squared distance from `point` to its kth nearest row of `cloud`.
/// `skip` excludes one row index (the query point itself), -1 for none.
double knn_sq_dist(const Eigen::RowVectorXd& point, const SampleCloud& cloud, int k,
                   Eigen::Index skip, std::vector<double>& scratch) {
    scratch.clear();
    scratch.reserve(static_cast<std::size_t>(cloud.rows()));
    for (Eigen::Index r = 0; r < cloud.rows(); ++r) {
        if (r == skip) continue;
        scratch.push_back((cloud.row(r) - point).squaredNorm());
    }
    auto kth = scratch.begin() + (k - 1);
    std::nth_element(scratch.begin(), kth, scratch.end());
    return *kth;
}

/// Deterministic tie-breaking jitter, scaled per dimension.
SampleCloud jittered(const SampleCloud& cloud, RngStream stream) {
    SampleCloud out = cloud;
    const Eigen::Index n = cloud.rows(), d = cloud.cols();
    for (Eigen::Index j = 0; j < d; ++j) {
        const double mean = cloud.col(j).mean();
        const double var = (cloud.col(j).array() - mean).square().sum() /
                           static_cast<double>(std::max<Eigen::Index>(n - 1, 1));
        double scale = std::sqrt(var);
        if (scale == 0.0) scale = std::max(std::abs(mean), 1.0);
        for (Eigen::Index i = 0; i < n; ++i)
            out(i, j) += 1e-9 * scale * (2.0 * stream.uniform() - 1.0);
    }
    return out;
}

struct LogDistSums {
    double own = 0.0;    // sum over u of log rho_k(u, U\{u})
    double cross = 0.0;  // sum over u of log rho_k(u, V)
    bool degenerate = false;
};

LogDistSums accumulate_log_dists(const SampleCloud& u, const SampleCloud& v, int k) {
    LogDistSums sums;
    std::vector<double> scratch;
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        const Eigen::RowVectorXd point = u.row(i);
        const double own2 = knn_sq_dist(point, u, k, i, scratch);
        const double cross2 = knn_sq_dist(point, v, k, -1, scratch);
        if (own2 <= 0.0 || cross2 <= 0.0) {
            sums.degenerate = true;
            return sums;
        }
        sums.own += 0.5 * std::log(own2);
        sums.cross += 0.5 * std::log(cross2);
    }
    return sums;
}

}  // namespace

double kl_knn(const SampleCloud& u, const SampleCloud& v, int k) {
    if (u.cols() != v.cols())
        throw DimMismatchError("sample clouds have dimensions " + std::to_string(u.cols()) +
                               " and " + std::to_string(v.cols()));
    if (k < 1) throw InvariantError("k must be >= 1");
    const Eigen::Index nu = u.rows(), nv = v.rows();
    if (nu < k + 1 || nv < k)
        throw InvariantError("clouds too small for k=" + std::to_string(k) + " query (" +
                             std::to_string(nu) + ", " + std::to_string(nv) + " points)");

    LogDistSums sums = accumulate_log_dists(u, v, k);
    if (sums.degenerate) {
        RngStream jitter_stream(0x6a69747465720ull,
                                mix64(static_cast<std::uint64_t>(nu) * 0x10001u + nv));
        sums = accumulate_log_dists(jittered(u, jitter_stream.substream(1)),
                                    jittered(v, jitter_stream.substream(2)), k);
        if (sums.degenerate) return 0.0;  // both clouds collapsed to one point
    }

    const double d = static_cast<double>(u.cols());
    const double est = std::log(static_cast<double>(nv) / static_cast<double>(nu - 1)) +
                       d * (sums.cross - sums.own) / static_cast<double>(nu);
    return std::max(est, 0.0);
}

double entropy_knn(const SampleCloud& u, int k) {
    if (k < 1) throw InvariantError("k must be >= 1");
    const Eigen::Index n = u.rows();
    if (n < k + 1)
        throw InvariantError("cloud too small for k=" + std::to_string(k) + " entropy query");
    const double d = static_cast<double>(u.cols());

    std::vector<double> scratch;
    double sum_log = 0.0;
    bool degenerate = false;
    for (Eigen::Index i = 0; i < n && !degenerate; ++i) {
        const double r2 = knn_sq_dist(u.row(i), u, k, i, scratch);
        if (r2 <= 0.0)
            degenerate = true;
        else
            sum_log += 0.5 * std::log(r2);
    }
    if (degenerate) {
        RngStream jitter_stream(0x656e74726f70790ull, mix64(static_cast<std::uint64_t>(n)));
        const SampleCloud ju = jittered(u, jitter_stream);
        sum_log = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double r2 = knn_sq_dist(ju.row(i), ju, k, i, scratch);
            sum_log += 0.5 * std::log(std::max(r2, 1e-300));
        }
    }

    // Unit-ball volume in d dimensions.
    const double log_cd = 0.5 * d * std::log(std::numbers::pi) - std::lgamma(0.5 * d + 1.0);
    return digamma(static_cast<double>(n)) - digamma(static_cast<double>(k)) + log_cd +
           d * sum_log / static_cast<double>(n);
}

}  // namespace abcselect
