#include "abcselect/distance.hpp"

#include <cmath>
#include <limits>

#include "abcselect/errors.hpp"

namespace abcselect {

namespace {

double log_square_impl(const SummaryVector& a, const SummaryVector& b,
                       const Eigen::VectorXd* lower_bounds) {
    if (a.size() != b.size())
        throw LengthMismatchError("summary length mismatch: " + std::to_string(a.size()) +
                                  " vs " + std::to_string(b.size()));
    if (lower_bounds && lower_bounds->size() != a.size())
        throw LengthMismatchError("lower-bound vector length mismatch");
    double total = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const double shift = lower_bounds ? 1.0 - (*lower_bounds)[i] : 0.0;
        const double ta = a[i] + shift;
        const double tb = b[i] + shift;
        if (ta == tb) continue;  // exact ties contribute nothing, even at the boundary
        if (!(ta > 0.0) || !(tb > 0.0)) return std::numeric_limits<double>::infinity();
        const double d = std::log(ta) - std::log(tb);
        total += d * d;
    }
    return total;
}

}  // namespace

double log_square_distance(const SummaryVector& a, const SummaryVector& b) {
    return log_square_impl(a, b, nullptr);
}

double log_square_distance(const SummaryVector& a, const SummaryVector& b,
                           const Eigen::VectorXd& lower_bounds) {
    return log_square_impl(a, b, &lower_bounds);
}

double summary_distance(const SummaryVector& a, const SummaryVector& b,
                        const Eigen::VectorXd& lower_bounds) {
    return std::sqrt(log_square_impl(a, b, &lower_bounds));
}

}  // namespace abcselect
