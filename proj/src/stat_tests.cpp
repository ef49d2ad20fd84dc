#include "abcselect/stat_tests.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "abcselect/errors.hpp"

namespace abcselect {

double kolmogorov_q(double lambda) {
    if (lambda <= 0.0) return 1.0;
    const double x = -2.0 * lambda * lambda;
    double sum = 0.0, sign = 1.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = sign * std::exp(x * j * j);
        sum += term;
        if (std::abs(term) < 1e-16 * std::abs(sum) || std::abs(term) < 1e-300) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {

// Series expansion of P(a,x), valid for x < a+1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a,x), valid for x >= a+1 (modified Lentz).
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_p(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw InvariantError("gamma_p requires x >= 0, a > 0");
    if (x == 0.0) return 0.0;
    return (x < a + 1.0) ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw InvariantError("gamma_q requires x >= 0, a > 0");
    if (x == 0.0) return 1.0;
    return (x < a + 1.0) ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

double chi2_cdf(double x, double df) {
    if (x <= 0.0) return 0.0;
    return gamma_p(0.5 * df, 0.5 * x);
}

double digamma(double x) {
    if (x <= 0.0) throw InvariantError("digamma requires x > 0");
    double result = 0.0;
    while (x < 6.0) {  // shift up where the asymptotic series is accurate
        result -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    result += std::log(x) - 0.5 * inv -
              inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 -
                       inv2 * (1.0 / 240.0 - inv2 / 132.0))));
    return result;
}

TestResult ks_two_sample(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const Eigen::Index n = a.size(), m = b.size();
    if (n < 5 || m < 5)
        throw InvariantError("ks_two_sample requires at least 5 points per sample");

    std::vector<double> sa(a.data(), a.data() + n);
    std::vector<double> sb(b.data(), b.data() + m);
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());

    double d_max = 0.0;
    std::size_t i = 0, j = 0;
    while (i < sa.size() && j < sb.size()) {
        const double x = std::min(sa[i], sb[j]);
        while (i < sa.size() && sa[i] <= x) ++i;
        while (j < sb.size() && sb[j] <= x) ++j;
        const double fa = static_cast<double>(i) / static_cast<double>(n);
        const double fb = static_cast<double>(j) / static_cast<double>(m);
        d_max = std::max(d_max, std::abs(fa - fb));
    }

    const double ne = static_cast<double>(n) * static_cast<double>(m) /
                      static_cast<double>(n + m);
    const double sqrt_ne = std::sqrt(ne);
    const double lambda = (sqrt_ne + 0.12 + 0.11 / sqrt_ne) * d_max;
    return {d_max, kolmogorov_q(lambda)};
}

TestResult pearson_chi2(const Eigen::VectorXi& counts_a, const Eigen::VectorXi& counts_b) {
    const Eigen::Index q = counts_a.size();
    if (q != counts_b.size() || q < 2)
        throw InvariantError("pearson_chi2 requires two count vectors of equal length >= 2");
    if ((counts_a.array() < 0).any() || (counts_b.array() < 0).any())
        throw InvariantError("counts must be non-negative");
    if (counts_a.sum() + counts_b.sum() == 0)
        throw InvariantError("pearson_chi2: all counts are zero");

    Eigen::VectorXd ra = counts_a.cast<double>();
    Eigen::VectorXd rb = counts_b.cast<double>();
    // A zero row or column total would give a zero expected count; the
    // Haldane-Anscombe half-count keeps the statistic defined there.
    const bool smooth = counts_a.sum() == 0 || counts_b.sum() == 0 ||
                        ((counts_a + counts_b).array() == 0).any();
    if (smooth) {
        ra.array() += 0.5;
        rb.array() += 0.5;
    }

    const double ta = ra.sum(), tb = rb.sum(), total = ta + tb;
    double stat = 0.0;
    for (Eigen::Index c = 0; c < q; ++c) {
        const double col = ra[c] + rb[c];
        const double ea = ta * col / total;
        const double eb = tb * col / total;
        stat += (ra[c] - ea) * (ra[c] - ea) / ea;
        stat += (rb[c] - eb) * (rb[c] - eb) / eb;
    }
    const double df = static_cast<double>(q - 1);
    return {stat, gamma_q(0.5 * df, 0.5 * stat)};
}

}  // namespace abcselect
