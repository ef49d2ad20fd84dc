// statistic_pool.hpp — Named summary statistics and subsets thereof.
//
// A StatisticPool is an ordered registry of named statistics.  Each
// statistic maps a Dataset to a fixed number of real components (its
// arity); vector-valued statistics occupy consecutive components and are
// selected or dropped as one unit.  Stochastic "noise" statistics draw
// from a substream keyed by (statistic name, dataset id), so repeated
// evaluation under one seed is bit-identical.
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "abcselect/dataset.hpp"
#include "abcselect/errors.hpp"
#include "abcselect/rng.hpp"

namespace abcselect {

/// Values of an evaluated statistic subset, concatenated in subset order.
using SummaryVector = Eigen::VectorXd;

struct Statistic {
    std::string name;
    int arity = 1;
    DatasetKind expects = DatasetKind::RealVector;
    /// Declared lower bound of the statistic's values; the log-distance
    /// shift maps [lower_bound, inf) onto [1, inf).
    double lower_bound = 0.0;
    /// Evaluator; must be pure given (data, stream) and return `arity` values.
    std::function<Eigen::VectorXd(const Dataset&, RngStream&)> eval;
};

/// Ordered list of pool indices.  Order is an audit trail only; evaluation
/// output is determined by the set of indices and their pool order is not
/// required.
using StatisticSubset = std::vector<int>;

class StatisticPool {
public:
    StatisticPool() = default;
    explicit StatisticPool(std::string name) : name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

    StatisticPool& add(Statistic s) {
        for (const auto& existing : stats_)
            if (existing.name == s.name)
                throw InvariantError("duplicate statistic name '" + s.name + "'");
        if (s.arity < 1) throw InvariantError("statistic arity must be positive");
        stats_.push_back(std::move(s));
        return *this;
    }

    int size() const noexcept { return static_cast<int>(stats_.size()); }

    /// Total scalar width (sum of arities).
    int width() const noexcept {
        int w = 0;
        for (const auto& s : stats_) w += s.arity;
        return w;
    }

    const Statistic& at(int i) const { return stats_.at(static_cast<std::size_t>(i)); }

    int index_of(const std::string& name) const {
        for (int i = 0; i < size(); ++i)
            if (stats_[static_cast<std::size_t>(i)].name == name) return i;
        throw InvariantError("no statistic named '" + name + "' in pool '" + name_ + "'");
    }

    StatisticSubset full_subset() const {
        StatisticSubset all(static_cast<std::size_t>(size()));
        for (int i = 0; i < size(); ++i) all[static_cast<std::size_t>(i)] = i;
        return all;
    }

    void check_subset(const StatisticSubset& subset) const {
        std::vector<bool> seen(static_cast<std::size_t>(size()), false);
        for (int idx : subset) {
            if (idx < 0 || idx >= size())
                throw InvariantError("subset index " + std::to_string(idx) + " out of range");
            if (seen[static_cast<std::size_t>(idx)])
                throw InvariantError("subset index " + std::to_string(idx) + " repeated");
            seen[static_cast<std::size_t>(idx)] = true;
        }
    }

    /// Scalar width of a subset.
    int subset_width(const StatisticSubset& subset) const {
        int w = 0;
        for (int idx : subset) w += at(idx).arity;
        return w;
    }

    /// Per-component declared lower bounds, concatenated in subset order.
    Eigen::VectorXd subset_lower_bounds(const StatisticSubset& subset) const {
        Eigen::VectorXd bounds(subset_width(subset));
        int at_comp = 0;
        for (int idx : subset) {
            const Statistic& s = at(idx);
            bounds.segment(at_comp, s.arity).setConstant(s.lower_bound);
            at_comp += s.arity;
        }
        return bounds;
    }

private:
    std::string name_;
    std::vector<Statistic> stats_;
};

/// Evaluate a subset of statistics on a dataset.  Output components appear
/// in subset order; stochastic statistics draw from
/// noise_root.substream(name).substream(data.id()).
SummaryVector evaluate_subset(const StatisticPool& pool, const StatisticSubset& subset,
                              const Dataset& data, const RngStream& noise_root);

}  // namespace abcselect
