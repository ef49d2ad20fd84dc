// particle_set.hpp — Accepted draws from an ABC run.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "abcselect/errors.hpp"
#include "abcselect/knn.hpp"

namespace abcselect {

/// Accepted (model index, parameter vector) pairs, with uniform weights.
/// Model indices are 0-based positions in the model list of the run.
class ParticleSet {
public:
    ParticleSet() = default;

    void reserve(std::size_t n) {
        model_indices_.reserve(n);
        params_.reserve(n);
    }

    void add(int model_index, Eigen::VectorXd theta) {
        model_indices_.push_back(model_index);
        params_.push_back(std::move(theta));
    }

    std::size_t size() const noexcept { return params_.size(); }
    bool empty() const noexcept { return params_.empty(); }

    int model_index(std::size_t i) const { return model_indices_.at(i); }
    const Eigen::VectorXd& theta(std::size_t i) const { return params_.at(i); }

    std::size_t proposals() const noexcept { return proposals_; }
    double epsilon() const noexcept { return epsilon_; }
    void set_run_info(std::size_t proposals, double epsilon) {
        proposals_ = proposals;
        epsilon_ = epsilon;
    }

    double acceptance_rate() const noexcept {
        return proposals_ == 0 ? 0.0
                               : static_cast<double>(size()) / static_cast<double>(proposals_);
    }

    /// Acceptance counts per model for a run over q models.
    Eigen::VectorXi model_counts(int q) const {
        Eigen::VectorXi counts = Eigen::VectorXi::Zero(q);
        for (int m : model_indices_) {
            if (m < 0 || m >= q) throw InvariantError("model index out of range");
            ++counts[m];
        }
        return counts;
    }

    /// Parameter vectors stacked as a point cloud (one row per particle).
    /// All particles must share one parameter dimension.
    SampleCloud parameter_cloud() const {
        if (params_.empty()) throw InvariantError("empty particle set has no cloud");
        const Eigen::Index dim = params_.front().size();
        SampleCloud cloud(static_cast<Eigen::Index>(params_.size()), dim);
        for (std::size_t i = 0; i < params_.size(); ++i) {
            if (params_[i].size() != dim)
                throw InvariantError("mixed parameter dimensions in particle cloud");
            cloud.row(static_cast<Eigen::Index>(i)) = params_[i].transpose();
        }
        return cloud;
    }

    /// Cloud restricted to one model's particles.
    SampleCloud parameter_cloud(int model_index) const {
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < params_.size(); ++i)
            if (model_indices_[i] == model_index) rows.push_back(i);
        if (rows.empty()) throw InvariantError("no particles for requested model");
        SampleCloud cloud(static_cast<Eigen::Index>(rows.size()), params_[rows[0]].size());
        for (std::size_t r = 0; r < rows.size(); ++r)
            cloud.row(static_cast<Eigen::Index>(r)) = params_[rows[r]].transpose();
        return cloud;
    }

private:
    std::vector<int> model_indices_;
    std::vector<Eigen::VectorXd> params_;
    std::size_t proposals_ = 0;
    double epsilon_ = 0.0;
};

}  // namespace abcselect
