// dataset.hpp — Raw data variants handled by the toolkit.
//
// A Dataset is one of three shapes:
//   RealVector      — a vector of reals (e.g. i.i.d. draws from a scalar model)
//   HaplotypeMatrix — rows are sampled sequences, columns segregating sites,
//                     entries 0 (ancestral) / 1 (derived)
//   Trajectory      — an ordered planar path (T+1 positions)
//
// Datasets are immutable after construction and carry a 64-bit id used to
// key reproducible noise-statistic substreams.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>

#include "abcselect/errors.hpp"

namespace abcselect {

using RealVector = Eigen::VectorXd;
using HaplotypeMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;
/// Rows are time points t = 0..T, columns are (x, y).
using Trajectory = Eigen::Matrix<double, Eigen::Dynamic, 2>;

enum class DatasetKind { RealVector, HaplotypeMatrix, Trajectory };

inline const char* to_string(DatasetKind k) {
    switch (k) {
        case DatasetKind::RealVector: return "RealVector";
        case DatasetKind::HaplotypeMatrix: return "HaplotypeMatrix";
        case DatasetKind::Trajectory: return "Trajectory";
    }
    return "?";
}

class Dataset {
public:
    Dataset(RealVector v, std::uint64_t id) : data_(std::move(v)), id_(id) {
        if (real_vector().size() == 0)
            throw InvariantError("RealVector dataset must be non-empty");
    }

    Dataset(HaplotypeMatrix m, std::uint64_t id) : data_(std::move(m)), id_(id) {
        const auto& h = haplotypes();
        for (Eigen::Index j = 0; j < h.cols(); ++j) {
            const auto col = h.col(j);
            bool any0 = false, any1 = false;
            for (Eigen::Index i = 0; i < h.rows(); ++i) (col[i] ? any1 : any0) = true;
            if (!any0 || !any1)
                throw InvariantError("haplotype column " + std::to_string(j) +
                                     " is not segregating");
        }
    }

    Dataset(Trajectory t, std::uint64_t id) : data_(std::move(t)), id_(id) {
        if (trajectory().rows() < 2)
            throw InvariantError("Trajectory dataset needs at least 2 points");
    }

    DatasetKind kind() const noexcept {
        return static_cast<DatasetKind>(data_.index());
    }

    std::uint64_t id() const noexcept { return id_; }

    const RealVector& real_vector() const { return std::get<RealVector>(data_); }
    const HaplotypeMatrix& haplotypes() const { return std::get<HaplotypeMatrix>(data_); }
    const Trajectory& trajectory() const { return std::get<Trajectory>(data_); }

private:
    std::variant<RealVector, HaplotypeMatrix, Trajectory> data_;
    std::uint64_t id_ = 0;
};

}  // namespace abcselect
