// model_spec.hpp — A simulable model with its prior.
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

#include "abcselect/dataset.hpp"
#include "abcselect/rng.hpp"

namespace abcselect {

struct ModelSpec {
    std::string name;
    int param_dim = 1;
    DatasetKind output_kind = DatasetKind::RealVector;
    /// Draw a parameter vector from the prior.
    std::function<Eigen::VectorXd(RngStream&)> sample_prior;
    /// Prior density at theta; used for reporting only.
    std::function<double(const Eigen::VectorXd&)> prior_density;
    /// Simulate a dataset given parameters.  The dataset id must be derived
    /// from the stream (stream.fingerprint()) so that noise statistics see
    /// a fresh substream per simulated dataset.
    std::function<Dataset(const Eigen::VectorXd&, RngStream&)> simulate;
};

/// Stable 64-bit identity of a stream, used as a dataset id.
inline std::uint64_t stream_fingerprint(const RngStream& s) noexcept {
    return mix64(s.seed() ^ mix64(s.stream_id()));
}

}  // namespace abcselect
