// randomwalk.hpp — Planar random-walk models and trajectory statistics.
//
// Three walk families with 1, 2 and 3 parameters; the multi-parameter
// posteriors are what force the KL-based acceptance criterion downstream.
// Headings are continuous (von Mises) rather than lattice-valued so that
// every parameter lives on a continuous prior.
#pragma once

#include <vector>

#include "abcselect/dataset.hpp"
#include "abcselect/model_spec.hpp"
#include "abcselect/statistic_pool.hpp"

namespace abcselect {

enum class WalkKind { Brownian, Persistent, Biased };

struct WalkSpec {
    WalkKind kind = WalkKind::Brownian;
    /// Step count T; the trajectory has T+1 positions starting at the origin.
    int steps = 200;
    /// Step scale sigma_w.  Brownian steps have i.i.d. N(0, sigma_w^2)
    /// components; the other walks use step length |N(0, sigma_w^2)|.
    double step_scale = 1.0;
    /// Turning concentration kappa (Persistent): heading increments are
    /// von Mises(0, kappa).
    double turn_concentration = 0.0;
    /// Preferred direction phi and its concentration kappa_b (Biased):
    /// headings are i.i.d. von Mises(phi, kappa_b).
    double bias_direction = 0.0;
    double bias_concentration = 0.0;

    void validate() const;
};

Dataset simulate_walk(const WalkSpec& spec, RngStream& rng);

/// The five trajectory statistics:
///   S1 mean squared displacement from the start (mean over all points)
///   S2 mean x and y displacement               (arity 2)
///   S3 mean squared x and y displacement       (arity 2)
///   S4 straightness index |r_T - r_0| / path length, in [0,1]
///   S5 gyration-tensor eigenvalues, descending (arity 2)
StatisticPool walk_pool();

/// The three walk models with default priors sigma_w ~ U(0.1, 2),
/// kappa ~ U(0, 10), phi ~ U(0, 2*pi), kappa_b ~ U(0, 10).
std::vector<ModelSpec> walk_models(int steps = 200);

}  // namespace abcselect
