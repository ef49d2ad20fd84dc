#include "abcselect/models/randomwalk.hpp"

#include <cmath>
#include <numbers>

#include "abcselect/errors.hpp"

namespace abcselect {

void WalkSpec::validate() const {
    if (steps < 10) throw InvariantError("walks need at least 10 steps");
    if (!(step_scale > 0.0)) throw InvariantError("step scale must be positive");
    if (turn_concentration < 0.0 || bias_concentration < 0.0)
        throw InvariantError("concentrations must be non-negative");
}

Dataset simulate_walk(const WalkSpec& spec, RngStream& rng) {
    spec.validate();
    constexpr double two_pi = 2.0 * std::numbers::pi;
    Trajectory path(spec.steps + 1, 2);
    path.row(0).setZero();
    double heading = rng.uniform(0.0, two_pi);
    for (int t = 1; t <= spec.steps; ++t) {
        double dx, dy;
        switch (spec.kind) {
            case WalkKind::Brownian:
                dx = rng.normal(0.0, spec.step_scale);
                dy = rng.normal(0.0, spec.step_scale);
                break;
            case WalkKind::Persistent: {
                heading += rng.vonmises(0.0, spec.turn_concentration);
                const double len = std::abs(rng.normal(0.0, spec.step_scale));
                dx = len * std::cos(heading);
                dy = len * std::sin(heading);
                break;
            }
            case WalkKind::Biased: {
                const double h = rng.vonmises(spec.bias_direction, spec.bias_concentration);
                const double len = std::abs(rng.normal(0.0, spec.step_scale));
                dx = len * std::cos(h);
                dy = len * std::sin(h);
                break;
            }
            default:
                throw InvariantError("unknown walk kind");
        }
        path(t, 0) = path(t - 1, 0) + dx;
        path(t, 1) = path(t - 1, 1) + dy;
    }
    return Dataset(std::move(path), stream_fingerprint(rng));
}

namespace {

Eigen::VectorXd scalar(double v) { return Eigen::VectorXd::Constant(1, v); }

}  // namespace

StatisticPool walk_pool() {
    StatisticPool pool("walk5");
    const DatasetKind kind = DatasetKind::Trajectory;
    // Mean displacements can be large and negative; the declared bound keeps
    // them inside the log-distance domain for any prior-supported walk.
    constexpr double kDisplacementBound = -2000.0;

    pool.add({"S1", 1, kind, 0.0, [](const Dataset& d, RngStream&) {
                  const Trajectory& r = d.trajectory();
                  const auto rel = r.rowwise() - r.row(0);
                  return scalar(rel.rowwise().squaredNorm().mean());
              }});
    pool.add({"S2", 2, kind, kDisplacementBound, [](const Dataset& d, RngStream&) {
                  const Trajectory& r = d.trajectory();
                  Eigen::VectorXd out(2);
                  out[0] = (r.col(0).array() - r(0, 0)).mean();
                  out[1] = (r.col(1).array() - r(0, 1)).mean();
                  return out;
              }});
    pool.add({"S3", 2, kind, 0.0, [](const Dataset& d, RngStream&) {
                  const Trajectory& r = d.trajectory();
                  Eigen::VectorXd out(2);
                  out[0] = (r.col(0).array() - r(0, 0)).square().mean();
                  out[1] = (r.col(1).array() - r(0, 1)).square().mean();
                  return out;
              }});
    pool.add({"S4", 1, kind, 0.0, [](const Dataset& d, RngStream&) {
                  const Trajectory& r = d.trajectory();
                  const Eigen::Index last = r.rows() - 1;
                  double path_len = 0.0;
                  for (Eigen::Index t = 1; t <= last; ++t)
                      path_len += (r.row(t) - r.row(t - 1)).norm();
                  if (path_len == 0.0) return scalar(0.0);
                  return scalar((r.row(last) - r.row(0)).norm() / path_len);
              }});
    pool.add({"S5", 2, kind, 0.0, [](const Dataset& d, RngStream&) {
                  const Trajectory& r = d.trajectory();
                  const Eigen::RowVector2d centroid = r.colwise().mean();
                  const auto rel = r.rowwise() - centroid;
                  Eigen::Matrix2d g = rel.transpose() * rel / static_cast<double>(r.rows());
                  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(g);
                  Eigen::VectorXd out(2);
                  out[0] = solver.eigenvalues()[1];  // descending order
                  out[1] = solver.eigenvalues()[0];
                  return out;
              }});
    return pool;
}

std::vector<ModelSpec> walk_models(int steps) {
    constexpr double two_pi = 2.0 * std::numbers::pi;

    ModelSpec brown;
    brown.name = "rw-brown";
    brown.param_dim = 1;
    brown.output_kind = DatasetKind::Trajectory;
    brown.sample_prior = [](RngStream& rng) {
        return Eigen::VectorXd::Constant(1, rng.uniform(0.1, 2.0));
    };
    brown.prior_density = [](const Eigen::VectorXd& t) {
        return (t[0] >= 0.1 && t[0] <= 2.0) ? 1.0 / 1.9 : 0.0;
    };
    brown.simulate = [steps](const Eigen::VectorXd& theta, RngStream& rng) {
        WalkSpec spec;
        spec.kind = WalkKind::Brownian;
        spec.steps = steps;
        spec.step_scale = theta[0];
        return simulate_walk(spec, rng);
    };

    ModelSpec persist;
    persist.name = "rw-persist";
    persist.param_dim = 2;
    persist.output_kind = DatasetKind::Trajectory;
    persist.sample_prior = [](RngStream& rng) {
        Eigen::VectorXd t(2);
        t[0] = rng.uniform(0.1, 2.0);
        t[1] = rng.uniform(0.0, 10.0);
        return t;
    };
    persist.prior_density = [](const Eigen::VectorXd& t) {
        const bool in = t[0] >= 0.1 && t[0] <= 2.0 && t[1] >= 0.0 && t[1] <= 10.0;
        return in ? 1.0 / (1.9 * 10.0) : 0.0;
    };
    persist.simulate = [steps](const Eigen::VectorXd& theta, RngStream& rng) {
        WalkSpec spec;
        spec.kind = WalkKind::Persistent;
        spec.steps = steps;
        spec.step_scale = theta[0];
        spec.turn_concentration = theta[1];
        return simulate_walk(spec, rng);
    };

    ModelSpec biased;
    biased.name = "rw-biased";
    biased.param_dim = 3;
    biased.output_kind = DatasetKind::Trajectory;
    biased.sample_prior = [two_pi](RngStream& rng) {
        Eigen::VectorXd t(3);
        t[0] = rng.uniform(0.1, 2.0);
        t[1] = rng.uniform(0.0, two_pi);
        t[2] = rng.uniform(0.0, 10.0);
        return t;
    };
    biased.prior_density = [two_pi](const Eigen::VectorXd& t) {
        const bool in = t[0] >= 0.1 && t[0] <= 2.0 && t[1] >= 0.0 && t[1] <= two_pi &&
                        t[2] >= 0.0 && t[2] <= 10.0;
        return in ? 1.0 / (1.9 * two_pi * 10.0) : 0.0;
    };
    biased.simulate = [steps](const Eigen::VectorXd& theta, RngStream& rng) {
        WalkSpec spec;
        spec.kind = WalkKind::Biased;
        spec.steps = steps;
        spec.step_scale = theta[0];
        spec.bias_direction = theta[1];
        spec.bias_concentration = theta[2];
        return simulate_walk(spec, rng);
    };

    return {brown, persist, biased};
}

}  // namespace abcselect
