// knn.hpp — k-nearest-neighbour divergence and entropy estimators.
//
// Particle clouds are dense row-major point sets (one row per particle).
// The KL estimator is the Wang/Kulkarni/Verdu form
//
//   KL(p_U || p_V) ~ log(N_V/(N_U-1)) + d*E_U[log rho_k(.,V)]
//                                     - d*E_U[log rho_k(.,U\{u})]
//
// where rho_k is the Euclidean distance to the kth nearest neighbour.
// Finite-sample estimates can go negative; they are clamped at zero so that
// "divergence ~ 0" remains the sufficiency signal downstream.
#pragma once

#include <Eigen/Dense>

namespace abcselect {

/// Point cloud: rows are points, columns are coordinates.
using SampleCloud = Eigen::MatrixXd;

/// kNN estimate of KL(p_U || p_V), clamped at 0.
/// Requires equal dimensions, |U| >= k+1 and |V| >= k.  Exact duplicate
/// points are handled by a deterministic 1e-9-scale jitter fallback.
double kl_knn(const SampleCloud& u, const SampleCloud& v, int k = 4);

/// Kozachenko-Leonenko differential entropy estimate.  Consistent up to
/// the usual finite-sample bias; intended for ranking posteriors, not for
/// reporting absolute entropies.
double entropy_knn(const SampleCloud& u, int k = 4);

}  // namespace abcselect
