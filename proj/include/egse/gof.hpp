#pragma once

// Model adequacy checks: quantile residuals built from the fitted marginal
// and conditional laws, one-sample KS and AD tests against the standard
// normal, and QQ plot coordinates.

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "egse/density.hpp"
#include "egse/links.hpp"

namespace egse {

struct GofTest {
    double stat = 0.0;
    double pvalue = 0.0;
};

struct ResidualReport {
    Eigen::VectorXd residuals;   // pooled pair per observation (2m values)
    std::uint64_t clamped = 0;   // CDF evaluations pinched into (eps, 1-eps)
    std::uint64_t seed = 0;      // reserved; continuous data needs no randomization
};

// Rosenblatt-style residual pair per row: the first margin's probability
// transform and the second coordinate's conditional transform, both mapped
// through the normal quantile. With rosenblatt = false both coordinates use
// their marginal laws instead (diagnostic variant).
ResidualReport quantile_residuals(const Eigen::MatrixXd& data, const Theta& theta,
                                  const std::vector<LinkSpec>& links,
                                  std::uint64_t seed, bool rosenblatt = true);

// One-sample tests against N(0,1); asymptotic p-values.
GofTest ks_test(const Eigen::VectorXd& sample);
GofTest ad_test(const Eigen::VectorXd& sample);

// (theoretical, empirical) pairs: sorted sample against normal quantiles at
// (i - 0.5)/m.
std::vector<std::pair<double, double>> qq_points(const Eigen::VectorXd& sample);

}  // namespace egse
