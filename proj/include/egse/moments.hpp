#pragma once

// Mixed moments of the observation-scale law and KL divergence between two
// members of the family. The exponential-link case has a closed form; every
// other configuration goes through Monte Carlo.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "egse/density.hpp"
#include "egse/links.hpp"

namespace egse {

enum class MomentEstimator { closed_form_log_link, monte_carlo };

struct MomentRequest {
    std::vector<int> exponents;  // mixed moment E[prod Y_i^{m_i}]
    MomentEstimator estimator = MomentEstimator::monte_carlo;
    std::uint64_t mc_size = 100000;
    std::uint64_t seed = 0;
};

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t mc_size = 0;
};

// E[prod Y_i^{m_i}] when every link is the plain log map and the generator is
// Gaussian. Other configurations throw unsupported_error.
double log_link_mixed_moment(const std::vector<int>& exponents, const Theta& theta,
                             const std::vector<LinkSpec>& links);

// Monte Carlo moment estimate for arbitrary links. Student generators are
// accepted but the moment may not exist; a note goes to stderr.
McEstimate mc_moment(const MomentRequest& req, const Theta& theta,
                     const std::vector<LinkSpec>& links);

// KL(theta1 || theta2) by Monte Carlo. The divergence is invariant under the
// coordinate links, so everything runs on the latent scale and `links` is
// never consulted; both kinds must agree exactly.
McEstimate kl_divergence_mc(const Theta& theta1, const Theta& theta2,
                            const std::vector<LinkSpec>& links,
                            std::uint64_t mc_size, std::uint64_t seed);

// Closed-form KL for the unskewed Gaussian corner (lambda = 0, tau = 0).
double kl_gaussian_closed_form(const Theta& theta1, const Theta& theta2);

}  // namespace egse
