#pragma once

// Exact sampling through the selection representation: draw the augmented
// elliptical vector (Z, X), keep X whenever the linear selection event fires,
// and optionally push the accepted rows through the inverse links.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "egse/density.hpp"

namespace egse {

struct SampleBatch {
    Eigen::MatrixXd values;  // accepted rows
    std::uint64_t accepted = 0;
    std::uint64_t proposed = 0;
    std::uint64_t seed = 0;
};

// Selection probability P(lambda'(X-mu)+tau > Z) in closed form.
double acceptance_probability(const Theta& theta);

// Latent-scale sample of m accepted rows. The Student branch draws (Z, X)
// jointly from one scale mixture; Z and X are uncorrelated but dependent.
SampleBatch sample_ese(const Theta& theta, std::uint64_t m, std::uint64_t seed,
                       std::uint64_t stream = 0);

// Observation-scale sample: sample_ese pushed through the inverse links.
SampleBatch sample_egse(const Theta& theta, const std::vector<LinkSpec>& links,
                        std::uint64_t m, std::uint64_t seed, std::uint64_t stream = 0);

}  // namespace egse
