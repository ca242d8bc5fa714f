#include "egse/sampler.hpp"

#include <cmath>
#include <cstdio>

#include "egse/errors.hpp"
#include "egse/linalg.hpp"
#include "egse/rng.hpp"

namespace egse {

double acceptance_probability(const Theta& theta) {
    validate_theta(theta);
    SigmaFactor::make(theta.sigma);
    const double scale = std::sqrt(1.0 + theta.lambda.dot(theta.sigma * theta.lambda));
    return univariate_cdf(theta.kind, theta.tau / scale);
}

SampleBatch sample_ese(const Theta& theta, std::uint64_t m, std::uint64_t seed,
                       std::uint64_t stream) {
    validate_theta(theta);
    if (m < 1) throw argument_error("sample_ese: m must be at least 1");
    const int n = theta.dim();
    const SigmaFactor f = SigmaFactor::make(theta.sigma);
    const Eigen::MatrixXd chol = f.lower();

    const double accept_prob = acceptance_probability(theta);
    if (accept_prob < 0.01)
        std::fprintf(stderr,
                     "sample_ese: warning: acceptance probability %.3g is low; "
                     "plain rejection will be slow\n", accept_prob);

    RngStream rng(seed, stream);
    SampleBatch batch;
    batch.seed = seed;
    batch.values.resize(static_cast<Eigen::Index>(m), n);

    Eigen::VectorXd u(n);
    std::uint64_t accepted = 0;
    std::uint64_t proposed = 0;
    while (accepted < m) {
        const double z_raw = rng.normal();
        for (int i = 0; i < n; ++i) u[i] = rng.normal();

        double z;
        Eigen::VectorXd x;
        if (theta.kind.student) {
            // One chi-square draw scales the whole (Z, X) block; independent
            // scaling per coordinate would break the joint law.
            const double s = rng.chisq(theta.kind.nu);
            const double mix = std::sqrt(theta.kind.nu / s);
            z = z_raw * mix;
            x = theta.mu + chol * u * mix;
        } else {
            z = z_raw;
            x = theta.mu + chol * u;
        }
        ++proposed;

        if (theta.lambda.dot(x - theta.mu) + theta.tau > z) {
            batch.values.row(accepted) = x.transpose();
            ++accepted;
        }
        if (proposed >= 100000 && accepted < proposed / 10000)
            throw progress_error(
                "sample_ese: acceptance rate below 1e-4 after 1e5 proposals; "
                "increase tau or reduce |lambda|");
    }
    batch.accepted = accepted;
    batch.proposed = proposed;
    return batch;
}

SampleBatch sample_egse(const Theta& theta, const std::vector<LinkSpec>& links,
                        std::uint64_t m, std::uint64_t seed, std::uint64_t stream) {
    if (static_cast<int>(links.size()) != theta.dim())
        throw argument_error("sample_egse: need one link per coordinate");
    SampleBatch batch = sample_ese(theta, m, seed, stream);
    for (Eigen::Index r = 0; r < batch.values.rows(); ++r)
        for (Eigen::Index c = 0; c < batch.values.cols(); ++c)
            batch.values(r, c) = eval_inverse(links[c], batch.values(r, c));
    return batch;
}

}  // namespace egse
