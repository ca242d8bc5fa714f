#include "egse/moments.hpp"

#include <cmath>
#include <cstdio>

#include "egse/errors.hpp"
#include "egse/linalg.hpp"
#include "egse/sampler.hpp"
#include "egse/special.hpp"

namespace egse {

namespace {

void check_exponents(const std::vector<int>& exponents, int dim) {
    if (static_cast<int>(exponents.size()) != dim)
        throw argument_error("moment: exponent vector length must match dimension");
    for (int e : exponents)
        if (e < 0) throw argument_error("moment: exponents must be nonnegative");
}

McEstimate mean_and_stderr(const Eigen::VectorXd& values) {
    McEstimate out;
    out.mc_size = static_cast<std::uint64_t>(values.size());
    out.estimate = values.mean();
    if (values.size() > 1) {
        const double ss = (values.array() - out.estimate).square().sum();
        out.std_error =
            std::sqrt(ss / (static_cast<double>(values.size() - 1))) /
            std::sqrt(static_cast<double>(values.size()));
    }
    return out;
}

}  // namespace

double log_link_mixed_moment(const std::vector<int>& exponents, const Theta& theta,
                             const std::vector<LinkSpec>& links) {
    validate_theta(theta);
    check_exponents(exponents, theta.dim());
    if (theta.kind.student)
        throw unsupported_error(
            "log_link_mixed_moment: closed form requires a Gaussian generator "
            "(Student moments may fail to exist; use the Monte Carlo path)");
    if (static_cast<int>(links.size()) != theta.dim())
        throw argument_error("log_link_mixed_moment: need one link per coordinate");
    for (const LinkSpec& link : links)
        if (link.family != LinkFamily::log_link)
            throw unsupported_error(
                "log_link_mixed_moment: closed form requires every link to be log");

    Eigen::VectorXd m(theta.dim());
    for (int i = 0; i < theta.dim(); ++i) m[i] = static_cast<double>(exponents[i]);

    const Eigen::VectorXd sigma_m = theta.sigma * m;
    const double u = 1.0 + theta.lambda.dot(theta.sigma * theta.lambda);
    const double shifted = (theta.lambda.dot(sigma_m) + theta.tau) / std::sqrt(u);
    const double base = theta.tau / std::sqrt(u);
    return std::exp(m.dot(theta.mu) + 0.5 * m.dot(sigma_m)) * norm_cdf(shifted) /
           norm_cdf(base);
}

McEstimate mc_moment(const MomentRequest& req, const Theta& theta,
                     const std::vector<LinkSpec>& links) {
    validate_theta(theta);
    check_exponents(req.exponents, theta.dim());
    if (req.mc_size < 1000)
        throw argument_error("mc_moment: mc_size must be at least 1000");
    if (theta.kind.student)
        std::fprintf(stderr,
                     "note: Monte Carlo moment under a Student generator; the "
                     "moment may not exist for heavy tails\n");

    const SampleBatch batch = sample_egse(theta, links, req.mc_size, req.seed);
    Eigen::VectorXd values(batch.values.rows());
    for (Eigen::Index r = 0; r < batch.values.rows(); ++r) {
        double prod = 1.0;
        for (int c = 0; c < theta.dim(); ++c)
            for (int e = 0; e < req.exponents[static_cast<std::size_t>(c)]; ++e)
                prod *= batch.values(r, c);
        values[r] = prod;
    }
    return mean_and_stderr(values);
}

McEstimate kl_divergence_mc(const Theta& theta1, const Theta& theta2,
                            const std::vector<LinkSpec>& links,
                            std::uint64_t mc_size, std::uint64_t seed) {
    (void)links;  // the divergence cancels the links; latent scale only
    validate_theta(theta1);
    validate_theta(theta2);
    if (theta1.dim() != theta2.dim())
        throw argument_error("kl_divergence_mc: dimensions must match");
    if (!(theta1.kind == theta2.kind))
        throw argument_error(
            "kl_divergence_mc: generator kinds (family and degrees of freedom) "
            "must match");
    if (mc_size < 1000)
        throw argument_error("kl_divergence_mc: mc_size must be at least 1000");

    const SampleBatch batch = sample_ese(theta1, mc_size, seed);
    Eigen::VectorXd values(batch.values.rows());
    for (Eigen::Index r = 0; r < batch.values.rows(); ++r) {
        const Eigen::VectorXd w = batch.values.row(r).transpose();
        values[r] = ese_logpdf(w, theta1) - ese_logpdf(w, theta2);
    }
    return mean_and_stderr(values);
}

double kl_gaussian_closed_form(const Theta& theta1, const Theta& theta2) {
    validate_theta(theta1);
    validate_theta(theta2);
    if (theta1.dim() != theta2.dim())
        throw argument_error("kl_gaussian_closed_form: dimensions must match");
    if (theta1.kind.student || theta2.kind.student)
        throw unsupported_error("kl_gaussian_closed_form: Gaussian kind only");
    if (theta1.lambda.cwiseAbs().maxCoeff() != 0.0 || theta1.tau != 0.0 ||
        theta2.lambda.cwiseAbs().maxCoeff() != 0.0 || theta2.tau != 0.0)
        throw unsupported_error(
            "kl_gaussian_closed_form: requires lambda = 0 and tau = 0 on both "
            "sides");

    const int n = theta1.dim();
    const SigmaFactor f2 = SigmaFactor::make(theta2.sigma);
    const SigmaFactor f1 = SigmaFactor::make(theta1.sigma);
    const Eigen::MatrixXd solved = f2.llt.solve(theta1.sigma);
    const Eigen::VectorXd dmu = theta2.mu - theta1.mu;
    return 0.5 * (solved.trace() + dmu.dot(f2.solve(dmu)) - n + f2.log_det -
                  f1.log_det);
}

}  // namespace egse
