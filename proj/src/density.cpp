#include "egse/density.hpp"

#include <cmath>
#include <string>

#include "egse/errors.hpp"
#include "egse/linalg.hpp"
#include "egse/special.hpp"

namespace egse {

namespace {

// Tail CDF evaluations can underflow to 0; floor before log so a single far
// proposal during a line search degrades the objective instead of nuking it.
constexpr double kCdfFloor = 1e-300;

double log_floored(double v) { return std::log(std::fmax(v, kCdfFloor)); }

}  // namespace

void validate_theta(const Theta& theta) {
    const int n = theta.dim();
    if (n < 1) throw argument_error("theta: empty location vector");
    if (theta.sigma.rows() != n || theta.sigma.cols() != n || theta.lambda.size() != n)
        throw argument_error("theta: mu, sigma, lambda dimensions disagree");
    if (!theta.mu.allFinite() || !theta.sigma.allFinite() || !theta.lambda.allFinite() ||
        !std::isfinite(theta.tau))
        throw argument_error("theta: entries must be finite");
    SigmaFactor::make(theta.sigma);
}

double ese_logpdf(const Eigen::VectorXd& w, const Theta& theta) {
    validate_theta(theta);
    const int n = theta.dim();
    if (w.size() != n) throw argument_error("ese_logpdf: point dimension mismatch");

    const SigmaFactor f = SigmaFactor::make(theta.sigma);
    const Eigen::VectorXd d = w - theta.mu;
    const double q = d.dot(f.solve(d));
    const double base = generator_log_value(theta.kind, n, q) -
                        log_normalization_constant(theta.kind, n) - 0.5 * f.log_det;

    const double a = theta.lambda.dot(d) + theta.tau;
    const double skew = conditional_skewing_cdf(theta.kind, a, q, n);
    const double denom_arg =
        theta.tau / std::sqrt(1.0 + theta.lambda.dot(theta.sigma * theta.lambda));
    const double denom = univariate_cdf(theta.kind, denom_arg);
    return base + log_floored(skew) - log_floored(denom);
}

double egse_logpdf(const Eigen::VectorXd& y, const Theta& theta,
                   const std::vector<LinkSpec>& links) {
    validate_theta(theta);
    const int n = theta.dim();
    if (y.size() != n) throw argument_error("egse_logpdf: point dimension mismatch");
    if (static_cast<int>(links.size()) != n)
        throw argument_error("egse_logpdf: need one link per coordinate");

    Eigen::VectorXd w(n);
    double log_jacobian = 0.0;
    for (int i = 0; i < n; ++i) {
        w[i] = eval_link(links[i], y[i]);
        log_jacobian += eval_log_deriv(links[i], y[i]);
    }
    return ese_logpdf(w, theta) + log_jacobian;
}

Eigen::VectorXd egse_logpdf_batch(const Eigen::MatrixXd& rows, const Theta& theta,
                                  const std::vector<LinkSpec>& links) {
    Eigen::VectorXd out(rows.rows());
    for (Eigen::Index k = 0; k < rows.rows(); ++k)
        out[k] = egse_logpdf(rows.row(k).transpose(), theta, links);
    return out;
}

PsiTheta to_identifiable(const Theta& theta) {
    validate_theta(theta);
    const int n = theta.dim();
    SigmaFactor::make(theta.sigma);  // positive-definiteness gate

    const Eigen::VectorXd omega = theta.sigma.diagonal().array().sqrt();
    PsiTheta psi;
    // The chart keeps lambda/tau paired with the correlation matrix sigma_star;
    // the scale vector omega carries the remaining degrees of freedom.
    psi.mu = theta.mu;
    psi.sigma_star = Eigen::MatrixXd(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            psi.sigma_star(i, j) = theta.sigma(i, j) / (omega[i] * omega[j]);

    const double s = std::sqrt(1.0 + theta.lambda.dot(psi.sigma_star * theta.lambda));
    psi.delta = psi.sigma_star * theta.lambda / s;
    psi.gamma = theta.tau / s;
    return psi;
}

std::pair<Eigen::VectorXd, double> from_identifiable(const PsiTheta& psi) {
    const int n = static_cast<int>(psi.mu.size());
    if (psi.sigma_star.rows() != n || psi.delta.size() != n)
        throw argument_error("from_identifiable: dimensions disagree");
    for (int i = 0; i < n; ++i)
        if (std::fabs(psi.sigma_star(i, i) - 1.0) > 1e-12)
            throw argument_error("from_identifiable: sigma_star must have unit diagonal");

    const SigmaFactor f = SigmaFactor::make(psi.sigma_star);
    const Eigen::VectorXd solved = f.solve(psi.delta);
    const double ellipsoid = psi.delta.dot(solved);
    if (!(ellipsoid < 1.0))
        throw domain_error("from_identifiable: delta on or outside the unit ellipsoid "
                           "(delta' sigma_star^{-1} delta = " + std::to_string(ellipsoid) + ")");

    const double scale = 1.0 / std::sqrt(1.0 - ellipsoid);
    return {solved * scale, psi.gamma * scale};
}

}  // namespace egse
