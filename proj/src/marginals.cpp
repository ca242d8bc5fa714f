#include "egse/marginals.hpp"

#include <cmath>
#include <string>

#include "egse/errors.hpp"
#include "egse/quadrature.hpp"
#include "egse/special.hpp"

namespace egse {

namespace {

constexpr double kFloor = 1e-300;

double log_floored(double v) { return std::log(std::fmax(v, kFloor)); }

void check_est1(const Est1Params& p) {
    if (!(p.sigma2 > 0.0)) throw argument_error("est1: sigma2 must be positive");
    if (!p.is_gaussian() && !(p.nu > 0.0))
        throw argument_error("est1: nu must be positive (or +inf for the normal branch)");
}

struct TailPair {
    double cdf;
    double survival;
};

TailPair est1_tails(double x, const Est1Params& p) {
    check_est1(p);
    auto pdf = [&p](double t) { return std::exp(est1_logpdf(t, p)); };
    // Integrate the smaller side for accuracy; the complement keeps the pair
    // summing to one exactly.
    if (x <= p.mu) {
        const QuadResult r = integrate_left_tail(pdf, x, 1e-10, 1e-10);
        if (!r.converged)
            throw numeric_error("est1_cdf: quadrature stalled, error estimate " +
                                std::to_string(r.error_estimate));
        const double c = std::fmin(std::fmax(r.value, 0.0), 1.0);
        return {c, 1.0 - c};
    }
    const QuadResult r = integrate_right_tail(pdf, x, 1e-10, 1e-10);
    if (!r.converged)
        throw numeric_error("est1_survival: quadrature stalled, error estimate " +
                            std::to_string(r.error_estimate));
    const double s = std::fmin(std::fmax(r.value, 0.0), 1.0);
    return {1.0 - s, s};
}

void check_bivariate(const Theta& theta, int i, int j) {
    validate_theta(theta);
    if (theta.dim() != 2)
        throw argument_error("pairwise marginal/conditional forms require a bivariate theta");
    if (i == j) throw argument_error("indices i and j must differ");
    if (i < 0 || i > 1 || j < 0 || j > 1)
        throw argument_error("indices must be 0 or 1");
}

}  // namespace

double est1_logpdf(double x, const Est1Params& p) {
    check_est1(p);
    const double sigma = std::sqrt(p.sigma2);
    const double z = (x - p.mu) / sigma;
    const double denom_arg = p.tau / std::sqrt(1.0 + p.lambda * p.lambda);
    if (p.is_gaussian()) {
        return norm_logpdf(z) - std::log(sigma) +
               log_floored(norm_cdf(p.lambda * z + p.tau)) -
               log_floored(norm_cdf(denom_arg));
    }
    const double tilt_arg =
        (p.lambda * z + p.tau) * std::sqrt((p.nu + 1.0) / (p.nu + z * z));
    return student_logpdf(z, p.nu) - std::log(sigma) +
           log_floored(student_cdf(tilt_arg, p.nu + 1.0)) -
           log_floored(student_cdf(denom_arg, p.nu));
}

double est1_cdf(double x, const Est1Params& p) { return est1_tails(x, p).cdf; }

double est1_survival(double x, const Est1Params& p) { return est1_tails(x, p).survival; }

Est1Params marginal_params(const Theta& theta, int i, int j) {
    check_bivariate(theta, i, j);
    const double sii = theta.sigma(i, i);
    const double sjj = theta.sigma(j, j);
    const double rho = theta.sigma(i, j) / std::sqrt(sii * sjj);
    const double li = theta.lambda[i];
    const double lj = theta.lambda[j];

    const double s = std::sqrt(1.0 + lj * lj * sjj * (1.0 - rho * rho));
    Est1Params m;
    m.mu = theta.mu[i];
    m.sigma2 = sii;
    m.lambda = (li * std::sqrt(sii) + lj * std::sqrt(sjj) * rho) / s;
    m.tau = theta.tau / s;
    m.nu = theta.kind.student ? theta.kind.nu
                              : std::numeric_limits<double>::infinity();
    return m;
}

Est1Params conditional_params(const Theta& theta, int i, int j, double w_i) {
    check_bivariate(theta, i, j);
    const double sii = theta.sigma(i, i);
    const double sjj = theta.sigma(j, j);
    const double rho = theta.sigma(i, j) / std::sqrt(sii * sjj);
    const double zi = (w_i - theta.mu[i]) / std::sqrt(sii);
    const double resid_var = sjj * (1.0 - rho * rho);
    const double tilt = theta.lambda[i] * std::sqrt(sii) +
                        theta.lambda[j] * std::sqrt(sjj) * rho;

    Est1Params c;
    c.mu = theta.mu[j] + std::sqrt(sjj) * rho * zi;
    c.lambda = theta.lambda[j] * std::sqrt(resid_var);
    if (theta.kind.student) {
        const double nu = theta.kind.nu;
        const double shrink = (nu + zi * zi) / (nu + 1.0);
        c.sigma2 = shrink * resid_var;
        c.tau = (tilt * zi + theta.tau) / std::sqrt(shrink);
        c.nu = nu + 1.0;
    } else {
        c.sigma2 = resid_var;
        c.tau = tilt * zi + theta.tau;
        c.nu = std::numeric_limits<double>::infinity();
    }
    return c;
}

double selection_conditional_logpdf(double y, int i, int j, double kappa,
                                    const Theta& theta,
                                    const std::vector<LinkSpec>& links) {
    check_bivariate(theta, i, j);
    if (links.size() != 2)
        throw argument_error("selection_conditional_logpdf: need two links");

    const double w_i = eval_link(links[i], y);
    const double w_kappa = eval_link(links[j], kappa);

    const Est1Params margin_i = marginal_params(theta, i, j);
    const Est1Params margin_j = marginal_params(theta, j, i);
    const Est1Params cond = conditional_params(theta, i, j, w_i);

    return est1_logpdf(w_i, margin_i) + eval_log_deriv(links[i], y) +
           log_floored(est1_survival(w_kappa, cond)) -
           log_floored(est1_survival(w_kappa, margin_j));
}

Est1Params latent_margin(const Theta& theta, int i) {
    validate_theta(theta);
    if (theta.dim() == 1) {
        if (i != 0) throw argument_error("latent_margin: index out of range");
        Est1Params m;
        m.mu = theta.mu[0];
        m.sigma2 = theta.sigma(0, 0);
        m.lambda = theta.lambda[0] * std::sqrt(m.sigma2);
        m.tau = theta.tau;
        m.nu = theta.kind.student ? theta.kind.nu
                                  : std::numeric_limits<double>::infinity();
        return m;
    }
    if (theta.dim() == 2) return marginal_params(theta, i, 1 - i);
    throw argument_error("latent_margin: closed forms cover n = 1 and n = 2 only");
}

double marginal_quantile(double p, int i, const Theta& theta,
                         const std::vector<LinkSpec>& links) {
    if (!(p > 0.0 && p < 1.0))
        throw domain_error("marginal_quantile: p must lie in (0,1)");
    if (static_cast<int>(links.size()) != theta.dim())
        throw argument_error("marginal_quantile: need one link per coordinate");

    const Est1Params margin = latent_margin(theta, i);
    const double sigma = std::sqrt(margin.sigma2);
    double lo = margin.mu - 40.0 * sigma;
    double hi = margin.mu + 40.0 * sigma;
    if (est1_cdf(lo, margin) > p || est1_cdf(hi, margin) < p)
        throw numeric_error("marginal_quantile: root not bracketed in mu +- 40 sigma");

    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo < 1e-10 * std::fmax(1.0, std::fabs(mid))) break;
        (est1_cdf(mid, margin) < p ? lo : hi) = mid;
    }
    return eval_inverse(links[i], 0.5 * (lo + hi));
}

}  // namespace egse
