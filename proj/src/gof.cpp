#include "egse/gof.hpp"

#include <algorithm>
#include <cmath>

#include "egse/errors.hpp"
#include "egse/marginals.hpp"
#include "egse/special.hpp"

namespace egse {

namespace {

constexpr double kClampEps = 1e-12;

double clamp_prob(double p, std::uint64_t& clamped) {
    if (p < kClampEps) {
        ++clamped;
        return kClampEps;
    }
    if (p > 1.0 - kClampEps) {
        ++clamped;
        return 1.0 - kClampEps;
    }
    return p;
}

Eigen::VectorXd sorted_copy(const Eigen::VectorXd& sample) {
    Eigen::VectorXd x = sample;
    std::sort(x.data(), x.data() + x.size());
    return x;
}

// Limiting CDF of the Anderson-Darling statistic (Marsaglia's case-0
// approximation, good to ~5e-5 over the whole line).
double ad_limit_cdf(double z) {
    if (z <= 0.0) return 0.0;
    if (z < 2.0)
        return std::exp(-1.2337141 / z) / std::sqrt(z) *
               (2.00012 +
                (0.247105 -
                 (0.0649821 - (0.0347962 - (0.011672 - 0.00168691 * z) * z) * z) *
                     z) *
                    z);
    return std::exp(
        -std::exp(1.0776 -
                  (2.30695 -
                   (0.43424 - (0.082433 - (0.008056 - 0.0003146 * z) * z) * z) *
                       z) *
                      z));
}

// Asymptotic Kolmogorov tail Q(t) = 2 sum (-1)^{k-1} exp(-2 k^2 t^2).
double kolmogorov_tail(double t) {
    if (t <= 0.0) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * t * t);
        if (term < 1e-18) break;
        sum += (k % 2 == 1) ? term : -term;
    }
    return std::fmin(1.0, std::fmax(0.0, 2.0 * sum));
}

}  // namespace

ResidualReport quantile_residuals(const Eigen::MatrixXd& data, const Theta& theta,
                                  const std::vector<LinkSpec>& links,
                                  std::uint64_t seed, bool rosenblatt) {
    validate_theta(theta);
    if (theta.dim() != 2)
        throw argument_error("quantile_residuals: bivariate models only");
    if (links.size() != 2)
        throw argument_error("quantile_residuals: need two links");
    if (data.cols() != 2)
        throw argument_error("quantile_residuals: data must have two columns");
    if (data.rows() < 1) throw argument_error("quantile_residuals: empty data");

    const Est1Params margin1 = marginal_params(theta, 0, 1);
    const Est1Params margin2 = marginal_params(theta, 1, 0);

    ResidualReport rep;
    rep.seed = seed;
    rep.residuals.resize(2 * data.rows());
    for (Eigen::Index r = 0; r < data.rows(); ++r) {
        const double w1 = eval_link(links[0], data(r, 0));
        const double w2 = eval_link(links[1], data(r, 1));

        const double p1 = clamp_prob(est1_cdf(w1, margin1), rep.clamped);
        double p2;
        if (rosenblatt) {
            const Est1Params cond = conditional_params(theta, 0, 1, w1);
            p2 = clamp_prob(est1_cdf(w2, cond), rep.clamped);
        } else {
            p2 = clamp_prob(est1_cdf(w2, margin2), rep.clamped);
        }
        rep.residuals[2 * r] = norm_quantile(p1);
        rep.residuals[2 * r + 1] = norm_quantile(p2);
    }
    return rep;
}

GofTest ks_test(const Eigen::VectorXd& sample) {
    const Eigen::Index m = sample.size();
    if (m < 5) throw argument_error("ks_test: need at least 5 observations");
    const Eigen::VectorXd x = sorted_copy(sample);

    double d = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
        const double f = norm_cdf(x[i]);
        const double upper = static_cast<double>(i + 1) / m - f;
        const double lower = f - static_cast<double>(i) / m;
        d = std::fmax(d, std::fmax(upper, lower));
    }

    GofTest out;
    out.stat = d;
    out.pvalue = kolmogorov_tail(std::sqrt(static_cast<double>(m)) * d);
    return out;
}

GofTest ad_test(const Eigen::VectorXd& sample) {
    const Eigen::Index m = sample.size();
    if (m < 5) throw argument_error("ad_test: need at least 5 observations");
    const Eigen::VectorXd x = sorted_copy(sample);

    double acc = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
        const double zi =
            std::fmin(std::fmax(norm_cdf(x[i]), 1e-300), 1.0 - 1e-16);
        const double zrev =
            std::fmin(std::fmax(norm_cdf(x[m - 1 - i]), 1e-300), 1.0 - 1e-16);
        acc += (2.0 * i + 1.0) * (std::log(zi) + std::log1p(-zrev));
    }

    GofTest out;
    out.stat = -static_cast<double>(m) - acc / static_cast<double>(m);
    out.pvalue = std::fmin(1.0, std::fmax(0.0, 1.0 - ad_limit_cdf(out.stat)));
    return out;
}

std::vector<std::pair<double, double>> qq_points(const Eigen::VectorXd& sample) {
    const Eigen::Index m = sample.size();
    if (m < 1) throw argument_error("qq_points: empty sample");
    const Eigen::VectorXd x = sorted_copy(sample);

    std::vector<std::pair<double, double>> out;
    out.reserve(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i)
        out.emplace_back(norm_quantile((i + 0.5) / static_cast<double>(m)), x[i]);
    return out;
}

}  // namespace egse
