#pragma once

// Univariate skewed laws (Student and normal branches) and the pairwise
// marginal / conditional structure of the bivariate family, including the
// selection-conditional density and marginal quantiles.

#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "egse/density.hpp"

namespace egse {

// nu = +inf selects the normal branch. The slant applies to the standardized
// variable: pdf ~ f(z) F(slant * z + tau_term) with z = (x - mu)/sqrt(sigma2).
struct Est1Params {
    double mu = 0.0;
    double sigma2 = 1.0;
    double lambda = 0.0;
    double nu = std::numeric_limits<double>::infinity();
    double tau = 0.0;

    bool is_gaussian() const { return !std::isfinite(nu); }
};

double est1_logpdf(double x, const Est1Params& p);

// CDF / survival by adaptive quadrature of the density (the smaller tail is
// integrated and the complement returned, so cdf + survival == 1 exactly).
double est1_cdf(double x, const Est1Params& p);
double est1_survival(double x, const Est1Params& p);

// Marginal law of coordinate i of a bivariate theta (j the other index).
Est1Params marginal_params(const Theta& theta, int i, int j);

// Law of coordinate j given coordinate i equals w_i (latent scale). The
// Student branch gains one degree of freedom.
Est1Params conditional_params(const Theta& theta, int i, int j, double w_i);

// log f_{Y_i | Y_j > kappa}(y) for the bivariate observation-scale model.
double selection_conditional_logpdf(double y, int i, int j, double kappa,
                                    const Theta& theta,
                                    const std::vector<LinkSpec>& links);

// p-quantile of Y_i (n = 1 or 2): bracketed root solve of the latent CDF,
// then the inverse link.
double marginal_quantile(double p, int i, const Theta& theta,
                         const std::vector<LinkSpec>& links);

// Latent marginal of coordinate i for n = 1 or 2 (helper shared with gof).
Est1Params latent_margin(const Theta& theta, int i);

}  // namespace egse
