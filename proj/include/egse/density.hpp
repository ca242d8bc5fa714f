#pragma once

// Joint log densities of the skewed family, before (latent scale) and after
// (observation scale) the coordinate link maps, plus the identifiable
// correlation-chart reparameterization.

#include <vector>

#include <Eigen/Dense>

#include "egse/elliptical.hpp"
#include "egse/links.hpp"

namespace egse {

struct Theta {
    Eigen::VectorXd mu;
    Eigen::MatrixXd sigma;
    Eigen::VectorXd lambda;
    double tau = 0.0;
    GeneratorKind kind;

    int dim() const { return static_cast<int>(mu.size()); }
};

// Identifiable chart: correlation matrix plus the (delta, gamma) skew slots.
// delta must stay inside the open ellipsoid delta' sigma_star^{-1} delta < 1.
struct PsiTheta {
    Eigen::VectorXd mu;
    Eigen::MatrixXd sigma_star;
    Eigen::VectorXd delta;
    double gamma = 0.0;
};

void validate_theta(const Theta& theta);

// Log density on the latent scale (no link maps involved).
double ese_logpdf(const Eigen::VectorXd& w, const Theta& theta);

// Log density on the observation scale: ese at the mapped point plus the
// log-Jacobian sum of the links. Every y_i must lie strictly inside its
// link's domain.
double egse_logpdf(const Eigen::VectorXd& y, const Theta& theta,
                   const std::vector<LinkSpec>& links);

// Row-wise egse_logpdf over a data matrix (ordered, deterministic).
Eigen::VectorXd egse_logpdf_batch(const Eigen::MatrixXd& rows, const Theta& theta,
                                  const std::vector<LinkSpec>& links);

PsiTheta to_identifiable(const Theta& theta);

// Recovers (lambda, tau) from the identifiable chart; throws domain_error if
// delta sits on or outside the ellipsoid boundary.
std::pair<Eigen::VectorXd, double> from_identifiable(const PsiTheta& psi);

}  // namespace egse
