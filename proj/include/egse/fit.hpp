#pragma once

// Maximum-likelihood machinery: exact log-likelihood, analytic gradient,
// quasi-Newton fitting in an unconstrained chart, profile fits over the
// Student degrees of freedom, and observed-information standard errors.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "egse/density.hpp"
#include "egse/links.hpp"

namespace egse {

struct FitOptions {
    std::optional<double> tau_fixed;  // pin tau instead of estimating it
    int max_iter = 500;
    // Stationarity test, scaled: ||grad||_inf <= tol * max(1, |loglik|). The
    // log-likelihood and its gradient both grow with the row count, so an
    // absolute threshold would be unreachable on large samples.
    double gradient_tolerance = 1e-6;
    double step_tolerance = 1e-9;
    std::vector<int> nu_grid;    // profile grid; empty means 1..50
    std::optional<Theta> start;  // warm start; default is the moment start
};

struct FitResult {
    Theta theta_hat;
    PsiTheta psi_hat;
    // User-chart order: mu_1..n, sigma_1..n, rho_{ij} (i<j), lambda_1..n[, tau].
    Eigen::VectorXd std_errors;
    bool se_valid = false;
    std::string se_note;
    double loglik = 0.0;
    bool converged = false;
    int iterations = 0;
    std::vector<std::pair<double, double>> nu_profile;  // (nu, loglik)
};

// Sum of observation-scale log densities over the rows of `data`, link
// Jacobian included, so the value is the actual log-likelihood.
double loglikelihood(const Eigen::MatrixXd& data, const Theta& theta,
                     const std::vector<LinkSpec>& links);

// Analytic gradient over (mu, free entries of Sigma^{-1}, lambda, tau). The
// precision slots run row-major over the upper triangle; an off-diagonal slot
// moves the symmetric pair together.
Eigen::VectorXd loglik_gradient(const Eigen::MatrixXd& data, const Theta& theta,
                                const std::vector<LinkSpec>& links);

FitResult fit_mle(const Eigen::MatrixXd& data, const std::vector<LinkSpec>& links,
                  const GeneratorKind& kind, const FitOptions& opts = {});

// Fits a Student model at every grid value of nu and returns the best fit
// with the (nu, loglik) trace attached.
FitResult profile_nu(const Eigen::MatrixXd& data, const std::vector<LinkSpec>& links,
                     const FitOptions& opts = {});

struct SeResult {
    Eigen::VectorXd values;
    bool valid = false;
    std::string note;
};

// Observed-information standard errors in the user chart
// (mu_1..n, sigma_1..n, rho_{ij} i<j, lambda_1..n[, tau]).
SeResult standard_errors(const Eigen::MatrixXd& data, const Theta& theta_hat,
                         const std::vector<LinkSpec>& links, bool tau_free = true);

}  // namespace egse
