#pragma once

// Elliptical building blocks: density generators and their normalization
// constants (Gaussian and Student-t families), elliptical log densities,
// Mahalanobis distances, univariate CDFs, and the skewing CDF of the
// conditional generator.

#include <string>

#include <Eigen/Dense>

namespace egse {

struct GeneratorKind {
    bool student = false;
    double nu = 0.0;  // degrees of freedom, student only

    static GeneratorKind gaussian() { return GeneratorKind{}; }
    static GeneratorKind student_t(double nu);

    bool operator==(const GeneratorKind& other) const {
        return student == other.student && (!student || nu == other.nu);
    }
    std::string token() const;
};

// Token "normal" or "student:<nu>".
GeneratorKind parse_generator_token(const std::string& token);

struct EllipticalParams {
    Eigen::VectorXd mu;
    Eigen::MatrixXd sigma;
};

// g^(n)(u): radial profile at squared radius u >= 0.
double generator_value(const GeneratorKind& kind, int n, double u);
double generator_log_value(const GeneratorKind& kind, int n, double u);

// Z_{g^(n)}: the constant making g^(n)(q)/( Z |Sigma|^(1/2) ) a density.
double normalization_constant(const GeneratorKind& kind, int n);
double log_normalization_constant(const GeneratorKind& kind, int n);

// Squared Mahalanobis distance via Cholesky solve.
double mahalanobis(const Eigen::VectorXd& x, const EllipticalParams& p);

double elliptical_logpdf(const Eigen::VectorXd& x, const EllipticalParams& p,
                         const GeneratorKind& kind);

// Standard univariate CDF / pdf of the family (Student F_nu or normal Phi).
double univariate_cdf(const GeneratorKind& kind, double z);
double univariate_pdf(const GeneratorKind& kind, double z);

// CDF at x of the conditional law of the selection coordinate given a point
// at squared Mahalanobis distance q, when the joint has extra_df_base more
// coordinates than the conditioning event. Student: F_{nu+d}(x sqrt((nu+d)/(nu+q)))
// with d = extra_df_base; Gaussian: Phi(x), q drops out.
double conditional_skewing_cdf(const GeneratorKind& kind, double x, double q,
                               int extra_df_base);

// Same quantity by direct quadrature of g^(d+1)(s^2+q) with a numeric
// normalizer; cross-validation path for the closed form above.
double conditional_skewing_cdf_quadrature(const GeneratorKind& kind, double x,
                                          double q, int extra_df_base);

}  // namespace egse
