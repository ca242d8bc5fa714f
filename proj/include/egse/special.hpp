#pragma once

// Scalar special functions used across the library: normal pdf/CDF/quantile,
// regularized incomplete beta and gamma, Student-t pdf/CDF. All pure.

namespace egse {

double norm_pdf(double x);
double norm_logpdf(double x);
double norm_cdf(double x);

// Inverse of norm_cdf. Rational initial guess refined with one Halley step;
// accurate to machine precision for p in (0,1). Throws domain_error outside.
double norm_quantile(double p);

// Regularized incomplete beta I_x(a,b), a,b > 0, x in [0,1].
double inc_beta(double a, double b, double x);

// Regularized lower incomplete gamma P(a,x), a > 0, x >= 0.
double inc_gamma_lower(double a, double x);

// Standard Student-t with nu > 0 degrees of freedom.
double student_pdf(double x, double nu);
double student_logpdf(double x, double nu);
double student_cdf(double x, double nu);

// Chi-square CDF with nu > 0 degrees of freedom (thin wrapper over P(a,x)).
double chisq_cdf(double x, double nu);

}  // namespace egse
