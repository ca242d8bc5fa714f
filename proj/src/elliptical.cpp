#include "egse/elliptical.hpp"

#include <cmath>
#include <sstream>

#include "egse/errors.hpp"
#include "egse/linalg.hpp"
#include "egse/quadrature.hpp"
#include "egse/special.hpp"

namespace egse {

namespace {
constexpr double kLog2Pi = 1.8378770664093453;  // log(2*pi)
}

GeneratorKind GeneratorKind::student_t(double nu) {
    if (!(nu > 0.0)) throw argument_error("student generator: nu must be positive");
    GeneratorKind k;
    k.student = true;
    k.nu = nu;
    return k;
}

std::string GeneratorKind::token() const {
    if (!student) return "normal";
    std::ostringstream out;
    out << "student:" << nu;
    return out.str();
}

GeneratorKind parse_generator_token(const std::string& token) {
    if (token == "normal") return GeneratorKind::gaussian();
    if (token.rfind("student:", 0) == 0) {
        double nu;
        try {
            size_t used = 0;
            nu = std::stod(token.substr(8), &used);
            if (used != token.size() - 8) throw std::invalid_argument(token);
        } catch (const std::exception&) {
            throw argument_error("generator token '" + token + "': bad degrees of freedom");
        }
        return GeneratorKind::student_t(nu);
    }
    throw argument_error("unknown generator token '" + token + "' (use normal or student:<nu>)");
}

double generator_log_value(const GeneratorKind& kind, int n, double u) {
    if (u < 0.0) throw argument_error("generator: squared radius must be nonnegative");
    if (n < 1) throw argument_error("generator: dimension must be positive");
    if (!kind.student) return -0.5 * u;
    return -0.5 * (kind.nu + n) * std::log1p(u / kind.nu);
}

double generator_value(const GeneratorKind& kind, int n, double u) {
    return std::exp(generator_log_value(kind, n, u));
}

double log_normalization_constant(const GeneratorKind& kind, int n) {
    if (n < 1) throw argument_error("normalization constant: dimension must be positive");
    const double half_n = 0.5 * n;
    if (!kind.student) return half_n * kLog2Pi;
    const double nu = kind.nu;
    return std::lgamma(0.5 * nu) + half_n * std::log(nu * M_PI) - std::lgamma(0.5 * (nu + n));
}

double normalization_constant(const GeneratorKind& kind, int n) {
    return std::exp(log_normalization_constant(kind, n));
}

double mahalanobis(const Eigen::VectorXd& x, const EllipticalParams& p) {
    if (x.size() != p.mu.size() || p.sigma.rows() != x.size())
        throw matrix_error("mahalanobis: dimension mismatch");
    const SigmaFactor f = SigmaFactor::make(p.sigma);
    const Eigen::VectorXd d = x - p.mu;
    return d.dot(f.solve(d));
}

double elliptical_logpdf(const Eigen::VectorXd& x, const EllipticalParams& p,
                         const GeneratorKind& kind) {
    if (x.size() != p.mu.size() || p.sigma.rows() != x.size())
        throw matrix_error("elliptical_logpdf: dimension mismatch");
    const int n = static_cast<int>(x.size());
    const SigmaFactor f = SigmaFactor::make(p.sigma);
    const Eigen::VectorXd d = x - p.mu;
    const double q = d.dot(f.solve(d));
    return generator_log_value(kind, n, q) - log_normalization_constant(kind, n) -
           0.5 * f.log_det;
}

double univariate_cdf(const GeneratorKind& kind, double z) {
    return kind.student ? student_cdf(z, kind.nu) : norm_cdf(z);
}

double univariate_pdf(const GeneratorKind& kind, double z) {
    return kind.student ? student_pdf(z, kind.nu) : norm_pdf(z);
}

double conditional_skewing_cdf(const GeneratorKind& kind, double x, double q,
                               int extra_df_base) {
    if (q < 0.0) throw argument_error("conditional_skewing_cdf: q must be nonnegative");
    if (extra_df_base < 1)
        throw argument_error("conditional_skewing_cdf: extra_df_base must be >= 1");
    if (!kind.student) return norm_cdf(x);
    const double df = kind.nu + extra_df_base;
    return student_cdf(x * std::sqrt(df / (kind.nu + q)), df);
}

double conditional_skewing_cdf_quadrature(const GeneratorKind& kind, double x,
                                          double q, int extra_df_base) {
    if (q < 0.0) throw argument_error("conditional_skewing_cdf: q must be nonnegative");
    const int d = extra_df_base;
    auto profile = [&](double s) { return generator_value(kind, d + 1, s * s + q); };
    // Normalizer computed numerically: the integral that makes the CDF reach 1.
    const QuadResult total = integrate_real_line(profile, 1e-12, 1e-12);
    const QuadResult head = integrate_left_tail(profile, x, 1e-12, 1e-12);
    if (!total.converged || !head.converged)
        throw numeric_error("conditional_skewing_cdf_quadrature: quadrature did not converge");
    return head.value / total.value;
}

}  // namespace egse
