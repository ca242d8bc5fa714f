#pragma once

// Catalog of strictly increasing maps G: D -> R used to carry a real-valued
// latent coordinate onto the observation scale. Each entry provides the
// forward map, its exact inverse, and its derivative, together with the open
// domain D and the open range of the forward map.

#include <functional>
#include <string>
#include <vector>

namespace egse {

enum class LinkFamily {
    tanprobit,   // tan((x - 1/2) pi)            on (0,1)
    neglog1m,    // -log(1-x)                    on (0,1), range (0,inf)
    gumbelunit,  // 1 - log(-log x)              on (0,1)
    loglogc,     // log(log(1/(1-x)) + 1)        on (0,1), range (0,inf)
    logit,       // log(x/(1-x))                 on (0,1)
    cloglog,     // log(-log(1-x))               on (0,1)
    logitcube,   // log(x^3/(1-x^3))             on (0,1)
    logitquint,  // log(x^5/(1-x^5))             on (0,1)
    log_link,    // log x                        on (0,inf)
    xminv,       // x - 1/x                      on (0,inf)
    bs,          // (sqrt(x/b)-sqrt(b/x))/a      on (0,inf), shapes a,b > 0
    cdf_ratio,   // (2H-1)/(H(1-H))              on supp(H), host CDF H
    poly,        // a x^p + b                    on R, a > 0, p odd
    sinh_link,   // sinh x                       on R
    cdf_logit,   // log(F/(1-F))                 on supp(F), host CDF F
};

// Pluggable univariate distribution record for the two CDF-composed links.
struct HostCdf {
    std::string name;
    double support_lo = 0.0;
    double support_hi = 0.0;
    std::function<double(double)> cdf;
    std::function<double(double)> quantile;
    std::function<double(double)> pdf;
};

HostCdf gaussian_host();
HostCdf exponential_host(double rate = 1.0);

struct LinkSpec {
    LinkFamily family;
    std::vector<double> params;  // bs: {alpha, beta}; poly: {a, b, p}
    HostCdf host;                // engaged for cdf_ratio / cdf_logit only
    double domain_lo = 0.0;
    double domain_hi = 0.0;
    double range_lo = 0.0;  // open range of the forward map; may be +-inf
    double range_hi = 0.0;
    std::string token;  // used in error messages and CLI echo
};

// Construction. Shape parameters are validated here, not at call sites.
LinkSpec make_link(LinkFamily family);
LinkSpec make_bs_link(double alpha, double beta);
LinkSpec make_poly_link(double a, double b, int p);
LinkSpec make_cdf_ratio_link(HostCdf host);
LinkSpec make_cdf_logit_link(HostCdf host);

// CLI tokens: logit, cloglog, tanprobit, neglog1m, gumbelunit, logitcube,
// logitquint, loglogc, log, xminv, sinh, bs:alpha,beta, poly:a,b,p.
LinkSpec parse_link_token(const std::string& token);

// Comma-separated token list; the numeric arguments of bs:/poly: consume the
// following comma-separated fields ("logit,bs:0.5,2" is logit plus bs(0.5,2)).
std::vector<LinkSpec> parse_link_list(const std::string& csv);

double eval_link(const LinkSpec& link, double x);

// Inverse map. Throws domain_error for u outside the open forward range;
// results that would round onto (or past) a domain boundary are pinned to
// the nearest representable interior value.
double eval_inverse(const LinkSpec& link, double u);

double eval_deriv(const LinkSpec& link, double x);

// log G'(x) computed without forming G'. Near a domain boundary the
// derivative itself can overflow while its log is a perfectly ordinary
// number, and density code needs that log.
double eval_log_deriv(const LinkSpec& link, double x);

}  // namespace egse
