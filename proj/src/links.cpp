#include "egse/links.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "egse/errors.hpp"
#include "egse/special.hpp"

namespace egse {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.141592653589793;

void check_domain(const LinkSpec& link, double x) {
    if (!std::isfinite(x) || !(x > link.domain_lo && x < link.domain_hi)) {
        std::ostringstream msg;
        msg << "link " << link.token << ": x=" << x << " outside open domain ("
            << link.domain_lo << ", " << link.domain_hi << ")";
        throw domain_error(msg.str());
    }
}

void check_range(const LinkSpec& link, double u) {
    if (!std::isfinite(u)) {
        std::ostringstream msg;
        msg << "link " << link.token << ": inverse argument must be finite, got " << u;
        throw domain_error(msg.str());
    }
    if (!(u > link.range_lo && u < link.range_hi)) {
        std::ostringstream msg;
        msg << "link " << link.token << ": u=" << u << " outside the forward range ("
            << link.range_lo << ", " << link.range_hi << ")";
        throw domain_error(msg.str());
    }
}

double logistic(double u) { return 1.0 / (1.0 + std::exp(-u)); }

// Signed odd root, stable for negative arguments.
double odd_root(double v, int p) {
    if (p == 1) return v;
    return std::copysign(std::pow(std::fabs(v), 1.0 / p), v);
}

}  // namespace

HostCdf gaussian_host() {
    HostCdf h;
    h.name = "gaussian";
    h.support_lo = -kInf;
    h.support_hi = kInf;
    h.cdf = [](double x) { return norm_cdf(x); };
    h.quantile = [](double p) { return norm_quantile(p); };
    h.pdf = [](double x) { return norm_pdf(x); };
    return h;
}

HostCdf exponential_host(double rate) {
    if (!(rate > 0.0)) throw argument_error("exponential_host: rate must be positive");
    HostCdf h;
    h.name = "exponential";
    h.support_lo = 0.0;
    h.support_hi = kInf;
    h.cdf = [rate](double x) { return -std::expm1(-rate * x); };
    h.quantile = [rate](double p) { return -std::log1p(-p) / rate; };
    h.pdf = [rate](double x) { return rate * std::exp(-rate * x); };
    return h;
}

LinkSpec make_link(LinkFamily family) {
    LinkSpec link;
    link.family = family;
    switch (family) {
        case LinkFamily::tanprobit:
            link.domain_lo = 0.0; link.domain_hi = 1.0;
            link.range_lo = -kInf; link.range_hi = kInf;
            link.token = "tanprobit";
            break;
        case LinkFamily::neglog1m:
            link.domain_lo = 0.0; link.domain_hi = 1.0;
            link.range_lo = 0.0; link.range_hi = kInf;
            link.token = "neglog1m";
            break;
        case LinkFamily::gumbelunit:
            link.domain_lo = 0.0; link.domain_hi = 1.0;
            link.range_lo = -kInf; link.range_hi = kInf;
            link.token = "gumbelunit";
            break;
        case LinkFamily::loglogc:
            link.domain_lo = 0.0; link.domain_hi = 1.0;
            link.range_lo = 0.0; link.range_hi = kInf;
            link.token = "loglogc";
            break;
        case LinkFamily::logit:
            link.domain_lo = 0.0; link.domain_hi = 1.0;
            link.range_lo = -kInf; link.range_hi = kInf;
            link.token = "logit";
            break;
        case LinkFamily::cloglog:
            link.domain_lo = 0.0; link.domain_hi = 1.0;
            link.range_lo = -kInf; link.range_hi = kInf;
            link.token = "cloglog";
            break;
        case LinkFamily::logitcube:
            link.domain_lo = 0.0; link.domain_hi = 1.0;
            link.range_lo = -kInf; link.range_hi = kInf;
            link.token = "logitcube";
            break;
        case LinkFamily::logitquint:
            link.domain_lo = 0.0; link.domain_hi = 1.0;
            link.range_lo = -kInf; link.range_hi = kInf;
            link.token = "logitquint";
            break;
        case LinkFamily::log_link:
            link.domain_lo = 0.0; link.domain_hi = kInf;
            link.range_lo = -kInf; link.range_hi = kInf;
            link.token = "log";
            break;
        case LinkFamily::xminv:
            link.domain_lo = 0.0; link.domain_hi = kInf;
            link.range_lo = -kInf; link.range_hi = kInf;
            link.token = "xminv";
            break;
        case LinkFamily::sinh_link:
            link.domain_lo = -kInf; link.domain_hi = kInf;
            link.range_lo = -kInf; link.range_hi = kInf;
            link.token = "sinh";
            break;
        case LinkFamily::bs:
        case LinkFamily::poly:
        case LinkFamily::cdf_ratio:
        case LinkFamily::cdf_logit:
            throw argument_error("make_link: this family needs its dedicated factory");
    }
    return link;
}

LinkSpec make_bs_link(double alpha, double beta) {
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw argument_error("bs link: alpha and beta must be positive");
    LinkSpec link;
    link.family = LinkFamily::bs;
    link.params = {alpha, beta};
    link.domain_lo = 0.0; link.domain_hi = kInf;
    link.range_lo = -kInf; link.range_hi = kInf;
    std::ostringstream t;
    t << "bs:" << alpha << "," << beta;
    link.token = t.str();
    return link;
}

LinkSpec make_poly_link(double a, double b, int p) {
    if (!(a > 0.0)) throw argument_error("poly link: a must be positive");
    if (p < 1 || p % 2 == 0) throw argument_error("poly link: p must be a positive odd integer");
    LinkSpec link;
    link.family = LinkFamily::poly;
    link.params = {a, b, static_cast<double>(p)};
    link.domain_lo = -kInf; link.domain_hi = kInf;
    link.range_lo = -kInf; link.range_hi = kInf;
    std::ostringstream t;
    t << "poly:" << a << "," << b << "," << p;
    link.token = t.str();
    return link;
}

namespace {

// CDF-composed maps are only well conditioned while the host CDF stays
// clear of both floating-point endpoints: once 1-F drops below ~1e-6 a
// generic cdf() callback cannot return the tail with enough relative
// precision for the inverse to land back on x. Restrict the usable domain
// to the host's central 1-2e-6 mass.
constexpr double kHostTailMass = 1e-6;

void set_host_domain(LinkSpec& link) {
    link.domain_lo = link.host.quantile(kHostTailMass);
    link.domain_hi = link.host.quantile(1.0 - kHostTailMass);
    const double lo_mass = kHostTailMass;
    const double hi_mass = 1.0 - kHostTailMass;
    if (link.family == LinkFamily::cdf_ratio) {
        link.range_lo = (2.0 * lo_mass - 1.0) / (lo_mass * (1.0 - lo_mass));
        link.range_hi = (2.0 * hi_mass - 1.0) / (hi_mass * (1.0 - hi_mass));
    } else {
        link.range_lo = std::log(lo_mass) - std::log1p(-lo_mass);
        link.range_hi = std::log(hi_mass) - std::log1p(-hi_mass);
    }
    // Guard the sliver where cdf(quantile(p)) rounds a hair below p, so a
    // forward value computed just inside the domain is never rejected.
    link.range_lo -= 1e-9 * std::fabs(link.range_lo);
    link.range_hi += 1e-9 * std::fabs(link.range_hi);
}

}  // namespace

LinkSpec make_cdf_ratio_link(HostCdf host) {
    if (!host.cdf || !host.quantile || !host.pdf)
        throw argument_error("cdf_ratio link: host must provide cdf, quantile, pdf");
    LinkSpec link;
    link.family = LinkFamily::cdf_ratio;
    link.range_lo = -kInf; link.range_hi = kInf;
    link.token = "cdfratio[" + host.name + "]";
    link.host = std::move(host);
    set_host_domain(link);
    return link;
}

LinkSpec make_cdf_logit_link(HostCdf host) {
    if (!host.cdf || !host.quantile || !host.pdf)
        throw argument_error("cdf_logit link: host must provide cdf, quantile, pdf");
    LinkSpec link;
    link.family = LinkFamily::cdf_logit;
    link.range_lo = -kInf; link.range_hi = kInf;
    link.token = "cdflogit[" + host.name + "]";
    link.host = std::move(host);
    set_host_domain(link);
    return link;
}

double eval_link(const LinkSpec& link, double x) {
    check_domain(link, x);
    switch (link.family) {
        case LinkFamily::tanprobit:
            return std::tan((x - 0.5) * kPi);
        case LinkFamily::neglog1m:
            return -std::log1p(-x);
        case LinkFamily::gumbelunit:
            return 1.0 - std::log(-std::log(x));
        case LinkFamily::loglogc:
            return std::log1p(-std::log1p(-x));
        case LinkFamily::logit:
            return std::log(x) - std::log1p(-x);
        case LinkFamily::cloglog:
            return std::log(-std::log1p(-x));
        case LinkFamily::logitcube:
            return 3.0 * std::log(x) - std::log1p(-x * x * x);
        case LinkFamily::logitquint:
            return 5.0 * std::log(x) - std::log1p(-std::pow(x, 5));
        case LinkFamily::log_link:
            return std::log(x);
        case LinkFamily::xminv:
            return x - 1.0 / x;
        case LinkFamily::bs: {
            const double alpha = link.params[0], beta = link.params[1];
            return (std::sqrt(x / beta) - std::sqrt(beta / x)) / alpha;
        }
        case LinkFamily::poly: {
            const double a = link.params[0], b = link.params[1];
            const int p = static_cast<int>(link.params[2]);
            return a * std::pow(x, p) + b;
        }
        case LinkFamily::sinh_link:
            return std::sinh(x);
        case LinkFamily::cdf_ratio: {
            const double h = link.host.cdf(x);
            return (2.0 * h - 1.0) / (h * (1.0 - h));
        }
        case LinkFamily::cdf_logit: {
            const double f = link.host.cdf(x);
            return std::log(f) - std::log1p(-f);
        }
    }
    throw argument_error("eval_link: unknown family");
}

namespace {

double eval_inverse_raw(const LinkSpec& link, double u);

}  // namespace

double eval_inverse(const LinkSpec& link, double u) {
    check_range(link, u);
    double x = eval_inverse_raw(link, u);
    // Deep-tail arguments can round onto a boundary (exp underflow and
    // friends) or overflow past it; pin the result to the nearest
    // representable interior point so callers never see a domain violation.
    if (!(x > link.domain_lo)) x = std::nextafter(link.domain_lo, kInf);
    if (!(x < link.domain_hi)) x = std::nextafter(link.domain_hi, -kInf);
    return x;
}

namespace {

double eval_inverse_raw(const LinkSpec& link, double u) {
    switch (link.family) {
        case LinkFamily::tanprobit:
            return 0.5 + std::atan(u) / kPi;
        case LinkFamily::neglog1m:
            return -std::expm1(-u);
        case LinkFamily::gumbelunit:
            return std::exp(-std::exp(1.0 - u));
        case LinkFamily::loglogc:
            return -std::expm1(1.0 - std::exp(u));
        case LinkFamily::logit:
            return logistic(u);
        case LinkFamily::cloglog:
            return -std::expm1(-std::exp(u));
        case LinkFamily::logitcube:
            return std::cbrt(logistic(u));
        case LinkFamily::logitquint:
            return std::pow(logistic(u), 0.2);
        case LinkFamily::log_link:
            return std::exp(u);
        case LinkFamily::xminv: {
            // Positive root of x^2 - u x - 1; rationalized branch for u < 0.
            const double r = std::hypot(u, 2.0);
            return u >= 0.0 ? 0.5 * (u + r) : 2.0 / (r - u);
        }
        case LinkFamily::bs: {
            const double alpha = link.params[0], beta = link.params[1];
            const double w = 0.5 * alpha * u;
            const double r = std::hypot(w, 1.0);
            const double t = w >= 0.0 ? w + r : 1.0 / (r - w);
            return beta * t * t;
        }
        case LinkFamily::poly: {
            const double a = link.params[0], b = link.params[1];
            const int p = static_cast<int>(link.params[2]);
            return odd_root((u - b) / a, p);
        }
        case LinkFamily::sinh_link:
            return std::asinh(u);
        case LinkFamily::cdf_ratio: {
            // h solves u h^2 + (2-u) h - 1 = 0. Both branches avoid the
            // subtraction that would wipe out a tail-sized root.
            double h;
            if (u >= 0.0) {
                const double r = std::hypot(u, 2.0);
                h = (u + r) / (2.0 + u + r);
            } else {
                const double t = -u;
                const double r = std::hypot(t, 2.0);
                h = 2.0 / (2.0 + t + r);
            }
            return link.host.quantile(h);
        }
        case LinkFamily::cdf_logit:
            return link.host.quantile(logistic(u));
    }
    throw argument_error("eval_inverse: unknown family");
}

}  // namespace

double eval_deriv(const LinkSpec& link, double x) {
    check_domain(link, x);
    switch (link.family) {
        case LinkFamily::tanprobit: {
            const double c = std::cos((x - 0.5) * kPi);
            return kPi / (c * c);
        }
        case LinkFamily::neglog1m:
            return 1.0 / (1.0 - x);
        case LinkFamily::gumbelunit:
            return 1.0 / (x * -std::log(x));
        case LinkFamily::loglogc:
            return 1.0 / ((1.0 - x) * (1.0 - std::log1p(-x)));
        case LinkFamily::logit:
            return 1.0 / (x * (1.0 - x));
        case LinkFamily::cloglog:
            return 1.0 / ((1.0 - x) * -std::log1p(-x));
        case LinkFamily::logitcube:
            return 3.0 / (x * (1.0 - x * x * x));
        case LinkFamily::logitquint:
            return 5.0 / (x * (1.0 - std::pow(x, 5)));
        case LinkFamily::log_link:
            return 1.0 / x;
        case LinkFamily::xminv:
            return 1.0 + 1.0 / (x * x);
        case LinkFamily::bs: {
            const double alpha = link.params[0], beta = link.params[1];
            return 0.5 / alpha * (1.0 / std::sqrt(x * beta) + std::sqrt(beta) / (x * std::sqrt(x)));
        }
        case LinkFamily::poly: {
            const double a = link.params[0];
            const int p = static_cast<int>(link.params[2]);
            return a * p * std::pow(x, p - 1);
        }
        case LinkFamily::sinh_link:
            return std::cosh(x);
        case LinkFamily::cdf_ratio: {
            const double h = link.host.cdf(x);
            const double hm = h * (1.0 - h);
            return link.host.pdf(x) * (2.0 * h * h - 2.0 * h + 1.0) / (hm * hm);
        }
        case LinkFamily::cdf_logit: {
            const double f = link.host.cdf(x);
            return link.host.pdf(x) / (f * (1.0 - f));
        }
    }
    throw argument_error("eval_deriv: unknown family");
}

double eval_log_deriv(const LinkSpec& link, double x) {
    check_domain(link, x);
    switch (link.family) {
        case LinkFamily::tanprobit:
            return std::log(kPi) - 2.0 * std::log(std::cos((x - 0.5) * kPi));
        case LinkFamily::neglog1m:
            return -std::log1p(-x);
        case LinkFamily::gumbelunit:
            return -std::log(x) - std::log(-std::log(x));
        case LinkFamily::loglogc:
            return -std::log1p(-x) - std::log(1.0 - std::log1p(-x));
        case LinkFamily::logit:
            return -std::log(x) - std::log1p(-x);
        case LinkFamily::cloglog:
            return -std::log1p(-x) - std::log(-std::log1p(-x));
        case LinkFamily::logitcube:
            return std::log(3.0) - std::log(x) - std::log1p(-x * x * x);
        case LinkFamily::logitquint:
            return std::log(5.0) - std::log(x) - std::log1p(-std::pow(x, 5));
        case LinkFamily::log_link:
            return -std::log(x);
        case LinkFamily::xminv:
            return std::log1p(x * x) - 2.0 * std::log(x);
        case LinkFamily::bs: {
            const double alpha = link.params[0], beta = link.params[1];
            return std::log(x + beta) - std::log(2.0 * alpha * std::sqrt(beta)) -
                   1.5 * std::log(x);
        }
        case LinkFamily::poly: {
            const double a = link.params[0];
            const int p = static_cast<int>(link.params[2]);
            return std::log(a * p) + (p - 1) * std::log(std::fabs(x));
        }
        case LinkFamily::sinh_link:
            return std::fabs(x) + std::log1p(std::exp(-2.0 * std::fabs(x))) -
                   std::log(2.0);
        case LinkFamily::cdf_ratio: {
            const double h = link.host.cdf(x);
            return std::log(link.host.pdf(x)) +
                   std::log(2.0 * h * h - 2.0 * h + 1.0) -
                   2.0 * (std::log(h) + std::log1p(-h));
        }
        case LinkFamily::cdf_logit: {
            const double f = link.host.cdf(x);
            return std::log(link.host.pdf(x)) - std::log(f) - std::log1p(-f);
        }
    }
    throw argument_error("eval_log_deriv: unknown family");
}

LinkSpec parse_link_token(const std::string& token) {
    if (token == "tanprobit") return make_link(LinkFamily::tanprobit);
    if (token == "neglog1m") return make_link(LinkFamily::neglog1m);
    if (token == "gumbelunit") return make_link(LinkFamily::gumbelunit);
    if (token == "loglogc") return make_link(LinkFamily::loglogc);
    if (token == "logit") return make_link(LinkFamily::logit);
    if (token == "cloglog") return make_link(LinkFamily::cloglog);
    if (token == "logitcube") return make_link(LinkFamily::logitcube);
    if (token == "logitquint") return make_link(LinkFamily::logitquint);
    if (token == "log") return make_link(LinkFamily::log_link);
    if (token == "xminv") return make_link(LinkFamily::xminv);
    if (token == "sinh") return make_link(LinkFamily::sinh_link);

    auto parse_numbers = [&token](const std::string& body, size_t want) {
        std::vector<double> out;
        std::istringstream in(body);
        std::string piece;
        while (std::getline(in, piece, ',')) {
            try {
                size_t used = 0;
                out.push_back(std::stod(piece, &used));
                if (used != piece.size()) throw std::invalid_argument(piece);
            } catch (const std::exception&) {
                throw argument_error("link token '" + token + "': bad numeric field '" + piece + "'");
            }
        }
        if (out.size() != want)
            throw argument_error("link token '" + token + "': expected " +
                                 std::to_string(want) + " numeric fields");
        return out;
    };

    if (token.rfind("bs:", 0) == 0) {
        const auto v = parse_numbers(token.substr(3), 2);
        return make_bs_link(v[0], v[1]);
    }
    if (token.rfind("poly:", 0) == 0) {
        const auto v = parse_numbers(token.substr(5), 3);
        const double p = v[2];
        if (p != std::floor(p))
            throw argument_error("link token '" + token + "': p must be an integer");
        return make_poly_link(v[0], v[1], static_cast<int>(p));
    }
    throw argument_error("unknown link token '" + token + "'");
}

std::vector<LinkSpec> parse_link_list(const std::string& csv) {
    std::vector<std::string> fields;
    std::istringstream in(csv);
    std::string piece;
    while (std::getline(in, piece, ',')) fields.push_back(piece);

    // bs:/poly: tokens swallow their remaining numeric fields.
    std::vector<LinkSpec> links;
    for (size_t i = 0; i < fields.size(); ++i) {
        std::string tok = fields[i];
        size_t extra = 0;
        if (tok.rfind("bs:", 0) == 0) extra = 1;
        if (tok.rfind("poly:", 0) == 0) extra = 2;
        for (size_t k = 0; k < extra; ++k) {
            if (++i >= fields.size())
                throw argument_error("link list '" + csv + "': truncated token '" + tok + "'");
            tok += "," + fields[i];
        }
        links.push_back(parse_link_token(tok));
    }
    if (links.empty()) throw argument_error("link list is empty");
    return links;
}

}  // namespace egse
