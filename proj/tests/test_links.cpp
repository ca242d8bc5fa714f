#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "egse/errors.hpp"
#include "egse/links.hpp"

using namespace egse;

namespace {

std::vector<LinkSpec> all_test_links() {
    std::vector<LinkSpec> links;
    for (LinkFamily f :
         {LinkFamily::tanprobit, LinkFamily::neglog1m, LinkFamily::gumbelunit,
          LinkFamily::loglogc, LinkFamily::logit, LinkFamily::cloglog,
          LinkFamily::logitcube, LinkFamily::logitquint, LinkFamily::log_link,
          LinkFamily::xminv, LinkFamily::sinh_link}) {
        links.push_back(make_link(f));
    }
    links.push_back(make_bs_link(0.5, 2.0));
    links.push_back(make_poly_link(1.0, 0.0, 3));
    links.push_back(make_cdf_ratio_link(gaussian_host()));
    links.push_back(make_cdf_logit_link(gaussian_host()));
    links.push_back(make_cdf_logit_link(exponential_host()));
    return links;
}

// Interior grid suited to the link's open domain. The tight variant stays
// away from the boundaries so finite differences remain well conditioned.
std::vector<double> domain_grid(const LinkSpec& link, int count, bool tight) {
    std::vector<double> grid;
    const bool lo_finite = std::isfinite(link.domain_lo);
    const bool hi_finite = std::isfinite(link.domain_hi);
    if (lo_finite && hi_finite) {
        const double a = tight ? 0.05 : 0.005;
        const double b = tight ? 0.95 : 0.995;
        for (int k = 0; k < count; ++k) {
            grid.push_back(link.domain_lo +
                           (link.domain_hi - link.domain_lo) *
                               (a + (b - a) * k / (count - 1)));
        }
    } else if (lo_finite) {
        const double a = tight ? -1.0 : -3.0;
        const double b = tight ? 1.0 : 3.0;
        for (int k = 0; k < count; ++k) {
            grid.push_back(link.domain_lo +
                           std::pow(10.0, a + (b - a) * k / (count - 1)));
        }
    } else {
        // Slight offset dodges x = 0, where the cubic poly map has a
        // genuinely flat point (derivative 0 at a single interior x).
        const double a = (tight ? -3.0 : -6.0) + 0.0137;
        const double b = (tight ? 3.0 : 6.0) + 0.0137;
        for (int k = 0; k < count; ++k) {
            grid.push_back(a + (b - a) * k / (count - 1));
        }
    }
    return grid;
}

}  // namespace

TEST_SUITE("links") {

TEST_CASE("reference forward values") {
    CHECK(eval_link(make_link(LinkFamily::logit), 0.5) ==
          doctest::Approx(0.0).epsilon(1e-14));
    CHECK(eval_link(make_link(LinkFamily::tanprobit), 0.5) ==
          doctest::Approx(0.0).epsilon(1e-14));
    CHECK(eval_link(make_link(LinkFamily::logit), 0.8) ==
          doctest::Approx(1.3862943611198906).epsilon(1e-14));
    CHECK(eval_link(make_link(LinkFamily::log_link), 1.0) ==
          doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("reference inverse values") {
    CHECK(eval_inverse(make_link(LinkFamily::logit), 0.0) ==
          doctest::Approx(0.5).epsilon(1e-14));
    CHECK(eval_inverse(make_link(LinkFamily::log_link), 0.0) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK(eval_inverse(make_link(LinkFamily::cloglog), 0.0) ==
          doctest::Approx(0.63212055882855767).epsilon(1e-14));
}

TEST_CASE("reference derivative values") {
    CHECK(eval_deriv(make_link(LinkFamily::logit), 0.5) ==
          doctest::Approx(4.0).epsilon(1e-14));
    CHECK(eval_deriv(make_link(LinkFamily::tanprobit), 0.5) ==
          doctest::Approx(M_PI).epsilon(1e-14));
}

TEST_CASE("round trip across every family") {
    for (const LinkSpec& link : all_test_links()) {
        CAPTURE(link.token);
        for (double x : domain_grid(link, 100, false)) {
            const double back = eval_inverse(link, eval_link(link, x));
            CHECK(std::fabs(back - x) <= 1e-10 * std::max(1.0, std::fabs(x)));
        }
    }
}

TEST_CASE("forward maps are strictly increasing") {
    for (const LinkSpec& link : all_test_links()) {
        CAPTURE(link.token);
        double prev = -std::numeric_limits<double>::infinity();
        for (double x : domain_grid(link, 60, false)) {
            const double u = eval_link(link, x);
            CHECK(u > prev);
            prev = u;
        }
    }
}

TEST_CASE("derivatives are positive and match finite differences") {
    for (const LinkSpec& link : all_test_links()) {
        CAPTURE(link.token);
        for (double x : domain_grid(link, 25, true)) {
            const double d = eval_deriv(link, x);
            CHECK(d > 0.0);
            const double h = 1e-6 * std::max(1.0, std::fabs(x));
            const double fd =
                (eval_link(link, x + h) - eval_link(link, x - h)) / (2.0 * h);
            CHECK(d == doctest::Approx(fd).epsilon(1e-5));
        }
    }
}

TEST_CASE("log derivative agrees with the derivative and survives overflow") {
    for (const LinkSpec& link : all_test_links()) {
        CAPTURE(link.token);
        for (double x : domain_grid(link, 25, true)) {
            const double d = eval_deriv(link, x);
            CHECK(eval_log_deriv(link, x) ==
                  doctest::Approx(std::log(d)).epsilon(1e-12));
        }
    }
    // Near the boundary the derivative itself overflows but its log is an
    // ordinary number; the density path depends on this.
    const LinkSpec logit = make_link(LinkFamily::logit);
    const double denormal = 5e-324;
    CHECK(std::isinf(eval_deriv(logit, denormal)));
    CHECK(eval_log_deriv(logit, denormal) ==
          doctest::Approx(744.4400719213812).epsilon(1e-12));
    const LinkSpec cube = make_link(LinkFamily::logitcube);
    CHECK(std::isfinite(eval_log_deriv(cube, denormal)));
    const LinkSpec sh = make_link(LinkFamily::sinh_link);
    CHECK(eval_log_deriv(sh, 1000.0) ==
          doctest::Approx(1000.0 - std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("boundary and exterior points raise domain errors") {
    const LinkSpec logit = make_link(LinkFamily::logit);
    CHECK_THROWS_AS(eval_link(logit, 0.0), domain_error);
    CHECK_THROWS_AS(eval_link(logit, 1.0), domain_error);
    CHECK_THROWS_AS(eval_link(logit, -0.2), domain_error);
    CHECK_THROWS_AS(eval_deriv(logit, 1.0), domain_error);
    const LinkSpec log_l = make_link(LinkFamily::log_link);
    CHECK_THROWS_AS(eval_link(log_l, 0.0), domain_error);
    CHECK_THROWS_AS(eval_link(log_l, -1.0), domain_error);
}

TEST_CASE("inverse rejects values outside the forward range") {
    // -log(1-x) only reaches (0, inf); the inverse must refuse u <= 0
    const LinkSpec neglog = make_link(LinkFamily::neglog1m);
    CHECK_THROWS_AS(eval_inverse(neglog, -1.0), domain_error);
    CHECK_THROWS_AS(eval_inverse(neglog, 0.0), domain_error);
    CHECK(eval_inverse(neglog, 0.5) > 0.0);
    const LinkSpec logit = make_link(LinkFamily::logit);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(eval_inverse(logit, inf), domain_error);
    CHECK_THROWS_AS(eval_inverse(logit, -inf), domain_error);
}

TEST_CASE("inverse lands strictly inside the domain") {
    // -30 and 710 push several maps into underflow/overflow territory; the
    // pinned results must still be interior.
    for (const LinkSpec& link : all_test_links()) {
        CAPTURE(link.token);
        for (double u : {-30.0, -2.0, 0.5, 3.0, 25.0, 710.0}) {
            if (!(u > link.range_lo && u < link.range_hi)) continue;
            const double x = eval_inverse(link, u);
            CAPTURE(u);
            CHECK(x > link.domain_lo);
            CHECK(x < link.domain_hi);
            CHECK(std::isfinite(x));
        }
    }
}

TEST_CASE("cubic poly map has one flat interior point") {
    const LinkSpec poly = make_poly_link(1.0, 0.0, 3);
    CHECK(eval_deriv(poly, 0.0) == doctest::Approx(0.0));
    CHECK(eval_deriv(poly, 0.2) > 0.0);
    CHECK(eval_deriv(poly, -0.2) > 0.0);
}

TEST_CASE("shape parameters are validated at construction") {
    CHECK_THROWS_AS(make_bs_link(0.0, 2.0), argument_error);
    CHECK_THROWS_AS(make_bs_link(0.5, -1.0), argument_error);
    CHECK_THROWS_AS(make_poly_link(-1.0, 0.0, 3), argument_error);
    CHECK_THROWS_AS(make_poly_link(1.0, 0.0, 2), argument_error);
    CHECK_NOTHROW(make_poly_link(2.0, -1.0, 5));
}

TEST_CASE("token parsing") {
    CHECK(parse_link_token("logit").family == LinkFamily::logit);
    CHECK(parse_link_token("sinh").family == LinkFamily::sinh_link);
    CHECK(parse_link_token("log").family == LinkFamily::log_link);
    const LinkSpec bs = parse_link_token("bs:0.5,2");
    CHECK(bs.family == LinkFamily::bs);
    REQUIRE(bs.params.size() == 2);
    CHECK(bs.params[0] == doctest::Approx(0.5));
    CHECK(bs.params[1] == doctest::Approx(2.0));
    const LinkSpec poly = parse_link_token("poly:2,1,3");
    CHECK(poly.family == LinkFamily::poly);
    REQUIRE(poly.params.size() == 3);
    CHECK(poly.params[2] == doctest::Approx(3.0));
    CHECK_THROWS_AS(parse_link_token("bogus"), argument_error);
    CHECK_THROWS_AS(parse_link_token("poly:1,0,2"), argument_error);
}

TEST_CASE("comma separated link lists keep shape arguments attached") {
    const std::vector<LinkSpec> list = parse_link_list("logit,bs:0.5,2");
    REQUIRE(list.size() == 2);
    CHECK(list[0].family == LinkFamily::logit);
    CHECK(list[1].family == LinkFamily::bs);
    REQUIRE(list[1].params.size() == 2);
    CHECK(list[1].params[1] == doctest::Approx(2.0));
    const std::vector<LinkSpec> three = parse_link_list("logit,poly:1,0,3,sinh");
    REQUIRE(three.size() == 3);
    CHECK(three[1].family == LinkFamily::poly);
    CHECK(three[2].family == LinkFamily::sinh_link);
}

TEST_CASE("host cdf links behave at their symmetry points") {
    const LinkSpec ratio = make_cdf_ratio_link(gaussian_host());
    CHECK(eval_link(ratio, 0.0) == doctest::Approx(0.0).epsilon(1e-14));
    const LinkSpec clogit = make_cdf_logit_link(gaussian_host());
    CHECK(eval_link(clogit, 0.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(eval_inverse(clogit, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
}

}  // TEST_SUITE
