#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "egse/density.hpp"
#include "egse/errors.hpp"
#include "egse/quadrature.hpp"
#include "egse/special.hpp"
#include "support/quad2d.hpp"

using namespace egse;

namespace {

Theta random_theta(std::mt19937_64& rng, int n, const GeneratorKind& kind,
                   double skew_scale = 2.0) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Theta th;
    th.mu.resize(n);
    th.lambda.resize(n);
    for (int i = 0; i < n; ++i) {
        th.mu[i] = u(rng);
        th.lambda[i] = skew_scale * u(rng);
    }
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = u(rng);
    th.sigma = a * a.transpose() + 0.4 * Eigen::MatrixXd::Identity(n, n);
    th.tau = u(rng);
    th.kind = kind;
    return th;
}

// Draws with modest location and scale. For unit-interval links only a thin
// band of observation values near the boundary is representable in doubles,
// and under cloglog the image of that band ends at latent 3.6; heavy-tail
// latents wider than this box carry real mass past that point, which no
// quadrature over representable doubles can recover.
Theta compact_theta(std::mt19937_64& rng, const GeneratorKind& kind) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Theta th;
    th.mu = Eigen::Vector2d(0.3 * u(rng), 0.3 * u(rng));
    const double s1 = 0.15 + 0.1 * (u(rng) + 1.0);
    const double s2 = 0.15 + 0.1 * (u(rng) + 1.0);
    const double rho = 0.5 * u(rng);
    th.sigma.resize(2, 2);
    th.sigma << s1 * s1, rho * s1 * s2, rho * s1 * s2, s2 * s2;
    th.lambda = Eigen::Vector2d(u(rng), u(rng));
    th.tau = 0.5 * u(rng);
    th.kind = kind;
    return th;
}

}  // namespace

TEST_SUITE("density") {

TEST_CASE("symmetric case collapses to the elliptical density") {
    std::mt19937_64 rng(11u);
    for (const GeneratorKind& kind :
         {GeneratorKind::gaussian(), GeneratorKind::student_t(5)}) {
        Theta th = random_theta(rng, 2, kind);
        th.lambda.setZero();
        th.tau = 0.0;
        EllipticalParams ell{th.mu, th.sigma};
        for (int k = 0; k < 10; ++k) {
            Eigen::Vector2d w(th.mu[0] + 0.4 * k - 2.0, th.mu[1] - 0.3 * k + 1.0);
            CHECK(ese_logpdf(w, th) ==
                  doctest::Approx(elliptical_logpdf(w, ell, kind)).epsilon(1e-13));
        }
    }
}

TEST_CASE("identity-like link reduces the observation density to the latent one") {
    Theta th;
    th.mu = Eigen::VectorXd::Constant(1, 0.3);
    th.sigma = Eigen::MatrixXd::Constant(1, 1, 1.4);
    th.lambda = Eigen::VectorXd::Zero(1);
    th.tau = 0.0;
    th.kind = GeneratorKind::gaussian();
    const std::vector<LinkSpec> identity = {make_poly_link(1.0, 0.0, 1)};
    EllipticalParams ell{th.mu, th.sigma};
    for (double y : {-2.0, -0.5, 0.3, 1.8}) {
        Eigen::VectorXd v(1);
        v << y;
        CHECK(egse_logpdf(v, th, identity) ==
              doctest::Approx(elliptical_logpdf(v, ell, th.kind)).epsilon(1e-13));
    }
}

TEST_CASE("zero extension makes the acceptance denominator one half") {
    // With tau = 0 the log-density must equal the elliptical part plus the
    // skewing cdf plus exactly +log 2, for any lambda and both kinds.
    std::mt19937_64 rng(17u);
    for (const GeneratorKind& kind :
         {GeneratorKind::gaussian(), GeneratorKind::student_t(4)}) {
        for (int n : {1, 2, 3}) {
            Theta th = random_theta(rng, n, kind);
            th.tau = 0.0;
            EllipticalParams ell{th.mu, th.sigma};
            Eigen::VectorXd w = th.mu;
            for (int i = 0; i < n; ++i) w[i] += 0.3 * (i + 1);
            const Eigen::VectorXd d = w - th.mu;
            const double q = mahalanobis(w, ell);
            const double skew =
                conditional_skewing_cdf(kind, th.lambda.dot(d), q, n);
            const double expected =
                elliptical_logpdf(w, ell, kind) + std::log(skew) + std::log(2.0);
            CHECK(ese_logpdf(w, th) == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("scalar skew-normal value at the origin") {
    Theta th;
    th.mu = Eigen::VectorXd::Zero(1);
    th.sigma = Eigen::MatrixXd::Identity(1, 1);
    th.lambda = Eigen::VectorXd::Constant(1, 1.0);
    th.tau = 0.0;
    th.kind = GeneratorKind::gaussian();
    Eigen::VectorXd w(1);
    w << 0.0;
    // phi(0) * Phi(0) / Phi(0)
    CHECK(ese_logpdf(w, th) ==
          doctest::Approx(std::log(0.3989422804014327)).epsilon(1e-13));
}

TEST_CASE("latent densities integrate to one over the plane") {
    std::mt19937_64 rng(23u);
    for (const GeneratorKind& kind :
         {GeneratorKind::gaussian(), GeneratorKind::student_t(4)}) {
        CAPTURE(kind.token());
        const Theta th = random_theta(rng, 2, kind);
        auto f = [&](double x, double y) {
            return std::exp(ese_logpdf(Eigen::Vector2d(x, y), th));
        };
        CHECK(testsupport::integrate2d_plane(f, 1e-7) ==
              doctest::Approx(1.0).epsilon(1e-4));
    }
}

TEST_CASE("observation densities integrate to one over the unit square") {
    // Student latents make the edge density unbounded (the polynomial tail
    // loses to the jacobian), so the integral runs under the link
    // substitution; the gaussian published-fit case elsewhere in this suite
    // cross-checks the direct rectangle route.
    std::mt19937_64 rng(29u);
    const std::vector<std::vector<LinkSpec>> link_sets = {
        {make_link(LinkFamily::logit), make_link(LinkFamily::logit)},
        {make_link(LinkFamily::cloglog), make_link(LinkFamily::logitcube)},
    };
    for (const GeneratorKind& kind :
         {GeneratorKind::gaussian(), GeneratorKind::student_t(8)}) {
        for (const auto& links : link_sets) {
            const Theta th = compact_theta(rng, kind);
            CAPTURE(kind.token());
            auto logf = [&](double x, double y) {
                return egse_logpdf(Eigen::Vector2d(x, y), th, links);
            };
            const double total = testsupport::integrate2d_links(
                logf, links[0], links[1], th.mu[0], std::sqrt(th.sigma(0, 0)),
                th.mu[1], std::sqrt(th.sigma(1, 1)), 1e-7);
            CHECK(total == doctest::Approx(1.0).epsilon(1e-4));
        }
    }
}

TEST_CASE("published fit values give a proper density") {
    Theta th;
    th.mu.resize(2);
    th.mu << -2.36, 0.02;
    th.sigma.resize(2, 2);
    const double s1 = 0.89, s2 = 1.21, rho = -0.71;
    th.sigma << s1 * s1, rho * s1 * s2, rho * s1 * s2, s2 * s2;
    th.lambda.resize(2);
    th.lambda << -0.14, -0.12;
    th.tau = 0.0;
    th.kind = GeneratorKind::gaussian();
    const std::vector<LinkSpec> links = {make_link(LinkFamily::logit),
                                         make_link(LinkFamily::logit)};
    auto f = [&](double x, double y) {
        return std::exp(egse_logpdf(Eigen::Vector2d(x, y), th, links));
    };
    const double total = testsupport::integrate2d(f, 1e-10, 1.0 - 1e-10, 1e-10,
                                                  1.0 - 1e-10, 1e-7);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("change of variables decomposes into latent density plus jacobian") {
    std::mt19937_64 rng(31u);
    const std::vector<LinkSpec> links = {make_link(LinkFamily::logit),
                                         make_link(LinkFamily::cloglog)};
    const Theta th = random_theta(rng, 2, GeneratorKind::student_t(7));
    for (double y1 : {0.1, 0.45, 0.9}) {
        for (double y2 : {0.2, 0.6, 0.85}) {
            Eigen::Vector2d y(y1, y2);
            Eigen::Vector2d w(eval_link(links[0], y1), eval_link(links[1], y2));
            const double expected = ese_logpdf(w, th) +
                                    std::log(eval_deriv(links[0], y1)) +
                                    std::log(eval_deriv(links[1], y2));
            CHECK(egse_logpdf(y, th, links) ==
                  doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("batch evaluation matches pointwise evaluation") {
    std::mt19937_64 rng(37u);
    const Theta th = random_theta(rng, 2, GeneratorKind::gaussian());
    const std::vector<LinkSpec> links = {make_link(LinkFamily::logit),
                                         make_link(LinkFamily::logit)};
    Eigen::MatrixXd rows(5, 2);
    rows << 0.1, 0.2, 0.3, 0.7, 0.55, 0.44, 0.9, 0.05, 0.55, 0.55;
    const Eigen::VectorXd batch = egse_logpdf_batch(rows, th, links);
    REQUIRE(batch.size() == 5);
    for (int k = 0; k < 5; ++k) {
        CHECK(batch[k] ==
              doctest::Approx(egse_logpdf(rows.row(k).transpose(), th, links))
                  .epsilon(1e-14));
    }
}

TEST_CASE("heavy-tail limit approaches the gaussian model") {
    std::mt19937_64 rng(41u);
    const std::vector<LinkSpec> links = {make_link(LinkFamily::logit),
                                         make_link(LinkFamily::logit)};
    for (int rep = 0; rep < 3; ++rep) {
        // Keep the skewing argument moderate: at nu = 1e6 the residual
        // student-vs-gaussian gap grows like a^4 / (4 nu) plus a hazard term,
        // so wild lambda or tau draws would exceed the bound for real.
        Theta th = random_theta(rng, 2, GeneratorKind::student_t(1e6), 0.7);
        th.tau *= 0.5;
        Theta ga = th;
        ga.kind = GeneratorKind::gaussian();
        double worst = 0.0;
        for (int k = 0; k < 20; ++k) {
            const double y1 = 0.04 + 0.92 * k / 19.0;
            const double y2 = 0.96 - 0.92 * k / 19.0;
            Eigen::Vector2d y(y1, y2);
            worst = std::max(worst, std::fabs(egse_logpdf(y, th, links) -
                                              egse_logpdf(y, ga, links)));
        }
        CHECK(worst <= 1e-3);
    }
}

TEST_CASE("deep tail skewing stays finite through the cdf floor") {
    Theta th;
    th.mu = Eigen::VectorXd::Zero(1);
    th.sigma = Eigen::MatrixXd::Identity(1, 1);
    th.lambda = Eigen::VectorXd::Constant(1, 40.0);
    th.tau = 0.0;
    th.kind = GeneratorKind::gaussian();
    Eigen::VectorXd w(1);
    w << -40.0;  // skewing argument -1600, far below representable cdf mass
    const double lp = ese_logpdf(w, th);
    CHECK(std::isfinite(lp));
    CHECK(lp < -700.0);
}

TEST_CASE("identifiable chart reference values") {
    Theta th;
    th.mu = Eigen::VectorXd::Zero(1);
    th.sigma = Eigen::MatrixXd::Identity(1, 1);
    th.lambda = Eigen::VectorXd::Constant(1, 1.0);
    th.tau = 2.0;
    th.kind = GeneratorKind::gaussian();
    const PsiTheta psi = to_identifiable(th);
    CHECK(psi.delta[0] == doctest::Approx(0.7071067811865475).epsilon(1e-13));
    CHECK(psi.gamma == doctest::Approx(1.4142135623730951).epsilon(1e-13));
    CHECK(psi.sigma_star(0, 0) == doctest::Approx(1.0));

    th.lambda.setZero();
    th.tau = -0.7;
    const PsiTheta flat = to_identifiable(th);
    CHECK(flat.delta[0] == doctest::Approx(0.0));
    CHECK(flat.gamma == doctest::Approx(-0.7));
}

TEST_CASE("identifiable chart produces a correlation matrix and interior delta") {
    std::mt19937_64 rng(43u);
    for (int rep = 0; rep < 20; ++rep) {
        const Theta th = random_theta(rng, 3, GeneratorKind::gaussian(), 3.0);
        const PsiTheta psi = to_identifiable(th);
        for (int i = 0; i < 3; ++i) {
            CHECK(psi.sigma_star(i, i) == doctest::Approx(1.0).epsilon(1e-12));
        }
        const double ellipse =
            psi.delta.dot(psi.sigma_star.ldlt().solve(psi.delta));
        CHECK(ellipse < 1.0);
    }
}

TEST_CASE("inverse chart reference values") {
    PsiTheta psi;
    psi.mu = Eigen::VectorXd::Zero(1);
    psi.sigma_star = Eigen::MatrixXd::Identity(1, 1);
    psi.delta = Eigen::VectorXd::Constant(1, 0.6);
    psi.gamma = 0.0;
    const auto [lambda, tau] = from_identifiable(psi);
    CHECK(lambda[0] == doctest::Approx(0.75).epsilon(1e-13));
    CHECK(tau == doctest::Approx(0.0));

    psi.delta[0] = 0.0;
    const auto [lz, tz] = from_identifiable(psi);
    CHECK(lz[0] == doctest::Approx(0.0));
    CHECK(tz == doctest::Approx(0.0));

    psi.delta[0] = 1.0;
    CHECK_THROWS_AS(from_identifiable(psi), domain_error);
    psi.delta[0] = 1.2;
    CHECK_THROWS_AS(from_identifiable(psi), domain_error);
}

TEST_CASE("chart round trip recovers skew and extension parameters") {
    std::mt19937_64 rng(47u);
    for (int n : {1, 2, 3}) {
        for (int rep = 0; rep < 100; ++rep) {
            const Theta th = random_theta(rng, n, GeneratorKind::gaussian(), 3.0);
            const PsiTheta psi = to_identifiable(th);
            const auto [lambda, tau] = from_identifiable(psi);
            for (int i = 0; i < n; ++i) {
                CHECK(std::fabs(lambda[i] - th.lambda[i]) <=
                      1e-10 * std::max(1.0, std::fabs(th.lambda[i])));
            }
            CHECK(std::fabs(tau - th.tau) <=
                  1e-10 * std::max(1.0, std::fabs(th.tau)));
        }
    }
}

TEST_CASE("theta validation rejects malformed parameters") {
    Theta th;
    th.mu = Eigen::VectorXd::Zero(2);
    th.sigma = Eigen::MatrixXd::Identity(2, 2);
    th.lambda = Eigen::VectorXd::Zero(2);
    th.kind = GeneratorKind::gaussian();
    CHECK_NOTHROW(validate_theta(th));

    Theta wrong_dim = th;
    wrong_dim.lambda = Eigen::VectorXd::Zero(3);
    CHECK_THROWS_AS(validate_theta(wrong_dim), argument_error);

    Theta indefinite = th;
    indefinite.sigma << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS_AS(validate_theta(indefinite), matrix_error);

    Theta nonfinite = th;
    nonfinite.tau = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(validate_theta(nonfinite), argument_error);
}

TEST_CASE("observation density rejects boundary and exterior points") {
    Theta th;
    th.mu = Eigen::VectorXd::Zero(2);
    th.sigma = Eigen::MatrixXd::Identity(2, 2);
    th.lambda = Eigen::VectorXd::Zero(2);
    th.kind = GeneratorKind::gaussian();
    const std::vector<LinkSpec> links = {make_link(LinkFamily::logit),
                                         make_link(LinkFamily::logit)};
    CHECK_THROWS_AS(egse_logpdf(Eigen::Vector2d(0.0, 0.5), th, links),
                    domain_error);
    CHECK_THROWS_AS(egse_logpdf(Eigen::Vector2d(0.5, 1.0), th, links),
                    domain_error);
    CHECK_THROWS_AS(egse_logpdf(Eigen::Vector2d(0.5, -3.0), th, links),
                    domain_error);
}

}  // TEST_SUITE
