#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "doctest.h"
#include "egse/elliptical.hpp"
#include "egse/errors.hpp"
#include "egse/quadrature.hpp"
#include "egse/special.hpp"
#include "support/quad2d.hpp"

using namespace egse;

TEST_SUITE("elliptical") {

TEST_CASE("generator kinds parse and print") {
    CHECK(parse_generator_token("normal") == GeneratorKind::gaussian());
    const GeneratorKind st = parse_generator_token("student:5");
    CHECK(st.student);
    CHECK(st.nu == doctest::Approx(5.0));
    CHECK(GeneratorKind::gaussian().token() == "normal");
    CHECK(GeneratorKind::student_t(5).token() == "student:5");
    CHECK_THROWS_AS(parse_generator_token("weibull"), argument_error);
    CHECK_THROWS_AS(GeneratorKind::student_t(0.0), argument_error);
    CHECK_THROWS_AS(GeneratorKind::student_t(-2.0), argument_error);
}

TEST_CASE("generator values match reference points") {
    CHECK(generator_value(GeneratorKind::gaussian(), 1, 0.0) ==
          doctest::Approx(1.0).epsilon(1e-15));
    CHECK(generator_value(GeneratorKind::gaussian(), 3, 0.0) ==
          doctest::Approx(1.0).epsilon(1e-15));
    CHECK(generator_value(GeneratorKind::gaussian(), 2, 2.0) ==
          doctest::Approx(0.36787944117144233).epsilon(1e-14));
    // Student nu=1, n=1: (1 + u)^(-(nu+n)/2) = (1+1)^(-1)
    CHECK(generator_value(GeneratorKind::student_t(1), 1, 1.0) ==
          doctest::Approx(0.5).epsilon(1e-14));
    CHECK(std::exp(generator_log_value(GeneratorKind::student_t(7), 2, 3.3)) ==
          doctest::Approx(generator_value(GeneratorKind::student_t(7), 2, 3.3))
              .epsilon(1e-14));
    CHECK_THROWS_AS(generator_value(GeneratorKind::gaussian(), 1, -0.1),
                    argument_error);
}

TEST_CASE("normalization constants match reference values") {
    CHECK(normalization_constant(GeneratorKind::gaussian(), 2) ==
          doctest::Approx(6.2831853071795862).epsilon(1e-14));
    CHECK(normalization_constant(GeneratorKind::gaussian(), 1) ==
          doctest::Approx(2.5066282746310002).epsilon(1e-14));
    CHECK(normalization_constant(GeneratorKind::student_t(1), 1) ==
          doctest::Approx(M_PI).epsilon(1e-13));
    CHECK(std::exp(log_normalization_constant(GeneratorKind::student_t(4), 3)) ==
          doctest::Approx(normalization_constant(GeneratorKind::student_t(4), 3))
              .epsilon(1e-13));
}

TEST_CASE("mahalanobis distance") {
    EllipticalParams p;
    p.mu = Eigen::Vector2d(1.0, -1.0);
    p.sigma = Eigen::Matrix2d::Identity();
    CHECK(mahalanobis(p.mu, p) == doctest::Approx(0.0));
    CHECK(mahalanobis(Eigen::Vector2d(4.0, 3.0), p) ==
          doctest::Approx(25.0).epsilon(1e-14));
    p.sigma << 2.0, 0.0, 0.0, 2.0;
    CHECK(mahalanobis(Eigen::Vector2d(2.0, 0.0), p) ==
          doctest::Approx(1.0).epsilon(1e-14));
    p.sigma << 1.0, 2.0, 2.0, 1.0;  // indefinite
    CHECK_THROWS_AS(mahalanobis(Eigen::Vector2d(0.0, 0.0), p), matrix_error);
}

TEST_CASE("elliptical logpdf reference values") {
    EllipticalParams p;
    p.mu = Eigen::VectorXd::Zero(1);
    p.sigma = Eigen::MatrixXd::Identity(1, 1);
    Eigen::VectorXd x(1);
    x << 0.0;
    CHECK(elliptical_logpdf(x, p, GeneratorKind::gaussian()) ==
          doctest::Approx(-0.91893853320467267).epsilon(1e-14));
    x << 1.0;
    CHECK(elliptical_logpdf(x, p, GeneratorKind::student_t(1)) ==
          doctest::Approx(-1.8378770664093453).epsilon(1e-13));
    // at the centre the density is g(0) / (|Sigma|^(1/2) Z)
    EllipticalParams q;
    q.mu = Eigen::Vector2d(0.3, -0.8);
    q.sigma.resize(2, 2);
    q.sigma << 2.0, 0.7, 0.7, 1.5;
    for (const GeneratorKind& kind :
         {GeneratorKind::gaussian(), GeneratorKind::student_t(3)}) {
        const double expected = generator_log_value(kind, 2, 0.0) -
                                0.5 * std::log(q.sigma.determinant()) -
                                log_normalization_constant(kind, 2);
        CHECK(elliptical_logpdf(q.mu, q, kind) ==
              doctest::Approx(expected).epsilon(1e-13));
    }
}

TEST_CASE("elliptical densities integrate to one in 1-D and 2-D") {
    for (const GeneratorKind& kind :
         {GeneratorKind::gaussian(), GeneratorKind::student_t(4)}) {
        CAPTURE(kind.token());
        EllipticalParams p1;
        p1.mu = Eigen::VectorXd::Constant(1, 0.4);
        p1.sigma = Eigen::MatrixXd::Constant(1, 1, 1.7);
        auto f1 = [&](double x) {
            Eigen::VectorXd v(1);
            v << x;
            return std::exp(elliptical_logpdf(v, p1, kind));
        };
        CHECK(integrate_real_line(f1, 1e-10, 1e-10).value ==
              doctest::Approx(1.0).epsilon(1e-6));

        EllipticalParams p2;
        p2.mu = Eigen::Vector2d(0.0, 1.0);
        p2.sigma.resize(2, 2);
        p2.sigma << 1.0, 0.6, 0.6, 2.0;
        auto f2 = [&](double x, double y) {
            return std::exp(elliptical_logpdf(Eigen::Vector2d(x, y), p2, kind));
        };
        CHECK(testsupport::integrate2d_plane(f2, 1e-8) ==
              doctest::Approx(1.0).epsilon(1e-4));
    }
}

TEST_CASE("univariate cdf reference values and symmetry") {
    CHECK(univariate_cdf(GeneratorKind::gaussian(), 0.0) ==
          doctest::Approx(0.5).epsilon(1e-15));
    CHECK(univariate_cdf(GeneratorKind::student_t(9), 0.0) ==
          doctest::Approx(0.5).epsilon(1e-15));
    CHECK(univariate_cdf(GeneratorKind::student_t(1), 1.0) ==
          doctest::Approx(0.75).epsilon(1e-13));
    CHECK(univariate_cdf(GeneratorKind::gaussian(), 1.959963984540054) ==
          doctest::Approx(0.975).epsilon(1e-13));
    for (const GeneratorKind& kind :
         {GeneratorKind::gaussian(), GeneratorKind::student_t(3)}) {
        for (double z = -4.0; z <= 4.0; z += 0.5) {
            CHECK(univariate_cdf(kind, z) + univariate_cdf(kind, -z) ==
                  doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("univariate pdf is the derivative of the cdf") {
    for (const GeneratorKind& kind :
         {GeneratorKind::gaussian(), GeneratorKind::student_t(6)}) {
        for (double z : {-2.3, -0.4, 0.0, 1.1, 3.0}) {
            const double h = 1e-6;
            const double fd = (univariate_cdf(kind, z + h) -
                               univariate_cdf(kind, z - h)) /
                              (2.0 * h);
            CHECK(univariate_pdf(kind, z) == doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("student cdf converges to the gaussian cdf") {
    double worst = 0.0;
    for (double z = -5.0; z <= 5.0; z += 0.1) {
        worst = std::max(worst,
                         std::fabs(univariate_cdf(GeneratorKind::student_t(1e6), z) -
                                   univariate_cdf(GeneratorKind::gaussian(), z)));
    }
    CHECK(worst <= 1e-3);
}

TEST_CASE("conditional skewing cdf reference values") {
    CHECK(conditional_skewing_cdf(GeneratorKind::gaussian(), 0.0, 3.7, 1) ==
          doctest::Approx(0.5).epsilon(1e-14));
    CHECK(conditional_skewing_cdf(GeneratorKind::student_t(4), 0.0, 0.2, 2) ==
          doctest::Approx(0.5).epsilon(1e-14));
    // Gaussian: the conditioning distance drops out entirely
    CHECK(conditional_skewing_cdf(GeneratorKind::gaussian(), 1.0, 7.3, 1) ==
          doctest::Approx(0.84134474606854293).epsilon(1e-13));
    CHECK(conditional_skewing_cdf(GeneratorKind::gaussian(), 1.0, 0.0, 2) ==
          conditional_skewing_cdf(GeneratorKind::gaussian(), 1.0, 55.0, 2));
    // Student nu=2, q=1, d=1: F_3(1 * sqrt(3/3)) = F_3(1)
    CHECK(conditional_skewing_cdf(GeneratorKind::student_t(2), 1.0, 1.0, 1) ==
          doctest::Approx(0.80449889052211476).epsilon(1e-13));
    CHECK_THROWS_AS(conditional_skewing_cdf(GeneratorKind::gaussian(), 1.0,
                                            -0.5, 1),
                    argument_error);
}

TEST_CASE("closed-form skewing cdf matches its quadrature definition") {
    std::mt19937_64 rng(20240817u);
    std::uniform_real_distribution<double> ux(-4.0, 4.0);
    std::uniform_real_distribution<double> uq(0.0, 9.0);
    std::uniform_int_distribution<int> unu(1, 40);
    for (int trial = 0; trial < 50; ++trial) {
        const double x = ux(rng);
        const double q = uq(rng);
        const int nu = unu(rng);
        for (int d : {1, 2}) {
            const GeneratorKind st = GeneratorKind::student_t(nu);
            CAPTURE(x);
            CAPTURE(q);
            CAPTURE(nu);
            CAPTURE(d);
            CHECK(std::fabs(conditional_skewing_cdf(st, x, q, d) -
                            conditional_skewing_cdf_quadrature(st, x, q, d)) <=
                  1e-6);
            const GeneratorKind ga = GeneratorKind::gaussian();
            CHECK(std::fabs(conditional_skewing_cdf(ga, x, q, d) -
                            conditional_skewing_cdf_quadrature(ga, x, q, d)) <=
                  1e-6);
        }
    }
}

TEST_CASE("skewing cdf is monotone in x and reaches both limits") {
    const GeneratorKind st = GeneratorKind::student_t(3);
    double prev = 0.0;
    for (double x = -9.0; x <= 9.0; x += 0.5) {
        const double c = conditional_skewing_cdf(st, x, 2.2, 1);
        CHECK(c >= prev);
        prev = c;
    }
    CHECK(conditional_skewing_cdf(st, -60.0, 2.2, 1) <= 1e-4);
    CHECK(conditional_skewing_cdf(st, 60.0, 2.2, 1) >= 1.0 - 1e-4);
}

}  // TEST_SUITE
