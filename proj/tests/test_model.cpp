#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "heun_rsj/error.hpp"
#include "heun_rsj/model.hpp"

using namespace heun_rsj;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::InvalidParameters;
}

}  // namespace

TEST_CASE("RsjParams rejects zero amplitude, zero frequency and non-finite input") {
    CHECK(code_of([] { (void)RsjParams(0.0, 1.0, 1.0); }) == ErrorCode::InvalidParameters);
    CHECK(code_of([] { (void)RsjParams(1.0, 1.0, 0.0); }) == ErrorCode::InvalidParameters);
    CHECK(code_of([] { (void)RsjParams(1.0, NAN, 1.0); }) == ErrorCode::InvalidParameters);
    CHECK(RsjParams(1.0, 0.0, 2.0).period() == doctest::Approx(std::numbers::pi));
}

TEST_CASE("DcheParams rejects negative degree") {
    CHECK(code_of([] { (void)DcheParams(-1, 1.0, 0.0); }) == ErrorCode::InvalidParameters);
    CHECK_NOTHROW((void)DcheParams(0, 0.0, 0.0));
}

TEST_CASE("params_to_dche: substitution examples") {
    SUBCASE("A = 2 w mu0, B = -2w gives n = 1, mu = mu0") {
        const double w = 0.7, mu0 = 0.3;
        const DcheCandidate c = params_to_dche(RsjParams(2 * w * mu0, -2 * w, w));
        CHECK(c.n_real == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(c.mu == doctest::Approx(mu0).epsilon(1e-15));
        CHECK(c.integral);
        REQUIRE(c.params());
        CHECK(c.params()->n() == 1);
    }
    SUBCASE("A = 1, B = -1, w = 1 gives n = 0, mu = 1/2, lambda = 0") {
        const DcheCandidate c = params_to_dche(RsjParams(1.0, -1.0, 1.0));
        CHECK(c.n_real == 0.0);
        CHECK(c.mu == 0.5);
        CHECK(c.lambda == 0.0);
        CHECK(c.integral);
    }
    SUBCASE("B = 0.5 gives n_real = -1.5, not integral") {
        const DcheCandidate c = params_to_dche(RsjParams(1.0, 0.5, 1.0));
        CHECK(c.n_real == -1.5);
        CHECK_FALSE(c.integral);
        CHECK_FALSE(c.params());
    }
    SUBCASE("negative integers are not admissible degrees") {
        CHECK_FALSE(params_to_dche(RsjParams(1.0, 1.0, 1.0)).integral);  // n_real = -2
    }
    SUBCASE("integrality tolerance") {
        CHECK(params_to_dche(RsjParams(1.0, -2.0 + 1e-11, 1.0)).integral);
        CHECK_FALSE(params_to_dche(RsjParams(1.0, -2.0 + 1e-7, 1.0)).integral);
    }
}

TEST_CASE("dche_to_params: examples") {
    SUBCASE("n = 0, mu = 1/2, lambda = 0") {
        const RsjParams p = dche_to_params(DcheParams(0, 0.5, 0.0));
        CHECK(p.omega() == 1.0);
        CHECK(p.A() == 1.0);
        CHECK(p.B() == -1.0);
    }
    SUBCASE("n = 1, mu = 1, upper quadratic root") {
        const double lambda = (1 + std::sqrt(5.0)) / 2;
        const RsjParams p = dche_to_params(DcheParams(1, 1.0, lambda));
        const double w = 1 / (2 * std::sqrt(lambda + 1));
        CHECK(p.omega() == doctest::Approx(w).epsilon(1e-15));
        CHECK(p.A() == doctest::Approx(2 * w).epsilon(1e-15));
        CHECK(p.B() == doctest::Approx(-2 * w).epsilon(1e-15));
    }
    SUBCASE("lambda + mu^2 < 0") {
        CHECK(code_of([] { (void)dche_to_params(DcheParams(2, 1.0, -1.5)); }) ==
              ErrorCode::NonPositiveDiscriminant);
    }
    SUBCASE("lambda + mu^2 = 0") {
        CHECK(code_of([] { (void)dche_to_params(DcheParams(2, 1.0, -1.0)); }) ==
              ErrorCode::NonPositiveDiscriminant);
    }
    SUBCASE("mu = 0 would mean A = 0") {
        CHECK(code_of([] { (void)dche_to_params(DcheParams(1, 0.0, 1.0)); }) ==
              ErrorCode::InvalidParameters);
    }
}

TEST_CASE("round trip and the 4 w^2 (lambda + mu^2) = 1 constraint") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> mu_dist(-3.0, 3.0), disc_dist(0.05, 5.0);
    std::uniform_int_distribution<int> n_dist(0, 12);
    for (int i = 0; i < 200; ++i) {
        const int n = n_dist(rng);
        double mu = mu_dist(rng);
        if (mu == 0.0) mu = 0.5;
        const double lambda = disc_dist(rng) - mu * mu;
        const DcheParams d(n, mu, lambda);
        const RsjParams p = dche_to_params(d);
        CHECK(p.omega() > 0);
        CHECK(std::abs(4 * p.omega() * p.omega() * d.discriminant() - 1.0) <= 1e-14);

        const DcheCandidate back = params_to_dche(p);
        REQUIRE(back.integral);
        CHECK(back.params()->n() == n);
        CHECK(std::abs(back.mu - mu) <= 1e-12 * std::abs(mu));
        CHECK(std::abs(back.lambda - lambda) <= 1e-12 * std::max(1.0, std::abs(lambda)));
        CHECK(std::abs(4 * p.omega() * p.omega() * (back.lambda + back.mu * back.mu) - 1.0) <=
              1e-14);

        const RsjParams again = dche_to_params(*back.params());
        CHECK(std::abs(again.A() - p.A()) <= 1e-12 * std::abs(p.A()));
        CHECK(std::abs(again.B() - p.B()) <= 1e-12 * std::abs(p.B()));
        CHECK(std::abs(again.omega() - p.omega()) <= 1e-12 * p.omega());
    }
}

TEST_CASE("negative frequency maps onto the positive branch") {
    const RsjParams p(0.8, 1.2, -0.6);  // n_real = -(B/w + 1) = 1
    const DcheCandidate c = params_to_dche(p);
    REQUIRE(c.integral);
    const RsjParams q = dche_to_params(*c.params());
    CHECK(q.omega() == doctest::Approx(0.6));
    CHECK(std::abs(q.A()) == doctest::Approx(0.8));
    CHECK(std::abs(q.B()) == doctest::Approx(1.2));
}

TEST_CASE("recorded (2w)^-1 is used in place of sqrt(lambda + mu^2)") {
    const double mu = 0.25, c = 1e-7;
    const double lambda = c * c - mu * mu;
    const DcheParams d(3, mu, lambda, c);
    CHECK(d.admissible());
    CHECK(d.half_inverse_omega() == c);
    CHECK(dche_to_params(d).omega() == doctest::Approx(1 / (2 * c)).epsilon(1e-15));
    CHECK_FALSE(d.with_lambda(lambda).half_inverse_omega() == c);
    CHECK(code_of([&] { (void)DcheParams(3, mu, 1.0, c); }) == ErrorCode::InvalidParameters);
    CHECK(code_of([&] { (void)DcheParams(3, mu, lambda, -c); }) == ErrorCode::InvalidParameters);
}

TEST_CASE("HeunPolynomial normalises to monic") {
    const HeunPolynomial P(DcheParams(2, 1.0, 0.0), {2.0, 4.0, 2.0});
    CHECK(P.coeff(0) == 1.0);
    CHECK(P.coeff(1) == 2.0);
    CHECK(P.coeff(2) == 1.0);
    CHECK(P.coeff(3) == 0.0);
    CHECK(P.coeff(-1) == 0.0);
    CHECK(P.max_abs_coeff() == 2.0);
    CHECK(P.l1_norm() == 4.0);
    CHECK(code_of([] { (void)HeunPolynomial(DcheParams(1, 1.0, 0.0), {1.0}); }) ==
          ErrorCode::InvalidParameters);
    CHECK(code_of([] { (void)HeunPolynomial(DcheParams(1, 1.0, 0.0), {1.0, 0.0}); }) ==
          ErrorCode::InvalidParameters);
    CHECK(code_of([] { (void)HeunPolynomial(DcheParams(1, 1.0, 0.0), {INFINITY, 1.0}); }) ==
          ErrorCode::InvalidParameters);
}

TEST_CASE("Trajectory invariants") {
    const Trajectory t({"x", "y"}, {0.0, 1.0}, {1, 2, 3, 4});
    CHECK(t.size() == 2);
    CHECK(t.width() == 2);
    CHECK(t.value(1, 0) == 3);
    CHECK(t.column(1) == std::vector<double>{2, 4});
    CHECK(code_of([] { (void)Trajectory({"x"}, {0.0, 0.0}, {1, 2}); }) ==
          ErrorCode::InvalidParameters);
    CHECK(code_of([] { (void)Trajectory({"x"}, {0.0, 1.0}, {1}); }) ==
          ErrorCode::InvalidParameters);
}

TEST_CASE("error codes have stable names") {
    CHECK(to_string(ErrorCode::NonPositiveDiscriminant) == "NonPositiveDiscriminant");
    CHECK(Error(ErrorCode::NotSpectral, "x").name() == std::string("NotSpectral"));
}
