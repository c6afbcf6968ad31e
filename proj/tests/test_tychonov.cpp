#include <doctest.h>

#include <cmath>

#include "shrinklab/errors.hpp"
#include "shrinklab/tychonov.hpp"

using namespace shrinklab;

TEST_CASE("polynomial recurrence, low orders by hand") {
    TychonovPolynomialTable t = tychonov_derivative_table(3);
    // Q_0 = 1
    REQUIRE(t.coeffs[0].size() == 1);
    CHECK(t.coeffs[0][0] == 1);
    // Q_1 = 2 s^3
    REQUIRE(t.coeffs[1].size() == 4);
    CHECK(t.coeffs[1][3] == 2);
    CHECK(t.coeffs[1][0] == 0);
    // Q_2 = 2 s^3 * 2 s^3 - s^2 * 6 s^2 = 4 s^6 - 6 s^4
    REQUIRE(t.coeffs[2].size() == 7);
    CHECK(t.coeffs[2][6] == 4);
    CHECK(t.coeffs[2][4] == -6);
    CHECK_THROWS_AS(tychonov_derivative_table(0), ValidationError);
    CHECK_THROWS_AS(t.evaluate(7, BigFloat(1)), ValidationError);
}

TEST_CASE("h_1 equals the derivative of the gauge by finite differences") {
    TychonovPolynomialTable t = tychonov_derivative_table(4);
    for (double tt : {0.4, 0.8, 1.5}) {
        double eps = 1e-6;
        double num = (std::exp(-1.0 / ((tt + eps) * (tt + eps))) -
                      std::exp(-1.0 / ((tt - eps) * (tt - eps)))) /
                     (2.0 * eps);
        double h1 = tychonov_h(t, 1, tt).convert_to<double>();
        CHECK(h1 == doctest::Approx(num).epsilon(1e-6));
    }
}

TEST_CASE("zero for nonpositive times, nonzero ahead") {
    TychonovPolynomialTable t = tychonov_derivative_table(40);
    for (double x : {0.0, 0.7, 2.0})
        for (double tt : {-2.0, -0.1, 0.0}) CHECK(tychonov_value(t, x, tt).value == 0.0);
    CHECK(tychonov_value(t, 0.0, 0.5).value == doctest::Approx(std::exp(-4.0)).epsilon(1e-12));
    CHECK(tychonov_value(t, 1.0, 0.5).value > tychonov_value(t, 0.0, 0.5).value);
}

TEST_CASE("weight table matches direct evaluation") {
    TychonovPolynomialTable t = tychonov_derivative_table(40);
    std::vector<double> w = tychonov_time_weights(t, 0.6);
    for (double x : {0.0, 0.5, 1.5, 3.0})
        CHECK(tychonov_eval_weights(w, x) ==
              doctest::Approx(tychonov_value(t, x, 0.6).value).epsilon(1e-12));
}

TEST_CASE("shifted weights give the exact time derivative") {
    TychonovPolynomialTable t = tychonov_derivative_table(50);
    double x = 1.2, tt = 0.7, eps = 1e-6;
    std::vector<double> wp = tychonov_time_weights(t, tt + eps);
    std::vector<double> wm = tychonov_time_weights(t, tt - eps);
    double num = (tychonov_eval_weights(wp, x) - tychonov_eval_weights(wm, x)) / (2.0 * eps);
    std::vector<double> w1 = tychonov_time_weights(t, tt, 1);
    CHECK(tychonov_eval_weights(w1, x) == doctest::Approx(num).epsilon(1e-5));
    CHECK_THROWS_AS(tychonov_time_weights(t, tt, -1), ValidationError);
    CHECK_THROWS_AS(tychonov_time_weights(t, tt, 51), ValidationError);
}

TEST_CASE("one-sided jet at t = 0 is flat") {
    TychonovPolynomialTable t = tychonov_derivative_table(25);
    for (int k = 0; k <= 20; ++k) CHECK(abs(tychonov_h(t, k, 0.01)) < BigFloat("1e-100"));
}

TEST_CASE("growth demonstration argument validation") {
    CHECK_THROWS_AS(demonstrate_sharpness({}, 100), ValidationError);
    CHECK_THROWS_AS(demonstrate_sharpness({5.0}, 0), ValidationError);
    CHECK_THROWS_AS(demonstrate_sharpness({0.5}, 100), ValidationError);
    CHECK_THROWS_AS(demonstrate_sharpness({5.0, 4.0}, 100), ValidationError);
    CHECK_THROWS_AS(demonstrate_sharpness({5.0}, 10), NumericalError);  // tail unresolved
}

TEST_CASE("growth demonstration on a small window") {
    SharpnessReport rep = demonstrate_sharpness({4.0, 5.0, 6.0}, 1200);
    CHECK(rep.zero_past);
    CHECK(rep.non_analytic);
    CHECK(rep.ratio_increasing);
    CHECK(rep.beats_quadratic);
    CHECK(rep.envelope_holds);
    CHECK(rep.growth_exponent > 2.0);
    REQUIRE(rep.samples.size() == 3);
    CHECK(rep.samples[1].log_v == doctest::Approx(20.0612).epsilon(1e-3));  // sup at t = 1/18
    CHECK(rep.samples[2].log_v == doctest::Approx(40.7917).epsilon(1e-3));  // sup at t = 1/26
    CHECK(rep.samples[1].t == doctest::Approx(1.0 / 18.0));
    CHECK(rep.samples[2].log_v > 36.0);  // escapes e^{x^2} by x = 6
}
