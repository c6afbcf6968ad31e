#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

namespace shrinklab {

using BigInt = boost::multiprecision::cpp_int;
using BigFloat = boost::multiprecision::cpp_bin_float_100;

// Derivatives of the gauge g(t) = e^{-1/t^2}: h_k(t) = Q_k(1/t) e^{-1/t^2},
// with Q_0 = 1 and Q_{k+1}(s) = 2 s^3 Q_k(s) - s^2 Q_k'(s). The coefficients
// are exact integers; the floating-point recurrence is unstable past k ~ 20.
struct TychonovPolynomialTable {
    std::vector<std::vector<BigInt>> coeffs;  // Q_k, ascending powers of s

    int order() const { return static_cast<int>(coeffs.size()) - 1; }
    BigFloat evaluate(int k, const BigFloat& s) const;  // Q_k(s), Horner
};

TychonovPolynomialTable tychonov_derivative_table(int K);

// h_k(t): exactly 0 for t <= 0.
BigFloat tychonov_h(const TychonovPolynomialTable& table, int k, double t);

// Per-order weights g_k = h_{k+shift}(t) / (2k)! in double, so that
// v(x, t) = sum_k g_k x^{2k} at shift = 0. Fast path for dense space-time
// sampling; shift = 1 gives the exact time derivative of the shift-0 sum
// (the table index moves up while the spatial factor stays put).
std::vector<double> tychonov_time_weights(const TychonovPolynomialTable& table, double t,
                                          int shift = 0);
double tychonov_eval_weights(const std::vector<double>& weights, double x);

struct TychonovEval {
    double value = 0.0;
    double tail_estimate = 0.0;
    bool tail_reliable = true;
};

// Partial sum v(x, t) = sum_{k<=K} h_k(t) x^{2k} / (2k)!; exactly 0 for
// t <= 0. The tail estimate is geometric from the last term ratio and is
// flagged unreliable when the terms have not started decaying by k = K.
TychonovEval tychonov_value(const TychonovPolynomialTable& table, double x, double t);
TychonovEval tychonov_value(double x, double t, int K);

struct SharpnessSample {
    double x = 0.0;
    double t = 0.0;       // maximizing time within the scanned window
    double log_v = 0.0;   // ln sup_t |v(x, t)| over the window
    int terms_used = 0;   // series length at the maximizing time
    int times_scanned = 0;
};

struct SharpnessReport {
    bool zero_past = false;           // v(., t) = 0 identically for t <= 0
    double v_center = 0.0;            // v(0, 0.5) = e^{-4}
    double max_h_log10_small_t = 0.0; // max_k log10 |h_k(0.01)|, k <= 20
    bool non_analytic = false;        // zero one-sided Taylor jet, u nonzero
    std::vector<SharpnessSample> samples;
    std::vector<double> c_tested;
    bool beats_quadratic = false;     // each tested c is beaten by a sample
    bool ratio_increasing = false;    // log_v / x^2 strictly grows with x
    double growth_exponent = 0.0;     // slope of ln(log_v) against ln x
    bool envelope_holds = false;      // measured exponent exceeds 2
};

// For each sample x, maximizes |v(x, t)| over a window of times t = 1/s with
// integer s (so the polynomial values are exact); the signed series cancels
// by dozens of e-folds away from the maximizing time, so every term is summed
// in extended precision. The peak sits near t ~ 1/x^2 and grows much faster
// than any e^{c x^2}; the report records where each tested c is overtaken and
// the measured growth exponent. Evidence is limited to the sampled window;
// nothing beyond it is claimed. Throws NumericalError ("increase K") when
// K_cap cuts a tail short.
SharpnessReport demonstrate_sharpness(const std::vector<double>& xs = {3, 4, 5, 6},
                                      int K_cap = 1600);

}  // namespace shrinklab
