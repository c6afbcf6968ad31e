#include "shrinklab/tychonov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "shrinklab/errors.hpp"

namespace shrinklab {

namespace {

// Wide mantissa for the growth-ray sums: the signed terms overshoot the
// result by thousands of digits before cancelling.
using WideFloat = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<400>>;

// R = 2 s^3 Q - s^2 Q', in coefficient space.
std::vector<BigInt> recurrence_step(const std::vector<BigInt>& q) {
    std::vector<BigInt> r(q.size() + 3);
    for (std::size_t j = 0; j < q.size(); ++j) {
        r[j + 3] += 2 * q[j];
        if (j > 0) r[j + 1] -= static_cast<long>(j) * q[j];
    }
    return r;
}

BigInt horner_int(const std::vector<BigInt>& q, long s) {
    BigInt acc = q.back();
    for (std::size_t j = q.size() - 1; j-- > 0;) acc = acc * s + q[j];
    return acc;
}

// ln |v(x, 1/s)| for integer s, summed term by term with a rolling exact
// polynomial. Returns false when the sum is exactly zero. The signed terms
// overshoot the result by up to hundreds of e-folds before cancelling, so
// "past the peak" alone proves nothing: the tail counts as resolved only
// once five consecutive terms sit 40 e-folds under the running maximum AND
// 25 e-folds under the current total. If that never happens within k_cap
// terms, the caller must raise the cap.
bool ray_log_value(double x, long s, int k_cap, double* out_log, int* out_terms) {
    const WideFloat em = exp(-WideFloat(s) * WideFloat(s));
    const WideFloat x2 = WideFloat(x) * WideFloat(x);
    WideFloat p = 1, sum = 0;
    double log_max = -std::numeric_limits<double>::infinity();
    int resolved = 0;
    std::vector<BigInt> q{BigInt(1)};
    int k = 0;
    for (;; ++k) {
        if (k > k_cap)
            throw NumericalError("demonstrate_sharpness: tail not resolved; increase K");
        if (k > 0) {
            q = recurrence_step(q);
            p *= x2 / (WideFloat(2 * k - 1) * WideFloat(2 * k));
        }
        WideFloat term = WideFloat(horner_int(q, s)) * em * p;
        sum += term;
        double l = (term == 0) ? -std::numeric_limits<double>::infinity()
                               : log(abs(term)).convert_to<double>();
        log_max = std::max(log_max, l);
        double l_tot = (sum == 0) ? -std::numeric_limits<double>::infinity()
                                  : log(abs(sum)).convert_to<double>();
        resolved = (l < log_max - 40.0 && l < l_tot - 25.0) ? resolved + 1 : 0;
        if (k >= 60 && resolved >= 5) break;
    }
    *out_terms = k + 1;
    if (sum == 0) return false;
    *out_log = log(abs(sum)).convert_to<double>();
    return true;
}

}  // namespace

BigFloat TychonovPolynomialTable::evaluate(int k, const BigFloat& s) const {
    if (k < 0 || k > order()) throw ValidationError("polynomial table: order out of range");
    const auto& q = coeffs[k];
    BigFloat acc = BigFloat(q.back());
    for (std::size_t j = q.size() - 1; j-- > 0;) acc = acc * s + BigFloat(q[j]);
    return acc;
}

TychonovPolynomialTable tychonov_derivative_table(int K) {
    if (K < 1) throw ValidationError("tychonov_derivative_table: K must be >= 1");
    TychonovPolynomialTable table;
    table.coeffs.reserve(K + 1);
    table.coeffs.push_back({BigInt(1)});
    for (int k = 0; k < K; ++k) table.coeffs.push_back(recurrence_step(table.coeffs.back()));
    return table;
}

BigFloat tychonov_h(const TychonovPolynomialTable& table, int k, double t) {
    if (t <= 0.0) return BigFloat(0);
    BigFloat s = BigFloat(1) / BigFloat(t);
    return table.evaluate(k, s) * exp(-s * s);
}

std::vector<double> tychonov_time_weights(const TychonovPolynomialTable& table, double t,
                                          int shift) {
    if (shift < 0 || shift > table.order())
        throw ValidationError("tychonov_time_weights: shift out of range");
    std::vector<double> w(table.order() + 1 - shift, 0.0);
    if (t <= 0.0) return w;
    BigFloat s = BigFloat(1) / BigFloat(t);
    BigFloat em = exp(-s * s);
    BigFloat fact = 1;  // (2k)!
    for (int k = 0; k + shift <= table.order(); ++k) {
        if (k > 0) fact *= BigFloat(2 * k - 1) * BigFloat(2 * k);
        w[k] = ((table.evaluate(k + shift, s) * em) / fact).convert_to<double>();
    }
    return w;
}

double tychonov_eval_weights(const std::vector<double>& weights, double x) {
    const double x2 = x * x;
    double acc = 0.0;
    for (std::size_t k = weights.size(); k-- > 0;) acc = acc * x2 + weights[k];
    return acc;
}

TychonovEval tychonov_value(const TychonovPolynomialTable& table, double x, double t) {
    TychonovEval ev;
    if (t <= 0.0) return ev;  // exactly zero past
    BigFloat s = BigFloat(1) / BigFloat(t);
    BigFloat em = exp(-s * s);
    BigFloat sum = 0, p = 1;  // p = x^{2k} / (2k)!
    const BigFloat x2 = BigFloat(x) * BigFloat(x);
    BigFloat last = 0, prev = 0;
    for (int k = 0; k <= table.order(); ++k) {
        if (k > 0) p *= x2 / (BigFloat(2 * k - 1) * BigFloat(2 * k));
        BigFloat term = table.evaluate(k, s) * em * p;
        sum += term;
        prev = last;
        last = abs(term);
    }
    ev.value = sum.convert_to<double>();
    if (last == 0) return ev;  // series terminated (e.g. x = 0)
    double r = (prev > 0) ? (last / prev).convert_to<double>() : 1.0;
    if (r < 1.0) {
        ev.tail_estimate = last.convert_to<double>() * r / (1.0 - r);
        ev.tail_reliable = r < 0.9;
    } else {
        ev.tail_estimate = last.convert_to<double>();
        ev.tail_reliable = false;
    }
    return ev;
}

TychonovEval tychonov_value(double x, double t, int K) {
    if (K < 1) throw ValidationError("tychonov_value: K must be >= 1");
    if (t <= 0.0) return {};
    return tychonov_value(tychonov_derivative_table(K), x, t);
}

SharpnessReport demonstrate_sharpness(const std::vector<double>& xs, int K_cap) {
    if (xs.empty()) throw ValidationError("demonstrate_sharpness: empty sample window");
    if (K_cap < 1) throw ValidationError("demonstrate_sharpness: K_cap must be >= 1");
    SharpnessReport rep;

    // (i) zero past and (ii) nontrivial center, via the small table.
    TychonovPolynomialTable small = tychonov_derivative_table(40);
    rep.zero_past = true;
    for (double x : {0.0, 0.5, 1.0, 3.0})
        for (double t : {-1.0, -0.25, 0.0})
            if (tychonov_value(small, x, t).value != 0.0) rep.zero_past = false;
    rep.v_center = tychonov_value(small, 0.0, 0.5).value;

    // (iii) one-sided time-Taylor jet at t = 0 vanishes through order 20:
    // h_k(t) = Q_k(1/t) e^{-1/t^2} -> 0 as t -> 0+, quantified at t = 0.01
    // (s = 100 is exact integer arithmetic), while the solution is nonzero
    // just ahead of that time.
    double max_log10 = -std::numeric_limits<double>::infinity();
    const double log10e = 0.4342944819032518;
    for (int k = 0; k <= 20; ++k) {
        BigInt q = horner_int(small.coeffs[k], 100);
        double lq = (q == 0) ? -std::numeric_limits<double>::infinity()
                             : log10(BigFloat(abs(q))).convert_to<double>();
        max_log10 = std::max(max_log10, lq - 10000.0 * log10e);
    }
    rep.max_h_log10_small_t = max_log10;
    rep.non_analytic = rep.zero_past && max_log10 < -100.0 && rep.v_center > 0.018;

    // (iv) growth of the time-window supremum sup_t |v(x, t)|. The peak of
    // |v(x, .)| sits near t ~ 1/x^2, so each x scans t = 1/s over even
    // integers s until the value has clearly rolled off past the maximum.
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] < 1.0) throw ValidationError("demonstrate_sharpness: samples need x >= 1");
        if (i > 0 && xs[i] <= xs[i - 1])
            throw ValidationError("demonstrate_sharpness: samples must increase");
    }
    for (double x : xs) {
        SharpnessSample sm;
        sm.x = x;
        sm.log_v = -std::numeric_limits<double>::infinity();
        const long s_cap = 8 * std::lround(x) + 8;
        int strikes = 0;
        for (long s = 4; s <= s_cap; s += 2) {
            ++sm.times_scanned;
            double lv;
            int terms;
            if (!ray_log_value(x, s, K_cap, &lv, &terms)) continue;
            if (lv > sm.log_v) {
                sm.log_v = lv;
                sm.t = 1.0 / static_cast<double>(s);
                sm.terms_used = terms;
                strikes = 0;
            } else if (lv < sm.log_v - 1.0 && ++strikes >= 3) {
                break;  // well past the peak
            }
        }
        if (!std::isfinite(sm.log_v))
            throw NumericalError("demonstrate_sharpness: no nonzero value in the time window");
        rep.samples.push_back(sm);
    }

    // Each tested quadratic-exponential class e^{c x^2} must be escaped by
    // some sample, and the per-sample ratio must climb monotonically.
    rep.c_tested = {0.25, 0.5, 0.75, 1.0};
    rep.beats_quadratic = true;
    for (double c : rep.c_tested) {
        bool beaten = false;
        for (const auto& sm : rep.samples)
            if (sm.log_v > c * sm.x * sm.x) beaten = true;
        if (!beaten) rep.beats_quadratic = false;
    }
    rep.ratio_increasing = true;
    for (std::size_t i = 1; i < rep.samples.size(); ++i) {
        double prev = rep.samples[i - 1].log_v / (rep.samples[i - 1].x * rep.samples[i - 1].x);
        double cur = rep.samples[i].log_v / (rep.samples[i].x * rep.samples[i].x);
        if (!(cur > prev)) rep.ratio_increasing = false;
    }

    // Growth exponent: least-squares slope of ln(log_v) against ln x over the
    // samples where the value has cleared e; exponent 2 is the boundary of
    // the Gaussian-weight classes.
    double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
    for (const auto& sm : rep.samples) {
        if (sm.log_v <= 1.0) continue;
        double u = std::log(sm.x), v = std::log(sm.log_v);
        sx += u;
        sy += v;
        sxx += u * u;
        sxy += u * v;
        n += 1.0;
    }
    double den = n * sxx - sx * sx;
    rep.growth_exponent = (n >= 2.0 && std::abs(den) > 1e-12) ? (n * sxy - sx * sy) / den : 0.0;
    rep.envelope_holds = rep.growth_exponent > 2.0 && rep.ratio_increasing;
    return rep;
}

}  // namespace shrinklab
