#include "shrinklab/analyticity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shrinklab/errors.hpp"
#include "shrinklab/heat.hpp"

namespace shrinklab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kA3Floor = 0.1;

// log of the geometric weight e^{-mu/2} e^{f/2} (f+1)^{n/4} at each node,
// plus the squared distance to the base point (for the e^{A4 d^2} part).
struct NodeWeights {
    std::vector<double> log_base;
    std::vector<double> d2;
};

NodeWeights node_weights(const Grid& grid, const SolitonModel& model, const Point& p) {
    NodeWeights w;
    const std::size_t n = grid.size();
    w.log_base.resize(n);
    w.d2.resize(n);
    const double mu = model.entropy_mu();
    const double nd = model.dim();
    for (std::size_t i = 0; i < n; ++i) {
        Point x = grid.node_point(i);
        double f = model.potential(x);
        double d = model.geodesic_distance(x, p);
        w.log_base[i] = -0.5 * mu + 0.5 * f + 0.25 * nd * std::log(f + 1.0);
        w.d2[i] = d * d;
    }
    return w;
}

// log max_x |a_j(x)| / (base(x) e^{a4 d^2(x)}) over the unmasked interior.
double log_sup_ratio(const GridField& aj, const NodeWeights& w, double a4) {
    double best = kNegInf;
    for (std::size_t i = 0; i < aj.values.size(); ++i) {
        if (aj.mask[i]) continue;
        double v = std::abs(aj.values[i]);
        if (v <= 0.0) continue;
        best = std::max(best, std::log(v) - w.log_base[i] - a4 * w.d2[i]);
    }
    return best;
}

double log_a3_required(const std::vector<double>& log_m, int j_min, int j_max) {
    double best = kNegInf;
    for (int j = j_min; j <= j_max && j < static_cast<int>(log_m.size()); ++j) {
        if (!std::isfinite(log_m[j])) continue;
        double jj = (j == 0) ? 0.0 : j * std::log(static_cast<double>(j));  // 0^0 = 1
        best = std::max(best, (log_m[j] - jj) / (j + 1.0));
    }
    return best;
}

}  // namespace

GrowthEnvelope growth_classify(const HeatTrajectory& u, const Point& p) {
    if (u.snapshots.empty()) throw ValidationError("growth_classify: empty trajectory");
    const Grid& grid = *u.grid;
    const SolitonModel& model = grid.model();
    GrowthEnvelope env;
    env.base_point = p;

    std::vector<double> d2(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double d = model.geodesic_distance(grid.node_point(i), p);
        d2[i] = d * d;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t cnt = 0;
    for (const auto& snap : u.snapshots) {
        for (std::size_t i = 0; i < snap.values.size(); ++i) {
            if (snap.mask[i]) continue;
            double v = std::abs(snap.values[i]);
            if (v < 1e-300) continue;
            double lv = std::log(v);
            sx += d2[i];
            sy += lv;
            sxx += d2[i] * d2[i];
            sxy += d2[i] * lv;
            ++cnt;
        }
    }
    if (cnt == 0) {
        env.trivial = true;
        env.A1 = std::numeric_limits<double>::min();
        env.A2 = 0.0;
        return env;
    }
    double denom = cnt * sxx - sx * sx;
    double slope = (std::abs(denom) < 1e-30) ? 0.0 : (cnt * sxy - sx * sy) / denom;
    env.A2 = std::max(0.0, slope);
    // inflate A1 until the envelope dominates every sample
    double log_a1 = kNegInf;
    for (const auto& snap : u.snapshots)
        for (std::size_t i = 0; i < snap.values.size(); ++i) {
            if (snap.mask[i]) continue;
            double v = std::abs(snap.values[i]);
            if (v < 1e-300) continue;
            log_a1 = std::max(log_a1, std::log(v) - env.A2 * d2[i]);
        }
    env.A1 = std::exp(log_a1);
    return env;
}

BoundFitReport verify_coefficient_bound(const TimeTaylorSeries& series, const SolitonModel& model,
                                        const Point& p, const GrowthEnvelope& envelope) {
    const int J = series.order();
    if (J < 4) throw ValidationError("verify_coefficient_bound: need J >= 4");
    if (series.diverged) throw NumericalError("verify_coefficient_bound: diverged series");
    const Grid& grid = *series.coefficients.front().grid;
    NodeWeights w = node_weights(grid, model, p);

    const double log_a1 = std::log(envelope.A1);
    std::vector<double> log_m(J + 1, kNegInf);
    BoundFitReport rep;
    for (int j = 0; j <= J; ++j) {
        double lm = log_sup_ratio(series.coefficients[j], w, 2.0 * envelope.A2);
        if (std::isfinite(lm)) lm -= log_a1;
        log_m[j] = lm;
        rep.rows.push_back({j, lm});
    }
    double log_a3 = log_a3_required(log_m, 1, J);
    if (!std::isfinite(log_a3)) {
        rep.trivial = true;
        rep.A3 = kA3Floor;
        rep.A4 = 2.0 * envelope.A2;
        return rep;
    }
    // j = 0 needs |a_0| <= A1 * weight * A3 with 0^0 = 1
    if (std::isfinite(log_m[0])) log_a3 = std::max(log_a3, log_m[0]);
    rep.A3 = std::max(kA3Floor, std::exp(log_a3));
    rep.A4 = 2.0 * envelope.A2;
    for (int jp = std::max(5, J - 8); jp <= J; jp += 4) {
        rep.probe_orders.push_back(jp);
        double la = log_a3_required(log_m, 1, jp);
        rep.A3_by_order.push_back(std::isfinite(la) ? std::exp(la) : kA3Floor);
    }
    rep.feasible = true;
    return rep;
}

BoundFitReport criterion_check(const TimeTaylorSeries& series, const SolitonModel& model,
                               const Point& p) {
    const int J = series.order();
    if (J < 4) throw ValidationError("criterion_check: need J >= 4");
    if (series.diverged) throw NumericalError("criterion_check: diverged series");
    const Grid& grid = *series.coefficients.front().grid;
    NodeWeights w = node_weights(grid, model, p);

    // A series that terminates at machine precision does not leave exact
    // zeros: the stencil iteration amplifies rounding noise at the operator
    // norm rate, which the j^j fit would misread as divergence. Termination
    // shows up instead as a collapse of the level-to-level sup ratio by many
    // orders at the cutoff; everything at and past the collapse is discarded.
    std::vector<double> sup(J + 1);
    for (int j = 0; j <= J; ++j) sup[j] = series.coefficients[j].sup_interior();
    int j_cut = J + 1;
    for (int j = 2; j <= J; ++j) {
        if (sup[j] == 0.0) {
            j_cut = j;
            break;
        }
        if (sup[j - 1] > 0.0 && sup[j - 2] > 0.0 &&
            sup[j] / sup[j - 1] < 1e-6 * (sup[j - 1] / sup[j - 2])) {
            j_cut = j;
            break;
        }
    }
    const bool terminated = j_cut <= J;
    const int Je = terminated ? j_cut - 1 : J;
    BoundFitReport rep;
    if (terminated && Je < 2) {
        rep.trivial = true;
        rep.A3 = kA3Floor;
        rep.A4 = 0.0;
        rep.feasible = true;
        return rep;
    }

    // Lexicographic joint fit: smallest A4 on a coarse grid admitting a
    // finite A3 over the sampled (j, x), then the closed-form minimal A3 at
    // that A4. On a finite window every level is finite, so the sweep stops
    // at A4 = 0; letting A4 float freely would absorb genuinely divergent
    // j-growth into the spatial factor and defeat the slope test below.
    const double a4_max = 8.0;
    const double a4_step = 0.25;
    auto log_a3_at = [&](double a4, int j_hi) {
        std::vector<double> log_m(j_hi + 1, kNegInf);
        for (int j = 2; j <= j_hi; ++j)
            log_m[j] = log_sup_ratio(series.coefficients[j], w, a4);
        return log_a3_required(log_m, 2, j_hi);
    };
    double a4_best = a4_max;
    double log_a3_best = log_a3_at(a4_max, Je);
    for (double a4 = 0.0; a4 < a4_max; a4 += a4_step) {
        double la = log_a3_at(a4, Je);
        if (std::isfinite(la)) {
            a4_best = a4;
            log_a3_best = la;
            break;
        }
    }
    rep.A4 = a4_best;

    // post-hoc j = 0, 1 (excluded from the fit; j^j and 0^0 conventions
    // distort small j)
    for (int j = 0; j <= std::min(1, Je); ++j) {
        double lm = log_sup_ratio(series.coefficients[j], w, a4_best);
        if (std::isfinite(lm)) log_a3_best = std::max(log_a3_best, lm / (j + 1.0));
    }
    rep.A3 = std::max(kA3Floor, std::exp(log_a3_best));
    for (int j = 0; j <= Je; ++j)
        rep.rows.push_back({j, log_sup_ratio(series.coefficients[j], w, a4_best)});

    // Infeasibility is an asymptotic judgment from finitely many j,
    // detected by two documented heuristics (either fires):
    //   (a) the minimal A3 grows by >25% per added 4 coefficients;
    //   (b) the top-half slope of y_j = log sup(|a_j|/weight) - j log j
    //       exceeds log 2, i.e. the coefficients outrun the j^j envelope
    //       by more than a factor-2 geometric rate per order. Calibrated
    //       so that closed-form solvable data (trig, polynomial, Gaussian
    //       kernels, finite-window e^{x^2/(4 tau)}) sits at slope <= 0.
    std::vector<double> probes;
    for (int jp = 6; jp <= Je; jp += 4) {
        rep.probe_orders.push_back(jp);
        double la = log_a3_at(a4_best, jp);
        probes.push_back(std::isfinite(la) ? std::exp(la) : kA3Floor);
    }
    rep.A3_by_order = probes;
    rep.feasible = true;
    if (terminated) return rep;  // finitely many orders: solvable outright
    if (probes.size() >= 2 && probes.back() > 1.0) {
        // Only meaningful above 1: a sub-unit requirement rising toward its
        // asymptote is the normal transient of convergent data, since the
        // per-order root (.)^{1/(j+1)} pushes any fixed deficit toward 1.
        double last_rate = probes.back() / probes[probes.size() - 2];
        double overall_rate =
            std::pow(probes.back() / probes.front(), 1.0 / (probes.size() - 1.0));
        if (last_rate > 1.25 && overall_rate > 1.1) rep.feasible = false;
    }
    {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int cnt = 0;
        for (int j = std::max(2, Je / 2); j <= Je; ++j) {
            double lm = log_sup_ratio(series.coefficients[j], w, a4_best);
            if (!std::isfinite(lm)) continue;
            double y = lm - j * std::log(static_cast<double>(j));
            sx += j;
            sy += y;
            sxx += static_cast<double>(j) * j;
            sxy += j * y;
            ++cnt;
        }
        if (cnt >= 3) {
            double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
            if (slope > std::log(2.0)) rep.feasible = false;
        }
    }
    return rep;
}

ReconstructionReport reconstruct_and_compare(const HeatTrajectory& u,
                                             const TimeTaylorSeries& series, double t) {
    if (series.coefficients.empty()) throw ValidationError("reconstruct_and_compare: empty series");
    if (u.grid != series.coefficients.front().grid)
        throw ValidationError("reconstruct_and_compare: trajectory/series grid mismatch");
    double tol = std::max(1e-9, 0.5 * u.dt);
    const GridField& snap = u.at_time(t, tol);
    SeriesEvaluation ev = evaluate_series(series, t);
    ReconstructionReport rep;
    rep.error_field = GridField::zeros(u.grid);
    for (std::size_t i = 0; i < snap.values.size(); ++i) {
        rep.error_field.mask[i] = static_cast<std::uint8_t>(snap.mask[i] || ev.value.mask[i]);
        rep.error_field.values[i] = std::abs(ev.value.values[i] - snap.values[i]);
    }
    rep.sup_error = rep.error_field.sup_interior();
    return rep;
}

}  // namespace shrinklab
