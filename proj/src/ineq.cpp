#include "shrinklab/ineq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shrinklab/errors.hpp"

namespace shrinklab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<char> ball_nodes(const Grid& grid, const Point& p, double r) {
    std::vector<char> in(grid.size(), 0);
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (grid.model().geodesic_distance(grid.node_point(i), p) <= r + 1e-9) in[i] = 1;
    return in;
}

// Fraction of each node's cell inside the ball: 1 deep inside, 0 outside,
// linear across the one cell straddling the boundary. Integrals use these
// so that the quadrature ball radius matches r to O(h^2) instead of
// snapping to the nearest node ring.
std::vector<double> ball_weights(const Grid& grid, const Point& p, double r) {
    std::vector<double> w(grid.size(), 0.0);
    const double cell = grid.spacing();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double d = grid.model().geodesic_distance(grid.node_point(i), p);
        w[i] = std::clamp(0.5 + (r - d) / cell, 0.0, 1.0);
    }
    return w;
}

struct TimeWindow {
    std::vector<std::size_t> idx;   // snapshot indices inside [t0, t1]
    std::vector<double> weights;    // trapezoid weights in t
};

TimeWindow select_window(const HeatTrajectory& u, double t0, double t1) {
    const auto& ts = u.times;
    TimeWindow w;
    for (std::size_t j = 0; j < ts.size(); ++j)
        if (ts[j] >= t0 - 1e-9 && ts[j] <= t1 + 1e-9) w.idx.push_back(j);
    if (w.idx.size() < 2)
        throw ValidationError("trajectory does not cover the requested time window");
    double lo = ts[w.idx.front()], hi = ts[w.idx.back()];
    double step_lo = ts[w.idx[1]] - lo;
    double step_hi = hi - ts[w.idx[w.idx.size() - 2]];
    if (lo - t0 > step_lo + 1e-9 || t1 - hi > step_hi + 1e-9)
        throw ValidationError("trajectory does not cover the requested time window");
    w.weights.resize(w.idx.size());
    for (std::size_t j = 0; j < w.idx.size(); ++j) {
        double prev = (j == 0) ? ts[w.idx[0]] : ts[w.idx[j - 1]];
        double next = (j + 1 == w.idx.size()) ? ts[w.idx.back()] : ts[w.idx[j + 1]];
        w.weights[j] = 0.5 * (next - prev);
    }
    return w;
}

// int over the cylinder of fn(value at node), volume x clip x trapezoid.
template <typename Fn>
double spacetime_integral(const HeatTrajectory& u, const std::vector<double>& ball_w,
                          const TimeWindow& w, Fn&& fn) {
    double total = 0.0;
    const auto& vw = u.grid->volume_weights();
    for (std::size_t j = 0; j < w.idx.size(); ++j) {
        const GridField& snap = u.snapshots[w.idx[j]];
        double slice = 0.0;
        for (std::size_t i = 0; i < snap.values.size(); ++i)
            if (ball_w[i] > 0.0 && !snap.mask[i]) slice += ball_w[i] * vw[i] * fn(snap.values[i]);
        total += w.weights[j] * slice;
    }
    return total;
}

template <typename Fn>
double spacetime_sup(const HeatTrajectory& u, const std::vector<char>& in_ball,
                     const TimeWindow& w, Fn&& fn) {
    double best = -kInf;
    for (std::size_t j : w.idx) {
        const GridField& snap = u.snapshots[j];
        for (std::size_t i = 0; i < snap.values.size(); ++i)
            if (in_ball[i] && !snap.mask[i]) best = std::max(best, fn(snap.values[i]));
    }
    if (best == -kInf) throw ValidationError("cylinder contains no usable grid nodes");
    return best;
}

// log int_{Q} v^p via log-sum-exp; -inf when v = 0 on the region.
double log_spacetime_power_integral(const HeatTrajectory& u, const std::vector<double>& ball_w,
                                    const TimeWindow& w, double p) {
    const auto& vw = u.grid->volume_weights();
    std::vector<double> terms;
    for (std::size_t j = 0; j < w.idx.size(); ++j) {
        const GridField& snap = u.snapshots[w.idx[j]];
        for (std::size_t i = 0; i < snap.values.size(); ++i) {
            if (ball_w[i] <= 0.0 || snap.mask[i]) continue;
            double v = std::max(0.0, snap.values[i]);
            if (v <= 0.0 || vw[i] <= 0.0) continue;
            terms.push_back(std::log(ball_w[i] * vw[i] * w.weights[j]) + p * std::log(v));
        }
    }
    if (terms.empty()) return -kInf;
    double m = *std::max_element(terms.begin(), terms.end());
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double t : terms) s += std::exp(t - m);
    return m + std::log(s);
}

// Discrete (Laplace - d/dt) v, checked to be >= -tol on the cylinder.
void check_subsolution(const HeatTrajectory& u, const std::vector<char>& in_ball,
                       const TimeWindow& w, double tol) {
    LaplaceOperator op(u.grid, LaplaceMode::Stencil2);
    std::vector<GridField> lap;
    lap.reserve(w.idx.size());
    for (std::size_t j : w.idx) lap.push_back(op.apply(u.snapshots[j]));

    double scale_lap = 0.0, scale_t = 0.0, worst = kInf;
    const auto& ts = u.times;
    for (std::size_t j = 0; j < w.idx.size(); ++j) {
        std::size_t g = w.idx[j];
        std::size_t gm = (g > 0) ? g - 1 : g;
        std::size_t gp = (g + 1 < ts.size()) ? g + 1 : g;
        if (gm == gp) continue;
        double denom = ts[gp] - ts[gm];
        const GridField& lo = u.snapshots[gm];
        const GridField& hi = u.snapshots[gp];
        const GridField& la = lap[j];
        for (std::size_t i = 0; i < la.values.size(); ++i) {
            if (!in_ball[i] || la.mask[i] || lo.mask[i] || hi.mask[i]) continue;
            double vt = (hi.values[i] - lo.values[i]) / denom;
            double res = la.values[i] - vt;
            worst = std::min(worst, res);
            scale_lap = std::max(scale_lap, std::abs(la.values[i]));
            scale_t = std::max(scale_t, std::abs(vt));
        }
    }
    if (worst == kInf) return;  // no interior comparison points
    if (tol < 0.0) {
        double h = u.grid->spacing();
        double dtmax = 0.0;
        for (std::size_t j = 1; j < ts.size(); ++j) dtmax = std::max(dtmax, ts[j] - ts[j - 1]);
        tol = 10.0 * (h * h + dtmax * dtmax) * (scale_lap + scale_t) + 1e-10;
    }
    if (worst < -tol)
        throw ValidationError("field is not a subsolution within tolerance on the cylinder");
}

}  // namespace

void ParabolicCylinder::validate() const {
    if (!(r > 0.0) || !(r < 2.0))
        throw ValidationError("parabolic cylinder: radius must satisfy 0 < r < 2");
    if (!(delta > 0.0) || !(delta < 1.0))
        throw ValidationError("parabolic cylinder: delta must lie in (0, 1)");
}

SobolevReport sobolev_check(GridPtr grid, const std::vector<GridField>& tests, const Point& p,
                            double r) {
    const SolitonModel& model = grid->model();
    const int n = model.dim();
    if (n < 3)
        throw ValidationError("sobolev_check: exponent 2n/(n-2) is degenerate for n <= 2");
    if (!(r > 0.0) || !(r < 2.0))
        throw ValidationError("sobolev_check: radius must satisfy 0 < r < 2");
    std::vector<char> in = ball_nodes(*grid, p, r);
    const auto& vw = grid->volume_weights();
    const double q = 2.0 * n / (n - 2.0);
    const double mu = model.entropy_mu();

    SobolevReport rep;
    for (const auto& u : tests) {
        if (u.grid != grid) throw ValidationError("sobolev_check: field on a different grid");
        double sup = u.sup_interior();
        for (std::size_t i = 0; i < u.values.size(); ++i)
            if (!in[i] && std::abs(u.values[i]) > 1e-12 * std::max(1.0, sup))
                throw ValidationError("sobolev_check: test function not supported in the ball");
        GridField gsq = gradient_sq(u);
        double lhs_int = 0.0, rhs_int = 0.0;
        for (std::size_t i = 0; i < u.values.size(); ++i) {
            if (u.mask[i]) continue;
            double uu = u.values[i];
            double R = model.scalar_curvature(grid->node_point(i));
            lhs_int += vw[i] * std::pow(std::abs(uu), q);
            rhs_int += vw[i] * (4.0 * gsq.values[i] + R * uu * uu);
        }
        double lhs = std::pow(lhs_int, (n - 2.0) / n);
        double rhs = std::exp(-2.0 * mu / n) * rhs_int;
        double ratio;
        if (rhs > 0.0)
            ratio = lhs / rhs;
        else if (lhs == 0.0)
            ratio = 0.0;
        else
            throw NumericalError("sobolev_check: vanishing energy with nonzero mass");
        rep.ratios.push_back(ratio);
        rep.C_n = std::max(rep.C_n, ratio);
        if (!std::isfinite(ratio)) rep.pass = false;
    }
    return rep;
}

IneqReport caccioppoli_check(const HeatTrajectory& u, const ParabolicCylinder& cyl) {
    cyl.validate();
    const double r = cyl.r;
    const double ri = cyl.delta * r;
    const double k = 1.0 / (r * r);
    std::vector<double> outer = ball_weights(*u.grid, cyl.p, r);
    std::vector<double> inner = ball_weights(*u.grid, cyl.p, ri);
    TimeWindow wo = select_window(u, cyl.s - r * r, cyl.s);
    TimeWindow wi = select_window(u, cyl.s - ri * ri, cyl.s);

    IneqReport rep;
    double grad_int = 0.0;
    const auto& vw = u.grid->volume_weights();
    for (std::size_t j = 0; j < wi.idx.size(); ++j) {
        GridField gsq = gradient_sq(u.snapshots[wi.idx[j]]);
        double slice = 0.0;
        for (std::size_t i = 0; i < gsq.values.size(); ++i)
            if (inner[i] > 0.0 && !gsq.mask[i]) slice += inner[i] * vw[i] * gsq.values[i];
        grad_int += wi.weights[j] * slice;
    }
    double mass = spacetime_integral(u, outer, wo, [](double v) { return v * v; });
    rep.lhs = grad_int;
    rep.rhs_core = k * mass;
    if (rep.rhs_core > 0.0)
        rep.fitted_constant = rep.lhs / rep.rhs_core;
    else if (rep.lhs == 0.0)
        rep.fitted_constant = 0.0;
    else
        rep.pass = false;
    if (!std::isfinite(rep.fitted_constant)) rep.pass = false;
    return rep;
}

MeanValueReport mean_value_check(const HeatTrajectory& v, const ParabolicCylinder& cyl, double m,
                                 double subsol_tol) {
    cyl.validate();
    if (!(m > 0.0)) throw ValidationError("mean_value_check: m must be positive");
    const SolitonModel& model = v.grid->model();
    const int n = model.dim();
    std::vector<char> outer = ball_nodes(*v.grid, cyl.p, cyl.r);
    std::vector<double> outer_w = ball_weights(*v.grid, cyl.p, cyl.r);
    double ri = cyl.delta * cyl.r;
    std::vector<char> inner = ball_nodes(*v.grid, cyl.p, ri);
    TimeWindow wo = select_window(v, cyl.s - cyl.r * cyl.r, cyl.s);
    TimeWindow wi = select_window(v, cyl.s - ri * ri, cyl.s);

    double neg = spacetime_sup(v, outer, wo, [](double x) { return -x; });  // -min v
    if (neg > 1e-9)
        throw ValidationError("mean_value_check: field is negative on the cylinder");
    check_subsolution(v, outer, wo, subsol_tol);

    MeanValueReport rep;
    rep.sup_inner =
        spacetime_sup(v, inner, wi, [m](double x) { return std::pow(std::max(0.0, x), m); });
    rep.integral_outer =
        spacetime_integral(v, outer_w, wo, [m](double x) { return std::pow(std::max(0.0, x), m); });
    double R_M = 0.0;
    for (std::size_t i = 0; i < v.grid->size(); ++i)
        if (outer[i]) R_M = std::max(R_M, model.scalar_curvature(v.grid->node_point(i)));
    rep.R_M = R_M;
    if (rep.integral_outer <= 0.0) {
        rep.rho = 0.0;
        rep.pass = rep.sup_inner == 0.0;
        return rep;
    }
    rep.rho = rep.sup_inner * std::pow(1.0 - cyl.delta, 2.0 + n) * std::exp(model.entropy_mu()) *
              std::pow(cyl.r, 2.0 + n) /
              (std::pow(R_M + 1.0, 0.5 * n) * rep.integral_outer);
    rep.pass = std::isfinite(rep.rho);
    return rep;
}

MoserChainReport moser_chain_check(const HeatTrajectory& v, const ParabolicCylinder& cyl,
                                   const MoserChainConfig& cfg) {
    cyl.validate();
    if (cfg.I < 0 || cfg.I > 6) throw ValidationError("moser_chain_check: need 0 <= I <= 6");
    const int n = v.grid->model().dim();
    MoserChainReport rep;
    rep.theta = 1.0 + 2.0 / n;

    for (int i = 0; i <= cfg.I; ++i) {
        MoserLevel lvl;
        lvl.i = i;
        lvl.sigma = cyl.delta + (1.0 - cyl.delta) * std::pow(2.0, -i);
        lvl.kappa = (1.0 - cyl.delta) * std::pow(2.0, -(i + 1));
        lvl.p = 2.0 * std::pow(rep.theta, i);
        double rr = lvl.sigma * cyl.r;
        std::vector<double> ball = ball_weights(*v.grid, cyl.p, rr);
        TimeWindow w = select_window(v, cyl.s - rr * rr, cyl.s);
        lvl.log_integral = log_spacetime_power_integral(v, ball, w, lvl.p);
        lvl.norm = std::exp(lvl.log_integral / lvl.p);
        if (!std::isfinite(lvl.norm) && lvl.log_integral != -kInf) {
            rep.truncated = true;
            break;
        }
        rep.levels.push_back(lvl);
        rep.level_reached = i;
    }
    for (std::size_t i = 0; i + 1 < rep.levels.size(); ++i) {
        const MoserLevel& a = rep.levels[i];
        const MoserLevel& b = rep.levels[i + 1];
        double log_rhs = rep.theta * (a.log_integral - 2.0 * std::log(a.kappa * cyl.r));
        rep.E.push_back(std::exp(b.log_integral - log_rhs));
        rep.step_ratio.push_back((a.norm > 0.0) ? b.norm / a.norm : 0.0);
        if (!std::isfinite(rep.E.back())) rep.bounded = false;
    }
    if (!rep.levels.empty()) {
        const MoserLevel& last = rep.levels.back();
        double rr = last.sigma * cyl.r;
        std::vector<char> ball = ball_nodes(*v.grid, cyl.p, rr);
        TimeWindow w = select_window(v, cyl.s - rr * rr, cyl.s);
        rep.sup_inner = spacetime_sup(v, ball, w, [](double x) { return std::max(0.0, x); });
        rep.consistency_ratio = (last.norm > 0.0) ? rep.sup_inner / last.norm : 0.0;
    }
    return rep;
}

LocalizedReport localized_estimate_check(const HeatTrajectory& u, const Point& p, int k) {
    if (k < 1) throw ValidationError("localized_estimate_check: k must be >= 1");
    const SolitonModel& model = u.grid->model();
    const int n = model.dim();
    const double s = u.times.back();
    const double r_out = 1.0 / std::sqrt(static_cast<double>(k));
    const double r_in = 0.5 * r_out;
    std::vector<double> outer = ball_weights(*u.grid, p, r_out);
    std::vector<char> inner = ball_nodes(*u.grid, p, r_in);
    std::size_t inner_count = 0;
    for (char c : inner) inner_count += c;
    if (inner_count < 3)
        throw ValidationError("localized_estimate_check: grid too coarse inside the inner ball");
    TimeWindow wo = select_window(u, s - 1.0 / k, s);
    TimeWindow wi = select_window(u, s - 0.25 / k, s);

    LocalizedReport rep;
    rep.k = k;
    rep.lhs = spacetime_sup(u, inner, wi, [](double x) { return x * x; });
    double mass = spacetime_integral(u, outer, wo, [](double x) { return x * x; });
    rep.rhs_core = std::exp(-model.entropy_mu()) * std::pow(static_cast<double>(k), 0.5 * n + 1.0) *
                   std::pow(model.potential(p) + 1.0, 0.5 * n) * mass;
    if (rep.rhs_core > 0.0)
        rep.C2 = rep.lhs / rep.rhs_core;
    else if (rep.lhs == 0.0)
        rep.C2 = 0.0;
    else
        rep.pass = false;
    if (!std::isfinite(rep.C2)) rep.pass = false;
    return rep;
}

LocalizedSweepReport localized_sweep(const HeatTrajectory& u, const Point& p,
                                     const std::vector<int>& ks) {
    if (ks.empty()) throw ValidationError("localized_sweep: empty k list");
    LocalizedSweepReport rep;
    for (int k : ks) rep.by_k.push_back(localized_estimate_check(u, p, k));
    for (std::size_t j = 0; j + 1 < rep.by_k.size(); ++j)
        if (rep.by_k[j + 1].C2 > 1.25 * rep.by_k[j].C2 + 1e-15) rep.growth_ok = false;
    return rep;
}

}  // namespace shrinklab
