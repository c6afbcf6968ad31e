#include "shrinklab/heat.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include <Eigen/Dense>

#include "shrinklab/analyticity.hpp"
#include "shrinklab/errors.hpp"

namespace shrinklab {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

long step_count(double t_start, double t_final, double dt) {
    if (dt <= 0.0) throw ValidationError("solve_forward: dt must be positive");
    if (t_final <= t_start) throw ValidationError("solve_forward: t_final must exceed t_start");
    double steps = (t_final - t_start) / dt;
    long n = std::lround(steps);
    if (n < 1 || std::abs(steps - n) > 1e-6 * std::max(1.0, steps))
        throw ValidationError("solve_forward: dt must divide the time interval evenly");
    return n;
}

// Crank-Nicolson on periodic grids runs in Fourier space; the operator is
// circulant so this is the exact linear-system solve.
void periodic_cn_march(const LaplaceOperator& op, const GridField& a, double t_start, long n_steps,
                       double dt, int store_every, HeatTrajectory& traj) {
    const auto& topo = std::get<PeriodicLine>(op.grid()->topology());
    const int n = static_cast<int>(a.size());
    std::vector<double> buf = a.values;
    std::vector<fftw_complex> freq(n / 2 + 1);
    fftw_plan fwd = fftw_plan_dft_r2c_1d(n, buf.data(), freq.data(), FFTW_ESTIMATE);
    fftw_execute(fwd);
    fftw_destroy_plan(fwd);
    std::vector<double> factor(n / 2 + 1);
    for (int m = 0; m <= n / 2; ++m) {
        double lambda;
        if (op.mode() == LaplaceMode::Spectral) {
            double k = 2.0 * kPi * m / topo.period;
            lambda = -k * k;
        } else {
            lambda = -(2.0 - 2.0 * std::cos(2.0 * kPi * m / n)) / (topo.h * topo.h);
        }
        factor[m] = (1.0 + 0.5 * dt * lambda) / (1.0 - 0.5 * dt * lambda);
    }
    auto store = [&](long step) {
        std::vector<fftw_complex> tmp(freq.size());
        std::memcpy(tmp.data(), freq.data(), freq.size() * sizeof(fftw_complex));
        GridField snap = GridField::zeros(traj.grid);
        snap.mask = a.mask;
        fftw_plan bwd = fftw_plan_dft_c2r_1d(n, tmp.data(), snap.values.data(), FFTW_ESTIMATE);
        fftw_execute(bwd);
        fftw_destroy_plan(bwd);
        for (double& v : snap.values) v /= n;
        traj.times.push_back(t_start + step * dt);
        traj.snapshots.push_back(std::move(snap));
    };
    store(0);
    for (long s = 1; s <= n_steps; ++s) {
        for (int m = 0; m <= n / 2; ++m) {
            freq[m][0] *= factor[m];
            freq[m][1] *= factor[m];
        }
        if (s % store_every == 0 || s == n_steps) store(s);
    }
}

// Thomas solve for (I - alpha*D2) u' = rhs on a truncated line with frozen
// Dirichlet end rows.
void line_cn_march(const LaplaceOperator& op, const GridField& a, double t_start, long n_steps,
                   double dt, int store_every, HeatTrajectory& traj) {
    const auto& topo = std::get<TruncatedLine>(op.grid()->topology());
    const std::size_t n = a.size();
    const double alpha = 0.5 * dt / (topo.h * topo.h);
    std::vector<double> u = a.values;
    std::vector<double> rhs(n), cp(n), dp(n);
    auto store = [&](long step) {
        GridField snap = GridField::zeros(traj.grid);
        snap.values = u;
        snap.mask = a.mask;
        snap.mask.front() = snap.mask.back() = 1;
        traj.times.push_back(t_start + step * dt);
        traj.snapshots.push_back(std::move(snap));
    };
    store(0);
    const double b = 1.0 + 2.0 * alpha;
    for (long s = 1; s <= n_steps; ++s) {
        rhs[0] = u[0];
        rhs[n - 1] = u[n - 1];
        for (std::size_t i = 1; i + 1 < n; ++i)
            rhs[i] = u[i] + alpha * (u[i - 1] - 2.0 * u[i] + u[i + 1]);
        // forward sweep; boundary rows are identity
        cp[0] = 0.0;
        dp[0] = rhs[0];
        for (std::size_t i = 1; i + 1 < n; ++i) {
            double m = b - (-alpha) * cp[i - 1];
            cp[i] = -alpha / m;
            dp[i] = (rhs[i] + alpha * dp[i - 1]) / m;
        }
        u[n - 1] = rhs[n - 1];
        for (std::size_t i = n - 2; i >= 1; --i) u[i] = dp[i] - cp[i] * u[i + 1];
        u[0] = rhs[0];
        if (s % store_every == 0 || s == n_steps) store(s);
    }
}

}  // namespace

const GridField& HeatTrajectory::at_time(double t, double tol) const {
    return snapshots[index_at(t, tol)];
}

std::size_t HeatTrajectory::index_at(double t, double tol) const {
    for (std::size_t i = 0; i < times.size(); ++i)
        if (std::abs(times[i] - t) <= tol) return i;
    throw ValidationError("trajectory has no snapshot near requested time");
}

HeatTrajectory solve_forward(const LaplaceOperator& op, const GridField& a, double t_start,
                             double t_final, Scheme scheme, double dt, int store_every) {
    if (a.grid != op.grid()) throw ValidationError("solve_forward: field/operator grid mismatch");
    if (!a.all_finite()) throw ValidationError("solve_forward: non-finite initial data");
    if (store_every < 1) store_every = 1;
    long n_steps = step_count(t_start, t_final, dt);
    HeatTrajectory traj;
    traj.grid = a.grid;
    traj.dt = dt;
    if (scheme == Scheme::Explicit) {
        traj.scheme = "explicit";
        double bound = op.gershgorin_bound();
        if (dt * bound > 2.0 * (1.0 + 1e-12))
            throw ValidationError("explicit scheme unstable: require dt <= 2/lambda_max = " +
                                  std::to_string(2.0 / bound));
        std::vector<double> u = a.values, lap;
        auto store = [&](long step) {
            GridField snap = GridField::zeros(traj.grid);
            snap.values = u;
            snap.mask = a.mask;
            if (std::holds_alternative<TruncatedLine>(traj.grid->topology())) {
                snap.mask.front() = snap.mask.back() = 1;
            }
            traj.times.push_back(t_start + step * dt);
            traj.snapshots.push_back(std::move(snap));
        };
        store(0);
        for (long s = 1; s <= n_steps; ++s) {
            op.apply_raw(u, lap);
            for (std::size_t i = 0; i < u.size(); ++i) u[i] += dt * lap[i];
            for (double v : u)
                if (!std::isfinite(v)) throw NumericalError("explicit solve diverged");
            if (s % store_every == 0 || s == n_steps) store(s);
        }
        return traj;
    }
    traj.scheme = "crank-nicolson";
    if (std::holds_alternative<PeriodicLine>(op.grid()->topology())) {
        periodic_cn_march(op, a, t_start, n_steps, dt, store_every, traj);
    } else if (std::holds_alternative<TruncatedLine>(op.grid()->topology())) {
        line_cn_march(op, a, t_start, n_steps, dt, store_every, traj);
    } else {
        throw ValidationError("Crank-Nicolson is implemented for line topologies only");
    }
    for (const auto& s : traj.snapshots)
        if (!s.all_finite()) throw NumericalError("implicit solve produced non-finite snapshot");
    return traj;
}

HeatTrajectory sample_trajectory(GridPtr grid,
                                 const std::function<double(const Point&, double)>& fn,
                                 const std::vector<double>& times) {
    if (times.size() < 2) throw ValidationError("sample_trajectory: need at least two times");
    HeatTrajectory traj;
    traj.grid = grid;
    traj.dt = times[1] - times[0];
    for (std::size_t i = 1; i < times.size(); ++i)
        if (times[i] <= times[i - 1])
            throw ValidationError("sample_trajectory: times must be strictly increasing");
    for (double t : times) {
        GridField f = GridField::from_function(grid, [&](const Point& p) { return fn(p, t); });
        if (!f.all_finite()) throw NumericalError("sample_trajectory: non-finite sample");
        traj.times.push_back(t);
        traj.snapshots.push_back(std::move(f));
    }
    return traj;
}

namespace {

TimeTaylorSeries finish_series(std::vector<GridField> coeffs, int J, double delta_max) {
    TimeTaylorSeries s;
    s.coefficients = std::move(coeffs);
    s.t0 = 0.0;
    s.diverged = s.coefficients.back().diverged;
    if (s.diverged) {
        s.radius_estimate = 0.0;
        return s;
    }
    if (J >= 4) {
        RadiusEstimate re = estimate_radius(s.coefficients, delta_max);
        s.radius_estimate = re.delta;
        s.entire = re.entire;
    } else {
        s.radius_estimate = delta_max;
    }
    return s;
}

}  // namespace

TimeTaylorSeries time_taylor_coefficients(const LaplaceOperator& op, const GridField& a, int J,
                                          double delta_max, bool extended_precision) {
    return finish_series(extended_precision ? iterate_laplacian_extended(op, a, J)
                                            : iterate_laplacian(op, a, J),
                         J, delta_max);
}

TimeTaylorSeries time_taylor_coefficients(const LaplaceOperator& op, const ExtendedSampler& a0,
                                          int J, double delta_max) {
    return finish_series(iterate_laplacian_extended(op, a0, J), J, delta_max);
}

RadiusEstimate estimate_radius(const std::vector<GridField>& coefficients, double delta_max) {
    const int J = static_cast<int>(coefficients.size()) - 1;
    if (J < 4) throw ValidationError("estimate_radius: need J >= 4");
    // Sups are taken over the common interior (the widest contamination
    // mask, i.e. the last coefficient's). A per-level window would shrink
    // with j and tilt the fitted slope whenever the sup sits at the window
    // edge.
    const std::vector<std::uint8_t>& common = coefficients.back().mask;
    std::vector<double> sup(J + 1, 0.0);
    for (int j = 0; j <= J; ++j)
        for (std::size_t i = 0; i < common.size(); ++i)
            if (!common[i]) sup[j] = std::max(sup[j], std::abs(coefficients[j].values[i]));

    const int j_lo = J / 2;
    bool tail_zero = true;
    double scale = std::max(1e-300, sup[0]);
    for (int j = j_lo; j <= J; ++j)
        if (sup[j] > 1e-250 * scale) tail_zero = false;
    if (tail_zero) return {delta_max, true};  // terminating / vanishing series

    // b_j = log(sup|a_j| / j!)
    std::vector<int> js;
    std::vector<double> bs;
    for (int j = j_lo; j <= J; ++j) {
        if (sup[j] <= 0.0) continue;
        js.push_back(j);
        bs.push_back(std::log(sup[j]) - std::lgamma(j + 1.0));
    }
    if (js.size() < 4) return {delta_max, true};

    // Fit b_j ~ c0 + c1*j + c2*sqrt(j); delta-hat = exp(-c1).
    Eigen::MatrixXd X(js.size(), 3);
    Eigen::VectorXd y(js.size());
    for (std::size_t i = 0; i < js.size(); ++i) {
        X(i, 0) = 1.0;
        X(i, 1) = js[i];
        X(i, 2) = std::sqrt(static_cast<double>(js[i]));
        y(i) = bs[i];
    }
    Eigen::Vector3d c = (X.transpose() * X).ldlt().solve(X.transpose() * y);
    double delta = std::exp(-c(1));

    // Entire-series detection: the affine slope of b_j keeps drifting down
    // (like -log j! does) instead of settling near -log(delta).
    auto affine_slope = [&](int lo, int hi) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int cnt = 0;
        for (std::size_t i = 0; i < js.size(); ++i) {
            if (js[i] < lo || js[i] > hi) continue;
            sx += js[i];
            sy += bs[i];
            sxx += double(js[i]) * js[i];
            sxy += js[i] * bs[i];
            ++cnt;
        }
        if (cnt < 2) return 0.0;
        return (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    };
    int j_mid = (j_lo + J) / 2;
    double early = affine_slope(j_lo, j_mid);
    double late = affine_slope(j_mid, J);
    bool entire = (late - early) < -0.2;
    if (delta >= delta_max) entire = true;
    if (entire) return {delta_max, true};
    return {delta, false};
}

SeriesEvaluation evaluate_series(const TimeTaylorSeries& series, double t) {
    if (series.coefficients.empty()) throw ValidationError("evaluate_series: empty series");
    if (series.diverged) throw NumericalError("evaluate_series: diverged coefficient list");
    const double trel = t - series.t0;
    const int J = series.order();
    SeriesEvaluation ev;
    ev.inside_radius = std::abs(trel) < series.radius_estimate;

    GridField acc = series.coefficients[J];
    for (int j = J; j >= 1; --j) {
        const GridField& prev = series.coefficients[j - 1];
        for (std::size_t i = 0; i < acc.values.size(); ++i)
            acc.values[i] = prev.values[i] + (trel / j) * acc.values[i];
    }
    acc.mask = series.coefficients[J].mask;  // widest contamination margin
    ev.value = std::move(acc);

    double log_t = (trel == 0.0) ? -std::numeric_limits<double>::infinity()
                                 : std::log(std::abs(trel));
    auto log_term = [&](int j) {
        double s = series.coefficients[j].sup_interior();
        if (s <= 0.0) return -std::numeric_limits<double>::infinity();
        return std::log(s) + j * log_t - std::lgamma(j + 1.0);
    };
    double lt_J = log_term(J);
    double lt_Jm1 = (J >= 1) ? log_term(J - 1) : lt_J;
    if (!std::isfinite(lt_J)) {
        ev.truncation_bound = 0.0;
        ev.bound_reliable = true;
    } else {
        double ratio = std::exp(lt_J - lt_Jm1);
        double last = std::exp(lt_J);
        if (std::isfinite(ratio) && ratio < 1.0) {
            ev.truncation_bound = last * ratio / (1.0 - ratio);
            ev.bound_reliable = true;
        } else {
            ev.truncation_bound = last;
            ev.bound_reliable = false;
        }
    }
    return ev;
}

GridField solve_backward(const LaplaceOperator& op, const GridField& a, double t, int J,
                         bool override_criterion) {
    if (t <= 0.0) throw ValidationError("solve_backward: t must be positive");
    if (J < 4) throw ValidationError("solve_backward: need J >= 4");
    TimeTaylorSeries series = time_taylor_coefficients(op, a, J);
    if (series.diverged) throw NumericalError("solve_backward: coefficient iteration diverged");
    if (t >= series.radius_estimate)
        throw ValidationError("solve_backward: t exceeds the estimated analyticity radius");
    if (!override_criterion) {
        BoundFitReport rep = criterion_check(series, op.grid()->model(), op.grid()->model().origin());
        if (!rep.feasible)
            throw CriterionError(
                "solve_backward: coefficient growth fails the solvability criterion "
                "(pass override to force)");
    }
    SeriesEvaluation ev = evaluate_series(series, -t);
    if (!ev.bound_reliable)
        throw NumericalError("solve_backward: series truncation bound unreliable at J=" +
                             std::to_string(J));
    return std::move(ev.value);
}

}  // namespace shrinklab
