#pragma once

#include <functional>
#include <string>
#include <vector>

#include "shrinklab/laplace.hpp"

namespace shrinklab {

enum class Scheme { Explicit, CrankNicolson };

struct HeatTrajectory {
    GridPtr grid;
    std::vector<double> times;      // strictly increasing
    std::vector<GridField> snapshots;
    std::string scheme = "sampled";
    double dt = 0.0;

    const GridField& at_time(double t, double tol) const;
    std::size_t index_at(double t, double tol) const;
};

// Marches (d/dt - Laplace) u = 0 from u(t_start) = a to t_final. Truncated
// charts hold boundary values frozen at the initial data.
HeatTrajectory solve_forward(const LaplaceOperator& op, const GridField& a, double t_start,
                             double t_final, Scheme scheme, double dt, int store_every = 1);

// Trajectory sampled from a closed-form solution (oracle data for the
// inequality lab and reconstruction tests).
HeatTrajectory sample_trajectory(GridPtr grid,
                                 const std::function<double(const Point&, double)>& fn,
                                 const std::vector<double>& times);

struct SeriesEvaluation {
    GridField value;
    double truncation_bound = 0.0;
    bool bound_reliable = true;
    bool inside_radius = true;
};

struct TimeTaylorSeries {
    std::vector<GridField> coefficients;  // a_0..a_J, a_{j+1} = A a_j
    double t0 = 0.0;
    double radius_estimate = 0.0;
    bool entire = false;
    bool diverged = false;

    int order() const { return static_cast<int>(coefficients.size()) - 1; }
};

struct RadiusEstimate {
    double delta = 0.0;
    bool entire = false;
};

inline constexpr double kDefaultDeltaMax = 1e6;

// extended_precision routes coefficient construction through the
// multiprecision stencil iteration (line stencils only); required for
// radius fits past J ~ 10, where double iteration is rounding-noise-bound.
TimeTaylorSeries time_taylor_coefficients(const LaplaceOperator& op, const GridField& a, int J,
                                          double delta_max = kDefaultDeltaMax,
                                          bool extended_precision = false);

// Multiprecision coefficients from a multiprecision sampling of the initial
// data. Needed when the data itself must be clean of double rounding: the
// noise in a double sample sits at every wavenumber, and the stencil
// iteration amplifies the top mode by 4/h^2 per level no matter how wide the
// working arithmetic is.
TimeTaylorSeries time_taylor_coefficients(const LaplaceOperator& op, const ExtendedSampler& a0,
                                          int J, double delta_max = kDefaultDeltaMax);

// delta-hat from the decay rate of sup|a_j|/j! over the masked interior.
// Regression over the top half of j with basis {1, j, sqrt(j)}; the sqrt
// term absorbs the pre-asymptotic bulge of essential-singularity data.
RadiusEstimate estimate_radius(const std::vector<GridField>& coefficients,
                               double delta_max = kDefaultDeltaMax);

// Partial sum sum_j a_j (t-t0)^j / j!, Horner order in t.
SeriesEvaluation evaluate_series(const TimeTaylorSeries& series, double t);

// Series solution of the backward problem (Laplace + d/dt) u = 0,
// u(.,0) = a, evaluated at time t in (0, delta-hat). Refuses when the
// solvability criterion fit reports infeasible, unless overridden.
GridField solve_backward(const LaplaceOperator& op, const GridField& a, double t, int J,
                         bool override_criterion = false);

}  // namespace shrinklab
