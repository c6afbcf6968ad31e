#pragma once

#include <vector>

#include "shrinklab/grid.hpp"
#include "shrinklab/soliton.hpp"

namespace shrinklab {

struct TimeTaylorSeries;
struct HeatTrajectory;

// Quadratic-exponential envelope |u(x,t)| <= A1 exp(A2 d^2(x,p)).
struct GrowthEnvelope {
    double A1 = 1.0;
    double A2 = 0.0;
    Point base_point;
    bool trivial = false;  // u identically ~0
};

struct BoundResidualRow {
    int j = 0;
    double log_sup_ratio = 0.0;  // log of max_x |a_j| / weight(x), before A3^{j+1} j^j
};

// Fit report for the coefficient bound / solvability criterion. feasible
// means a finite A3 covers all sampled (j, x); the slope diagnostics track
// how the minimal A3 moves as more coefficients are added.
struct BoundFitReport {
    double A3 = 0.0;
    double A4 = 0.0;
    bool feasible = true;
    bool trivial = false;
    std::vector<BoundResidualRow> rows;
    std::vector<int> probe_orders;      // J values probed by the slope test
    std::vector<double> A3_by_order;    // minimal A3 at each probe order
};

// Minimal envelope by linear fit of log|u| against d^2(x, p) over all
// snapshots; A1 inflated so the envelope dominates every sample.
GrowthEnvelope growth_classify(const HeatTrajectory& u, const Point& p);

// Minimal A3 so that, for all sampled (j, x) with j >= 1,
//   |a_j(x)| <= A1 e^{-mu/2} e^{f/2} (f+1)^{n/4} A3^{j+1} j^j e^{2 A2 d^2}.
// j = 0 is checked afterwards with the 0^0 = 1 convention.
BoundFitReport verify_coefficient_bound(const TimeTaylorSeries& series, const SolitonModel& model,
                                        const Point& p, const GrowthEnvelope& envelope);

// Joint (A3, A4) fit of the backward-solvability criterion
//   |Delta^j a(x)| <= e^{-mu/2} e^{f/2} (f+1)^{n/4} A3^{j+1} j^j e^{A4 d^2},
// with infeasibility declared when the minimal A3 keeps growing as
// coefficients are added (>25% per 4 coefficients) or the top-half slope
// of log sup(|a_j|/weight) - j log j exceeds log 2; both documented
// heuristics from finitely many orders.
BoundFitReport criterion_check(const TimeTaylorSeries& series, const SolitonModel& model,
                               const Point& p);

struct ReconstructionReport {
    GridField error_field;
    double sup_error = 0.0;
};

// Sup over the uncontaminated interior of |series(t) - u(., t)|.
ReconstructionReport reconstruct_and_compare(const HeatTrajectory& u,
                                             const TimeTaylorSeries& series, double t);

}  // namespace shrinklab
