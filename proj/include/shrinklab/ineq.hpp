#pragma once

#include <vector>

#include "shrinklab/heat.hpp"

namespace shrinklab {

// Space-time cylinder Q_r(p, s) = B_p(r) x [s - r^2, s] with the inner
// cutoff fraction delta. The mean-value scope is 0 < r < 2.
struct ParabolicCylinder {
    Point p;
    double s = 0.0;
    double r = 0.0;
    double delta = 0.5;

    void validate() const;
};

struct SobolevReport {
    std::vector<double> ratios;  // per test function, LHS / RHS-core
    double C_n = 0.0;            // max ratio, empirical Sobolev constant
    bool pass = true;
};

// LHS = (int |u|^{2n/(n-2)})^{(n-2)/n},
// RHS-core = e^{-2 mu / n} int (4 |grad u|^2 + R u^2),
// for compactly supported test functions in B_p(r). Requires n >= 3.
SobolevReport sobolev_check(GridPtr grid, const std::vector<GridField>& tests, const Point& p,
                            double r);

struct IneqReport {
    double lhs = 0.0;
    double rhs_core = 0.0;
    double fitted_constant = 0.0;
    bool pass = true;
};

// Energy estimate on the nested pair Q_{delta r} in Q_r with scale
// k = 1/r^2: int_{inner} |grad u|^2 <= C k int_{outer} u^2.
IneqReport caccioppoli_check(const HeatTrajectory& u, const ParabolicCylinder& cyl);

struct MeanValueReport {
    double rho = 0.0;  // lower bound on the empirical C(n, m)
    double sup_inner = 0.0;
    double integral_outer = 0.0;
    double R_M = 0.0;
    bool pass = true;
};

// Normalized mean-value ratio for a nonnegative subsolution v:
//   rho = sup_{Q_{delta r}} v^m * (1-delta)^{2+n} e^mu r^{2+n}
//         / ((R_M + 1)^{n/2} int_{Q_r} v^m).
// subsol_tol < 0 means auto (10x the discrete consistency scale).
MeanValueReport mean_value_check(const HeatTrajectory& v, const ParabolicCylinder& cyl, double m,
                                 double subsol_tol = -1.0);

struct MoserChainConfig {
    int I = 4;  // desk scale: I <= 6
};

struct MoserLevel {
    int i = 0;
    double sigma = 0.0;
    double kappa = 0.0;    // sigma_i - sigma_{i+1}
    double p = 0.0;        // 2 theta^i
    double log_integral = 0.0;
    double norm = 0.0;     // L^{p_i} norm over Q_{sigma_i r}
};

struct MoserChainReport {
    double theta = 0.0;
    std::vector<MoserLevel> levels;
    std::vector<double> E;           // fitted per-step constants
    std::vector<double> step_ratio;  // N_{i+1} / N_i, scale-free step cost
    bool bounded = true;
    int level_reached = 0;
    bool truncated = false;
    double sup_inner = 0.0;          // sup over the innermost region
    double consistency_ratio = 0.0;  // sup_inner / N_last
};

// Iterated L^{2 theta^i} norms over the shrinking cylinders
// sigma_i = delta + (1 - delta) 2^{-i}, theta = 1 + 2/n, with per-step
// constants fitted from int_{i+1} v^{p_{i+1}} <= E (kappa^{-2} r^{-2}
// int_i v^{p_i})^theta. Overflowing levels truncate the chain.
MoserChainReport moser_chain_check(const HeatTrajectory& v, const ParabolicCylinder& cyl,
                                   const MoserChainConfig& cfg);

struct LocalizedReport {
    int k = 0;
    double lhs = 0.0;
    double rhs_core = 0.0;
    double C2 = 0.0;
    bool pass = true;
};

// sup_{Q_{1/(2 sqrt k)}} u^2 <= C2 e^{-mu} k^{n/2+1} (f(p)+1)^{n/2}
// int_{Q_{1/sqrt k}} u^2, cylinders anchored at the trajectory's final time.
LocalizedReport localized_estimate_check(const HeatTrajectory& u, const Point& p, int k);

struct LocalizedSweepReport {
    std::vector<LocalizedReport> by_k;
    bool growth_ok = true;  // fitted C2 does not grow with k beyond +25%/step
};

LocalizedSweepReport localized_sweep(const HeatTrajectory& u, const Point& p,
                                     const std::vector<int>& ks = {1, 4, 16});

}  // namespace shrinklab
