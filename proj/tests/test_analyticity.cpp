#include <doctest.h>

#include <cmath>

#include "shrinklab/analyticity.hpp"
#include "shrinklab/errors.hpp"
#include "shrinklab/heat.hpp"

using namespace shrinklab;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

TEST_CASE("growth classification recovers a quadratic-exponential envelope") {
    SolitonModel g1 = SolitonModel::make_gaussian(1);
    GridPtr grid = build_grid(g1, TruncatedLine{3.0, 0.05});
    HeatTrajectory traj = sample_trajectory(grid, [](const Point& p, double) {
        return 1.7 * std::exp(0.4 * p.coords[0] * p.coords[0]);
    }, {0.0, 0.1});
    GrowthEnvelope env = growth_classify(traj, g1.origin());
    CHECK(!env.trivial);
    CHECK(env.A2 == doctest::Approx(0.4).epsilon(1e-6));
    CHECK(env.A1 == doctest::Approx(1.7).epsilon(1e-6));
    // envelope dominates every sample
    for (const auto& snap : traj.snapshots)
        for (std::size_t i = 0; i < snap.values.size(); ++i) {
            double d = std::abs(grid->x(i));
            CHECK(std::abs(snap.values[i]) <= env.A1 * std::exp(env.A2 * d * d) * (1 + 1e-12));
        }
}

TEST_CASE("growth classification of the zero trajectory is trivial") {
    SolitonModel g1 = SolitonModel::make_gaussian(1);
    GridPtr grid = build_grid(g1, TruncatedLine{1.0, 0.1});
    HeatTrajectory traj = sample_trajectory(grid, [](const Point&, double) { return 0.0; },
                                            {0.0, 0.1});
    GrowthEnvelope env = growth_classify(traj, g1.origin());
    CHECK(env.trivial);
}

TEST_CASE("coefficient bound holds for a decaying trig solution") {
    SolitonModel g1 = SolitonModel::make_gaussian(1);
    GridPtr grid = build_grid(g1, PeriodicLine{2.0 * kPi, 2.0 * kPi / 256});
    LaplaceOperator op(grid, LaplaceMode::Spectral);
    GridField a = GridField::from_function(grid, [](const Point& p) {
        return std::sin(p.coords[0]);
    });
    HeatTrajectory traj = solve_forward(op, a, 0.0, 0.5, Scheme::CrankNicolson, 1e-3, 100);
    GrowthEnvelope env = growth_classify(traj, g1.origin());
    TimeTaylorSeries s = time_taylor_coefficients(op, traj.snapshots.back(), 12);
    BoundFitReport rep = verify_coefficient_bound(s, g1, g1.origin(), env);
    CHECK(rep.feasible);
    CHECK(rep.A3 < 5.0);
    CHECK_THROWS_AS(verify_coefficient_bound(time_taylor_coefficients(op, a, 2), g1,
                                             g1.origin(), env),
                    ValidationError);
}

TEST_CASE("solvability fit: trig data is feasible with A4 = 0") {
    SolitonModel g1 = SolitonModel::make_gaussian(1);
    GridPtr grid = build_grid(g1, PeriodicLine{2.0 * kPi, 2.0 * kPi / 256});
    LaplaceOperator op(grid, LaplaceMode::Spectral);
    GridField a = GridField::from_function(grid, [](const Point& p) {
        return std::sin(p.coords[0]);
    });
    BoundFitReport rep = criterion_check(time_taylor_coefficients(op, a, 12), g1, g1.origin());
    CHECK(rep.feasible);
    CHECK(rep.A4 == 0.0);
    CHECK(rep.A3 <= 2.0);
}

TEST_CASE("solvability fit: terminating series is trivial") {
    SolitonModel g1 = SolitonModel::make_gaussian(1);
    GridPtr grid = build_grid(g1, TruncatedLine{2.0, 0.05});
    LaplaceOperator op(grid);
    GridField a = GridField::from_function(grid, [](const Point& p) {
        return p.coords[0] * p.coords[0];
    });
    BoundFitReport rep = criterion_check(time_taylor_coefficients(op, a, 8), g1, g1.origin());
    CHECK(rep.trivial);
    CHECK(rep.feasible);
}

TEST_CASE("reconstruction error vanishes for an exactly represented flow") {
    SolitonModel g1 = SolitonModel::make_gaussian(1);
    GridPtr grid = build_grid(g1, PeriodicLine{2.0 * kPi, 2.0 * kPi / 128});
    LaplaceOperator op(grid, LaplaceMode::Spectral);
    GridField a = GridField::from_function(grid, [](const Point& p) {
        return std::sin(p.coords[0]);
    });
    TimeTaylorSeries s = time_taylor_coefficients(op, a, 16);
    HeatTrajectory traj = sample_trajectory(grid, [](const Point& p, double t) {
        return std::exp(-t) * std::sin(p.coords[0]);
    }, {-0.25, 0.0});
    ReconstructionReport rep = reconstruct_and_compare(traj, s, -0.25);
    CHECK(rep.sup_error < 1e-10);
}
