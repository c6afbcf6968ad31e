#include <doctest.h>

#include <cmath>

#include "shrinklab/errors.hpp"
#include "shrinklab/heat.hpp"

using namespace shrinklab;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

GridPtr trig_grid() {
    return build_grid(SolitonModel::make_gaussian(1), PeriodicLine{2.0 * kPi, 2.0 * kPi / 128});
}

GridField sin_field(GridPtr g) {
    return GridField::from_function(g, [](const Point& p) { return std::sin(p.coords[0]); });
}
}  // namespace

TEST_CASE("forward decay of a trig mode, both schemes") {
    GridPtr grid = trig_grid();
    LaplaceOperator op(grid, LaplaceMode::Spectral);
    GridField a = sin_field(grid);
    for (Scheme sch : {Scheme::Explicit, Scheme::CrankNicolson}) {
        double dt = (sch == Scheme::Explicit) ? 1e-4 : 1e-3;
        HeatTrajectory traj = solve_forward(op, a, 0.0, 1.0, sch, dt, 1000);
        const GridField& fin = traj.snapshots.back();
        double amp = std::exp(-1.0);
        for (std::size_t i = 0; i < fin.values.size(); ++i)
            CHECK(fin.values[i] ==
                  doctest::Approx(amp * std::sin(grid->x(i))).epsilon(1e-4));
    }
}

TEST_CASE("explicit stepping rejects unstable dt") {
    GridPtr grid = trig_grid();
    LaplaceOperator op(grid);
    CHECK_THROWS_AS(solve_forward(op, sin_field(grid), 0.0, 1.0, Scheme::Explicit, 0.1),
                    ValidationError);
    CHECK_THROWS_AS(solve_forward(op, sin_field(grid), 0.0, 1.0, Scheme::Explicit, -0.1),
                    ValidationError);
    CHECK_THROWS_AS(solve_forward(op, sin_field(grid), 1.0, 0.0, Scheme::Explicit, 1e-4),
                    ValidationError);
}

TEST_CASE("trajectory time lookup") {
    GridPtr grid = trig_grid();
    HeatTrajectory traj = sample_trajectory(grid, [](const Point& p, double t) {
        return std::exp(-t) * std::sin(p.coords[0]);
    }, {0.0, 0.5, 1.0});
    CHECK(traj.index_at(0.5, 1e-9) == 1);
    CHECK_THROWS_AS(traj.at_time(0.3, 1e-9), ValidationError);
    CHECK_THROWS_AS(sample_trajectory(grid, [](const Point&, double) { return 0.0; },
                                      {0.0, 0.0}),
                    ValidationError);
}

TEST_CASE("time-Taylor coefficients of a trig mode alternate in sign") {
    GridPtr grid = trig_grid();
    LaplaceOperator op(grid, LaplaceMode::Spectral);
    TimeTaylorSeries s = time_taylor_coefficients(op, sin_field(grid), 6);
    REQUIRE(s.order() == 6);
    CHECK(!s.diverged);
    CHECK(s.entire);  // sup|a_j|/j! -> 0 super-geometrically
    std::size_t i = grid->size() / 4;  // x = pi/2
    for (int j = 0; j <= 6; ++j)
        CHECK(s.coefficients[j].values[i] ==
              doctest::Approx((j % 2 == 0) ? 1.0 : -1.0).epsilon(1e-9));
}

TEST_CASE("radius estimate flags terminating series as entire") {
    SolitonModel g1 = SolitonModel::make_gaussian(1);
    GridPtr grid = build_grid(g1, TruncatedLine{2.0, 0.1});
    LaplaceOperator op(grid);
    GridField a = GridField::from_function(grid, [](const Point& p) {
        return p.coords[0] * p.coords[0];
    });
    TimeTaylorSeries s = time_taylor_coefficients(op, a, 8);
    CHECK(s.entire);
    CHECK(s.radius_estimate == kDefaultDeltaMax);
}

TEST_CASE("finite radius for essential-singularity data") {
    using Big = boost::multiprecision::cpp_bin_float_100;
    SolitonModel g1 = SolitonModel::make_gaussian(1);
    GridPtr grid = build_grid(g1, TruncatedLine{3.0, 0.05});
    LaplaceOperator op(grid);
    // tau = 1; the data must be sampled in wide precision, since the noise
    // in a double sample outruns the true coefficients past j ~ 7
    ExtendedSampler a = [](const Big& x) { return exp(x * x / 4); };
    TimeTaylorSeries s = time_taylor_coefficients(op, a, 16);
    CHECK(!s.entire);
    CHECK(s.radius_estimate > 0.8);
    CHECK(s.radius_estimate < 1.25);
}

TEST_CASE("series evaluation reproduces the exponential") {
    GridPtr grid = trig_grid();
    LaplaceOperator op(grid, LaplaceMode::Spectral);
    TimeTaylorSeries s = time_taylor_coefficients(op, sin_field(grid), 16);
    SeriesEvaluation ev = evaluate_series(s, -0.3);
    CHECK(ev.bound_reliable);
    CHECK(ev.truncation_bound < 1e-12);
    double amp = std::exp(0.3);
    for (std::size_t i = 0; i < ev.value.values.size(); ++i)
        CHECK(ev.value.values[i] ==
              doctest::Approx(amp * std::sin(grid->x(i))).epsilon(1e-10));
}

TEST_CASE("backward solve validation") {
    GridPtr grid = trig_grid();
    LaplaceOperator op(grid, LaplaceMode::Spectral);
    GridField a = sin_field(grid);
    CHECK_THROWS_AS(solve_backward(op, a, -0.5, 12), ValidationError);
    CHECK_THROWS_AS(solve_backward(op, a, 0.5, 2), ValidationError);
    GridField u = solve_backward(op, a, 0.25, 16);
    double amp = std::exp(0.25);
    for (std::size_t i = 0; i < u.values.size(); ++i)
        CHECK(u.values[i] == doctest::Approx(amp * std::sin(grid->x(i))).epsilon(1e-8));
}
