#include <doctest.h>

#include <cmath>

#include "shrinklab/errors.hpp"
#include "shrinklab/ineq.hpp"

using namespace shrinklab;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

double heat_kernel(double x, double s) {
    return std::exp(-x * x / (4.0 * s)) / std::sqrt(4.0 * kPi * s);
}

HeatTrajectory const_traj(GridPtr grid) {
    std::vector<double> ts;
    for (int i = 0; i <= 288; ++i) ts.push_back(-2.25 + i / 128.0);
    return sample_trajectory(grid, [](const Point&, double) { return 1.0; }, ts);
}
}  // namespace

TEST_CASE("cylinder scope validation") {
    ParabolicCylinder c{Point{{0.0}}, 0.0, 2.5, 0.5};
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c.r = 1.0;
    c.delta = 1.0;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c.delta = 0.5;
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("mean-value oracle on the constant field") {
    SolitonModel g1 = SolitonModel::make_gaussian(1);
    GridPtr grid = build_grid(g1, TruncatedLine{4.0, 0.05});
    HeatTrajectory traj = const_traj(grid);
    MeanValueReport rep = mean_value_check(traj, {g1.origin(), 0.0, 1.0, 0.5}, 1.0);
    // sup = 1, space integral = 2, time factor = 1, weights = (1/2)^3 e^0
    CHECK(rep.rho == doctest::Approx(0.0625).epsilon(1e-6));
    CHECK(rep.sup_inner == doctest::Approx(1.0));
    CHECK(rep.integral_outer == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rep.pass);
}

TEST_CASE("mean-value rejects negative fields and supersolutions") {
    SolitonModel g1 = SolitonModel::make_gaussian(1);
    GridPtr grid = build_grid(g1, TruncatedLine{4.0, 0.05});
    std::vector<double> ts;
    for (int i = 0; i <= 288; ++i) ts.push_back(-2.25 + i / 128.0);
    HeatTrajectory neg = sample_trajectory(grid, [](const Point&, double) { return -1.0; }, ts);
    CHECK_THROWS_AS(mean_value_check(neg, {g1.origin(), 0.0, 1.0, 0.5}, 1.0), ValidationError);
    // e^{5 t} has (Laplace - d/dt) = -5 < 0: not a subsolution
    HeatTrajectory super = sample_trajectory(grid, [](const Point&, double t) {
        return std::exp(5.0 * t);
    }, ts);
    CHECK_THROWS_AS(mean_value_check(super, {g1.origin(), 0.0, 1.0, 0.5}, 1.0),
                    ValidationError);
    CHECK_THROWS_AS(mean_value_check(const_traj(grid), {g1.origin(), 0.0, 1.0, 0.5}, -1.0),
                    ValidationError);
}

TEST_CASE("energy estimate constant is finite on a kernel flow") {
    SolitonModel g1 = SolitonModel::make_gaussian(1);
    GridPtr grid = build_grid(g1, TruncatedLine{4.0, 0.05});
    std::vector<double> ts;
    for (int i = 0; i <= 288; ++i) ts.push_back(-2.25 + i / 128.0);
    HeatTrajectory traj = sample_trajectory(grid, [](const Point& p, double t) {
        return heat_kernel(p.coords[0], t + 3.0);
    }, ts);
    IneqReport rep = caccioppoli_check(traj, {g1.origin(), 0.0, 1.0, 0.5});
    CHECK(rep.pass);
    CHECK(rep.fitted_constant > 0.0);
    CHECK(rep.fitted_constant < 1.0);
}

TEST_CASE("iteration chain on the constant field") {
    SolitonModel g1 = SolitonModel::make_gaussian(1);
    GridPtr grid = build_grid(g1, TruncatedLine{4.0, 0.05});
    MoserChainReport rep = moser_chain_check(const_traj(grid), {g1.origin(), 0.0, 1.0, 0.5}, {4});
    CHECK(rep.bounded);
    CHECK(!rep.truncated);
    CHECK(rep.level_reached == 4);
    CHECK(rep.sup_inner == doctest::Approx(1.0));
    // norms approach the sup from below as p grows
    CHECK(rep.consistency_ratio > 0.9);
    for (double sr : rep.step_ratio) {
        CHECK(sr > 0.1);
        CHECK(sr < 2.0);
    }
    CHECK_THROWS_AS(moser_chain_check(const_traj(grid), {g1.origin(), 0.0, 1.0, 0.5}, {9}),
                    ValidationError);
}

TEST_CASE("localized sweep on a kernel flow") {
    SolitonModel g1 = SolitonModel::make_gaussian(1);
    GridPtr grid = build_grid(g1, TruncatedLine{4.0, 0.05});
    std::vector<double> ts;
    for (int i = 0; i <= 288; ++i) ts.push_back(-2.25 + i / 128.0);
    HeatTrajectory traj = sample_trajectory(grid, [](const Point& p, double t) {
        return heat_kernel(p.coords[0], t + 3.0);
    }, ts);
    LocalizedSweepReport rep = localized_sweep(traj, g1.origin(), {1, 4, 16});
    CHECK(rep.growth_ok);
    for (const auto& r : rep.by_k) {
        CHECK(r.pass);
        CHECK(r.C2 > 0.0);
    }
    CHECK_THROWS_AS(localized_estimate_check(traj, g1.origin(), 0), ValidationError);
}

TEST_CASE("Sobolev check scope and scale invariance") {
    SolitonModel g1 = SolitonModel::make_gaussian(1);
    GridPtr line = build_grid(g1, TruncatedLine{1.0, 0.1});
    CHECK_THROWS_AS(sobolev_check(line, {}, g1.origin(), 1.0), ValidationError);  // n < 3

    SolitonModel cyl = SolitonModel::make_cylinder(2, 3);
    GridPtr grid = build_grid(cyl, CylinderProduct{16, 32, 1.0, 0.125});
    Point p0 = cyl.origin();
    GridField u = GridField::from_function(grid, [&](const Point& x) {
        double s = cyl.geodesic_distance(x, p0) / 0.6;
        return (s < 1.0) ? std::exp(-1.0 / (1.0 - s * s)) : 0.0;
    });
    GridField u2 = u;
    for (double& v : u2.values) v *= 3.0;
    SobolevReport rep = sobolev_check(grid, {u, u2}, p0, 1.0);
    CHECK(rep.pass);
    REQUIRE(rep.ratios.size() == 2);
    CHECK(rep.ratios[0] == doctest::Approx(rep.ratios[1]).epsilon(1e-12));
    // unsupported test function is rejected
    GridField one = GridField::from_function(grid, [](const Point&) { return 1.0; });
    CHECK_THROWS_AS(sobolev_check(grid, {one}, p0, 1.0), ValidationError);
}
