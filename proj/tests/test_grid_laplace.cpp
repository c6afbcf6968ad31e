#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "shrinklab/errors.hpp"
#include "shrinklab/laplace.hpp"

using namespace shrinklab;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

TEST_CASE("grid construction and weights") {
    SolitonModel g1 = SolitonModel::make_gaussian(1);
    GridPtr line = build_grid(g1, TruncatedLine{2.0, 0.1});
    CHECK(line->size() == 41);
    CHECK(line->weight_sum() == doctest::Approx(4.0));
    CHECK(line->x(0) == doctest::Approx(-2.0));
    CHECK(line->x(40) == doctest::Approx(2.0));

    GridPtr per = build_grid(g1, PeriodicLine{2.0 * kPi, kPi / 32});
    CHECK(per->size() == 64);
    CHECK(per->weight_sum() == doctest::Approx(2.0 * kPi));

    SolitonModel cyl = SolitonModel::make_cylinder(2, 3);
    GridPtr prod = build_grid(cyl, CylinderProduct{16, 32, 1.0, 0.125});
    // sphere area 4*pi*r^2 = 8*pi times axial length 2
    CHECK(prod->weight_sum() == doctest::Approx(16.0 * kPi).epsilon(1e-2));

    CHECK_THROWS_AS(build_grid(g1, TruncatedLine{2.0, 0.3}), ValidationError);
    CHECK_THROWS_AS(build_grid(g1, TruncatedLine{-1.0, 0.1}), ValidationError);
    CHECK_THROWS_AS(build_grid(cyl, CylinderProduct{2, 32, 1.0, 0.125}), ValidationError);
    CHECK_THROWS_AS(build_grid(SolitonModel::make_gaussian(2), TruncatedLine{2.0, 0.1}),
                    ValidationError);
}

TEST_CASE("stencil is exact on quadratics") {
    SolitonModel g1 = SolitonModel::make_gaussian(1);
    GridPtr grid = build_grid(g1, TruncatedLine{2.0, 0.05});
    LaplaceOperator op(grid);
    GridField u = GridField::from_function(grid, [](const Point& p) {
        double x = p.coords[0];
        return 3.0 * x * x - 2.0 * x + 7.0;
    });
    GridField lu = op.apply(u);
    for (std::size_t i = 0; i < lu.values.size(); ++i)
        if (!lu.mask[i]) CHECK(lu.values[i] == doctest::Approx(6.0).epsilon(1e-9));
}

TEST_CASE("spectral derivative of a trig mode") {
    SolitonModel g1 = SolitonModel::make_gaussian(1);
    GridPtr grid = build_grid(g1, PeriodicLine{2.0 * kPi, 2.0 * kPi / 128});
    LaplaceOperator spec(grid, LaplaceMode::Spectral);
    GridField u = GridField::from_function(grid, [](const Point& p) {
        return std::sin(3.0 * p.coords[0]);
    });
    GridField lu = spec.apply(u);
    for (std::size_t i = 0; i < lu.values.size(); ++i)
        CHECK(lu.values[i] == doctest::Approx(-9.0 * std::sin(3.0 * grid->x(i))).epsilon(1e-10));
    CHECK_THROWS_AS(LaplaceOperator(build_grid(g1, TruncatedLine{1.0, 0.1}),
                                    LaplaceMode::Spectral),
                    ValidationError);
}

TEST_CASE("parallel apply matches the serial reference bitwise") {
    SolitonModel cyl = SolitonModel::make_cylinder(2, 3);
    GridPtr grid = build_grid(cyl, CylinderProduct{12, 24, 1.0, 0.125});
    LaplaceOperator op(grid);
    GridField u = GridField::from_function(grid, [](const Point& p) {
        return std::sin(p.coords[0]) * std::cos(2.0 * p.coords[1]) + p.coords[2];
    });
    GridField a = op.apply(u);
    GridField b = op.apply_serial(u);
    REQUIRE(a.values.size() == b.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(a.values[i] == b.values[i]);
    CHECK(a.mask == b.mask);
}

TEST_CASE("mask grows toward the interior on truncated charts") {
    SolitonModel g1 = SolitonModel::make_gaussian(1);
    GridPtr grid = build_grid(g1, TruncatedLine{1.0, 0.1});
    LaplaceOperator op(grid);
    GridField u = GridField::from_function(grid, [](const Point&) { return 1.0; });
    GridField l1 = op.apply(u);
    CHECK(l1.mask.front() == 1);
    CHECK(l1.mask.back() == 1);
    CHECK(l1.mask[5] == 0);
    GridField l2 = op.apply(l1);
    CHECK(l2.mask[1] == 1);
    CHECK(l2.mask[5] == 0);
}

TEST_CASE("iterated coefficients: double vs multiprecision at shallow depth") {
    SolitonModel g1 = SolitonModel::make_gaussian(1);
    GridPtr grid = build_grid(g1, TruncatedLine{2.0, 0.05});
    LaplaceOperator op(grid);
    GridField a = GridField::from_function(grid, [](const Point& p) {
        return std::exp(0.3 * p.coords[0]);
    });
    auto d = iterate_laplacian(op, a, 4);
    auto e = iterate_laplacian_extended(op, a, 4);
    REQUIRE(d.size() == e.size());
    for (std::size_t j = 0; j < d.size(); ++j)
        for (std::size_t i = 0; i < d[j].values.size(); ++i)
            if (!d[j].mask[i])
                // each level multiplies rounding noise by ~4/h^2, so the two
                // arithmetics drift apart at a few digits per order
                CHECK(d[j].values[i] == doctest::Approx(e[j].values[i]).epsilon(1e-6));
    CHECK_THROWS_AS(iterate_laplacian(op, a, -1), ValidationError);
}

TEST_CASE("gradient squared of a linear field") {
    SolitonModel g1 = SolitonModel::make_gaussian(1);
    GridPtr grid = build_grid(g1, TruncatedLine{1.0, 0.05});
    GridField u = GridField::from_function(grid, [](const Point& p) {
        return 2.5 * p.coords[0];
    });
    GridField g = gradient_sq(u);
    for (double v : g.values) CHECK(v == doctest::Approx(6.25).epsilon(1e-12));
}

TEST_CASE("gershgorin bound dominates the explicit stability limit") {
    SolitonModel g1 = SolitonModel::make_gaussian(1);
    LaplaceOperator op(build_grid(g1, TruncatedLine{1.0, 0.1}));
    CHECK(op.gershgorin_bound() == doctest::Approx(400.0));
}

TEST_CASE("field CSV round trip") {
    SolitonModel g1 = SolitonModel::make_gaussian(1);
    GridPtr grid = build_grid(g1, TruncatedLine{1.0, 0.25});
    GridField u = GridField::from_function(grid, [](const Point& p) {
        return std::sin(p.coords[0]) * 1e-7;
    });
    u.mask[3] = 1;
    const char* path = "test_field_roundtrip.csv";
    write_field_csv(u, path);
    GridField v = read_field_csv(grid, path);
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        CHECK(v.values[i] == doctest::Approx(u.values[i]).epsilon(1e-15));
        CHECK(v.mask[i] == u.mask[i]);
    }
    std::remove(path);
}
