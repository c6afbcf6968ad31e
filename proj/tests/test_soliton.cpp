#include <doctest.h>

#include <cmath>

#include "shrinklab/errors.hpp"
#include "shrinklab/soliton.hpp"

using namespace shrinklab;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

TEST_CASE("model parsing") {
    CHECK(SolitonModel::parse("gaussian:2").name() == "gaussian:2");
    CHECK(SolitonModel::parse("cylinder:2x3").name() == "cylinder:2x3");
    CHECK_THROWS_AS(SolitonModel::parse("gaussian"), ValidationError);
    CHECK_THROWS_AS(SolitonModel::parse("torus:2"), ValidationError);
    CHECK_THROWS_AS(SolitonModel::parse("cylinder:abc"), ValidationError);
    CHECK_THROWS_AS(SolitonModel::parse("cylinder:1x3"), ValidationError);
    CHECK_THROWS_AS(SolitonModel::parse("cylinder:3x3"), ValidationError);
    CHECK_THROWS_AS(SolitonModel::parse("gaussian:0"), ValidationError);
}

TEST_CASE("entropy closed forms") {
    for (int n : {1, 2, 4})
        CHECK(std::abs(SolitonModel::make_gaussian(n).entropy_mu()) < 1e-10);
    double mu = SolitonModel::make_cylinder(2, 3).entropy_mu();
    CHECK(mu == doctest::Approx(std::log(2.0) - 1.0).epsilon(1e-8));
    // quadrature refinement does not move the value
    SolitonModel cyl = SolitonModel::make_cylinder(2, 4);
    CHECK(cyl.entropy_mu_at_resolution(256) ==
          doctest::Approx(cyl.entropy_mu_at_resolution(1024)).epsilon(1e-9));
}

TEST_CASE("identities at random points") {
    for (const char* spec : {"gaussian:2", "cylinder:2x3", "cylinder:3x5"}) {
        SolitonModel m = SolitonModel::parse(spec);
        Rng rng(7);
        std::vector<Point> pts;
        for (int i = 0; i < 200; ++i) pts.push_back(m.random_point(rng));
        IdentityReport rep = m.check_identities(pts);
        CHECK(rep.max_soliton_residual < 1e-12);
        CHECK(rep.max_normalization_residual < 1e-12);
        CHECK(rep.min_scalar_curvature >= 0.0);
        CHECK(m.check_potential_bounds(m.origin(), pts).holds);
    }
}

TEST_CASE("distance axioms on the cylinder") {
    SolitonModel m = SolitonModel::make_cylinder(2, 3);
    Rng rng(11);
    for (int i = 0; i < 50; ++i) {
        Point a = m.random_point(rng), b = m.random_point(rng), c = m.random_point(rng);
        double ab = m.geodesic_distance(a, b);
        CHECK(ab == doctest::Approx(m.geodesic_distance(b, a)));
        // acos near 1 limits d(a, a) to ~sqrt(machine eps) on the sphere factor
        CHECK(m.geodesic_distance(a, a) < 1e-7);
        CHECK(m.geodesic_distance(a, c) <= ab + m.geodesic_distance(b, c) + 1e-9);
    }
}

TEST_CASE("potential and gradient") {
    SolitonModel g = SolitonModel::make_gaussian(2);
    Point x{{2.0, -1.0}};
    CHECK(g.potential(x) == doctest::Approx(5.0 / 4.0));
    CHECK(g.grad_potential_sq(x) == doctest::Approx(5.0 / 4.0));
    CHECK(g.scalar_curvature(x) == 0.0);

    SolitonModel cyl = SolitonModel::make_cylinder(2, 3);
    Point y{{kPi / 2.0, 0.0, 2.0}};
    CHECK(cyl.potential(y) == doctest::Approx(2.0));  // |y|^2/4 + k/2
    CHECK(cyl.scalar_curvature(y) == doctest::Approx(1.0));
}

TEST_CASE("ball volumes") {
    SolitonModel g2 = SolitonModel::make_gaussian(2);
    CHECK(g2.ball_volume(g2.origin(), 1.5) == doctest::Approx(kPi * 2.25).epsilon(1e-10));
    SolitonModel g3 = SolitonModel::make_gaussian(3);
    CHECK(g3.ball_volume(g3.origin(), 0.7) ==
          doctest::Approx(4.0 / 3.0 * kPi * 0.343).epsilon(1e-8));
    SolitonModel cyl = SolitonModel::make_cylinder(2, 3);
    // small geodesic balls are nearly Euclidean
    CHECK(cyl.ball_volume(cyl.origin(), 0.05) ==
          doctest::Approx(4.0 / 3.0 * kPi * std::pow(0.05, 3)).epsilon(0.01));
    CHECK_THROWS_AS(g2.ball_volume(g2.origin(), -1.0), ValidationError);
}

TEST_CASE("volume growth fit") {
    SolitonModel g2 = SolitonModel::make_gaussian(2);
    Rng rng(3);
    std::vector<Point> pts{g2.origin()};
    std::vector<double> radii{1.0};
    for (int i = 0; i < 10; ++i) {
        pts.push_back(g2.random_point(rng, 1.0));
        radii.push_back(rng.uniform(0.5, 1.5));
    }
    VolumeGrowthReport rep = volume_growth_fit(g2, pts, radii);
    CHECK(rep.holds);
    CHECK(rep.C == doctest::Approx(kPi).epsilon(1e-9));
    CHECK_THROWS_AS(volume_growth_fit(g2, {}, {}), ValidationError);
}

TEST_CASE("random points are valid chart points") {
    SolitonModel cyl = SolitonModel::make_cylinder(3, 5);
    Rng rng(99);
    for (int i = 0; i < 200; ++i) {
        Point p = cyl.random_point(rng);
        CHECK_NOTHROW(cyl.validate_point(p));
    }
    CHECK_THROWS_AS(cyl.validate_point(Point{{0.0, 0.0}}), ValidationError);
}
