#pragma once

#include <string>
#include <vector>

#include "shrinklab/rng.hpp"

namespace shrinklab {

// Chart coordinates of a point.
//   Gaussian model: Cartesian x in R^n.
//   Cylinder model S^k x R^{n-k}: k hyperspherical angles followed by the
//   n-k axial coordinates. Angles theta_1..theta_{k-1} in [0, pi],
//   theta_k in [0, 2*pi).
struct Point {
    std::vector<double> coords;
};

enum class SolitonKind { GaussianFlat, ShrinkingCylinder };

struct IdentityReport {
    double max_soliton_residual = 0.0;   // sup ||Ric + Hess f - g/2||_inf
    double max_normalization_residual = 0.0;  // sup |R + |grad f|^2 - f|
    double min_scalar_curvature = 0.0;
};

struct PotentialBoundsReport {
    bool holds = true;
    double worst_lower_margin = 0.0;  // min over samples of f(x) - lower(x)
    double worst_upper_margin = 0.0;  // min over samples of upper(x) - f(x)
    double f_at_minimizer = 0.0;      // must be <= n/2
};

// Closed-form gradient shrinking Ricci soliton geometry. Two families:
// flat Gaussian R^n with f = |x|^2/4, and the round cylinder
// S^k(sqrt(2(k-1))) x R^{n-k} with f = |y|^2/4 + k/2. Immutable after
// construction; all member functions are pure.
class SolitonModel {
public:
    static SolitonModel make_gaussian(int n);
    static SolitonModel make_cylinder(int k, int n);

    // Parses "gaussian:<n>" or "cylinder:<k>x<n>".
    static SolitonModel parse(const std::string& spec);

    SolitonKind kind() const { return kind_; }
    int dim() const { return n_; }
    int sphere_dim() const { return k_; }  // 0 for Gaussian
    double sphere_radius() const { return sphere_radius_; }
    std::string name() const;

    double potential(const Point& x) const;             // f
    double grad_potential_sq(const Point& x) const;     // |grad f|^2
    double scalar_curvature(const Point& x) const;      // R >= 0
    double entropy_mu() const { return entropy_mu_; }
    // C(g) = R + |grad f|^2 - f, zero under the paper's normalization.
    double normalization_residual(const Point& x) const;
    // sup-norm of Ric + Hess f - g/2 in an orthonormal frame at x.
    double soliton_residual(const Point& x) const;

    double geodesic_distance(const Point& a, const Point& b) const;
    double ball_volume(const Point& p, double r) const;

    // Point where f attains its infimum.
    Point minimizer() const;
    // Origin of the chart (minimizer for both families).
    Point origin() const { return minimizer(); }

    // Random point with axial/Cartesian coordinates ~ scale * normal and
    // uniform sphere angles.
    Point random_point(Rng& rng, double scale = 2.0) const;
    void validate_point(const Point& x) const;

    IdentityReport check_identities(const std::vector<Point>& samples) const;
    PotentialBoundsReport check_potential_bounds(const Point& p,
                                                 const std::vector<Point>& samples) const;

    // Entropy recomputed at a given 1D quadrature resolution (the stored
    // entropy_mu uses the default). Exposed for the convergence self-check.
    double entropy_mu_at_resolution(int resolution) const;

private:
    SolitonModel() = default;

    SolitonKind kind_ = SolitonKind::GaussianFlat;
    int n_ = 1;
    int k_ = 0;
    double sphere_radius_ = 0.0;
    double entropy_mu_ = 0.0;

    // Embeds the sphere angles of x into a unit vector in R^{k+1}.
    std::vector<double> sphere_unit_vector(const Point& x) const;
};

// Surface area of the unit sphere S^{m} (m >= 0), by quadrature of the
// hyperspherical product measure.
double unit_sphere_area(int m);

struct VolumeGrowthReport {
    std::vector<double> ratios;  // vol B(p_i, r_i) / (e^{f(p_i)} r_i^n)
    double C = 0.0;              // max ratio, empirical growth constant
    bool holds = true;           // all ratios finite
};

// Fits the smallest C with vol B(p, r) <= C e^{f(p)} r^n over the sampled
// (p, r) pairs. points and radii must have equal length.
VolumeGrowthReport volume_growth_fit(const SolitonModel& model, const std::vector<Point>& points,
                                     const std::vector<double>& radii);

}  // namespace shrinklab
