#include "shrinklab/soliton.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "shrinklab/errors.hpp"
#include "shrinklab/quadrature.hpp"

namespace shrinklab {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double sin_power_integral(int m, int resolution) {
    // integral_0^pi sin^m(t) dt
    return integrate_simpson(0.0, kPi, resolution,
                             [m](double t) { return std::pow(std::sin(t), m); });
}

double unit_sphere_area_quad(int m, int resolution) {
    if (m == 0) return 2.0;  // S^0 = two points
    // omega_1 = 2*pi, omega_j = omega_{j-1} * integral sin^{j-1}
    double area = 2.0 * kPi;
    for (int j = 2; j <= m; ++j) area *= sin_power_integral(j - 1, resolution);
    return area;
}

}  // namespace

double unit_sphere_area(int m) { return unit_sphere_area_quad(m, 512); }

SolitonModel SolitonModel::make_gaussian(int n) {
    if (n < 1) throw ValidationError("make_gaussian: n must be >= 1");
    SolitonModel mod;
    mod.kind_ = SolitonKind::GaussianFlat;
    mod.n_ = n;
    mod.k_ = 0;
    mod.sphere_radius_ = 0.0;
    mod.entropy_mu_ = mod.entropy_mu_at_resolution(64);
    return mod;
}

SolitonModel SolitonModel::make_cylinder(int k, int n) {
    if (k < 2) throw ValidationError("make_cylinder: sphere factor needs k >= 2");
    if (k >= n) throw ValidationError("make_cylinder: requires k <= n-1");
    SolitonModel mod;
    mod.kind_ = SolitonKind::ShrinkingCylinder;
    mod.n_ = n;
    mod.k_ = k;
    mod.sphere_radius_ = std::sqrt(2.0 * (k - 1));
    mod.entropy_mu_ = mod.entropy_mu_at_resolution(512);
    return mod;
}

SolitonModel SolitonModel::parse(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw ValidationError("model spec must be gaussian:<n> or cylinder:<k>x<n>: " + spec);
    std::string family = spec.substr(0, colon);
    std::string rest = spec.substr(colon + 1);
    try {
        if (family == "gaussian") {
            return make_gaussian(std::stoi(rest));
        }
        if (family == "cylinder") {
            auto x = rest.find('x');
            if (x == std::string::npos) throw ValidationError("bad cylinder spec: " + spec);
            return make_cylinder(std::stoi(rest.substr(0, x)), std::stoi(rest.substr(x + 1)));
        }
    } catch (const std::invalid_argument&) {
        throw ValidationError("bad model spec: " + spec);
    }
    throw ValidationError("unknown model family: " + family);
}

std::string SolitonModel::name() const {
    if (kind_ == SolitonKind::GaussianFlat) return "gaussian:" + std::to_string(n_);
    return "cylinder:" + std::to_string(k_) + "x" + std::to_string(n_);
}

double SolitonModel::entropy_mu_at_resolution(int resolution) const {
    QuadRule gh = gauss_hermite_quarter(std::max(2, std::min(resolution, 180)));
    double line_factor = gh.integrate([](double) { return 1.0; });  // = 2*sqrt(pi)
    if (kind_ == SolitonKind::GaussianFlat) {
        double val = std::pow(line_factor / std::sqrt(4.0 * kPi), n_);
        return std::log(val);
    }
    double area = unit_sphere_area_quad(k_, resolution) * std::pow(sphere_radius_, k_);
    double axial = std::pow(line_factor, n_ - k_);
    double val = std::pow(4.0 * kPi, -0.5 * n_) * area * std::exp(-0.5 * k_) * axial;
    return std::log(val);
}

void SolitonModel::validate_point(const Point& x) const {
    if (static_cast<int>(x.coords.size()) != n_)
        throw ValidationError("point has wrong dimension for " + name());
    for (double c : x.coords)
        if (!std::isfinite(c)) throw ValidationError("non-finite point coordinate");
    if (kind_ == SolitonKind::ShrinkingCylinder) {
        for (int i = 0; i < k_ - 1; ++i)
            if (x.coords[i] < 0.0 || x.coords[i] > kPi)
                throw ValidationError("polar angle out of [0, pi]");
        double last = x.coords[k_ - 1];
        if (last < 0.0 || last >= 2.0 * kPi)
            throw ValidationError("azimuthal angle out of [0, 2*pi)");
    }
}

double SolitonModel::potential(const Point& x) const {
    double s = 0.0;
    int start = (kind_ == SolitonKind::GaussianFlat) ? 0 : k_;
    for (int i = start; i < n_; ++i) s += x.coords[i] * x.coords[i];
    double f = s / 4.0;
    if (kind_ == SolitonKind::ShrinkingCylinder) f += 0.5 * k_;
    return f;
}

double SolitonModel::grad_potential_sq(const Point& x) const {
    double s = 0.0;
    int start = (kind_ == SolitonKind::GaussianFlat) ? 0 : k_;
    for (int i = start; i < n_; ++i) s += x.coords[i] * x.coords[i];
    return s / 4.0;  // |grad f| = |x|/2 resp. |y|/2
}

double SolitonModel::scalar_curvature(const Point&) const {
    if (kind_ == SolitonKind::GaussianFlat) return 0.0;
    // k(k-1)/r^2 with r^2 = 2(k-1)
    return static_cast<double>(k_) * (k_ - 1) / (sphere_radius_ * sphere_radius_);
}

double SolitonModel::normalization_residual(const Point& x) const {
    return scalar_curvature(x) + grad_potential_sq(x) - potential(x);
}

double SolitonModel::soliton_residual(const Point& x) const {
    (void)x;
    double worst = 0.0;
    if (kind_ == SolitonKind::GaussianFlat) {
        // Ric = 0, Hess f = g/2 on the flat factor.
        for (int i = 0; i < n_; ++i) worst = std::max(worst, std::abs(0.0 + 0.5 - 0.5));
        return worst;
    }
    double ric_sphere = (k_ - 1) / (sphere_radius_ * sphere_radius_);
    // Sphere directions: Ric = (k-1)/r^2, Hess f = 0.
    worst = std::max(worst, std::abs(ric_sphere + 0.0 - 0.5));
    // Axial directions: Ric = 0, Hess f = 1/2.
    worst = std::max(worst, std::abs(0.0 + 0.5 - 0.5));
    return worst;
}

std::vector<double> SolitonModel::sphere_unit_vector(const Point& x) const {
    std::vector<double> u(k_ + 1, 0.0);
    double prod = 1.0;
    for (int i = 0; i < k_ - 1; ++i) {
        u[i] = prod * std::cos(x.coords[i]);
        prod *= std::sin(x.coords[i]);
    }
    u[k_ - 1] = prod * std::cos(x.coords[k_ - 1]);
    u[k_] = prod * std::sin(x.coords[k_ - 1]);
    return u;
}

double SolitonModel::geodesic_distance(const Point& a, const Point& b) const {
    validate_point(a);
    validate_point(b);
    if (kind_ == SolitonKind::GaussianFlat) {
        double s = 0.0;
        for (int i = 0; i < n_; ++i) {
            double d = a.coords[i] - b.coords[i];
            s += d * d;
        }
        return std::sqrt(s);
    }
    auto ua = sphere_unit_vector(a);
    auto ub = sphere_unit_vector(b);
    double dot = std::inner_product(ua.begin(), ua.end(), ub.begin(), 0.0);
    dot = std::clamp(dot, -1.0, 1.0);
    double ds = sphere_radius_ * std::acos(dot);
    double dy2 = 0.0;
    for (int i = k_; i < n_; ++i) {
        double d = a.coords[i] - b.coords[i];
        dy2 += d * d;
    }
    return std::sqrt(ds * ds + dy2);
}

double SolitonModel::ball_volume(const Point& p, double r) const {
    validate_point(p);
    if (r <= 0.0) throw ValidationError("ball_volume: radius must be positive");
    if (kind_ == SolitonKind::GaussianFlat) {
        double omega = unit_sphere_area(n_ - 1);
        return integrate_simpson(0.0, r, 512, [this, omega](double s) {
            return omega * std::pow(s, n_ - 1);
        });
    }
    // Slice by sphere-distance a: points at distance a from the sphere foot
    // of p form a (k-1)-sphere of radius r_s*sin(a/r_s); the axial fiber is
    // a Euclidean (n-k)-ball of radius sqrt(r^2 - a^2).
    int m = n_ - k_;
    double omega_km1 = unit_sphere_area(k_ - 1);
    double omega_m = unit_sphere_area(m - 1);
    double ball_coeff = omega_m / m;  // volume of unit m-ball
    double a_max = std::min(r, kPi * sphere_radius_);
    return integrate_simpson(0.0, a_max, 1024, [&](double a) {
        double ring = omega_km1 * std::pow(sphere_radius_ * std::sin(a / sphere_radius_), k_ - 1);
        double rho2 = std::max(0.0, r * r - a * a);
        return ring * ball_coeff * std::pow(std::sqrt(rho2), m);
    });
}

Point SolitonModel::minimizer() const {
    Point p;
    p.coords.assign(n_, 0.0);
    if (kind_ == SolitonKind::ShrinkingCylinder) {
        for (int i = 0; i < k_ - 1; ++i) p.coords[i] = kPi / 2.0;
        p.coords[k_ - 1] = 0.0;
    }
    return p;
}

Point SolitonModel::random_point(Rng& rng, double scale) const {
    Point p;
    p.coords.assign(n_, 0.0);
    if (kind_ == SolitonKind::GaussianFlat) {
        for (int i = 0; i < n_; ++i) p.coords[i] = scale * rng.normal();
        return p;
    }
    // Uniform direction on S^k from a normalized Gaussian vector, converted
    // back to hyperspherical angles.
    std::vector<double> u(k_ + 1);
    double norm = 0.0;
    do {
        norm = 0.0;
        for (auto& c : u) {
            c = rng.normal();
            norm += c * c;
        }
        norm = std::sqrt(norm);
    } while (norm < 1e-12);
    for (auto& c : u) c /= norm;
    double tail = 1.0;
    for (int i = 0; i < k_ - 1; ++i) {
        double c = std::clamp(u[i] / tail, -1.0, 1.0);
        p.coords[i] = std::acos(c);
        tail *= std::sin(p.coords[i]);
        if (tail < 1e-300) tail = 1e-300;
    }
    double az = std::atan2(u[k_], u[k_ - 1]);
    if (az < 0.0) az += 2.0 * kPi;
    if (az >= 2.0 * kPi) az = 0.0;
    p.coords[k_ - 1] = az;
    for (int i = k_; i < n_; ++i) p.coords[i] = scale * rng.normal();
    return p;
}

IdentityReport SolitonModel::check_identities(const std::vector<Point>& samples) const {
    if (samples.empty()) throw ValidationError("check_identities: empty sample list");
    IdentityReport rep;
    rep.min_scalar_curvature = scalar_curvature(samples.front());
    for (const auto& x : samples) {
        validate_point(x);
        rep.max_soliton_residual = std::max(rep.max_soliton_residual, soliton_residual(x));
        rep.max_normalization_residual =
            std::max(rep.max_normalization_residual, std::abs(normalization_residual(x)));
        rep.min_scalar_curvature = std::min(rep.min_scalar_curvature, scalar_curvature(x));
    }
    return rep;
}

VolumeGrowthReport volume_growth_fit(const SolitonModel& model, const std::vector<Point>& points,
                                     const std::vector<double>& radii) {
    if (points.empty() || points.size() != radii.size())
        throw ValidationError("volume_growth_fit: need matching nonempty point/radius lists");
    VolumeGrowthReport rep;
    for (std::size_t i = 0; i < points.size(); ++i) {
        double vol = model.ball_volume(points[i], radii[i]);
        double ratio = vol / (std::exp(model.potential(points[i])) *
                              std::pow(radii[i], model.dim()));
        rep.ratios.push_back(ratio);
        if (!std::isfinite(ratio)) rep.holds = false;
        rep.C = std::max(rep.C, ratio);
    }
    return rep;
}

PotentialBoundsReport SolitonModel::check_potential_bounds(
    const Point& p, const std::vector<Point>& samples) const {
    validate_point(p);
    PotentialBoundsReport rep;
    double sqrt_fp = std::sqrt(std::max(0.0, potential(p)));
    bool first = true;
    for (const auto& x : samples) {
        double d = geodesic_distance(x, p);
        double fx = potential(x);
        double lo_base = d - 2.0 * sqrt_fp - 4.0 * n_ + 4.0 / 3.0;
        double lower = 0.25 * std::pow(std::max(0.0, lo_base), 2);
        double upper = 0.25 * std::pow(d + 2.0 * sqrt_fp, 2);
        double lm = fx - lower;
        double um = upper - fx;
        if (first || lm < rep.worst_lower_margin) rep.worst_lower_margin = lm;
        if (first || um < rep.worst_upper_margin) rep.worst_upper_margin = um;
        first = false;
    }
    rep.f_at_minimizer = potential(minimizer());
    rep.holds = rep.worst_lower_margin >= -1e-10 && rep.worst_upper_margin >= -1e-10 &&
                rep.f_at_minimizer <= 0.5 * n_ + 1e-12;
    return rep;
}

}  // namespace shrinklab
