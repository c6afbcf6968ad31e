#include "shrinklab/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "shrinklab/errors.hpp"

namespace shrinklab {

QuadRule gauss_hermite_quarter(int m) {
    if (m < 1) throw ValidationError("gauss_hermite_quarter: order must be >= 1");
    // Jacobi matrix for physicists' Hermite polynomials (weight e^{-t^2}):
    // zero diagonal, off-diagonal sqrt(i/2).
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
    for (int i = 1; i < m; ++i) {
        double b = std::sqrt(i / 2.0);
        J(i, i - 1) = b;
        J(i - 1, i) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    const double mu0 = std::sqrt(M_PI);  // integral of e^{-t^2}
    QuadRule r;
    r.nodes.resize(m);
    r.weights.resize(m);
    for (int i = 0; i < m; ++i) {
        double t = es.eigenvalues()(i);
        double w = mu0 * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
        // substitute y = 2t: integral e^{-y^2/4} g(y) dy = 2 integral e^{-t^2} g(2t) dt
        r.nodes[i] = 2.0 * t;
        r.weights[i] = 2.0 * w;
    }
    return r;
}

QuadRule simpson(double a, double b, int n) {
    if (n < 2) n = 2;
    if (n % 2 != 0) ++n;
    QuadRule r;
    double h = (b - a) / n;
    r.nodes.resize(n + 1);
    r.weights.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
        r.nodes[i] = a + i * h;
        double c = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        r.weights[i] = c * h / 3.0;
    }
    return r;
}

QuadRule midpoint(double a, double b, int n) {
    QuadRule r;
    double h = (b - a) / n;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        r.nodes[i] = a + (i + 0.5) * h;
        r.weights[i] = h;
    }
    return r;
}

double integrate_simpson(double a, double b, int n,
                         const std::function<double(double)>& f) {
    return simpson(a, b, n).integrate(f);
}

}  // namespace shrinklab
