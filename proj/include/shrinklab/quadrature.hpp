#pragma once

#include <functional>
#include <vector>

namespace shrinklab {

// Nodes/weights for a 1D quadrature rule: integral ~ sum w_i f(x_i).
struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    double integrate(const std::function<double(double)>& f) const {
        double s = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
        return s;
    }
};

// Gauss-Hermite rule adapted to the weight e^{-y^2/4} on the real line:
//   integral_R e^{-y^2/4} g(y) dy ~ sum w_i g(y_i).
// Nodes come from the Golub-Welsch eigenvalue problem for the Hermite
// Jacobi matrix; exact for polynomials g up to degree 2m-1.
QuadRule gauss_hermite_quarter(int m);

// Composite Simpson on [a, b] with n subintervals (n made even if needed).
QuadRule simpson(double a, double b, int n);

// Midpoint rule on [a, b] with n cells (used for lat-long sphere grids).
QuadRule midpoint(double a, double b, int n);

double integrate_simpson(double a, double b, int n,
                         const std::function<double(double)>& f);

}  // namespace shrinklab
