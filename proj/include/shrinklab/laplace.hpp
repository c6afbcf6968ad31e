#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <functional>
#include <vector>

#include "shrinklab/grid.hpp"

namespace shrinklab {

// Discretization of the Laplace-Beltrami operator.
//   Stencil2: second-order central / flux-form stencils (all topologies).
//   Spectral: Fourier differentiation, PeriodicLine only. Used where
//             acceptance tolerances are tighter than O(h^2) allows.
enum class LaplaceMode { Stencil2, Spectral };

class LaplaceOperator {
public:
    explicit LaplaceOperator(GridPtr grid, LaplaceMode mode = LaplaceMode::Stencil2);

    const GridPtr& grid() const { return grid_; }
    LaplaceMode mode() const { return mode_; }

    // Applies the operator; contamination mask grows by the stencil radius
    // toward the interior on truncated charts. OpenMP-parallel over nodes.
    GridField apply(const GridField& u) const;
    // Serial reference implementation, kept for testing and benchmarking.
    GridField apply_serial(const GridField& u) const;

    // Raw stencil action on a value array, no mask bookkeeping. Boundary
    // rows are left as zero. Used by the time steppers.
    void apply_raw(const std::vector<double>& in, std::vector<double>& out) const;

    // Gershgorin bound on the spectral radius (stability limit for
    // explicit stepping: dt <= 2 / bound).
    double gershgorin_bound() const;

private:
    GridPtr grid_;
    LaplaceMode mode_;

    void apply_impl(const std::vector<double>& in, std::vector<double>& out, bool parallel) const;
    void spectral_apply(const std::vector<double>& in, std::vector<double>& out) const;
    void grow_mask(const std::vector<std::uint8_t>& in, std::vector<std::uint8_t>& out) const;
};

// a_0 = a, a_{j+1} = A a_j. Fields past a divergence are dropped and the
// last field carries the diverged flag.
std::vector<GridField> iterate_laplacian(const LaplaceOperator& op, const GridField& a, int J);

// Same recursion with the working array in ~100-digit floats, rounded to
// double per level. Deep stencil iteration in double is noise-bound: each
// application can multiply rounding error by 4/h^2, which outruns the j!
// growth of the true coefficients well before J = 16. Line stencils only.
std::vector<GridField> iterate_laplacian_extended(const LaplaceOperator& op, const GridField& a,
                                                  int J);

// Extended recursion whose initial data is also sampled in ~100-digit
// floats. Starting from a double field caps the usable depth regardless of
// the working precision: the rounding already present in the samples sits at
// every wavenumber and the top mode grows by 4/h^2 per level. The sampler
// receives the node coordinate in wide precision too — double node
// coordinates carry ~1e-16 jitter, and sampling a growing function at
// jittered nodes seeds exactly the same white noise as a double field.
using ExtendedSampler = std::function<boost::multiprecision::cpp_bin_float_100(
    const boost::multiprecision::cpp_bin_float_100&)>;
std::vector<GridField> iterate_laplacian_extended(const LaplaceOperator& op,
                                                  const ExtendedSampler& a0, int J);

// Pointwise |grad u|^2 by central differences (one-sided at chart ends).
GridField gradient_sq(const GridField& u);

}  // namespace shrinklab
