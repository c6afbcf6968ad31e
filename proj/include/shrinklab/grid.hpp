#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "shrinklab/soliton.hpp"

namespace shrinklab {

// Uniform 1D chart [-L, L] with spacing h; trapezoid volume weights.
struct TruncatedLine {
    double L = 0.0;
    double h = 0.0;
};

// Uniform periodic 1D chart of the given period. Exists as an operator
// self-test harness (no boundary, no contamination), not as a shrinker.
struct PeriodicLine {
    double period = 0.0;
    double h = 0.0;
};

// Lat-long grid on S^2(sqrt(2)) times a truncated axial line, for the
// cylinder(2,3) model. Midpoint nodes in theta keep the poles off-grid.
struct CylinderProduct {
    int n_theta = 0;
    int n_phi = 0;
    double axial_L = 0.0;
    double axial_h = 0.0;
};

using Topology = std::variant<TruncatedLine, PeriodicLine, CylinderProduct>;

class Grid {
public:
    Grid(SolitonModel model, Topology topo);

    const SolitonModel& model() const { return model_; }
    const Topology& topology() const { return topo_; }
    std::size_t size() const { return n_nodes_; }
    const std::vector<double>& volume_weights() const { return weights_; }
    double weight_sum() const;

    Point node_point(std::size_t i) const;
    // 1D coordinate for line topologies.
    double x(std::size_t i) const;

    bool is_periodic() const { return std::holds_alternative<PeriodicLine>(topo_); }
    bool is_line() const { return !std::holds_alternative<CylinderProduct>(topo_); }

    // Cylinder index helpers (row-major theta, phi, axial).
    std::size_t cyl_index(int it, int ip, int iy) const;
    int n_theta() const;
    int n_phi() const;
    int n_axial() const;
    double theta(int it) const;
    double phi(int ip) const;
    double axial(int iy) const;
    double spacing() const;  // h of the line / axial factor

private:
    SolitonModel model_;
    Topology topo_;
    std::size_t n_nodes_ = 0;
    std::vector<double> weights_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr build_grid(const SolitonModel& model, const Topology& topo);

// Real-valued function sampled on a grid, with a contamination mask
// (1 = value influenced by the chart boundary) and a divergence flag.
struct GridField {
    GridPtr grid;
    std::vector<double> values;
    std::vector<std::uint8_t> mask;
    bool diverged = false;

    static GridField zeros(GridPtr g);
    static GridField from_function(GridPtr g, const std::function<double(const Point&)>& f);

    double sup_interior() const;  // max |value| over unmasked nodes
    double max_interior() const;
    double min_interior() const;
    bool all_finite() const;
    std::size_t size() const { return values.size(); }
};

// Volume-weighted inner product over unmasked nodes (fixed summation order).
double inner_product(const GridField& a, const GridField& b);

// CSV I/O: header coord_0,...,coord_{d-1},value,masked.
void write_field_csv(const GridField& f, const std::string& path);
GridField read_field_csv(GridPtr grid, const std::string& path);

}  // namespace shrinklab
