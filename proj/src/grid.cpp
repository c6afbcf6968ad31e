#include "shrinklab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "shrinklab/errors.hpp"

namespace shrinklab {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

int count_cells(double extent, double h, const char* what) {
    if (h <= 0.0) throw ValidationError(std::string(what) + ": spacing must be positive");
    double cells = extent / h;
    long n = std::lround(cells);
    if (n < 1 || std::abs(cells - n) > 1e-9 * std::max(1.0, cells))
        throw ValidationError(std::string(what) + ": h must divide the domain evenly");
    return static_cast<int>(n);
}
}  // namespace

Grid::Grid(SolitonModel model, Topology topo) : model_(std::move(model)), topo_(std::move(topo)) {
    if (const auto* t = std::get_if<TruncatedLine>(&topo_)) {
        if (t->L <= 0.0) throw ValidationError("TruncatedLine: L must be positive");
        if (model_.kind() != SolitonKind::GaussianFlat || model_.dim() != 1)
            throw ValidationError("TruncatedLine grid requires gaussian:1");
        int cells = count_cells(2.0 * t->L, t->h, "TruncatedLine");
        n_nodes_ = cells + 1;
        weights_.assign(n_nodes_, t->h);
        weights_.front() = weights_.back() = 0.5 * t->h;
    } else if (const auto* p = std::get_if<PeriodicLine>(&topo_)) {
        if (p->period <= 0.0) throw ValidationError("PeriodicLine: period must be positive");
        int cells = count_cells(p->period, p->h, "PeriodicLine");
        n_nodes_ = cells;
        weights_.assign(n_nodes_, p->h);
    } else {
        const auto& c = std::get<CylinderProduct>(topo_);
        if (c.n_theta < 4 || c.n_phi < 4)
            throw ValidationError("CylinderProduct: sphere resolution must be >= 4");
        if (c.axial_L <= 0.0) throw ValidationError("CylinderProduct: axial_L must be positive");
        if (model_.kind() != SolitonKind::ShrinkingCylinder || model_.sphere_dim() != 2 ||
            model_.dim() != 3)
            throw ValidationError("CylinderProduct grid requires cylinder:2x3");
        int ny = count_cells(2.0 * c.axial_L, c.axial_h, "CylinderProduct axial") + 1;
        n_nodes_ = static_cast<std::size_t>(c.n_theta) * c.n_phi * ny;
        weights_.resize(n_nodes_);
        double r2 = model_.sphere_radius() * model_.sphere_radius();
        double dth = kPi / c.n_theta;
        double dph = 2.0 * kPi / c.n_phi;
        for (int it = 0; it < c.n_theta; ++it) {
            double wang = r2 * std::sin((it + 0.5) * dth) * dth * dph;
            for (int ip = 0; ip < c.n_phi; ++ip) {
                for (int iy = 0; iy < ny; ++iy) {
                    double wy = (iy == 0 || iy == ny - 1) ? 0.5 * c.axial_h : c.axial_h;
                    weights_[cyl_index(it, ip, iy)] = wang * wy;
                }
            }
        }
    }
}

double Grid::weight_sum() const {
    double s = 0.0;
    for (double w : weights_) s += w;
    return s;
}

double Grid::spacing() const {
    if (const auto* t = std::get_if<TruncatedLine>(&topo_)) return t->h;
    if (const auto* p = std::get_if<PeriodicLine>(&topo_)) return p->h;
    return std::get<CylinderProduct>(topo_).axial_h;
}

double Grid::x(std::size_t i) const {
    if (const auto* t = std::get_if<TruncatedLine>(&topo_)) return -t->L + i * t->h;
    if (const auto* p = std::get_if<PeriodicLine>(&topo_)) return i * p->h;
    throw ValidationError("x(): not a line grid");
}

std::size_t Grid::cyl_index(int it, int ip, int iy) const {
    return (static_cast<std::size_t>(it) * n_phi() + ip) * n_axial() + iy;
}

int Grid::n_theta() const { return std::get<CylinderProduct>(topo_).n_theta; }
int Grid::n_phi() const { return std::get<CylinderProduct>(topo_).n_phi; }

int Grid::n_axial() const {
    const auto& c = std::get<CylinderProduct>(topo_);
    return static_cast<int>(std::lround(2.0 * c.axial_L / c.axial_h)) + 1;
}

double Grid::theta(int it) const { return (it + 0.5) * kPi / n_theta(); }
double Grid::phi(int ip) const { return ip * 2.0 * kPi / n_phi(); }

double Grid::axial(int iy) const {
    const auto& c = std::get<CylinderProduct>(topo_);
    return -c.axial_L + iy * c.axial_h;
}

Point Grid::node_point(std::size_t i) const {
    Point p;
    if (is_line()) {
        p.coords = {x(i)};
        return p;
    }
    int ny = n_axial();
    int iy = static_cast<int>(i % ny);
    std::size_t rest = i / ny;
    int ip = static_cast<int>(rest % n_phi());
    int it = static_cast<int>(rest / n_phi());
    p.coords = {theta(it), phi(ip), axial(iy)};
    return p;
}

GridPtr build_grid(const SolitonModel& model, const Topology& topo) {
    return std::make_shared<Grid>(model, topo);
}

GridField GridField::zeros(GridPtr g) {
    GridField f;
    f.grid = std::move(g);
    f.values.assign(f.grid->size(), 0.0);
    f.mask.assign(f.grid->size(), 0);
    return f;
}

GridField GridField::from_function(GridPtr g, const std::function<double(const Point&)>& fn) {
    GridField f = zeros(g);
    for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = fn(f.grid->node_point(i));
    return f;
}

double GridField::sup_interior() const {
    double m = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (!mask[i]) m = std::max(m, std::abs(values[i]));
    return m;
}

double GridField::max_interior() const {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < values.size(); ++i)
        if (!mask[i]) m = std::max(m, values[i]);
    return m;
}

double GridField::min_interior() const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < values.size(); ++i)
        if (!mask[i]) m = std::min(m, values[i]);
    return m;
}

bool GridField::all_finite() const {
    for (double v : values)
        if (!std::isfinite(v)) return false;
    return true;
}

double inner_product(const GridField& a, const GridField& b) {
    if (a.grid != b.grid || a.values.size() != b.values.size())
        throw ValidationError("inner_product: grid mismatch");
    const auto& w = a.grid->volume_weights();
    double s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        if (!a.mask[i] && !b.mask[i]) s += w[i] * a.values[i] * b.values[i];
    return s;
}

void write_field_csv(const GridField& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open for writing: " + path);
    std::size_t d = f.grid->node_point(0).coords.size();
    for (std::size_t j = 0; j < d; ++j) out << "coord_" << j << ",";
    out << "value,masked\n";
    out.precision(17);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        Point p = f.grid->node_point(i);
        for (double c : p.coords) out << c << ",";
        out << f.values[i] << "," << (f.mask[i] ? 1 : 0) << "\n";
    }
}

GridField read_field_csv(GridPtr grid, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open: " + path);
    GridField f = GridField::zeros(std::move(grid));
    std::string line;
    std::getline(in, line);  // header
    std::size_t i = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (i >= f.values.size()) throw ValidationError("CSV has more rows than grid nodes");
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() < 2) throw ValidationError("malformed CSV row: " + line);
        f.values[i] = std::stod(cells[cells.size() - 2]);
        f.mask[i] = static_cast<std::uint8_t>(std::stoi(cells.back()));
        ++i;
    }
    if (i != f.values.size()) throw ValidationError("CSV has fewer rows than grid nodes");
    return f;
}

}  // namespace shrinklab
