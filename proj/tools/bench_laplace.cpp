#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>

#include "shrinklab/laplace.hpp"
#include "shrinklab/soliton.hpp"

using namespace shrinklab;

namespace {

double time_apply(const LaplaceOperator& op, const GridField& u, bool parallel, int reps) {
    GridField r;
    auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) r = parallel ? op.apply(u) : op.apply_serial(u);
    auto t1 = std::chrono::steady_clock::now();
    volatile double sink = r.values[r.values.size() / 2];
    (void)sink;
    return std::chrono::duration<double>(t1 - t0).count() / reps;
}

void bench(const char* label, GridPtr grid, int reps) {
    LaplaceOperator op(grid);
    GridField u = GridField::from_function(grid, [](const Point& p) {
        double s = 0.0;
        for (double c : p.coords) s += std::sin(3.0 * c);
        return s;
    });
    double ser = time_apply(op, u, false, reps);
    double par = time_apply(op, u, true, reps);
    std::cout << label << ": " << grid->size() << " nodes, serial " << ser * 1e3
              << " ms, parallel " << par * 1e3 << " ms, speedup " << ser / par << "x\n";
}

}  // namespace

int main() {
    if (const char* env = std::getenv("SHRINKER_LAB_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) omp_set_num_threads(n);
    }
    std::cout << "threads: " << omp_get_max_threads() << "\n";
    SolitonModel g1 = SolitonModel::make_gaussian(1);
    bench("line 1e6", build_grid(g1, TruncatedLine{500.0, 1e-3}), 50);
    SolitonModel cyl = SolitonModel::make_cylinder(2, 3);
    bench("cylinder 96x192x201", build_grid(cyl, CylinderProduct{96, 192, 2.0, 0.02}), 20);
    return 0;
}
