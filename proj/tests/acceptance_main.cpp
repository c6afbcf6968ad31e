#include <omp.h>

#include <cstdio>
#include <cstdlib>

#include "shrinklab/acceptance.hpp"
#include "shrinklab/report.hpp"

int main() {
    if (const char* env = std::getenv("SHRINKER_LAB_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) omp_set_num_threads(n);
    }
    shrinklab::AcceptanceOutcome out = shrinklab::run_acceptance(20260824u);
    for (const auto& r : out.results)
        std::printf("%s  [%2d] %s: %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                    r.detail.c_str());
    shrinklab::write_report(out.report, "acceptance_report.json");
    std::printf("%s\n", out.all_pass ? "all criteria passed" : "criteria failed");
    return out.all_pass ? 0 : 1;
}
