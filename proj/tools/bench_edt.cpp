// Benchmark: serial vs OpenMP distance-transform kernel on disk rasters.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "droplets/region.hpp"
#include "droplets/shapes.hpp"

using namespace droplets;
using clock_type = std::chrono::steady_clock;

static double time_ms(const Raster& r, bool parallel, int reps,
                      std::vector<float>& out) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        auto t0 = clock_type::now();
        out = edt_squared(r, parallel);
        auto t1 = clock_type::now();
        double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        if (ms < best) best = ms;
    }
    return best;
}

int main() {
#ifdef _OPENMP
    std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
    std::printf("openmp: not enabled\n");
#endif
    Region disk = Region::from_curve(ShapeSpec::parse("disk:0.4", 1024).make_curve());
    std::printf("%8s %6s %12s %12s %10s %8s\n", "res", "pixels", "serial(ms)",
                "parallel(ms)", "speedup", "match");
    for (double res : {512.0, 1024.0, 2048.0, 4096.0}) {
        BBox box{-0.5, 0.5, -0.5, 0.5};
        Raster r = disk.rasterize(box, 1.0 / res);
        std::vector<float> a, b;
        double ts = time_ms(r, false, 3, a);
        double tp = time_ms(r, true, 3, b);
        bool match = a == b;
        std::printf("%8.0f %6zu %12.3f %12.3f %9.2fx %8s\n", res,
                    a.size(), ts, tp, ts / tp, match ? "yes" : "NO");
        if (!match) return 1;
    }
    return 0;
}
