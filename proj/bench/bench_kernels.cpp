// Timings of the OpenMP kernels against their serial reference twins. The
// twins must agree bit for bit, so the comparison is also asserted here; the
// interesting output is the wall-clock ratio on multi-core machines.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <vector>

#include "lrt/geooptics.hpp"
#include "lrt/inversion.hpp"
#include "lrt/parallel.hpp"
#include "lrt/presets.hpp"
#include "lrt/transforms.hpp"

using namespace lrt;

namespace {

double time_of(const std::function<void()>& fn, int reps) {
    fn();  // warm up
    const auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count() / reps;
}

void report(const char* name, double serial, double parallel, bool identical) {
    std::printf("%-22s %10.4f s %10.4f s %7.2fx  %s\n", name, serial, parallel,
                serial / parallel, identical ? "identical" : "MISMATCH");
}

}  // namespace

int main() {
    std::printf("threads: %d\n", par::max_threads());
    std::printf("%-22s %12s %12s %8s\n", "kernel", "serial", "parallel", "ratio");

    const MetricField g = MetricField::gaussian_bump(0.15, 0.45);
    const double T = 4.5;

    {
        const ScalarField2 f =
            ScalarField2::callback([](Vec2 p) { return presets::bump(norm(p) / 0.7); });
        Sinogram a, b;
        const double ts = time_of([&] { a = ref::forward_ray(g, f, 48, 49); }, 3);
        const double tp = time_of([&] { b = forward_ray(g, f, 48, 49); }, 3);
        report("sinogram assembly", ts, tp, a.value == b.value);
    }

    {
        const STScalar f = presets::separable_st(T);
        const Axis sx = make_axis("s", -0.5, 3.5, 48);
        LightSinogram a, b;
        const double ts = time_of([&] { a = ref::forward_light(g, f, sx, 24, 25); }, 3);
        const double tp = time_of([&] { b = forward_light(g, f, sx, 24, 25); }, 3);
        report("light assembly", ts, tp, a.value == b.value);
    }

    {
        const TracedRays tr = trace_rays(g, 48, 49);
        const Axis gx = make_axis("x", -1.05, 1.05, 96), gy = make_axis("y", -1.05, 1.05, 96);
        const RayOperator op = assemble_ray_matrix(tr, gx, gy);
        std::vector<double> x(std::size_t(op.mat.ncols));
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(0.01 * double(i));
        std::vector<double> ya(std::size_t(op.mat.nrows)), yb(ya.size());
        const double ts = time_of([&] { ref::csr_apply(op.mat, x.data(), ya.data()); }, 40);
        const double tp = time_of([&] { csr_apply(op.mat, x.data(), yb.data()); }, 40);
        report("sparse apply", ts, tp, ya == yb);

        RayOperator oa, ob;
        const double as = time_of([&] { oa = ref::assemble_ray_matrix(tr, gx, gy); }, 3);
        const double ap = time_of([&] { ob = assemble_ray_matrix(tr, gx, gy); }, 3);
        report("matrix assembly", as, ap,
               oa.mat.val == ob.mat.val && oa.mat.col == ob.mat.col);
    }

    {
        // mollification has no serial twin; report the parallel time alone
        const STScalar f = presets::separable_st(T);
        std::vector<double> v(std::size_t(48) * 65 * 65);
        const Axis at = make_axis("t", 0.0, T, 48);
        const Axis ax = make_axis("x", -1.05, 1.05, 65), ay = make_axis("y", -1.05, 1.05, 65);
        for (int k = 0; k < at.n; ++k)
            for (int i = 0; i < ax.n; ++i)
                for (int j = 0; j < ay.n; ++j)
                    v[(std::size_t(k) * ax.n + i) * ay.n + j] =
                        f.value(at.coord(k), {ax.coord(i), ay.coord(j)});
        const STScalar fg = STScalar::grid(at, ax, ay, std::move(v));
        STScalar out;
        const double tp = time_of([&] { out = mollify(fg, 256.0); }, 3);
        std::printf("%-22s %12s %10.4f s\n", "mollify 48x65x65", "-", tp);
    }

    return 0;
}
