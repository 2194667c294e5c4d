#pragma once

#include <vector>

#include "lrt/metric.hpp"
#include "lrt/vec.hpp"

namespace lrt {

struct TraceOptions {
    double step = 1e-3;           // arc-length step of the RK4 integrator
    double boundary_tol = 1e-10;  // bisection tolerance on |x|^2 - 1
    double max_arc = 64.0;        // trapped-ray guard
    int store_stride = 1;         // keep every k-th interior sample
};

struct GeodesicSample {
    double r;  // arc length from entry
    Vec2 x;
    Vec2 v;  // coordinate velocity, g-unit (Euclidean length c(x))
};

struct Geodesic {
    std::vector<GeodesicSample> s;  // first sample at r=0, last on the boundary
    double tau() const { return s.back().r; }
};

// unit-speed geodesic from x0 (inside or on the boundary) until it exits the
// disc; v0 must be g-unit and, for boundary starts, point inward
Geodesic trace_geodesic(const MetricField& g, Vec2 x0, Vec2 v0,
                        const TraceOptions& opt = {});

// inward-pointing boundary ray grid over (base angle alpha, direction angle
// mu), with quadrature weights for the influx-boundary measure
// cos(mu) dmu dsigma_g. alpha is uniform periodic, mu is midpoint on
// (-pi/2, pi/2) so no sampled ray is tangent.
struct BoundaryRay {
    double alpha;  // base point angle on the unit circle
    double mu;     // angle from the inward normal, in (-pi/2, pi/2)
    Vec2 x0;
    Vec2 v0;        // g-unit inward velocity
    double weight;  // cos(mu) * dmu * dalpha / c(x0)
};

std::vector<BoundaryRay> boundary_ray_grid(const MetricField& g, int n_base, int n_dir);

Vec2 boundary_point(double alpha);
// g-unit vector at boundary angle alpha making angle mu with the inward normal
Vec2 inward_vector(const MetricField& g, double alpha, double mu);

// longest chord through an interior point over n_dirs sampled line directions
// (doubling n_dirs keeps all previously sampled directions)
double longest_chord(const MetricField& g, Vec2 x, int n_dirs, const TraceOptions& opt = {});
// the maximizing full geodesic, re-parametrized from its entry point
Geodesic longest_geodesic_through(const MetricField& g, Vec2 x, int n_dirs,
                                  const TraceOptions& opt = {});
// shortest exit over sampled directions, an upper proxy for dist_g(x, boundary)
double boundary_distance(const MetricField& g, Vec2 x, int n_dirs,
                         const TraceOptions& opt = {});

// max exit time over a boundary ray scan; mu grid includes 0 when n_dir is odd
double diameter(const MetricField& g, int n_base = 64, int n_dir = 33,
                const TraceOptions& opt = {});

// influence set E = { (t,x) : D_g(x) < t < T - D_g(x) }
bool in_influence_set(const MetricField& g, double t, Vec2 x, double T, int n_dirs = 32,
                      const TraceOptions& opt = {});

// Jacobi field J'' + K J = 0 with J(0)=0, J'(0)=1 along a traced geodesic,
// evaluated at the stored samples
std::vector<double> jacobi_field(const MetricField& g, const Geodesic& geo);

struct SimplicityReport {
    bool simple = true;
    bool trapped_ray = false;
    bool conjugate_point = false;
    bool nonconvex_boundary = false;
    std::string detail;
};

// scans a boundary ray grid for trapped rays and Jacobi zeros and checks
// boundary convexity; a failure in any scan marks the metric non-simple
SimplicityReport check_simplicity(const MetricField& g, int n_base = 32, int n_dir = 17,
                                  const TraceOptions& opt = {});

}  // namespace lrt
