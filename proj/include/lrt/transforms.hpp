#pragma once

#include "lrt/fields.hpp"
#include "lrt/geodesics.hpp"

namespace lrt {

// Trapezoid quadrature along traced geodesics. Samples are uniform in arc
// length except the final boundary-hitting interval, which the rule handles
// as a short cell.

// geodesic ray transform of a spatial scalar
double ray_transform(const ScalarField2& f, const Geodesic& geo);
cplx ray_transform(const CScalarField2& f, const Geodesic& geo);

// geodesic ray transform of a spatial one-form a1 dx1 + a2 dx2, pairing with
// the coordinate velocity
double ray_transform_oneform(const ScalarField2& a1, const ScalarField2& a2,
                             const Geodesic& geo);

// moment remainder transform: integral of (i r)^j h(gamma(r)) dr
cplx remainder_transform(int j, const ScalarField2& h, const Geodesic& geo);
cplx remainder_transform(int j, const CScalarField2& h, const Geodesic& geo);

// light ray transform of a space-time scalar along (r+s, gamma(r))
double light_transform(const STScalar& f, const Geodesic& geo, double s);
cplx light_transform(const CSTScalar& f, const Geodesic& geo, double s);
// one-form version pairs with beta' = (1, gamma')
double light_transform_oneform(const STOneForm& B, const Geodesic& geo, double s);

struct Sinogram {
    std::vector<BoundaryRay> rays;
    std::vector<double> value;  // one entry per ray, ray order = grid order
};

struct LightSinogram {
    Axis s_axis;
    std::vector<BoundaryRay> rays;
    std::vector<double> value;  // s-major: value[is * rays.size() + iray]

    double& at(int is, std::size_t iray) { return value[std::size_t(is) * rays.size() + iray]; }
    double at(int is, std::size_t iray) const {
        return value[std::size_t(is) * rays.size() + iray];
    }
};

// OpenMP-parallel assemblies (deterministic: one writer per output cell)
Sinogram forward_ray(const MetricField& g, const ScalarField2& f, int n_base, int n_dir,
                     const TraceOptions& opt = {});
Sinogram forward_ray_oneform(const MetricField& g, const ScalarField2& a1,
                             const ScalarField2& a2, int n_base, int n_dir,
                             const TraceOptions& opt = {});
LightSinogram forward_light(const MetricField& g, const STScalar& f, const Axis& s_axis,
                            int n_base, int n_dir, const TraceOptions& opt = {});
LightSinogram forward_light_oneform(const MetricField& g, const STOneForm& B, const Axis& s_axis,
                                    int n_base, int n_dir, const TraceOptions& opt = {});

// serial reference twins, bit-identical to the parallel kernels
namespace ref {
Sinogram forward_ray(const MetricField& g, const ScalarField2& f, int n_base, int n_dir,
                     const TraceOptions& opt = {});
LightSinogram forward_light(const MetricField& g, const STScalar& f, const Axis& s_axis,
                            int n_base, int n_dir, const TraceOptions& opt = {});
}  // namespace ref

}  // namespace lrt
