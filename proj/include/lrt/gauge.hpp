#pragma once

#include "lrt/fields.hpp"
#include "lrt/metric.hpp"

namespace lrt {

// Gauge structure of coefficient pairs on (0,T) x disc: exterior derivative,
// the potential-pair transformation, and extraction of a potential from a
// one-form that is (numerically) exact.

// central differences inside, second-order one-sided at the grid edges
STOneForm exterior_derivative(const STScalar& psi);

struct GaugePair {
    STOneForm A;
    STScalar q;
};

// A -> A + d psi, q -> q + (1/2) box(psi) - (1/2) A(grad psi)
//                          - (1/4) <grad psi, grad psi>
// in the Lorentzian metric -dt^2 + g with g = c^-2 (dx^2 + dy^2); psi must be
// grid-backed, derivatives are finite differences on its grid
GaugePair gauge_transform(const STOneForm& A, const STScalar& q, const STScalar& psi,
                          const MetricField& g);

struct PotentialResult {
    STScalar psi;            // from the time-path family, zero on the initial slice
    double discrepancy = 0.0;      // max |psi_time_first - psi_space_first|
    double discrepancy_rel = 0.0;  // discrepancy / max |psi|
    double boundary_max = 0.0;     // max |psi| at nodes outside the open disc
    bool boundary_ok = false;
};

// Integrates B along two path families from anchors where an exact form with
// support inside the influence set must vanish: (a) straight up in t from the
// initial slice, (b) radially inward from the spatial boundary at fixed t.
// The mismatch between the families is the exactness certificate.
PotentialResult extract_potential(const STOneForm& B, const Axis& at, const Axis& ax,
                                  const Axis& ay);

struct EquivalenceResult {
    bool equivalent = false;
    double residual = 0.0;  // relative L2 of A1 - A2 - d psi
    PotentialResult potential;
};

EquivalenceResult check_gauge_equivalence(const STOneForm& A1, const STOneForm& A2, double tol,
                                          const Axis& at, const Axis& ax, const Axis& ay);

}  // namespace lrt
