#pragma once

#include "fdiff/expr.hpp"
#include "fdiff/path.hpp"

namespace fdiff {

/// Contour integral of f along p by per-segment adaptive Gauss-Legendre
/// quadrature of f(gamma(t)) * gamma'(t) on the flattened polyline geometry.
/// A mapped node with a holomorphic map is rewritten through the pullback
/// integrand (f o phi) * phi' only when allow_pullback is set; otherwise the
/// mapped piece falls back to the Riemann-Stieltjes route so the two routes
/// stay independent.
cplx integrate_segmentwise(const expr& f, const path& p, double tol = 1e-9,
                           bool allow_pullback = false);

/// Contour integral as a limit of midpoint-tagged Riemann-Stieltjes sums on
/// dyadic partitions of [lo,hi], refined until successive levels differ by
/// less than tol. Works for every path variant. Throws NonConvergent when
/// max_depth is reached first.
cplx integrate_rs(const expr& f, const path& p, double lo, double hi, double tol = 1e-7,
                  int max_depth = 22);

cplx integrate_rs(const expr& f, const path& p, double tol = 1e-7, int max_depth = 22);

} // namespace fdiff
