#pragma once

#include "rhlab/curve.hpp"
#include "rhlab/differentials.hpp"
#include "rhlab/path.hpp"

namespace rhlab {

struct WidthOptions {
  double tol = 1e-10;          // target absolute+relative accuracy
  double zero_tol = 1e-8;      // minimum of |phi| allowed on the path
  double clearance_tol = 1e-9;
};

// w_phi(gamma) = integral over gamma of |Re(sqrt(phi) dz)|, computed with a
// continuously tracked square-root branch and panel splits at the zero
// crossings of Re(sqrt(phi) z'). Branch-independent and additive under
// concatenation. Throws ZeroOnPath / PathTooClose.
double width(const HyperellipticCurve& curve, const QuadraticDifferential& phi,
             const PathOnCurve& path, const WidthOptions& opts = {});

struct WkbCheck {
  bool is_wkb = false;
  double margin = 0.0;  // min |Re(sqrt(phi) z')| / |sqrt(phi) z'| over the loop
};

// A loop is a WKB curve for phi when it stays uniformly transverse to the
// vertical foliation: margin > tol.
WkbCheck is_wkb_curve(const HyperellipticCurve& curve, const QuadraticDifferential& phi,
                      const PathOnCurve& loop, double tol = 0.05,
                      const WidthOptions& opts = {});

}  // namespace rhlab
