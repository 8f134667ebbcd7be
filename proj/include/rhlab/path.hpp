#pragma once

#include <variant>
#include <vector>

#include "rhlab/curve.hpp"
#include "rhlab/types.hpp"

namespace rhlab {

struct LineSeg {
  cplx a, b;
};

// z(s) = center + radius * exp(i (theta0 + s*dtheta)), s in [0,1].
// dtheta > 0 is counterclockwise.
struct ArcSeg {
  cplx center;
  double radius;
  double theta0;
  double dtheta;
};

using Segment = std::variant<LineSeg, ArcSeg>;

cplx seg_point(const Segment& seg, double s);
cplx seg_deriv(const Segment& seg, double s);
double seg_length(const Segment& seg);
Segment seg_reversed(const Segment& seg);
double seg_distance(const Segment& seg, cplx pt);

// Piecewise path in the x-plane with a chosen starting branch of y = sqrt(p).
// start_sheet = +1 picks the principal square root at the start point.
struct PathOnCurve {
  std::vector<Segment> segments;
  int start_sheet = +1;

  cplx start() const { return seg_point(segments.front(), 0.0); }
  cplx end() const { return seg_point(segments.back(), 1.0); }
  double length() const;
  PathOnCurve reversed() const;
  PathOnCurve then(const PathOnCurve& next) const;  // concatenation, this first
  bool is_closed_in_plane(double tol = 1e-9) const;
};

// Minimal distance from the path to any branch point of the curve.
double path_clearance(const HyperellipticCurve& curve, const PathOnCurve& path);

// Branch selection helper: the square root of w closest to ref.
cplx nearest_sqrt(cplx w, cplx ref);

// Value of the tracked branch of y = sqrt(p) at the end of the path.
// Continuation is adaptive: consecutive y samples must differ by < 50%.
cplx continue_y(const HyperellipticCurve& curve, const PathOnCurve& path);

// End sheet of the analytic continuation of y along the path (+1 / -1
// relative to the principal branch at the end point). Throws PathTooClose.
int continue_sheet(const HyperellipticCurve& curve, const PathOnCurve& path,
                   double clearance_tol = 1e-9);

// Convenience constructors.
PathOnCurve polyline_path(const std::vector<cplx>& pts, int start_sheet = +1);
PathOnCurve circle_path(cplx center, double radius, double theta_start = 0.0,
                        bool ccw = true, int start_sheet = +1);

}  // namespace rhlab
