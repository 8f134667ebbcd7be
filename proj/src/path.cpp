#include "rhlab/path.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rhlab/errors.hpp"

namespace rhlab {

cplx seg_point(const Segment& seg, double s) {
  if (const auto* line = std::get_if<LineSeg>(&seg))
    return line->a + (line->b - line->a) * s;
  const auto& arc = std::get<ArcSeg>(seg);
  return arc.center + arc.radius * std::exp(cplx(0.0, arc.theta0 + s * arc.dtheta));
}

cplx seg_deriv(const Segment& seg, double s) {
  if (const auto* line = std::get_if<LineSeg>(&seg)) return line->b - line->a;
  const auto& arc = std::get<ArcSeg>(seg);
  return cplx(0.0, arc.dtheta) * arc.radius *
         std::exp(cplx(0.0, arc.theta0 + s * arc.dtheta));
}

double seg_length(const Segment& seg) {
  if (const auto* line = std::get_if<LineSeg>(&seg)) return std::abs(line->b - line->a);
  const auto& arc = std::get<ArcSeg>(seg);
  return arc.radius * std::abs(arc.dtheta);
}

Segment seg_reversed(const Segment& seg) {
  if (const auto* line = std::get_if<LineSeg>(&seg)) return LineSeg{line->b, line->a};
  const auto& arc = std::get<ArcSeg>(seg);
  return ArcSeg{arc.center, arc.radius, arc.theta0 + arc.dtheta, -arc.dtheta};
}

double seg_distance(const Segment& seg, cplx pt) {
  if (const auto* line = std::get_if<LineSeg>(&seg)) {
    cplx d = line->b - line->a;
    double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(pt - line->a);
    double t = std::clamp(((pt - line->a) * std::conj(d)).real() / len2, 0.0, 1.0);
    return std::abs(pt - (line->a + t * d));
  }
  const auto& arc = std::get<ArcSeg>(seg);
  cplx rel = pt - arc.center;
  double ang = std::arg(rel);
  // Is the point's angle inside the swept window (mod 2pi)?
  double sweep = arc.dtheta;
  double from = arc.theta0;
  if (sweep < 0.0) {
    from += sweep;
    sweep = -sweep;
  }
  double rel_ang = std::fmod(ang - from, 2.0 * kPi);
  if (rel_ang < 0.0) rel_ang += 2.0 * kPi;
  if (rel_ang <= sweep || sweep >= 2.0 * kPi)
    return std::abs(std::abs(rel) - arc.radius);
  double d0 = std::abs(pt - seg_point(seg, 0.0));
  double d1 = std::abs(pt - seg_point(seg, 1.0));
  return std::min(d0, d1);
}

double PathOnCurve::length() const {
  double total = 0.0;
  for (const auto& seg : segments) total += seg_length(seg);
  return total;
}

PathOnCurve PathOnCurve::reversed() const {
  PathOnCurve out;
  out.segments.reserve(segments.size());
  for (auto it = segments.rbegin(); it != segments.rend(); ++it)
    out.segments.push_back(seg_reversed(*it));
  out.start_sheet = start_sheet;  // caller re-derives the sheet if needed
  return out;
}

PathOnCurve PathOnCurve::then(const PathOnCurve& next) const {
  PathOnCurve out = *this;
  out.segments.insert(out.segments.end(), next.segments.begin(), next.segments.end());
  return out;
}

bool PathOnCurve::is_closed_in_plane(double tol) const {
  return std::abs(end() - start()) <= tol * (1.0 + length());
}

double path_clearance(const HyperellipticCurve& curve, const PathOnCurve& path) {
  double clearance = std::numeric_limits<double>::infinity();
  for (const auto& seg : path.segments)
    for (cplx e : curve.branch_points)
      clearance = std::min(clearance, seg_distance(seg, e));
  return clearance;
}

cplx nearest_sqrt(cplx w, cplx ref) {
  cplx s = std::sqrt(w);
  return (std::abs(s - ref) <= std::abs(s + ref)) ? s : -s;
}

namespace {

// Continues y = sqrt(p) along one segment starting from value y0 at s=0.
cplx continue_y_segment(const HyperellipticCurve& curve, const Segment& seg, cplx y0) {
  double s = 0.0;
  double h = 0.25;
  cplx y = y0;
  const double h_min = 1e-12;
  while (s < 1.0) {
    // Cap the step so arg(p) cannot wrap within one step: |d log p / ds| * h <= 0.4.
    cplx z = seg_point(seg, s);
    double logderiv =
        std::abs(curve.dp(z) * seg_deriv(seg, s)) / std::max(std::abs(curve.p(z)), 1e-300);
    double cap = 0.4 / std::max(logderiv, 1e-3);
    double step = std::min({h, cap, 1.0 - s});
    cplx y_new = nearest_sqrt(curve.p(seg_point(seg, s + step)), y);
    double rel = std::abs(y_new - y) / std::abs(y);
    if (rel > 0.5) {
      h = step * 0.5;
      if (h < h_min)
        throw PathTooClose("continue_y: cannot resolve branch, path too close to a branch point");
      continue;
    }
    s += step;
    y = y_new;
    if (rel < 0.05) h = std::min(0.5, h * 1.6);
  }
  return y;
}

}  // namespace

cplx continue_y(const HyperellipticCurve& curve, const PathOnCurve& path) {
  cplx y = std::sqrt(curve.p(path.start()));
  if (path.start_sheet < 0) y = -y;
  for (const auto& seg : path.segments) y = continue_y_segment(curve, seg, y);
  return y;
}

int continue_sheet(const HyperellipticCurve& curve, const PathOnCurve& path,
                   double clearance_tol) {
  if (path_clearance(curve, path) <= clearance_tol)
    throw PathTooClose("continue_sheet: path clearance below tolerance");
  cplx y_end = continue_y(curve, path);
  cplx principal = std::sqrt(curve.p(path.end()));
  return (std::abs(y_end - principal) <= std::abs(y_end + principal)) ? +1 : -1;
}

PathOnCurve polyline_path(const std::vector<cplx>& pts, int start_sheet) {
  PathOnCurve path;
  path.start_sheet = start_sheet;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    path.segments.push_back(LineSeg{pts[i], pts[i + 1]});
  return path;
}

PathOnCurve circle_path(cplx center, double radius, double theta_start, bool ccw,
                        int start_sheet) {
  PathOnCurve path;
  path.start_sheet = start_sheet;
  path.segments.push_back(
      ArcSeg{center, radius, theta_start, ccw ? 2.0 * kPi : -2.0 * kPi});
  return path;
}

}  // namespace rhlab
