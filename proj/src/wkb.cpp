#include "rhlab/wkb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rhlab/errors.hpp"

namespace rhlab {

std::vector<double> linear_grid(double t_min, double t_max, int count) {
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i)
    grid[i] = t_min + (t_max - t_min) * i / double(count - 1);
  return grid;
}

void fit_top_fraction(WkbSweep& sw, double fraction) {
  std::vector<std::size_t> usable;
  for (std::size_t i = 0; i < sw.t_grid.size(); ++i)
    if (sw.used[i]) usable.push_back(i);
  std::size_t take = std::max<std::size_t>(
      4, static_cast<std::size_t>(std::ceil(usable.size() * fraction)));
  if (usable.size() < take || take < 4)
    throw DegenerateFit("sweep: fewer than 4 usable points in the fit window");
  std::vector<std::size_t> window(usable.end() - take, usable.end());

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i : window) {
    sx += sw.t_grid[i];
    sy += sw.log_chars[i];
    sxx += sw.t_grid[i] * sw.t_grid[i];
    sxy += sw.t_grid[i] * sw.log_chars[i];
  }
  double n = static_cast<double>(window.size());
  double denom = n * sxx - sx * sx;
  sw.slope = (n * sxy - sx * sy) / denom;
  sw.intercept = (sy - sw.slope * sx) / n;
  sw.residual = 0.0;
  for (std::size_t i : window)
    sw.residual = std::max(
        sw.residual, std::abs(sw.log_chars[i] - (sw.slope * sw.t_grid[i] + sw.intercept)));
}

WkbSweep sweep(const HyperellipticCurve& curve, const SlTwoSystem& a,
               const PathOnCurve& loop, const std::vector<double>& t_grid,
               const TransferOptions& opts, const Parallelism& par) {
  for (std::size_t i = 0; i + 1 < t_grid.size(); ++i)
    if (!(t_grid[i] < t_grid[i + 1]))
      throw NumericError("sweep: t_grid must be strictly increasing");

  WkbSweep sw;
  sw.t_grid = t_grid;
  sw.log_chars.assign(t_grid.size(), std::numeric_limits<double>::quiet_NaN());
  sw.used.assign(t_grid.size(), 0);
  parallel_for(
      t_grid.size(),
      [&](std::size_t i) {
        try {
          auto m = transfer_matrix(curve, a, t_grid[i], loop, opts);
          sw.log_chars[i] = log_char(m);
          sw.used[i] = 1;
        } catch (const VanishingTrace&) {
          sw.used[i] = 0;
        }
      },
      par);
  fit_top_fraction(sw, 0.5);
  return sw;
}

bool check_upper_bound(const WkbSweep& sw, double w, double slack) {
  return sw.slope <= w * (1.0 + slack);
}

WkbInstance make_wkb_instance(int ellipse_segments) {
  WkbInstance inst;
  // p(x) = (x^2 - 1)(x^2 - 16)(x - 6).
  // (x^2-1)(x^2-16) = x^4 - 17 x^2 + 16; times (x - 6):
  // x^5 - 6x^4 - 17x^3 + 102x^2 + 16x - 96.
  inst.curve = make_curve({-96.0, 16.0, 102.0, -17.0, -6.0, 1.0});

  // det(A) = -beta gamma = 6 (x^2 - 16) dx^2 / y^2; on the ellipse ring around
  // {-1, 1} this is 6/(x-6) * dx^2/(x^2-1), real negative on the real axis,
  // which makes the confocal ellipses nearly horizontal.
  double s = std::sqrt(6.0);
  inst.system.alpha = {};
  inst.system.beta = {{cplx(-4.0 * s), cplx(s)}};   // sqrt6 (x - 4) dx/y
  inst.system.gamma = {{cplx(-4.0 * s), cplx(-s)}}; // -sqrt6 (x + 4) dx/y
  inst.phi = det_map(inst.system);

  // Confocal ellipse with foci +-1: x = cosh(eta + i t).
  double eta = 0.9;
  std::vector<cplx> pts;
  pts.reserve(ellipse_segments + 1);
  for (int k = 0; k <= ellipse_segments; ++k) {
    double t = 2.0 * kPi * k / ellipse_segments;
    pts.push_back(std::cosh(cplx(eta, t)));
  }
  pts.back() = pts.front();
  inst.loop = polyline_path(pts);

  // Scale the system so the loop width is exactly 1.
  double w0 = width(inst.curve, inst.phi, inst.loop);
  inst.system = inst.system.scaled(1.0 / w0);
  inst.phi = det_map(inst.system);
  inst.loop_width = width(inst.curve, inst.phi, inst.loop);
  inst.margin = is_wkb_curve(inst.curve, inst.phi, inst.loop).margin;
  return inst;
}

}  // namespace rhlab
