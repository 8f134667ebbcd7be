#pragma once

#include <vector>

#include "rhlab/transfer.hpp"
#include "rhlab/width.hpp"

namespace rhlab {

struct WkbSweep {
  std::vector<double> t_grid;           // strictly increasing
  std::vector<double> log_chars;        // log|chi| per grid point (NaN if unusable)
  std::vector<unsigned char> used;      // 0 where the trace vanished numerically
  double slope = 0.0;                   // affine fit over the top half
  double intercept = 0.0;
  double residual = 0.0;                // max |deviation| over the fit window
};

std::vector<double> linear_grid(double t_min, double t_max, int count);

// Sweeps t over the grid, integrating the loop monodromy of d + tA and
// fitting log|chi| ~ slope * t + intercept on the top half of the grid.
// Throws DegenerateFit when fewer than 4 usable points remain there.
WkbSweep sweep(const HyperellipticCurve& curve, const SlTwoSystem& a,
               const PathOnCurve& loop, const std::vector<double>& t_grid,
               const TransferOptions& opts = {}, const Parallelism& par = {});

// Refit helper: affine fit over the top fraction of the used grid.
void fit_top_fraction(WkbSweep& sweep, double fraction);

// slope <= w * (1 + slack); the inequality side of the growth law.
bool check_upper_bound(const WkbSweep& sweep, double w, double slack);

// ---------------------------------------------------------------------------
// A reproducible instance with a certified transverse loop: branch points
// +-1, +-4, 6; the quadratic differential proportional to (x^2-16) dx^2/y^2
// makes confocal ellipses around {-1, 1} uniformly transverse to the
// vertical foliation. The system is scaled so the loop width is 1.
// ---------------------------------------------------------------------------

struct WkbInstance {
  HyperellipticCurve curve;
  SlTwoSystem system;            // det(system) = phi
  QuadraticDifferential phi;
  PathOnCurve loop;              // polyline ellipse, sheet-closed
  double loop_width = 0.0;       // width of the loop for phi (=1 after scaling)
  double margin = 0.0;           // transversality margin of the loop
};

WkbInstance make_wkb_instance(int ellipse_segments = 256);

}  // namespace rhlab
