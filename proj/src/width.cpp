#include "rhlab/width.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "rhlab/errors.hpp"

namespace rhlab {

namespace {

const double kGL12x[12] = {-0.9815606342467192, -0.9041172563704749, -0.7699026741943047,
                           -0.5873179542866175, -0.3678314989981802, -0.1252334085114689,
                           0.1252334085114689,  0.3678314989981802,  0.5873179542866175,
                           0.7699026741943047,  0.9041172563704749,  0.9815606342467192};
const double kGL12w[12] = {0.0471753363865118, 0.1069393259953184, 0.1600783285433462,
                           0.2031674267230659, 0.2334925365383548, 0.2491470458134028,
                           0.2491470458134028, 0.2334925365383548, 0.2031674267230659,
                           0.1600783285433462, 0.1069393259953184, 0.0471753363865118};

// Samples of the tracked integrand g(s) = Re(sqrt(f(z)) z') on one segment.
struct TrackedSegment {
  const HyperellipticCurve* curve;
  const QuadraticDifferential* phi;
  const Segment* seg;

  cplx f(double s) const {
    cplx z = seg_point(*seg, s);
    return phi->at(z) / curve->p(z);
  }
  // sqrt(f) continued from a reference value.
  cplx root(double s, cplx ref) const { return nearest_sqrt(f(s), ref); }
};

}  // namespace

double width(const HyperellipticCurve& curve, const QuadraticDifferential& phi,
             const PathOnCurve& path, const WidthOptions& opts) {
  if (path_clearance(curve, path) <= opts.clearance_tol)
    throw PathTooClose("width: path clearance below tolerance");
  if (phi.is_zero()) throw ZeroOnPath("width: phi vanishes identically");

  double total = 0.0;
  for (const auto& seg : path.segments) {
    TrackedSegment ts{&curve, &phi, &seg};

    // Dense tracked sampling; doubled until the quadrature stabilizes.
    int n = 128;
    double prev = 0.0;
    bool have_prev = false;
    for (int round = 0; round < 7; ++round, n *= 2) {
      std::vector<double> sample_s(n + 1);
      std::vector<cplx> sample_root(n + 1);
      cplx ref = std::sqrt(ts.f(0.0));
      double min_f = std::abs(ref) * std::abs(ref);
      for (int i = 0; i <= n; ++i) {
        double s = double(i) / n;
        ref = ts.root(s, ref);
        sample_s[i] = s;
        sample_root[i] = ref;
        min_f = std::min(min_f, std::norm(ref));
      }
      double scale = std::max({std::abs(phi.coeffs[0]), std::abs(phi.coeffs[1]),
                               std::abs(phi.coeffs[2])});
      if (min_f < sq(opts.zero_tol) * scale)
        throw ZeroOnPath("width: |phi| below tolerance on the path");

      auto g_at = [&](double s, cplx ref_root) {
        return (nearest_sqrt(ts.f(s), ref_root) * seg_deriv(*ts.seg, s)).real();
      };

      // Locate sign changes of g between samples, then integrate |g| on
      // kink-free panels.
      std::vector<double> cuts{0.0};
      for (int i = 0; i < n; ++i) {
        double g0 = (sample_root[i] * seg_deriv(*ts.seg, sample_s[i])).real();
        double g1 = (sample_root[i + 1] * seg_deriv(*ts.seg, sample_s[i + 1])).real();
        if ((g0 < 0.0) != (g1 < 0.0) && (g0 != 0.0 || g1 != 0.0)) {
          double lo = sample_s[i], hi = sample_s[i + 1];
          cplx ref_root = sample_root[i];
          for (int it = 0; it < 60; ++it) {
            double mid = 0.5 * (lo + hi);
            double gm = g_at(mid, ref_root);
            if ((gm < 0.0) == (g0 < 0.0))
              lo = mid;
            else
              hi = mid;
          }
          cuts.push_back(0.5 * (lo + hi));
        }
      }
      cuts.push_back(1.0);
      std::sort(cuts.begin(), cuts.end());

      double seg_total = 0.0;
      for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        double a = cuts[c], b = cuts[c + 1];
        if (b - a < 1e-15) continue;
        // Composite GL12 panels aligned with the sample grid.
        int panels = std::max(1, int(std::ceil((b - a) * n / 8.0)));
        cplx ref_root = sample_root[std::min<int>(n, int(std::floor(a * n)))];
        // Re-anchor the branch at the panel start.
        ref_root = ts.root(a, ref_root);
        for (int pnl = 0; pnl < panels; ++pnl) {
          double pa = a + (b - a) * pnl / panels;
          double pb = a + (b - a) * (pnl + 1) / panels;
          double acc = 0.0;
          for (int q = 0; q < 12; ++q) {
            double s = 0.5 * (pa + pb) + 0.5 * (pb - pa) * kGL12x[q];
            ref_root = ts.root(s, ref_root);
            acc += kGL12w[q] * std::abs((ref_root * seg_deriv(*ts.seg, s)).real());
          }
          seg_total += acc * 0.5 * (pb - pa);
        }
      }

      if (have_prev && std::abs(seg_total - prev) <= opts.tol * (1.0 + seg_total)) {
        prev = seg_total;
        break;
      }
      prev = seg_total;
      have_prev = true;
    }
    total += prev;
  }
  return total;
}

WkbCheck is_wkb_curve(const HyperellipticCurve& curve, const QuadraticDifferential& phi,
                      const PathOnCurve& loop, double tol, const WidthOptions& opts) {
  if (path_clearance(curve, loop) <= opts.clearance_tol)
    throw PathTooClose("is_wkb_curve: path clearance below tolerance");
  if (phi.is_zero()) throw ZeroOnPath("is_wkb_curve: phi vanishes identically");

  double margin = 1.0;
  double scale = std::max({std::abs(phi.coeffs[0]), std::abs(phi.coeffs[1]),
                           std::abs(phi.coeffs[2])});
  for (const auto& seg : loop.segments) {
    TrackedSegment ts{&curve, &phi, &seg};
    const int n = 2048;
    cplx ref = std::sqrt(ts.f(0.0));
    for (int i = 0; i <= n; ++i) {
      double s = double(i) / n;
      ref = ts.root(s, ref);
      if (std::norm(ref) < sq(opts.zero_tol) * scale)
        throw ZeroOnPath("is_wkb_curve: |phi| below tolerance on the loop");
      cplx v = ref * seg_deriv(seg, s);
      double av = std::abs(v);
      if (av == 0.0) continue;
      margin = std::min(margin, std::abs(v.real()) / av);
    }
  }
  return {margin > tol, margin};
}

}  // namespace rhlab
