#include "rhlab/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rhlab/errors.hpp"

namespace rhlab {

PathOnCurve SurfaceGroupGenerators::relation_path() const {
  PathOnCurve word;
  word.start_sheet = loops[0].start_sheet;
  for (int letter : relation_word) {
    const PathOnCurve& gen = loops[std::abs(letter) - 1];
    PathOnCurve piece = (letter > 0) ? gen : gen.reversed();
    word.segments.insert(word.segments.end(), piece.segments.begin(),
                         piece.segments.end());
  }
  return word;
}

namespace {

PathOnCurve finite_lasso(cplx base, cplx target, double radius) {
  cplx dir = (target - base) / std::abs(target - base);
  cplx entry = target - radius * dir;
  PathOnCurve lasso;
  lasso.segments.push_back(LineSeg{base, entry});
  lasso.segments.push_back(ArcSeg{target, radius, std::arg(entry - target), 2.0 * kPi});
  lasso.segments.push_back(LineSeg{entry, base});
  return lasso;
}

PathOnCurve infinity_lasso(cplx base, cplx centroid, double big_radius) {
  cplx dir = (base - centroid) / std::abs(base - centroid);
  cplx entry = centroid + big_radius * dir;
  PathOnCurve lasso;
  lasso.segments.push_back(LineSeg{base, entry});
  // Clockwise in the plane = once around infinity.
  lasso.segments.push_back(ArcSeg{centroid, big_radius, std::arg(dir), -2.0 * kPi});
  lasso.segments.push_back(LineSeg{entry, base});
  return lasso;
}

double lasso_clearance_to_others(const PathOnCurve& lasso,
                                 const std::vector<cplx>& branch_points, cplx target,
                                 bool skip_target) {
  double clearance = std::numeric_limits<double>::infinity();
  for (cplx e : branch_points) {
    if (skip_target && std::abs(e - target) == 0.0) continue;
    for (const auto& seg : lasso.segments)
      clearance = std::min(clearance, seg_distance(seg, e));
  }
  return clearance;
}

}  // namespace

SurfaceGroupGenerators canonical_generators(const HyperellipticCurve& curve,
                                            const RoutingHints& hints) {
  const auto& pts = curve.branch_points;
  const double sep = curve.separation;
  cplx centroid = std::accumulate(pts.begin(), pts.end(), cplx(0.0)) / double(pts.size());
  double spread = 0.0;
  for (cplx e : pts) spread = std::max(spread, std::abs(e - centroid));

  double radius = sep / 4.0 * hints.radius_scale;
  double clear_min = sep / 8.0 * hints.radius_scale;

  // Candidate base points: below the branch cloud with a lateral offset to
  // break collinear layouts. A hinted base point is tried alone.
  std::vector<cplx> candidates;
  if (hints.base_point) {
    candidates.push_back(*hints.base_point);
  } else {
    for (int k = 0; k < 8; ++k) {
      double lateral = sep * (0.37 + 0.618034 * k);
      candidates.push_back(centroid + cplx(lateral, -(2.2 * spread + 1.5 * sep)));
    }
  }

  for (cplx base : candidates) {
    // Angular order of the finite branch points as seen from the base.
    std::vector<std::size_t> order(pts.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
      return std::arg(pts[i] - base) < std::arg(pts[j] - base);
    });

    std::vector<PathOnCurve> lassos;
    bool ok = true;
    for (std::size_t idx : order) {
      PathOnCurve lasso = finite_lasso(base, pts[idx], radius);
      if (lasso_clearance_to_others(lasso, pts, pts[idx], true) < clear_min) {
        ok = false;
        break;
      }
      lassos.push_back(std::move(lasso));
    }
    if (!ok) continue;
    if (curve.infinity_is_branch_point()) {
      double reach = 0.0;
      for (cplx e : pts) reach = std::max(reach, std::abs(e - centroid));
      reach = std::max(reach, std::abs(base - centroid));
      lassos.push_back(infinity_lasso(base, centroid, 2.0 * reach + 2.0 * sep));
    }
    if (lassos.size() != 6) continue;

    // a1 = l1 l2, b1 = l3 l1, a2 = l4 l5, b2 = l6 l4 (1-based angular order).
    // This word pattern satisfies the genus-2 relation and spans H1; see the
    // word-reduction test for the certificate.
    auto compose = [&](int i, int j) {
      PathOnCurve loop = lassos[i].then(lassos[j]);
      loop.start_sheet = +1;
      return loop;
    };
    SurfaceGroupGenerators gens;
    gens.base_point = base;
    gens.lassos = lassos;
    gens.loops = {compose(0, 1), compose(2, 0), compose(3, 4), compose(5, 3)};

    bool sheet_ok = true;
    for (const auto& loop : gens.loops) {
      if (continue_sheet(curve, loop) != loop.start_sheet) {
        sheet_ok = false;
        break;
      }
    }
    if (sheet_ok) return gens;
  }
  throw DegenerateConfiguration(
      "canonical_generators: no clear loop routing found; supply RoutingHints");
}

}  // namespace rhlab
