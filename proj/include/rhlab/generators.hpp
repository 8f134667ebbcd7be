#pragma once

#include <array>
#include <optional>
#include <vector>

#include "rhlab/path.hpp"

namespace rhlab {

// Standard generating set (a1, b1, a2, b2) of the surface group of a genus-2
// curve, realized as sheet-closed loops in the x-plane from one base point.
// The relation word a1 b1 a1^-1 b1^-1 a2 b2 a2^-1 b2^-1 is contractible; this
// is certified downstream by the monodromy defect.
struct SurfaceGroupGenerators {
  std::array<PathOnCurve, 4> loops;  // a1, b1, a2, b2
  cplx base_point;
  std::vector<PathOnCurve> lassos;   // one per branch point, angular order

  // Relation word in generator letters: +k = generator k, -k = inverse.
  static constexpr std::array<int, 8> relation_word = {1, 2, -1, -2, 3, 4, -3, -4};

  // The relation word spelled out as a single path (inverses reversed).
  PathOnCurve relation_path() const;
};

struct RoutingHints {
  std::optional<cplx> base_point;
  double radius_scale = 1.0;  // lasso circle radius = separation/4 * scale
};

// Builds the generators from branch-cut pair encirclements. Loops are built
// from simple lassos (corridor + circle + corridor back) combined as
//   a1 = l1 l2,  b1 = l3 l1,  a2 = l4 l5,  b2 = l6 l4,
// where l1..l6 are the lassos around the branch points in angular order as
// seen from the base point (l6 encircles infinity when deg p = 5).
// Throws DegenerateConfiguration when no clear routing exists.
SurfaceGroupGenerators canonical_generators(const HyperellipticCurve& curve,
                                            const RoutingHints& hints = {});

}  // namespace rhlab
