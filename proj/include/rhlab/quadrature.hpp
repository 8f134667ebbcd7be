#pragma once

#include "rhlab/curve.hpp"
#include "rhlab/differentials.hpp"
#include "rhlab/types.hpp"

namespace rhlab {

struct QuadratureOptions {
  double abs_tol = 1e-8;
  double rel_tol = 1e-8;
  int max_cells = 300000;
};

struct QuadResult {
  double value = 0.0;
  double est_error = 0.0;
};

struct QuadResultC {
  cplx value = 0.0;
  double est_error = 0.0;
};

// Teichmueller-form Beltrami differential mu = k * conj(q) / |q|.
struct BeltramiRepresentative {
  QuadraticDifferential q;
  double k = 0.0;  // in [0, 1)
};

// ||phi|| = integral over the curve of |phi|, by two-sheet pullback to the
// x-plane: polar grids at branch points, adaptive cells elsewhere, and an
// inverted chart u = 1/x for the plane end(s).
QuadResult qd_norm(const HyperellipticCurve& curve, const QuadraticDifferential& phi,
                   const QuadratureOptions& opts = {});

// <mu, phi> = integral of mu * phi over the curve.
QuadResultC belt_pairing(const HyperellipticCurve& curve,
                         const BeltramiRepresentative& mu,
                         const QuadraticDifferential& phi,
                         const QuadratureOptions& opts = {});

struct TeichNormOptions {
  int coarse_samples = 180;
  int refine_steps = 60;
  unsigned seed = 20240915;
  QuadratureOptions quad{1e-6, 1e-6, 60000};
};

struct TeichNormResult {
  double value = 0.0;
  QuadraticDifferential maximizer;
};

// ||[mu]||_* = max over nonzero phi of Re<mu, phi> / ||phi||, by coarse
// sampling of the QD sphere plus local refinement.
TeichNormResult teich_norm(const HyperellipticCurve& curve,
                           const BeltramiRepresentative& mu,
                           const TeichNormOptions& opts = {});

}  // namespace rhlab
