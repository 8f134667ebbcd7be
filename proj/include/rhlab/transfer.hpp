#pragma once

#include <array>
#include <functional>
#include <vector>

#include "rhlab/differentials.hpp"
#include "rhlab/generators.hpp"
#include "rhlab/mat2.hpp"
#include "rhlab/path.hpp"

namespace rhlab {

struct TransferOptions {
  double tol = 1e-12;        // local error tolerance per step
  double clearance_tol = 1e-9;
  double h_min = 1e-13;      // step underflow floor (in segment parameter)
};

// Solves dF + t A F = 0 along the path (adaptive embedded Runge-Kutta of
// order 5 on the pulled-back coefficient), renormalizing after each step.
// The y-sheet is carried as part of the state. Throws PathTooClose /
// StepUnderflow.
RenormalizedMatrix transfer_matrix(const HyperellipticCurve& curve,
                                   const SlTwoSystem& a, double t,
                                   const PathOnCurve& path,
                                   const TransferOptions& opts = {});

// Monodromy representation on the four canonical generators. Stored matrices
// are loop monodromies rho(g) = T(g)^-1 so that rho is a homomorphism; the
// defect is the max-entry distance of the relation word from the identity.
struct Representation {
  std::array<RenormalizedMatrix, 4> gens;
  double t = 0.0;
  double defect = 0.0;
};

Representation representation(const HyperellipticCurve& curve, const SlTwoSystem& a,
                              double t, const SurfaceGroupGenerators& gens,
                              const TransferOptions& opts = {},
                              double defect_tol = 1e-8);

// Evaluates a word in generator letters (+k / -k) of a representation.
RenormalizedMatrix evaluate_word(const Representation& rep,
                                 const std::vector<int>& word);

// log |trace| of the represented matrix. Throws VanishingTrace when the
// normalized trace is numerically zero.
double log_char(const RenormalizedMatrix& mat, double trace_tol = 1e-12);

// ---------------------------------------------------------------------------
// Model system on [0, 1]:  f' + (B(s) + t diag(a, -a)) f = 0.
// ---------------------------------------------------------------------------

struct ModelOde {
  std::function<Mat2(double)> b;   // bounded off-scale coefficient
  std::function<cplx(double)> a;   // diagonal eigenvalue coefficient
};

RenormalizedMatrix wkb_model_transfer(const ModelOde& model, double t,
                                      const TransferOptions& opts = {});

// Uniformly sampled paths with cubic interpolation, for callers that hand in
// sample arrays rather than callables.
struct SampledScalarPath {
  std::vector<cplx> samples;  // values at s = k/(n-1)
  cplx at(double s) const;
};
struct SampledMatrixPath {
  std::vector<Mat2> samples;
  Mat2 at(double s) const;
};

ModelOde model_from_samples(const SampledMatrixPath& b, const SampledScalarPath& a);

// Deviation of the normalized f_t(1) from the rank-one projection onto the
// growing mode: with r = integral of a and the matching diagonal entry of B,
// the represented f_t(1) times exp(integral(b_jj) -/+ t r) converges to the
// corner matrix. Returns the max-entry distance.
double model_corner_deviation(const ModelOde& model, double t,
                              const TransferOptions& opts = {});

// log ||f_t(1)|| - t * integral |Re a|; bounded in t by the WKB estimate.
double model_log_norm_gap(const ModelOde& model, double t,
                          const TransferOptions& opts = {});

}  // namespace rhlab
