#pragma once

#include <vector>

#include "rhlab/types.hpp"

namespace rhlab {

// Genus-2 hyperelliptic curve y^2 = p(x), deg p in {5, 6}, simple roots.
struct HyperellipticCurve {
  std::vector<cplx> p_coeffs;      // p(x) = sum p_coeffs[k] x^k
  std::vector<cplx> branch_points; // finite roots of p
  int genus = 2;
  double separation = 0.0;         // min pairwise distance between finite roots

  int degree() const { return static_cast<int>(p_coeffs.size()) - 1; }
  bool infinity_is_branch_point() const { return degree() == 5; }

  cplx p(cplx x) const {
    cplx v = 0.0;
    for (auto it = p_coeffs.rbegin(); it != p_coeffs.rend(); ++it) v = v * x + *it;
    return v;
  }
  cplx dp(cplx x) const {
    cplx v = 0.0;
    for (int k = degree(); k >= 1; --k) v = v * x + p_coeffs[k] * double(k);
    return v;
  }
};

// Roots of a complex polynomial via the companion matrix.
std::vector<cplx> poly_roots(const std::vector<cplx>& coeffs);

// Builds and validates a curve. Throws BadDegree / RepeatedRoots.
HyperellipticCurve make_curve(const std::vector<cplx>& p_coeffs, double tol = 1e-7);

}  // namespace rhlab
