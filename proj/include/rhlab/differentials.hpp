#pragma once

#include <array>

#include "rhlab/curve.hpp"
#include "rhlab/types.hpp"

namespace rhlab {

// omega = (c0 + c1 x) dx / y in the canonical basis dx/y, x dx/y.
struct AbelianDifferential {
  std::array<cplx, 2> coeffs{cplx(0.0), cplx(0.0)};

  cplx at(cplx x) const { return coeffs[0] + coeffs[1] * x; }
  AbelianDifferential operator*(cplx c) const { return {{coeffs[0] * c, coeffs[1] * c}}; }
  AbelianDifferential operator+(const AbelianDifferential& o) const {
    return {{coeffs[0] + o.coeffs[0], coeffs[1] + o.coeffs[1]}};
  }
  AbelianDifferential operator-(const AbelianDifferential& o) const {
    return {{coeffs[0] - o.coeffs[0], coeffs[1] - o.coeffs[1]}};
  }
};

// phi = (q0 + q1 x + q2 x^2) dx^2 / y^2.
struct QuadraticDifferential {
  std::array<cplx, 3> coeffs{cplx(0.0), cplx(0.0), cplx(0.0)};

  cplx at(cplx x) const { return coeffs[0] + x * (coeffs[1] + x * coeffs[2]); }
  bool is_zero(double tol = 0.0) const {
    return std::abs(coeffs[0]) <= tol && std::abs(coeffs[1]) <= tol &&
           std::abs(coeffs[2]) <= tol;
  }
  QuadraticDifferential operator*(cplx c) const {
    return {{coeffs[0] * c, coeffs[1] * c, coeffs[2] * c}};
  }
  QuadraticDifferential operator+(const QuadraticDifferential& o) const {
    return {{coeffs[0] + o.coeffs[0], coeffs[1] + o.coeffs[1], coeffs[2] + o.coeffs[2]}};
  }
  QuadraticDifferential operator-(const QuadraticDifferential& o) const {
    return {{coeffs[0] - o.coeffs[0], coeffs[1] - o.coeffs[1], coeffs[2] - o.coeffs[2]}};
  }
  double coeff_norm() const {
    return std::sqrt(std::norm(coeffs[0]) + std::norm(coeffs[1]) + std::norm(coeffs[2]));
  }
};

// Exact product of two Abelian differentials, landing in the x^k dx^2/y^2 basis.
QuadraticDifferential qd_product(const AbelianDifferential& a,
                                 const AbelianDifferential& b);

// Traceless 2x2 matrix of Abelian differentials [[alpha, beta], [gamma, -alpha]].
struct SlTwoSystem {
  AbelianDifferential alpha, beta, gamma;

  SlTwoSystem scaled(cplx c) const { return {alpha * c, beta * c, gamma * c}; }
};

// det(A) = -alpha^2 - beta gamma.
QuadraticDifferential det_map(const SlTwoSystem& a);

// d(det) at A in direction Phi: -tr(A Phi) = -2 alpha phi1 - gamma phi2 - beta phi3.
QuadraticDifferential d_det(const SlTwoSystem& a, const SlTwoSystem& phi);

// Conjugation by a constant matrix g in SL2: A -> g A g^-1 (entries of g given
// row-major; det g assumed 1).
SlTwoSystem conjugate(const SlTwoSystem& a, const std::array<cplx, 4>& g);

// Rank of (phi1, phi2, phi3) -> alpha phi1 + beta phi2 + gamma phi3 into QD.
// Rank 3 is the surjectivity condition for d(det) at A.
int noether_rank(const SlTwoSystem& a, double tol = 1e-9);

}  // namespace rhlab
