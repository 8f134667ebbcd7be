#include "rhlab/differentials.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace rhlab {

QuadraticDifferential qd_product(const AbelianDifferential& a,
                                 const AbelianDifferential& b) {
  return {{a.coeffs[0] * b.coeffs[0],
           a.coeffs[0] * b.coeffs[1] + a.coeffs[1] * b.coeffs[0],
           a.coeffs[1] * b.coeffs[1]}};
}

QuadraticDifferential det_map(const SlTwoSystem& a) {
  QuadraticDifferential out = qd_product(a.alpha, a.alpha) * cplx(-1.0);
  return out - qd_product(a.beta, a.gamma);
}

QuadraticDifferential d_det(const SlTwoSystem& a, const SlTwoSystem& phi) {
  QuadraticDifferential out = qd_product(a.alpha, phi.alpha) * cplx(-2.0);
  out = out - qd_product(a.gamma, phi.beta);
  return out - qd_product(a.beta, phi.gamma);
}

SlTwoSystem conjugate(const SlTwoSystem& m, const std::array<cplx, 4>& g) {
  // g = [[g0, g1], [g2, g3]], g^-1 = [[g3, -g1], [-g2, g0]] for det g = 1.
  const cplx g0 = g[0], g1 = g[1], g2 = g[2], g3 = g[3];
  SlTwoSystem out;
  for (int k = 0; k < 2; ++k) {
    cplx a = m.alpha.coeffs[k], b = m.beta.coeffs[k], c = m.gamma.coeffs[k];
    // M' = g M g^-1 with M = [[a, b], [c, -a]].
    cplx m00 = g0 * a + g1 * c, m01 = g0 * b - g1 * a;
    cplx m10 = g2 * a + g3 * c, m11 = g2 * b - g3 * a;
    cplx a2 = m00 * g3 - m01 * g2;
    cplx b2 = -m00 * g1 + m01 * g0;
    cplx c2 = m10 * g3 - m11 * g2;
    out.alpha.coeffs[k] = a2;
    out.beta.coeffs[k] = b2;
    out.gamma.coeffs[k] = c2;
  }
  return out;
}

int noether_rank(const SlTwoSystem& a, double tol) {
  // Columns: products of alpha, beta, gamma with the basis 1-forms.
  Eigen::MatrixXcd m(3, 6);
  const AbelianDifferential basis[2] = {{{cplx(1.0), cplx(0.0)}},
                                        {{cplx(0.0), cplx(1.0)}}};
  const AbelianDifferential* entries[3] = {&a.alpha, &a.beta, &a.gamma};
  for (int e = 0; e < 3; ++e)
    for (int b = 0; b < 2; ++b) {
      QuadraticDifferential prod = qd_product(*entries[e], basis[b]);
      for (int r = 0; r < 3; ++r) m(r, 2 * e + b) = prod.coeffs[r];
    }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  double top = svd.singularValues()(0);
  if (top == 0.0) return 0;
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol * top) ++rank;
  return rank;
}

}  // namespace rhlab
