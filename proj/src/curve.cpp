#include "rhlab/curve.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "rhlab/errors.hpp"

namespace rhlab {

std::vector<cplx> poly_roots(const std::vector<cplx>& coeffs) {
  int deg = static_cast<int>(coeffs.size()) - 1;
  while (deg > 0 && std::abs(coeffs[deg]) == 0.0) --deg;
  if (deg < 1) return {};
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -coeffs[i] / coeffs[deg];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  std::vector<cplx> roots(deg);
  for (int i = 0; i < deg; ++i) roots[i] = solver.eigenvalues()(i);
  // One Newton polish per root.
  auto eval = [&](cplx x, cplx& p, cplx& dp) {
    p = 0.0;
    dp = 0.0;
    for (int k = deg; k >= 0; --k) {
      if (k >= 1) dp = dp * x + coeffs[k] * double(k);
      p = p * x + coeffs[k];
    }
  };
  for (auto& r : roots) {
    for (int it = 0; it < 3; ++it) {
      cplx p, dp;
      eval(r, p, dp);
      if (std::abs(dp) < 1e-300) break;
      r -= p / dp;
    }
  }
  std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return roots;
}

HyperellipticCurve make_curve(const std::vector<cplx>& p_coeffs, double tol) {
  if (tol <= 0.0) throw NumericError("make_curve: tol must be positive");
  int deg = static_cast<int>(p_coeffs.size()) - 1;
  while (deg >= 0 && std::abs(p_coeffs[deg]) == 0.0) --deg;
  if (deg != 5 && deg != 6)
    throw BadDegree("make_curve: p must have degree 5 or 6, got " + std::to_string(deg));

  HyperellipticCurve curve;
  curve.p_coeffs.assign(p_coeffs.begin(), p_coeffs.begin() + deg + 1);
  curve.branch_points = poly_roots(curve.p_coeffs);

  double sep = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < curve.branch_points.size(); ++i)
    for (std::size_t j = i + 1; j < curve.branch_points.size(); ++j)
      sep = std::min(sep, std::abs(curve.branch_points[i] - curve.branch_points[j]));
  curve.separation = sep;
  if (!(sep >= tol))
    throw RepeatedRoots("make_curve: branch points closer than tol (separation=" +
                        std::to_string(sep) + ")");

  // Round-trip check: product of (x - r_i) times leading coefficient must
  // reproduce the coefficients to 1e-10 relative.
  std::vector<cplx> recon{1.0};
  for (cplx r : curve.branch_points) {
    std::vector<cplx> next(recon.size() + 1, 0.0);
    for (std::size_t k = 0; k < recon.size(); ++k) {
      next[k + 1] += recon[k];
      next[k] -= r * recon[k];
    }
    recon = next;
  }
  double scale = 0.0;
  for (auto& c : curve.p_coeffs) scale = std::max(scale, std::abs(c));
  for (int k = 0; k <= deg; ++k) {
    cplx want = curve.p_coeffs[k];
    cplx got = curve.p_coeffs[deg] * recon[k];
    if (std::abs(want - got) > 1e-10 * scale)
      throw NumericError("make_curve: root/coefficient round trip failed");
  }
  return curve;
}

}  // namespace rhlab
