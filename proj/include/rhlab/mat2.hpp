#pragma once

#include <cmath>

#include "rhlab/types.hpp"

namespace rhlab {

// Complex 2x2 matrix [[a, b], [c, d]].
struct Mat2 {
  cplx a{0.0}, b{0.0}, c{0.0}, d{0.0};

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static Mat2 diag(cplx x, cplx y) { return {x, 0.0, 0.0, y}; }

  Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
  Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  Mat2 operator*(cplx s) const { return {a * s, b * s, c * s, d * s}; }
  Mat2 operator*(double s) const { return {a * s, b * s, c * s, d * s}; }

  cplx trace() const { return a + d; }
  cplx det() const { return a * d - b * c; }
  Mat2 adjugate() const { return {d, -b, -c, a}; }
  double max_abs() const {
    return std::max(std::max(std::abs(a), std::abs(b)),
                    std::max(std::abs(c), std::abs(d)));
  }
};

// 2x2 matrix stored as exp(log_scale) * m with max-entry magnitude of m kept
// in [1/2, 2]. Survives growth like exp(t w) far beyond double range.
struct RenormalizedMatrix {
  Mat2 m = Mat2::identity();
  double log_scale = 0.0;

  static RenormalizedMatrix identity() { return {}; }

  // Renormalizes by an exact power of two; matrices already in the window
  // [1/2, 2) are left untouched so the identity stays exactly (I, 0).
  static RenormalizedMatrix from(const Mat2& raw, double log_extra = 0.0) {
    RenormalizedMatrix out;
    double mx = raw.max_abs();
    if (mx <= 0.0 || (mx >= 0.5 && mx < 2.0)) {
      out.m = raw;
      out.log_scale = log_extra;
      return out;
    }
    int e = 0;
    std::frexp(mx, &e);  // mx = f * 2^e, f in [0.5, 1)
    double scale = std::ldexp(1.0, -e);
    out.m = raw * scale;
    out.log_scale = log_extra + e * 0.6931471805599453094;
    return out;
  }

  RenormalizedMatrix operator*(const RenormalizedMatrix& o) const {
    return from(m * o.m, log_scale + o.log_scale);
  }

  // Inverse assuming the represented matrix is unimodular: inv = adjugate at
  // the same scale.
  RenormalizedMatrix inverse_unimodular() const {
    return from(m.adjugate(), log_scale);
  }

  // |2 log_scale + log|det m||  and  |arg det m| -- both ~0 for transfer
  // matrices of trace-free systems.
  double unimodularity_defect() const {
    cplx dm = m.det();
    return std::abs(2.0 * log_scale + std::log(std::abs(dm))) + std::abs(std::arg(dm));
  }

  // Represented matrix, safe only when |log_scale| is moderate.
  Mat2 represented() const { return m * std::exp(log_scale); }

  // Max-entry distance to another renormalized matrix, computed at the scale
  // of the larger one; saturates for wildly different scales.
  double distance_to(const RenormalizedMatrix& o) const {
    double ls = std::max(log_scale, o.log_scale);
    double sa = log_scale - ls, sb = o.log_scale - ls;
    Mat2 diff = m * std::exp(std::max(sa, -700.0)) - o.m * std::exp(std::max(sb, -700.0));
    double mx = diff.max_abs();
    if (ls > 700.0) return std::exp(700.0);
    return mx * std::exp(ls);
  }
};

}  // namespace rhlab
