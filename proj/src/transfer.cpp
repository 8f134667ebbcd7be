#include "rhlab/transfer.hpp"

#include <algorithm>
#include <cmath>

#include "rhlab/errors.hpp"

namespace rhlab {

namespace {

// Dormand-Prince 5(4) coefficients.
const double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
const double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
const double kB5[7] = {35.0 / 384,      0.0,  500.0 / 1113, 125.0 / 192,
                       -2187.0 / 6784, 11.0 / 84, 0.0};
const double kB4[7] = {5179.0 / 57600,  0.0,       7571.0 / 16695, 393.0 / 640,
                       -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

// State advanced along one segment: the normalized matrix plus the y-branch.
struct OdeState {
  Mat2 m;
  cplx y;
};

// Generic adaptive DP5 drive over s in [0,1] for m' = -L(s) m (and an
// optional auxiliary y' = g(s, y)). L is the full coefficient including t.
template <typename CoefFn, typename AuxFn>
void integrate_segment(const CoefFn& coef, const AuxFn& aux, bool has_aux,
                       bool project_det, RenormalizedMatrix& acc, cplx& y,
                       double coef_scale, const TransferOptions& opts) {
  double s = 0.0;
  double h = std::min(0.1, 0.5 / (1.0 + coef_scale));
  Mat2 m = acc.m;
  double log_scale = acc.log_scale;

  auto rhs = [&](double sv, const OdeState& st, OdeState& out) {
    out.m = coef(sv, st.y) * st.m * (-1.0);
    out.y = has_aux ? aux(sv, st.y) : cplx(0.0);
  };

  int rejects_in_row = 0;
  while (s < 1.0) {
    double cap = 0.6 / (1.0 + coef(s, y).max_abs());
    double step = std::min({h, cap, 1.0 - s});
    if (step < opts.h_min)
      throw StepUnderflow("transfer: required step below floor (t too large for path)");

    OdeState st{m, y};
    OdeState k[7];
    rhs(s, st, k[0]);
    for (int stage = 1; stage < 7; ++stage) {
      OdeState arg{m, y};
      for (int j = 0; j < stage; ++j) {
        double w = kA[stage][j] * step;
        arg.m = arg.m + k[j].m * w;
        arg.y += k[j].y * w;
      }
      rhs(s + kC[stage] * step, arg, k[stage]);
    }
    Mat2 m5 = m, m4 = m;
    cplx y5 = y, y4 = y;
    for (int j = 0; j < 7; ++j) {
      m5 = m5 + k[j].m * (kB5[j] * step);
      m4 = m4 + k[j].m * (kB4[j] * step);
      y5 += k[j].y * (kB5[j] * step);
      y4 += k[j].y * (kB4[j] * step);
    }
    double scale_m = std::max({m5.max_abs(), m.max_abs(), 1e-30});
    double err = (m5 - m4).max_abs() / scale_m;
    if (has_aux) err += std::abs(y5 - y4) / std::max(std::abs(y5), 1e-30);

    if (err <= opts.tol) {
      s += step;
      m = m5;
      y = y5;
      rejects_in_row = 0;
      // For traceless coefficients the exact flow preserves
      // det(e^lambda m) = 1: rotate the det phase out of m and shift lambda
      // by half the magnitude drift. Once e^{-2 lambda} falls below the
      // cancellation floor of det(m), the stored determinant carries no
      // information and projection must stop.
      if (project_det && log_scale < 13.0) {
        cplx dm = m.det();
        if (std::abs(dm) > 1e-13) {
          m = m * std::exp(cplx(0.0, -0.5 * std::arg(dm)));
          log_scale -= 0.5 * (2.0 * log_scale + std::log(std::abs(dm)));
        }
      }
      RenormalizedMatrix rn = RenormalizedMatrix::from(m, log_scale);
      m = rn.m;
      log_scale = rn.log_scale;
    } else {
      ++rejects_in_row;
      if (rejects_in_row > 60)
        throw StepUnderflow("transfer: repeated step rejection");
    }
    double grow = 0.9 * std::pow(opts.tol / std::max(err, 1e-300), 0.2);
    h = step * std::clamp(grow, 0.2, 5.0);
  }
  acc.m = m;
  acc.log_scale = log_scale;
}

}  // namespace

RenormalizedMatrix transfer_matrix(const HyperellipticCurve& curve,
                                   const SlTwoSystem& a, double t,
                                   const PathOnCurve& path,
                                   const TransferOptions& opts) {
  if (t < 0.0) throw NumericError("transfer_matrix: t must be nonnegative");
  if (path_clearance(curve, path) <= opts.clearance_tol)
    throw PathTooClose("transfer_matrix: path clearance below tolerance");

  RenormalizedMatrix acc = RenormalizedMatrix::identity();
  cplx y = std::sqrt(curve.p(path.start()));
  if (path.start_sheet < 0) y = -y;

  for (const auto& seg : path.segments) {
    // Coefficient of the pulled-back system: t * M(z(s)) z'(s) / y.
    auto coef = [&](double s, cplx ys) -> Mat2 {
      cplx z = seg_point(seg, s);
      cplx w = t * seg_deriv(seg, s) / ys;
      return Mat2{a.alpha.at(z), a.beta.at(z), a.gamma.at(z), -a.alpha.at(z)} * w;
    };
    auto aux = [&](double s, cplx ys) -> cplx {
      cplx z = seg_point(seg, s);
      return curve.dp(z) * seg_deriv(seg, s) / (2.0 * ys);
    };
    // Scale estimate for the initial step cap.
    double coef_scale = coef(0.0, y).max_abs();
    integrate_segment(coef, aux, true, true, acc, y, coef_scale, opts);
    // Snap y back onto the exact curve at segment joints.
    y = nearest_sqrt(curve.p(seg_point(seg, 1.0)), y);
  }
  return acc;
}

Representation representation(const HyperellipticCurve& curve, const SlTwoSystem& a,
                              double t, const SurfaceGroupGenerators& gens,
                              const TransferOptions& opts, double defect_tol) {
  Representation rep;
  rep.t = t;
  for (int k = 0; k < 4; ++k)
    rep.gens[k] = transfer_matrix(curve, a, t, gens.loops[k], opts).inverse_unimodular();

  std::vector<int> word(SurfaceGroupGenerators::relation_word.begin(),
                        SurfaceGroupGenerators::relation_word.end());
  RenormalizedMatrix w = evaluate_word(rep, word);
  rep.defect = w.distance_to(RenormalizedMatrix::identity());
  if (rep.defect > defect_tol)
    throw RelationViolation("representation: relation word defect " +
                            std::to_string(rep.defect) + " above tolerance");
  return rep;
}

RenormalizedMatrix evaluate_word(const Representation& rep,
                                 const std::vector<int>& word) {
  RenormalizedMatrix out = RenormalizedMatrix::identity();
  for (int letter : word) {
    const RenormalizedMatrix& g = rep.gens[std::abs(letter) - 1];
    out = out * (letter > 0 ? g : g.inverse_unimodular());
  }
  return out;
}

double log_char(const RenormalizedMatrix& mat, double trace_tol) {
  double tr = std::abs(mat.m.trace());
  if (tr < trace_tol * std::max(1.0, mat.m.max_abs()))
    throw VanishingTrace("log_char: normalized trace below tolerance");
  return mat.log_scale + std::log(tr);
}

// ---------------------------------------------------------------------------
// Model system
// ---------------------------------------------------------------------------

RenormalizedMatrix wkb_model_transfer(const ModelOde& model, double t,
                                      const TransferOptions& opts) {
  RenormalizedMatrix acc = RenormalizedMatrix::identity();
  cplx dummy_y = 1.0;
  auto coef = [&](double s, cplx) -> Mat2 {
    cplx av = model.a(s) * t;
    Mat2 d = Mat2::diag(av, -av);
    return model.b(s) + d;
  };
  auto aux = [](double, cplx) { return cplx(0.0); };
  // B need not be traceless, so det is not projected here.
  double coef_scale = coef(0.0, dummy_y).max_abs();
  integrate_segment(coef, aux, false, false, acc, dummy_y, coef_scale, opts);
  return acc;
}

cplx SampledScalarPath::at(double s) const {
  const auto& v = samples;
  int n = static_cast<int>(v.size());
  if (n == 1) return v[0];
  double x = std::clamp(s, 0.0, 1.0) * (n - 1);
  int i = std::min(n - 2, static_cast<int>(x));
  double u = x - i;
  // Catmull-Rom with clamped ends.
  cplx p0 = v[std::max(0, i - 1)], p1 = v[i], p2 = v[i + 1], p3 = v[std::min(n - 1, i + 2)];
  cplx a0 = p1;
  cplx a1 = 0.5 * (p2 - p0);
  cplx a2 = p0 - 2.5 * p1 + 2.0 * p2 - 0.5 * p3;
  cplx a3 = -0.5 * p0 + 1.5 * p1 - 1.5 * p2 + 0.5 * p3;
  return a0 + u * (a1 + u * (a2 + u * a3));
}

Mat2 SampledMatrixPath::at(double s) const {
  auto comp = [&](cplx Mat2::*field) {
    SampledScalarPath path;
    path.samples.reserve(samples.size());
    for (const auto& m : samples) path.samples.push_back(m.*field);
    return path.at(s);
  };
  return {comp(&Mat2::a), comp(&Mat2::b), comp(&Mat2::c), comp(&Mat2::d)};
}

ModelOde model_from_samples(const SampledMatrixPath& b, const SampledScalarPath& a) {
  return ModelOde{[b](double s) { return b.at(s); }, [a](double s) { return a.at(s); }};
}

namespace {

// Composite GL32 quadrature of a scalar function on [0,1].
template <typename F>
auto integrate01(const F& f) {
  const double x8[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                        -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                        0.7966664774136267,  0.9602898564975363};
  const double w8[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                        0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                        0.2223810344533745, 0.1012285362903763};
  decltype(f(0.0)) acc{};
  int panels = 64;
  for (int p = 0; p < panels; ++p) {
    double a = double(p) / panels, b = double(p + 1) / panels;
    for (int q = 0; q < 8; ++q) {
      double s = 0.5 * (a + b) + 0.5 * (b - a) * x8[q];
      acc += f(s) * (0.5 * (b - a) * w8[q]);
    }
  }
  return acc;
}

}  // namespace

double model_corner_deviation(const ModelOde& model, double t,
                              const TransferOptions& opts) {
  RenormalizedMatrix f1 = wkb_model_transfer(model, t, opts);
  cplx int_a = integrate01(model.a);
  bool second_grows = int_a.real() > 0.0;
  cplx int_b = integrate01(
      [&](double s) { return second_grows ? model.b(s).d : model.b(s).a; });
  // Normalizer exp(int_b -/+ t int_a); target corner E22 or E11.
  cplx log_norm = int_b + (second_grows ? -t * int_a : t * int_a);
  double log_mag = f1.log_scale + log_norm.real();
  Mat2 n = f1.m * std::exp(cplx(0.0, log_norm.imag())) * std::exp(log_mag);
  Mat2 corner = second_grows ? Mat2{0.0, 0.0, 0.0, 1.0} : Mat2{1.0, 0.0, 0.0, 0.0};
  return (n - corner).max_abs();
}

double model_log_norm_gap(const ModelOde& model, double t,
                          const TransferOptions& opts) {
  RenormalizedMatrix f1 = wkb_model_transfer(model, t, opts);
  double int_abs_re_a =
      integrate01([&](double s) { return std::abs(model.a(s).real()); });
  // Frobenius norm of the normalized matrix.
  Mat2 m = f1.m;
  double fro = std::sqrt(std::norm(m.a) + std::norm(m.b) + std::norm(m.c) +
                         std::norm(m.d));
  return f1.log_scale + std::log(fro) - t * int_abs_re_a;
}

}  // namespace rhlab
