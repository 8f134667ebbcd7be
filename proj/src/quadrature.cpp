#include "rhlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <random>
#include <vector>

#include "rhlab/errors.hpp"

namespace rhlab {

namespace {

// Gauss-Legendre nodes/weights on [-1, 1].
const double kGL5x[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                         0.5384693101056831, 0.9061798459386640};
const double kGL5w[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                         0.4786286704993665, 0.2369268850561891};
const double kGL8x[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                         -0.1834346424956498, 0.1834346424956498, 0.5255324099163290,
                         0.7966664774136267, 0.9602898564975363};
const double kGL8w[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                         0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                         0.2223810344533745, 0.1012285362903763};

// C^4 smoothstep on [0, 1].
double smoothstep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  double t4 = t * t * t * t;
  return t4 * t * (126.0 + t * (-420.0 + t * (540.0 + t * (-315.0 + t * 70.0))));
}

// Radial cutoff: 0 for rho <= r/2, 1 for rho >= r.
double disk_cutoff(double rho, double r) { return smoothstep(2.0 * rho / r - 1.0); }

template <typename T>
double magnitude(T v) {
  return std::abs(v);
}

// ---- polar integral of F * (1 - cutoff) over a disk around a singular point ----
template <typename T>
bool polar_part(cplx center, double radius, const std::function<T(cplx)>& f,
                double budget, T& value, double& err) {
  T prev{};
  bool have_prev = false;
  for (int n = 16; n <= 1024; n *= 2) {
    T sum{};
    int n_ang = 2 * n;
    // Tensor rule: GL in rho (composite GL8 panels), trapezoid in theta.
    int panels = n / 8;
    for (int pnl = 0; pnl < panels; ++pnl) {
      double a = radius * pnl / panels, b = radius * (pnl + 1) / panels;
      for (int i = 0; i < 8; ++i) {
        double rho = 0.5 * (a + b) + 0.5 * (b - a) * kGL8x[i];
        double wr = 0.5 * (b - a) * kGL8w[i];
        double cut = 1.0 - disk_cutoff(rho, radius);
        if (cut == 0.0) continue;
        T ang_sum{};
        for (int j = 0; j < n_ang; ++j) {
          double theta = 2.0 * kPi * j / n_ang;
          ang_sum += f(center + rho * std::exp(cplx(0.0, theta)));
        }
        sum += ang_sum * (wr * cut * rho * (2.0 * kPi / n_ang));
      }
    }
    if (have_prev) {
      err = magnitude<T>(sum - prev);
      if (err <= budget) {
        value = sum;
        return true;
      }
    }
    prev = sum;
    have_prev = true;
  }
  value = prev;
  return false;
}

// ---- adaptive cell integration over a square ----

template <typename T>
struct Cell {
  double x0, y0, size;
  T value;
  double err;
};

template <typename T>
void eval_cell(const std::function<T(cplx)>& f, Cell<T>& cell) {
  T lo{}, hi{};
  double h = cell.size * 0.5;
  double cx = cell.x0 + h, cy = cell.y0 + h;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      lo += f(cplx(cx + h * kGL5x[i], cy + h * kGL5x[j])) * (kGL5w[i] * kGL5w[j]);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      hi += f(cplx(cx + h * kGL8x[i], cy + h * kGL8x[j])) * (kGL8w[i] * kGL8w[j]);
  double scale = h * h;
  lo *= scale;
  hi *= scale;
  cell.value = hi;
  cell.err = magnitude<T>(hi - lo);
}

template <typename T>
bool adaptive_square(const std::function<T(cplx)>& f, double x0, double y0, double size,
                     double budget, int max_cells, T& total, double& total_err) {
  struct Entry {
    double err;
    std::size_t idx;
    bool operator<(const Entry& o) const {
      if (err != o.err) return err < o.err;
      return idx > o.idx;  // deterministic tie-break
    }
  };
  std::vector<Cell<T>> cells;
  std::priority_queue<Entry> queue;
  total = T{};
  total_err = 0.0;
  auto push = [&](double cx, double cy, double cs) {
    Cell<T> cell{cx, cy, cs, T{}, 0.0};
    eval_cell(f, cell);
    cells.push_back(cell);
    queue.push(Entry{cell.err, cells.size() - 1});
    total += cell.value;
    total_err += cell.err;
  };
  // Initial 4x4 grid so structure is seen before refinement starts.
  int n0 = 4;
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n0; ++j)
      push(x0 + size * i / n0, y0 + size * j / n0, size / n0);

  std::size_t splits = 0;
  while (total_err > budget && static_cast<int>(cells.size()) < max_cells) {
    Entry top = queue.top();
    queue.pop();
    Cell<T> parent = cells[top.idx];
    cells[top.idx].size = 0.0;  // tombstone (each entry is popped at most once)
    total -= parent.value;
    total_err -= parent.err;
    double h = parent.size * 0.5;
    push(parent.x0, parent.y0, h);
    push(parent.x0 + h, parent.y0, h);
    push(parent.x0, parent.y0 + h, h);
    push(parent.x0 + h, parent.y0 + h, h);
    // Refresh the running sums now and then against float drift.
    if (++splits % 4096 == 0) {
      total = T{};
      total_err = 0.0;
      for (const auto& c : cells)
        if (c.size > 0.0) {
          total += c.value;
          total_err += c.err;
        }
    }
  }
  total = T{};
  total_err = 0.0;
  for (const auto& c : cells)
    if (c.size > 0.0) {
      total += c.value;
      total_err += c.err;
    }
  return total_err <= budget;
}

// One chart of the plane integral: square + smooth cutoffs + polar disks.
template <typename T>
struct ChartSpec {
  std::function<T(cplx)> f;          // raw integrand in this chart
  std::vector<cplx> singularities;   // 1/|x - e| style points
  double disk_radius = 0.1;
  double x0 = -1.0, y0 = -1.0, size = 2.0;  // square
  std::function<double(cplx)> extra_weight;  // optional smooth weight (may be null)
};

template <typename T>
bool integrate_chart(const ChartSpec<T>& chart, double budget, int max_cells, T& value,
                     double& err) {
  value = T{};
  err = 0.0;
  double r = chart.disk_radius;
  auto weighted = [&chart](cplx x) {
    T v = chart.f(x);
    if (chart.extra_weight) v *= chart.extra_weight(x);
    return v;
  };

  // Polar disks, with fallback shrinking if the tensor rule struggles.
  int n_sing = static_cast<int>(chart.singularities.size());
  double polar_budget = n_sing > 0 ? 0.25 * budget / n_sing : 0.0;
  std::vector<double> radii(chart.singularities.size(), r);
  for (std::size_t k = 0; k < chart.singularities.size(); ++k) {
    T pv{};
    double perr = 0.0;
    bool done = false;
    for (int attempt = 0; attempt < 4 && !done; ++attempt) {
      done = polar_part<T>(chart.singularities[k], radii[k], weighted, polar_budget, pv,
                           perr);
      if (!done) radii[k] *= 0.5;
    }
    if (!done) return false;
    value += pv;
    err += perr;
  }

  // Square with all cutoffs applied.
  auto masked = [&chart, &radii, weighted](cplx x) {
    double w = 1.0;
    for (std::size_t k = 0; k < chart.singularities.size(); ++k)
      w *= disk_cutoff(std::abs(x - chart.singularities[k]), radii[k]);
    if (w == 0.0) return T{};
    return weighted(x) * w;
  };
  T sq_val{};
  double sq_err = 0.0;
  bool ok = adaptive_square<T>(masked, chart.x0, chart.y0, chart.size,
                               0.75 * budget, max_cells, sq_val, sq_err);
  value += sq_val;
  err += sq_err;
  return ok;
}

// Full plane integral of an area density G(x) dA with G ~ C/|x - e| at branch
// points and algebraic decay. g_main is G in the x chart; g_inv is
// G(1/u)/|u|^4 in the u chart (supplied separately for stable evaluation).
template <typename T>
T plane_integral(const HyperellipticCurve& curve, const std::function<T(cplx)>& g_main,
                 const std::function<T(cplx)>& g_inv, const QuadratureOptions& opts,
                 double* est_error) {
  // Geometry: structure radius covering all branch points.
  double r_struct = 0.0;
  for (cplx e : curve.branch_points) r_struct = std::max(r_struct, std::abs(e));
  double r0 = 2.0 * (r_struct + curve.separation + 1.0);

  ChartSpec<T> main_chart;
  main_chart.f = g_main;
  main_chart.singularities = curve.branch_points;
  main_chart.disk_radius = curve.separation / 4.0;
  main_chart.x0 = -r0;
  main_chart.y0 = -r0;
  main_chart.size = 2.0 * r0;
  main_chart.extra_weight = [r0](cplx x) {
    return 1.0 - disk_cutoff(std::abs(x), r0);  // 1 inside r0/2, 0 beyond r0
  };

  ChartSpec<T> inv_chart;
  inv_chart.f = g_inv;
  if (curve.infinity_is_branch_point()) inv_chart.singularities = {cplx(0.0)};
  inv_chart.disk_radius = 0.5 / r0;
  inv_chart.x0 = -2.0 / r0;
  inv_chart.y0 = -2.0 / r0;
  inv_chart.size = 4.0 / r0;
  inv_chart.extra_weight = [r0](cplx u) {
    double au = std::abs(u);
    if (au == 0.0) return 1.0;
    return disk_cutoff(1.0 / au, r0);  // complement weight in the u chart
  };

  // Two-phase tolerance: coarse estimate, then refine to abs/rel mix.
  T coarse{};
  double coarse_err = 0.0;
  {
    T v1{}, v2{};
    double e1 = 0.0, e2 = 0.0;
    integrate_chart<T>(main_chart, 1e-3, 4000, v1, e1);
    integrate_chart<T>(inv_chart, 1e-3, 4000, v2, e2);
    coarse = v1 + v2;
    coarse_err = e1 + e2;
    (void)coarse_err;
  }
  double budget = std::max(opts.abs_tol, opts.rel_tol * magnitude<T>(coarse));

  T v1{}, v2{};
  double e1 = 0.0, e2 = 0.0;
  bool ok1 = integrate_chart<T>(main_chart, 0.5 * budget, opts.max_cells, v1, e1);
  bool ok2 = integrate_chart<T>(inv_chart, 0.5 * budget, opts.max_cells, v2, e2);
  if (!ok1 || !ok2)
    throw QuadratureNotConverged("plane_integral: estimated error above tolerance");
  if (est_error) *est_error = e1 + e2;
  return v1 + v2;
}

// Reversed polynomial evaluation: p(1/u) * u^deg.
cplx reversed_eval(const std::vector<cplx>& coeffs, cplx u) {
  cplx v = 0.0;
  for (const auto& c : coeffs) v = v * u + c;  // sum coeffs[k] u^(deg-k)
  return v;
}

cplx reversed_eval3(const std::array<cplx, 3>& q, cplx u) {
  return (q[0] * u + q[1]) * u + q[2];
}

}  // namespace

QuadResult qd_norm(const HyperellipticCurve& curve, const QuadraticDifferential& phi,
                   const QuadratureOptions& opts) {
  if (phi.is_zero()) return {0.0, 0.0};
  const int d = curve.degree();
  auto g_main = [&curve, phi](cplx x) {
    return 2.0 * std::abs(phi.at(x)) / std::abs(curve.p(x));
  };
  auto g_inv = [&curve, phi, d](cplx u) {
    double au = std::abs(u);
    double pw = (d == 5) ? 1.0 / std::max(au, 1e-300) : 1.0;
    return 2.0 * std::abs(reversed_eval3(phi.coeffs, u)) * pw /
           std::abs(reversed_eval(curve.p_coeffs, u));
  };
  QuadResult out;
  out.value = plane_integral<double>(curve, g_main, g_inv, opts, &out.est_error);
  return out;
}

QuadResultC belt_pairing(const HyperellipticCurve& curve,
                         const BeltramiRepresentative& mu,
                         const QuadraticDifferential& phi,
                         const QuadratureOptions& opts) {
  if (mu.k < 0.0 || mu.k >= 1.0)
    throw NumericError("belt_pairing: k must be in [0,1)");
  if (mu.q.is_zero()) throw NumericError("belt_pairing: mu.q must be nonzero");
  if (mu.k == 0.0 || phi.is_zero()) return {cplx(0.0), 0.0};
  const int d = curve.degree();
  const double k = mu.k;
  auto g_main = [&curve, &mu, phi, k](cplx x) -> cplx {
    cplx qm = mu.q.at(x);
    double aqm = std::abs(qm);
    if (aqm == 0.0) return cplx(0.0);
    return 2.0 * k * std::conj(qm) * phi.at(x) / (aqm * std::abs(curve.p(x)));
  };
  auto g_inv = [&curve, &mu, phi, d, k](cplx u) -> cplx {
    cplx qm = reversed_eval3(mu.q.coeffs, u);
    double aqm = std::abs(qm);
    if (aqm == 0.0) return cplx(0.0);
    double au = std::abs(u);
    double pw = (d == 5) ? 1.0 / std::max(au, 1e-300) : 1.0;
    return 2.0 * k * std::conj(qm) * reversed_eval3(phi.coeffs, u) * pw /
           (aqm * std::abs(reversed_eval(curve.p_coeffs, u)));
  };
  QuadResultC out;
  out.value = plane_integral<cplx>(curve, g_main, g_inv, opts, &out.est_error);
  return out;
}

TeichNormResult teich_norm(const HyperellipticCurve& curve,
                           const BeltramiRepresentative& mu,
                           const TeichNormOptions& opts) {
  TeichNormResult best;
  if (mu.k == 0.0) return best;

  auto objective = [&](const QuadraticDifferential& phi) -> double {
    double nrm = qd_norm(curve, phi, opts.quad).value;
    if (nrm <= 0.0) return 0.0;
    cplx pair = belt_pairing(curve, mu, phi, opts.quad).value;
    return std::abs(pair) / nrm;
  };

  std::mt19937 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_phi = [&]() {
    QuadraticDifferential phi;
    double n2 = 0.0;
    for (auto& c : phi.coeffs) {
      c = cplx(gauss(rng), gauss(rng));
      n2 += std::norm(c);
    }
    return phi * (1.0 / std::sqrt(n2));
  };

  // Coarse pass over the QD sphere. The Teichmueller-form certificate
  // mu's own q is always included as a candidate.
  std::vector<QuadraticDifferential> candidates;
  {
    QuadraticDifferential self = mu.q;
    double n2 = 0.0;
    for (auto& c : self.coeffs) n2 += std::norm(c);
    candidates.push_back(self * (1.0 / std::sqrt(n2)));
  }
  for (int i = 0; i < opts.coarse_samples; ++i) candidates.push_back(random_phi());

  double best_val = -1.0;
  QuadraticDifferential best_phi;
  for (const auto& phi : candidates) {
    double v = objective(phi);
    if (v > best_val) {
      best_val = v;
      best_phi = phi;
    }
  }

  // Local compass refinement on the sphere.
  double delta = 0.3;
  for (int it = 0; it < opts.refine_steps; ++it) {
    bool improved = false;
    for (int dir = 0; dir < 12; ++dir) {
      QuadraticDifferential trial = best_phi;
      int coord = dir / 4;
      int mode = dir % 4;
      cplx bump = (mode == 0)   ? cplx(delta, 0.0)
                  : (mode == 1) ? cplx(-delta, 0.0)
                  : (mode == 2) ? cplx(0.0, delta)
                                : cplx(0.0, -delta);
      trial.coeffs[coord] += bump;
      double n2 = 0.0;
      for (auto& c : trial.coeffs) n2 += std::norm(c);
      trial = trial * (1.0 / std::sqrt(n2));
      double v = objective(trial);
      if (v > best_val) {
        best_val = v;
        best_phi = trial;
        improved = true;
      }
    }
    if (!improved) {
      delta *= 0.5;
      if (delta < 1e-4) break;
    }
  }
  best.value = best_val;
  best.maximizer = best_phi;
  return best;
}

}  // namespace rhlab
