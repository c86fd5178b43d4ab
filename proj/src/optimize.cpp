// Copyright 2026 The sqm-variational Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "sqm/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sqm/rng.hpp"

namespace sqm {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

VectorXd clamp(const VectorXd& x, const VectorXd& lo, const VectorXd& hi) { return x.cwiseMax(lo).cwiseMin(hi); }

void check_start(const Objective& obj, const VectorXd& x0) {
  if (x0.size() != obj.dimension())
    throw std::invalid_argument("start point has " + std::to_string(x0.size()) + " entries, objective expects " +
                                std::to_string(obj.dimension()));
}

std::size_t argmin(const std::vector<double>& f) {
  return static_cast<std::size_t>(std::min_element(f.begin(), f.end()) - f.begin());
}

}  // namespace

Objective::Objective(int dimension, Function f) : dim_(dimension), f_(std::move(f)) {
  if (dimension < 0) throw std::invalid_argument("objective dimension must be non-negative");
}

double Objective::operator()(const Eigen::VectorXd& x) {
  ++count_;
  const double v = f_(x);
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << "objective returned " << v << " at x = [" << x.transpose() << "]";
    throw std::runtime_error(os.str());
  }
  return v;
}

std::string_view to_string(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::LocalTrustRegion: return "local";
    case OptimizerKind::DifferentialEvolution: return "de";
    case OptimizerKind::QuasiNewtonFD: return "qnfd";
    case OptimizerKind::QuadraticTrustRegion: return "quadratic";
  }
  return "?";
}

OptimizerKind parse_optimizer_kind(std::string_view name) {
  if (name == "local") return OptimizerKind::LocalTrustRegion;
  if (name == "de") return OptimizerKind::DifferentialEvolution;
  if (name == "qnfd") return OptimizerKind::QuasiNewtonFD;
  if (name == "quadratic") return OptimizerKind::QuadraticTrustRegion;
  throw std::invalid_argument("unknown optimizer '" + std::string(name) + "' (expected local, quadratic, de or qnfd)");
}

void OptimizerConfig::validate() const {
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
  if (!(tolerance > 0)) throw std::invalid_argument("tolerance must be positive");
  if (!(initial_radius > 0)) throw std::invalid_argument("initial_radius must be positive");
  if (population_factor < 5) throw std::invalid_argument("population_factor must be >= 5");
  if (lower_bounds.size() != upper_bounds.size()) throw std::invalid_argument("bound vectors differ in length");
  if (lower_bounds.size() == 0 && !(lower < upper)) throw std::invalid_argument("lower bound must be below upper");
  if (lower_bounds.size() > 0 && (lower_bounds.array() >= upper_bounds.array()).any())
    throw std::invalid_argument("lower bound must be below upper");
}

Eigen::VectorXd OptimizerConfig::lower_vector(int dim) const {
  if (lower_bounds.size() == 0) return VectorXd::Constant(dim, lower);
  if (lower_bounds.size() != dim) throw std::invalid_argument("bound vector length does not match dimension");
  return lower_bounds;
}

Eigen::VectorXd OptimizerConfig::upper_vector(int dim) const {
  if (upper_bounds.size() == 0) return VectorXd::Constant(dim, upper);
  if (upper_bounds.size() != dim) throw std::invalid_argument("bound vector length does not match dimension");
  return upper_bounds;
}

OptimizationResult minimize_local(Objective& obj, const Eigen::VectorXd& x0, const OptimizerConfig& cfg) {
  cfg.validate();
  check_start(obj, x0);
  const int n = obj.dimension();
  const VectorXd lo = cfg.lower_vector(n);
  const VectorXd hi = cfg.upper_vector(n);
  const long long evals0 = obj.evaluations();

  // Geometry: vertices stay within kBeta*rho of the best point and the scaled
  // simplex keeps its smallest singular value above kAlpha. Repair steps
  // have length kGamma*rho. A trial with ratio <= kAccept shrinks rho and a
  // full-length one with ratio >= kExpand doubles it, up to the start value.
  constexpr double kAlpha = 0.25;
  constexpr double kBeta = 2.1;
  constexpr double kGamma = 0.5;
  constexpr double kAccept = 0.1;
  constexpr double kExpand = 0.75;
  constexpr double kSingular = 1e-6;

  OptimizationResult res;
  std::vector<VectorXd> x(static_cast<std::size_t>(n) + 1);
  std::vector<double> f(static_cast<std::size_t>(n) + 1);
  x[0] = clamp(x0, lo, hi);
  f[0] = obj(x[0]);
  if (n == 0) {
    res.best_params = x[0];
    res.best_value = f[0];
    res.evaluations = obj.evaluations() - evals0;
    res.converged = true;
    return res;
  }

  const double rho_max = std::min(cfg.initial_radius, 0.5 * (hi - lo).minCoeff());
  double rho = rho_max;
  RngStream rng(cfg.seed);
  for (int i = 0; i < n; ++i) {
    const double s = (rng.next() >> 63) ? 1.0 : -1.0;
    VectorXd xi = x[0];
    xi[i] += s * rho;
    if (xi[i] > hi[i] || xi[i] < lo[i]) xi[i] = x[0][i] - s * rho;
    x[static_cast<std::size_t>(i) + 1] = clamp(xi, lo, hi);
    f[static_cast<std::size_t>(i) + 1] = obj(x[static_cast<std::size_t>(i) + 1]);
  }

  MatrixXd d(n, n);
  VectorXd df(n);
  std::vector<std::size_t> rows(static_cast<std::size_t>(n));
  int repairs = 0;
  bool check_geometry = true;
  // Stall test: n+1 trial steps with some success but total gain below tol.
  int window_trials = 0;
  bool window_success = false;
  double window_start = std::numeric_limits<double>::infinity();
  while (res.iterations < cfg.max_iterations) {
    const std::size_t b = argmin(f);
    int r = 0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (j == b) continue;
      d.row(r) = (x[j] - x[b]).transpose();
      df[r] = f[j] - f[b];
      rows[static_cast<std::size_t>(r)] = j;
      ++r;
    }
    // Singular values are only needed when the geometry is examined, and
    // come from the Gram matrix: sigma_min^2 and u_n are its lowest
    // eigenpair. The gradient comes from an LU solve.
    const MatrixXd ds = d / rho;
    const Eigen::PartialPivLU<MatrixXd> lu(ds);
    const bool near_singular = lu.rcond() < kSingular;
    Eigen::Index far = 0;
    const double max_dist = d.rowwise().norm().maxCoeff(&far);
    const VectorXd g = lu.rcond() > 1e-14 ? VectorXd(lu.solve(df) / rho) : VectorXd::Zero(n);
    auto geometry_is_bad = [&] {
      if (max_dist > kBeta * rho) return true;
      const Eigen::SelfAdjointEigenSolver<MatrixXd> gram(ds * ds.transpose(), Eigen::EigenvaluesOnly);
      return std::sqrt(std::max(gram.eigenvalues()[0], 0.0)) < kAlpha;
    };

    // One vertex is repaired after each poor trial (or when the model is
    // close to singular). Near a bound repairs can fail to restore kAlpha;
    // after n of them without progress rho shrinks anyway.
    if ((check_geometry || near_singular) && repairs < n && geometry_is_bad()) {
      ++repairs;
      check_geometry = false;
      Eigen::Index worst_row = far;
      if (max_dist <= kBeta * rho) {
        const Eigen::SelfAdjointEigenSolver<MatrixXd> gram(ds * ds.transpose());
        gram.eigenvectors().col(0).cwiseAbs().maxCoeff(&worst_row);
      }
      VectorXd v = VectorXd::Unit(n, 0);
      if (n > 1) {
        MatrixXd others(n - 1, n);
        for (int i = 0, k = 0; i < n; ++i)
          if (i != worst_row) others.row(k++) = d.row(i);
        const Eigen::SelfAdjointEigenSolver<MatrixXd> gram(others.transpose() * others / (rho * rho));
        v = gram.eigenvectors().col(0);
      }
      // Prefer the model's downhill side unless a bound eats most of the step.
      const double sign = g.dot(v) > 0 ? -1.0 : 1.0;
      const VectorXd xa = clamp(x[b] + sign * kGamma * rho * v, lo, hi);
      const VectorXd xb = clamp(x[b] - sign * kGamma * rho * v, lo, hi);
      const double reach_a = std::abs((xa - x[b]).dot(v));
      const double reach_b = std::abs((xb - x[b]).dot(v));
      const VectorXd xn = reach_a >= 0.5 * kGamma * rho || reach_a >= reach_b ? xa : xb;
      const std::size_t j = rows[static_cast<std::size_t>(worst_row)];
      x[j] = xn;
      f[j] = obj(xn);
      ++res.iterations;
      continue;
    }

    VectorXd gp = g;
    for (int i = 0; i < n; ++i)
      if ((x[b][i] <= lo[i] && g[i] > 0) || (x[b][i] >= hi[i] && g[i] < 0)) gp[i] = 0.0;

    bool shrink = true;
    if (gp.norm() > 0.0) {
      const VectorXd xt = clamp(x[b] - rho * gp / gp.norm(), lo, hi);
      const double step = (xt - x[b]).norm();
      const double predicted = g.dot(x[b] - xt);
      const double ft = obj(xt);
      ++res.iterations;
      const double ratio = predicted > 0 ? (f[b] - ft) / predicted : -1.0;
      std::size_t j = b;
      if (ft < f[b]) {
        double best = -1.0;
        for (std::size_t k = 0; k < x.size(); ++k) {
          const double dist = (x[k] - xt).norm();
          if (dist > best) best = dist, j = k;
        }
      } else {
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < x.size(); ++k)
          if (k != b && f[k] > worst) worst = f[k], j = k;
        if (!(ft < worst)) j = b;
      }
      if (window_trials == 0) window_start = f[b];
      window_success = window_success || ft < f[b];
      if (ft < f[b]) repairs = 0;
      if (j != b || ft < f[b]) {
        x[j] = xt;
        f[j] = ft;
      }
      if (++window_trials == n + 1) {
        if (window_success && window_start - *std::min_element(f.begin(), f.end()) < cfg.tolerance) {
          res.converged = true;
          break;
        }
        window_trials = 0;
        window_success = false;
      }
      shrink = ratio <= kAccept || step < 1e-3 * rho;
      if (ratio >= kExpand && step > 0.99 * rho) rho = std::min(2.0 * rho, rho_max);
    }
    if (shrink && repairs < n && geometry_is_bad()) {
      check_geometry = true;
    } else if (shrink) {
      rho *= 0.5;
      repairs = 0;
      if (rho < cfg.tolerance) {
        res.converged = true;
        break;
      }
    }
  }
  const std::size_t b = argmin(f);
  res.best_params = x[b];
  res.best_value = f[b];
  res.evaluations = obj.evaluations() - evals0;
  return res;
}

namespace {

// Minimizer of g.s + s.H.s/2 over |s| <= delta, from the eigen-decomposition of H.
VectorXd ball_step(const VectorXd& g, const MatrixXd& h, double delta) {
  const Eigen::SelfAdjointEigenSolver<MatrixXd> es(h);
  const VectorXd& lam = es.eigenvalues();
  const MatrixXd& q = es.eigenvectors();
  const VectorXd a = q.transpose() * g;
  const Eigen::Index n = g.size();
  auto step_at = [&](double mu) {
    VectorXd c(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double den = lam[i] + mu;
      c[i] = den > 0 ? -a[i] / den : 0.0;
    }
    return c;
  };
  if (lam[0] > 0) {
    const VectorXd c = step_at(0.0);
    if (c.norm() <= delta) return q * c;
  }
  const double mu_lo = std::max(0.0, -lam[0]);
  const double tiny = 1e-12 * std::max(1.0, lam.cwiseAbs().maxCoeff());
  VectorXd c = step_at(mu_lo + tiny);
  if (c.norm() < delta) {
    // Hard case: fill up the ball along the lowest eigenvector.
    c = step_at(mu_lo);
    for (Eigen::Index i = 0; i < n; ++i)
      if (lam[i] + mu_lo <= tiny) c[i] = 0.0;
    c[0] += std::sqrt(std::max(0.0, delta * delta - c.squaredNorm()));
    return q * c;
  }
  double lo = mu_lo + tiny;
  double hi = std::max(lo, g.norm() / delta - lam[0]) + tiny;
  while (step_at(hi).norm() > delta) hi = 2 * hi + tiny;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (step_at(mid).norm() > delta ? lo : hi) = mid;
  }
  return q * step_at(hi);
}

// Ball step with coordinates that sit on a bound and would leave it held
// fixed, then projected back into the box.
VectorXd bounded_step(const VectorXd& g, const MatrixXd& h, double delta, const VectorXd& x, const VectorXd& lo,
                      const VectorXd& hi) {
  const Eigen::Index n = g.size();
  std::vector<bool> fixed(static_cast<std::size_t>(n), false);
  VectorXd s = VectorXd::Zero(n);
  for (;;) {
    std::vector<Eigen::Index> free;
    for (Eigen::Index i = 0; i < n; ++i)
      if (!fixed[static_cast<std::size_t>(i)]) free.push_back(i);
    s.setZero();
    if (free.empty()) return s;
    const auto m = static_cast<Eigen::Index>(free.size());
    VectorXd gf(m);
    MatrixXd hf(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
      gf[a] = g[free[a]];
      for (Eigen::Index b = 0; b < m; ++b) hf(a, b) = h(free[a], free[b]);
    }
    const VectorXd sf = ball_step(gf, hf, delta);
    for (Eigen::Index a = 0; a < m; ++a) s[free[a]] = sf[a];
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double tol = 1e-12 * std::max(1.0, std::abs(x[i]));
      if ((s[i] < 0 && x[i] <= lo[i] + tol) || (s[i] > 0 && x[i] >= hi[i] - tol)) {
        fixed[static_cast<std::size_t>(i)] = true;
        changed = true;
      }
    }
    if (!changed) return clamp(x + s, lo, hi) - x;
  }
}

// Quadratic through the interpolation set with least Frobenius change of the
// Hessian. Points are shifted to the centre and scaled by sigma.
struct QuadraticModel {
  double sigma = 1.0;
  MatrixXd yhat;  // npt x n
  Eigen::FullPivLU<MatrixXd> kkt;
  VectorXd g;
  MatrixXd h;

  void build(const std::vector<VectorXd>& pts, const std::vector<double>& f, std::size_t centre,
             const MatrixXd& h_prev) {
    const auto npt = static_cast<Eigen::Index>(pts.size());
    const Eigen::Index n = pts[0].size();
    sigma = 0.0;
    for (const auto& p : pts) sigma = std::max(sigma, (p - pts[centre]).norm());
    if (sigma == 0.0) sigma = 1.0;
    yhat.resize(npt, n);
    for (Eigen::Index i = 0; i < npt; ++i) yhat.row(i) = (pts[static_cast<std::size_t>(i)] - pts[centre]).transpose() / sigma;
    const MatrixXd hs = h_prev * sigma * sigma;
    MatrixXd w = MatrixXd::Zero(npt + 1 + n, npt + 1 + n);
    const MatrixXd gram = yhat * yhat.transpose();
    w.topLeftCorner(npt, npt) = 0.5 * gram.array().square().matrix();
    w.block(0, npt, npt, 1).setOnes();
    w.block(npt, 0, 1, npt).setOnes();
    w.block(0, npt + 1, npt, n) = yhat;
    w.block(npt + 1, 0, n, npt) = yhat.transpose();
    kkt.compute(w);
    VectorXd rhs = VectorXd::Zero(npt + 1 + n);
    for (Eigen::Index i = 0; i < npt; ++i)
      rhs[i] = f[static_cast<std::size_t>(i)] - f[centre] - 0.5 * yhat.row(i).dot(hs * yhat.row(i).transpose());
    const VectorXd sol = kkt.solve(rhs);
    const MatrixXd hnew = hs + yhat.transpose() * sol.head(npt).asDiagonal() * yhat;
    g = sol.tail(n) / sigma;
    h = hnew / (sigma * sigma);
  }

  double predict(const VectorXd& s) const { return g.dot(s) + 0.5 * s.dot(h * s); }

  // Values at centre + s of every Lagrange function of the set.
  VectorXd lagrange_values(const VectorXd& s) const {
    const Eigen::Index npt = yhat.rows(), n = yhat.cols();
    VectorXd rhs(npt + 1 + n);
    const VectorXd sh = s / sigma;
    rhs.head(npt) = 0.5 * (yhat * sh).array().square().matrix();
    rhs[npt] = 1.0;
    rhs.tail(n) = sh;
    return kkt.solve(rhs).head(npt);
  }

  // Lagrange function t as c + g.x + x.G.x/2 in unscaled coordinates.
  void lagrange_function(Eigen::Index t, double& c, VectorXd& gl, MatrixXd& gh) const {
    const Eigen::Index npt = yhat.rows(), n = yhat.cols();
    const VectorXd col = kkt.solve(VectorXd::Unit(npt + 1 + n, t));
    c = col[npt];
    gl = col.tail(n) / sigma;
    gh = yhat.transpose() * col.head(npt).asDiagonal() * yhat / (sigma * sigma);
  }
};

}  // namespace

OptimizationResult minimize_quadratic(Objective& obj, const Eigen::VectorXd& x0, const OptimizerConfig& cfg) {
  cfg.validate();
  check_start(obj, x0);
  const int n = obj.dimension();
  const VectorXd lo = cfg.lower_vector(n);
  const VectorXd hi = cfg.upper_vector(n);
  const long long evals0 = obj.evaluations();

  OptimizationResult res;
  const VectorXd start = clamp(x0, lo, hi);
  if (n == 0) {
    res.best_params = start;
    res.best_value = obj(start);
    res.evaluations = obj.evaluations() - evals0;
    res.converged = true;
    return res;
  }

  // Initial set: start and two points per coordinate, stepping inward at bounds.
  double rho = std::min(cfg.initial_radius, 0.25 * (hi - lo).minCoeff());
  const double rho_end = std::min(cfg.tolerance, rho);
  double delta = rho;
  std::vector<VectorXd> pts{start};
  std::vector<double> f{obj(start)};
  for (int i = 0; i < n; ++i) {
    const double a = start[i] + rho <= hi[i] ? rho : -rho;
    const double b = a > 0 ? (start[i] - rho >= lo[i] ? -rho : 2 * rho) : -2 * rho;
    for (double step : {a, b}) {
      VectorXd p = start;
      p[i] += step;
      pts.push_back(clamp(p, lo, hi));
      f.push_back(obj(pts.back()));
    }
  }

  MatrixXd h_prev = MatrixXd::Zero(n, n);
  QuadraticModel model;
  auto farthest = [&](std::size_t centre, double& dist) {
    std::size_t far = centre;
    dist = 0.0;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const double d = (pts[j] - pts[centre]).norm();
      if (d > dist) dist = d, far = j;
    }
    return far;
  };
  // Replaces point t by the point within radius r of the centre that makes
  // the Lagrange function of t largest in magnitude.
  auto improve_geometry = [&](std::size_t centre, std::size_t t, double r) {
    double c;
    VectorXd gl;
    MatrixXd gh;
    model.lagrange_function(static_cast<Eigen::Index>(t), c, gl, gh);
    std::vector<VectorXd> dirs;
    if (gl.norm() > 0) dirs.push_back(gl / gl.norm());
    const Eigen::SelfAdjointEigenSolver<MatrixXd> es(gh);
    Eigen::Index k = 0;
    es.eigenvalues().cwiseAbs().maxCoeff(&k);
    dirs.push_back(es.eigenvectors().col(k));
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const VectorXd d = pts[j] - pts[centre];
      if (j != centre && d.norm() > 0) dirs.push_back(d / d.norm());
    }
    VectorXd best_x = pts[centre];
    double best_val = -1.0;
    for (const auto& d : dirs)
      for (double sgn : {1.0, -1.0}) {
        const VectorXd x = clamp(pts[centre] + sgn * r * d, lo, hi);
        const VectorXd s = x - pts[centre];
        const double v = std::abs(c + gl.dot(s) + 0.5 * s.dot(gh * s));
        if (v > best_val) best_val = v, best_x = x;
      }
    pts[t] = best_x;
    f[t] = obj(best_x);
    ++res.iterations;
  };
  auto reduce_rho = [&]() {
    if (rho <= rho_end) return false;
    const double old = rho;
    rho = rho > 250 * rho_end ? 0.1 * rho : (rho > 16 * rho_end ? std::sqrt(rho * rho_end) : rho_end);
    delta = std::max(0.5 * old, rho);
    return true;
  };

  while (res.iterations < cfg.max_iterations) {
    const std::size_t k = argmin(f);
    model.build(pts, f, k, h_prev);
    h_prev = model.h;

    const VectorXd s = bounded_step(model.g, model.h, delta, pts[k], lo, hi);
    const double snorm = s.norm();
    double dist_far = 0.0;
    const std::size_t far = farthest(k, dist_far);

    if (snorm < 0.5 * rho) {
      // Step below resolution: fix a stray point first, else refine rho.
      delta = std::max(rho, 0.5 * delta);
      if (dist_far > 2 * delta) {
        improve_geometry(k, far, std::max(std::min(0.1 * dist_far, delta), rho));
      } else if (!reduce_rho()) {
        res.converged = true;
        break;
      }
      continue;
    }

    const double predicted = -model.predict(s);
    const VectorXd xt = pts[k] + s;
    const VectorXd ell = model.lagrange_values(s);
    const double ft = obj(xt);
    ++res.iterations;
    const double ratio = predicted > 0 ? (f[k] - ft) / predicted : -1.0;
    if (ratio <= 0.1)
      delta = std::min(0.5 * delta, snorm);
    else if (ratio <= 0.7)
      delta = std::max(0.5 * delta, snorm);
    else
      delta = std::max(0.5 * delta, 2 * snorm);
    if (delta <= 1.5 * rho) delta = rho;

    // Drop the point whose Lagrange value at the trial is largest, weighted
    // by its distance from the new best point.
    const VectorXd& centre = ft < f[k] ? xt : pts[k];
    std::size_t t = pts.size();
    double score = 0.0;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (ft >= f[k] && j == k) continue;
      const double d = (pts[j] - centre).norm() / std::max(delta, rho);
      const double v = std::abs(ell[static_cast<Eigen::Index>(j)]) * std::max(1.0, d * d * d);
      if (v > score) score = v, t = j;
    }
    if (t < pts.size() && (ft < f[k] || score > 1e-8)) {
      pts[t] = xt;
      f[t] = ft;
    }

    if (ratio <= 0.1) {
      const std::size_t kb = argmin(f);
      const std::size_t fb = farthest(kb, dist_far);
      if (dist_far > 2 * delta) {
        model.build(pts, f, kb, h_prev);
        improve_geometry(kb, fb, std::max(std::min(0.1 * dist_far, delta), rho));
      } else if (delta <= rho && ratio <= 0) {
        if (!reduce_rho()) {
          res.converged = true;
          break;
        }
      }
    }
  }
  const std::size_t b = argmin(f);
  res.best_params = pts[b];
  res.best_value = f[b];
  res.evaluations = obj.evaluations() - evals0;
  return res;
}

OptimizationResult minimize_de(Objective& obj, const OptimizerConfig& cfg) {
  cfg.validate();
  const int n = obj.dimension();
  if (n < 1) throw std::invalid_argument("differential evolution needs at least one dimension");
  const VectorXd lo = cfg.lower_vector(n);
  const VectorXd hi = cfg.upper_vector(n);
  if (!lo.allFinite() || !hi.allFinite()) throw std::invalid_argument("differential evolution needs finite bounds");
  constexpr double kF = 0.8;
  constexpr double kCR = 0.9;
  const long long evals0 = obj.evaluations();
  const int np = std::max(4, cfg.population_factor * n);
  RngStream rng(cfg.seed);

  std::vector<VectorXd> pop(static_cast<std::size_t>(np), VectorXd(n));
  std::vector<double> fit(static_cast<std::size_t>(np));
  for (int i = 0; i < np; ++i) {
    for (int k = 0; k < n; ++k) pop[static_cast<std::size_t>(i)][k] = rng.uniform(lo[k], hi[k]);
    fit[static_cast<std::size_t>(i)] = obj(pop[static_cast<std::size_t>(i)]);
  }

  OptimizationResult res;
  auto spread = [&] {
    const auto [mn, mx] = std::minmax_element(fit.begin(), fit.end());
    return *mx - *mn;
  };
  std::vector<VectorXd> next = pop;
  std::vector<double> next_fit = fit;
  while (res.iterations < cfg.max_iterations) {
    if (spread() < cfg.tolerance) {
      res.converged = true;
      break;
    }
    for (int i = 0; i < np; ++i) {
      int a, b, c;
      do a = static_cast<int>(rng.below(static_cast<std::uint64_t>(np))); while (a == i);
      do b = static_cast<int>(rng.below(static_cast<std::uint64_t>(np))); while (b == i || b == a);
      do c = static_cast<int>(rng.below(static_cast<std::uint64_t>(np))); while (c == i || c == a || c == b);
      const int jrand = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      const auto& xi = pop[static_cast<std::size_t>(i)];
      VectorXd trial = xi;
      for (int k = 0; k < n; ++k) {
        if (k != jrand && rng.uniform() >= kCR) continue;
        double v = pop[static_cast<std::size_t>(a)][k] +
                   kF * (pop[static_cast<std::size_t>(b)][k] - pop[static_cast<std::size_t>(c)][k]);
        if (v < lo[k] || v > hi[k]) v = rng.uniform(lo[k], hi[k]);
        trial[k] = v;
      }
      const double ft = obj(trial);
      if (ft <= fit[static_cast<std::size_t>(i)]) {
        next[static_cast<std::size_t>(i)] = trial;
        next_fit[static_cast<std::size_t>(i)] = ft;
      } else {
        next[static_cast<std::size_t>(i)] = xi;
        next_fit[static_cast<std::size_t>(i)] = fit[static_cast<std::size_t>(i)];
      }
    }
    pop.swap(next);
    fit.swap(next_fit);
    ++res.iterations;
  }
  if (!res.converged && spread() < cfg.tolerance) res.converged = true;
  const std::size_t best = argmin(fit);
  res.best_params = pop[best];
  res.best_value = fit[best];
  res.evaluations = obj.evaluations() - evals0;
  return res;
}

OptimizationResult minimize_quasi_newton_fd(Objective& obj, const Eigen::VectorXd& x0, const OptimizerConfig& cfg) {
  cfg.validate();
  check_start(obj, x0);
  const int n = obj.dimension();
  const VectorXd lo = cfg.lower_vector(n);
  const VectorXd hi = cfg.upper_vector(n);
  const long long evals0 = obj.evaluations();
  const double h0 = std::sqrt(std::numeric_limits<double>::epsilon());

  auto gradient = [&](const VectorXd& x, double fx) {
    VectorXd g(n);
    for (int i = 0; i < n; ++i) {
      double h = h0 * std::max(1.0, std::abs(x[i]));
      if (x[i] + h > hi[i]) h = -h;
      VectorXd xh = x;
      xh[i] += h;
      g[i] = (obj(xh) - fx) / h;
    }
    return g;
  };
  auto project = [&](const VectorXd& x, VectorXd g) {
    for (int i = 0; i < n; ++i)
      if ((x[i] <= lo[i] && g[i] > 0) || (x[i] >= hi[i] && g[i] < 0)) g[i] = 0.0;
    return g;
  };

  OptimizationResult res;
  VectorXd x = clamp(x0, lo, hi);
  double fx = obj(x);
  VectorXd g = gradient(x, fx);
  MatrixXd hinv = MatrixXd::Identity(n, n);
  while (res.iterations < cfg.max_iterations) {
    const VectorXd pg = project(x, g);
    if (n == 0 || pg.lpNorm<Eigen::Infinity>() < cfg.tolerance) {
      res.converged = true;
      break;
    }
    VectorXd dir = project(x, -(hinv * pg));
    if (dir.dot(pg) >= 0) {
      hinv.setIdentity();
      dir = -pg;
    }
    double t = 1.0;
    VectorXd xn;
    double fn = fx;
    bool accepted = false;
    for (int k = 0; k < 60; ++k, t *= 0.5) {
      xn = clamp(x + t * dir, lo, hi);
      if ((xn - x).lpNorm<Eigen::Infinity>() == 0.0) break;
      fn = obj(xn);
      if (fn <= fx + 1e-4 * pg.dot(xn - x)) {
        accepted = true;
        break;
      }
    }
    ++res.iterations;
    if (!accepted) {
      // No descent along the quasi-Newton direction: the difference quotients
      // are at their resolution limit.
      res.converged = true;
      break;
    }
    const VectorXd gn = gradient(xn, fn);
    const VectorXd s = xn - x;
    const VectorXd y = gn - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      const double rho = 1.0 / sy;
      const MatrixXd id = MatrixXd::Identity(n, n);
      hinv = (id - rho * s * y.transpose()) * hinv * (id - rho * y * s.transpose()) + rho * s * s.transpose();
    }
    const double drop = fx - fn;
    x = xn;
    fx = fn;
    g = gn;
    if (drop <= cfg.tolerance * std::max({std::abs(fx), std::abs(fx + drop), 1.0})) {
      res.converged = true;
      break;
    }
  }
  res.best_params = x;
  res.best_value = fx;
  res.evaluations = obj.evaluations() - evals0;
  return res;
}

OptimizationResult minimize(Objective& obj, const Eigen::VectorXd& x0, const OptimizerConfig& config) {
  switch (config.kind) {
    case OptimizerKind::LocalTrustRegion: return minimize_local(obj, x0, config);
    case OptimizerKind::DifferentialEvolution: return minimize_de(obj, config);
    case OptimizerKind::QuasiNewtonFD: return minimize_quasi_newton_fd(obj, x0, config);
    case OptimizerKind::QuadraticTrustRegion: return minimize_quadratic(obj, x0, config);
  }
  throw std::logic_error("unknown optimizer kind");
}

}  // namespace sqm
