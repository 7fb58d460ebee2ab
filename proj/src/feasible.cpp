// Copyright 2026 The loccn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "loccn/feasible.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "loccn/rng.hpp"

namespace loccn {

const char* to_string(Status s) {
  switch (s) {
    case Status::kCertifiedYes: return "certified-yes";
    case Status::kCertifiedNo: return "certified-no";
    case Status::kInconclusive: return "inconclusive";
  }
  return "unknown";
}

namespace {

double vec_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Residual of the extracted weights against the original system.
double combo_residual(const std::vector<std::vector<double>>& columns,
                      const std::vector<double>& target, const std::vector<double>& p) {
  std::vector<double> acc(target.size(), 0.0);
  for (std::size_t k = 0; k < columns.size(); ++k)
    for (std::size_t r = 0; r < target.size(); ++r) acc[r] += p[k] * columns[k][r];
  double s = 0.0;
  for (std::size_t r = 0; r < target.size(); ++r) {
    const double d = acc[r] - target[r];
    s += d * d;
  }
  return std::sqrt(s);
}

void cleanup_weights(std::vector<double>& p) {
  double sum = 0.0;
  for (double& x : p) {
    if (x < 0.0) x = 0.0;
    sum += x;
  }
  if (sum > 1e-12)
    for (double& x : p) x /= sum;
}

}  // namespace

SimplexFeasibility simplex_solve(const std::vector<std::vector<double>>& columns,
                                 const std::vector<double>& target, double tol) {
  const std::size_t n = columns.size();
  const std::size_t dim = target.size();
  for (const auto& c : columns)
    if (c.size() != dim) throw std::invalid_argument("simplex_solve: column length mismatch");

  const double bn = vec_norm(target);
  const double thr = tol * (1.0 + bn);
  SimplexFeasibility out;
  if (n == 0) {
    out.status = Status::kCertifiedNo;
    out.residual = std::sqrt(bn * bn + 1.0);  // the sum-to-one row alone is violated
    return out;
  }

  const std::size_t m = dim + 1;
  const std::size_t width = n + m + 1;

  // Unit scaling per column keeps pivot magnitudes comparable.
  std::vector<double> scale(n);
  std::vector<std::vector<double>> tab(m, std::vector<double>(width, 0.0));
  for (std::size_t k = 0; k < n; ++k) {
    double s = 1.0;
    for (double v : columns[k]) s += v * v;
    scale[k] = std::sqrt(s);
    for (std::size_t r = 0; r < dim; ++r) tab[r][k] = columns[k][r] / scale[k];
    tab[dim][k] = 1.0 / scale[k];
  }
  for (std::size_t r = 0; r < dim; ++r) tab[r][width - 1] = target[r];
  tab[dim][width - 1] = 1.0;
  for (std::size_t r = 0; r < m; ++r) {
    if (tab[r][width - 1] < 0.0)
      for (std::size_t j = 0; j < width; ++j) tab[r][j] = -tab[r][j];
    tab[r][n + r] = 1.0;
  }

  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) basis[r] = n + r;
  std::vector<double> obj(width, 0.0);
  for (std::size_t j = 0; j < width; ++j) {
    if (j >= n && j < n + m) continue;  // artificial columns start basic
    double s = 0.0;
    for (std::size_t r = 0; r < m; ++r) s += tab[r][j];
    obj[j] = -s;
  }

  std::vector<char> alive(n, 1);
  const double eps = 1e-11;
  const std::size_t iter_cap = 20000 + 64 * (n + m);
  for (std::size_t iter = 0;; ++iter) {
    if (iter > iter_cap) throw std::runtime_error("simplex_solve: iteration cap exceeded");
    // Bland: smallest improving structural index enters.
    std::size_t enter = width;
    for (std::size_t j = 0; j < n; ++j) {
      if (alive[j] && obj[j] < -eps) {
        enter = j;
        break;
      }
    }
    if (enter == width) break;
    std::size_t leave = m;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < m; ++r) {
      const double a = tab[r][enter];
      if (a > eps) {
        const double ratio = tab[r][width - 1] / a;
        if (ratio < best - 1e-15 ||
            (std::abs(ratio - best) <= 1e-15 && (leave == m || basis[r] < basis[leave]))) {
          best = ratio;
          leave = r;
        }
      }
    }
    if (leave == m) {
      alive[enter] = 0;  // numerically unbounded direction; cannot occur in exact phase 1
      continue;
    }
    const double pv = tab[leave][enter];
    for (std::size_t j = 0; j < width; ++j) tab[leave][j] /= pv;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == leave) continue;
      const double f = tab[r][enter];
      if (f != 0.0)
        for (std::size_t j = 0; j < width; ++j) tab[r][j] -= f * tab[leave][j];
    }
    const double f = obj[enter];
    if (f != 0.0)
      for (std::size_t j = 0; j < width; ++j) obj[j] -= f * tab[leave][j];
    basis[leave] = enter;
  }

  double infeas = 0.0;
  for (std::size_t r = 0; r < m; ++r)
    if (basis[r] >= n) infeas += std::max(0.0, tab[r][width - 1]);

  out.p.assign(n, 0.0);
  for (std::size_t r = 0; r < m; ++r)
    if (basis[r] < n) out.p[basis[r]] = tab[r][width - 1] / scale[basis[r]];
  cleanup_weights(out.p);
  out.residual = combo_residual(columns, target, out.p);

  if (infeas > thr) {
    out.status = Status::kCertifiedNo;
  } else if (out.residual <= thr) {
    out.status = Status::kCertifiedYes;
  } else {
    out.status = Status::kInconclusive;  // defensive; extraction degraded the certificate
  }
  return out;
}

SimplexFeasibility hull_membership(const std::vector<std::vector<double>>& points,
                                   const std::vector<double>& target, double tol,
                                   bool check_plane) {
  SimplexFeasibility out = simplex_solve(points, target, tol);
  if (check_plane && target.size() == 3 && !points.empty()) {
    auto coord_sum = [](const std::vector<double>& v) { return v[0] + v[1] + v[2]; };
    const double s0 = coord_sum(points.front());
    const double band = tol * (1.0 + std::abs(s0));
    bool ok = std::abs(coord_sum(target) - s0) <= band;
    for (const auto& pt : points) ok = ok && std::abs(coord_sum(pt) - s0) <= band;
    out.plane_ok = ok;
  }
  return out;
}

std::vector<double> vectorize_hermitian(const CMatrix& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("vectorize_hermitian: non-square");
  const std::size_t d = h.rows();
  std::vector<double> v;
  v.reserve(d * d);
  for (std::size_t i = 0; i < d; ++i) v.push_back(h(i, i).real());
  const double s = std::sqrt(2.0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      v.push_back(s * 0.5 * (h(i, j) + std::conj(h(j, i))).real());
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      v.push_back(s * 0.5 * (h(i, j) + std::conj(h(j, i))).imag());
  return v;
}

CMatrix unvectorize_hermitian(const std::vector<double>& v, std::size_t d) {
  if (v.size() != d * d) throw std::invalid_argument("unvectorize_hermitian: length mismatch");
  CMatrix h(d, d);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < d; ++i) h(i, i) = v[idx++];
  const double s = 1.0 / std::sqrt(2.0);
  const std::size_t off = d + (d * (d - 1)) / 2;
  std::size_t pair = 0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      const double re = v[d + pair] * s;
      const double im = v[off + pair] * s;
      h(i, j) = Complex(re, im);
      h(j, i) = Complex(re, -im);
      ++pair;
    }
  return h;
}

// ---------------------------------------------------------------------------
// orbit_search
// ---------------------------------------------------------------------------

namespace {

// Not within tolerance of a scalar multiple of the identity.
bool factor_nontrivial(const CMatrix& f, double tol) {
  const std::size_t d = f.rows();
  const CMatrix diff = f - CMatrix::identity(d) * f(0, 0);
  return diff.frobenius_norm() > std::max(tol, 1e-9) * static_cast<double>(d);
}

struct Sym3 {
  // Symmetric 3x3, full storage.
  double a[3][3] = {};
};

Sym3 mtm(const Mat3& m) {
  Sym3 b;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += m(k, i) * m(k, j);
      b.a[i][j] = s;
    }
  return b;
}

double det3(const Mat3& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

bool solve3(const Mat3& m, const BlochVec& b, BlochVec& out) {
  const double d = det3(m);
  if (std::abs(d) < 1e-14) return false;
  Mat3 mx = m, my = m, mz = m;
  mx(0, 0) = b.x; mx(1, 0) = b.y; mx(2, 0) = b.z;
  my(0, 1) = b.x; my(1, 1) = b.y; my(2, 1) = b.z;
  mz(0, 2) = b.x; mz(1, 2) = b.y; mz(2, 2) = b.z;
  out = {det3(mx) / d, det3(my) / d, det3(mz) / d};
  return true;
}

// Ascending eigenvalues of a symmetric 3x3, trigonometric closed form.
void sym3_eigenvalues(const Sym3& s, double out[3]) {
  const double q = (s.a[0][0] + s.a[1][1] + s.a[2][2]) / 3.0;
  const double p1 = s.a[0][1] * s.a[0][1] + s.a[0][2] * s.a[0][2] + s.a[1][2] * s.a[1][2];
  const double d0 = s.a[0][0] - q, d1 = s.a[1][1] - q, d2 = s.a[2][2] - q;
  const double p2 = d0 * d0 + d1 * d1 + d2 * d2 + 2.0 * p1;
  const double p = std::sqrt(std::max(p2 / 6.0, 0.0));
  if (p < 1e-300) {
    out[0] = out[1] = out[2] = q;
    return;
  }
  Mat3 b;
  b(0, 0) = d0 / p; b(1, 1) = d1 / p; b(2, 2) = d2 / p;
  b(0, 1) = b(1, 0) = s.a[0][1] / p;
  b(0, 2) = b(2, 0) = s.a[0][2] / p;
  b(1, 2) = b(2, 1) = s.a[1][2] / p;
  const double r = std::clamp(det3(b) / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double e1 = q + 2.0 * p * std::cos(phi);
  const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * 3.14159265358979323846 / 3.0);
  const double e2 = 3.0 * q - e1 - e3;
  out[0] = e3; out[1] = e2; out[2] = e1;
  std::sort(out, out + 3);
}

// Jacobi diagonalization with eigenvectors for symmetric 3x3.
void sym3_eigen(const Sym3& in, double values[3], BlochVec vecs[3]) {
  double a[3][3];
  double v[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a[i][j] = in.a[i][j];
  for (int sweep = 0; sweep < 50; ++sweep) {
    double off = std::abs(a[0][1]) + std::abs(a[0][2]) + std::abs(a[1][2]);
    if (off < 1e-15) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double tau = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                      : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int i = 0; i < 3; ++i) {
          const double aip = a[i][p], aiq = a[i][q];
          a[i][p] = c * aip - s * aiq;
          a[i][q] = s * aip + c * aiq;
          const double vip = v[i][p], viq = v[i][q];
          v[i][p] = c * vip - s * viq;
          v[i][q] = s * vip + c * viq;
        }
        for (int j = 0; j < 3; ++j) {
          const double apj = a[p][j], aqj = a[q][j];
          a[p][j] = c * apj - s * aqj;
          a[q][j] = s * apj + c * aqj;
        }
        a[p][q] = a[q][p] = 0.0;
      }
    }
  }
  int order[3] = {0, 1, 2};
  std::sort(order, order + 3, [&](int i, int j) { return a[i][i] < a[j][j]; });
  for (int k = 0; k < 3; ++k) {
    values[k] = a[order[k]][order[k]];
    vecs[k] = {v[0][order[k]], v[1][order[k]], v[2][order[k]]};
  }
}

// Compact Nelder-Mead minimizer; deterministic for a fixed start simplex.
double nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                   std::vector<double>& x, int iters, double step) {
  const std::size_t n = x.size();
  std::vector<std::vector<double>> pts(n + 1, x);
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step;
  std::vector<double> vals(n + 1);
  for (std::size_t i = 0; i <= n; ++i) vals[i] = f(pts[i]);

  for (int it = 0; it < iters; ++it) {
    std::vector<std::size_t> idx(n + 1);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = idx[0], worst = idx[n], second = idx[n - 1];
    if (vals[worst] - vals[best] < 1e-16) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[i][j];
    }
    for (std::size_t j = 0; j < n; ++j) centroid[j] /= static_cast<double>(n);

    auto blend = [&](double w) {
      std::vector<double> p(n);
      for (std::size_t j = 0; j < n; ++j) p[j] = centroid[j] + w * (centroid[j] - pts[worst][j]);
      return p;
    };
    std::vector<double> xr = blend(1.0);
    const double fr = f(xr);
    if (fr < vals[best]) {
      std::vector<double> xe = blend(2.0);
      const double fe = f(xe);
      if (fe < fr) {
        pts[worst] = std::move(xe);
        vals[worst] = fe;
      } else {
        pts[worst] = std::move(xr);
        vals[worst] = fr;
      }
    } else if (fr < vals[second]) {
      pts[worst] = std::move(xr);
      vals[worst] = fr;
    } else {
      std::vector<double> xc = blend(-0.5);
      const double fc = f(xc);
      if (fc < vals[worst]) {
        pts[worst] = std::move(xc);
        vals[worst] = fc;
      } else {
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (std::size_t j = 0; j < n; ++j)
            pts[i][j] = pts[best][j] + 0.5 * (pts[i][j] - pts[best][j]);
          vals[i] = f(pts[i]);
        }
      }
    }
  }
  std::size_t bi = 0;
  for (std::size_t i = 1; i <= n; ++i)
    if (vals[i] < vals[bi]) bi = i;
  x = pts[bi];
  return vals[bi];
}

struct QubitProblem {
  std::vector<Mat3> rt;  // transposed adjoint rotations: bloch(S_k^dag H S_k) = rt_k h
  std::vector<BlochVec> trivial;
  BlochVec g;
  double cap = 0.5 - 1e-4;
};

struct QubitEval {
  BlochVec h;
  double rho = 0.0;
  double lam[3] = {};  // eigenvalues of M^T M, ascending
  BlochVec evec[3];
  Mat3 m;
};

Mat3 weighted_sum(const std::vector<Mat3>& rs, const std::vector<double>& p) {
  Mat3 m;
  m.m.fill(0.0);
  for (std::size_t k = 0; k < rs.size(); ++k)
    for (int i = 0; i < 9; ++i) m.m[i] += p[k] * rs[k].m[i];
  return m;
}

// Least-norm h minimizing |M h - g| subject to |h| <= cap; Tikhonov bisection
// when the unconstrained minimizer leaves the ball.
QubitEval eval_weights(const QubitProblem& pr, const std::vector<double>& p) {
  QubitEval ev;
  ev.m = weighted_sum(pr.rt, p);
  const Sym3 b = mtm(ev.m);
  sym3_eigen(b, ev.lam, ev.evec);
  const BlochVec c = ev.m.transpose().apply(pr.g);
  const double beta[3] = {ev.evec[0].dot(c), ev.evec[1].dot(c), ev.evec[2].dot(c)};
  const double lcut = 1e-12 * std::max(1.0, ev.lam[2]);

  auto assemble = [&](double mu) {
    BlochVec h{0, 0, 0};
    for (int i = 0; i < 3; ++i) {
      if (ev.lam[i] + mu > lcut) h = h + ev.evec[i] * (beta[i] / (ev.lam[i] + mu));
    }
    return h;
  };
  ev.h = assemble(0.0);
  if (ev.h.norm() > pr.cap) {
    double lo = 0.0, hi = 1.0;
    while (assemble(hi).norm() > pr.cap && hi < 1e12) hi *= 4.0;
    for (int i = 0; i < 100; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (assemble(mid).norm() > pr.cap)
        lo = mid;
      else
        hi = mid;
    }
    ev.h = assemble(hi);
  }
  ev.rho = (ev.m.apply(ev.h) - pr.g).norm();
  return ev;
}

double trivial_dist(const QubitProblem& pr, const BlochVec& h) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& t : pr.trivial) d = std::min(d, (h - t).norm());
  return d;
}

// Adds a null-direction component to move a trivial-coincident solution off
// the trivial set without changing the residual.
bool nullspace_escape(const QubitProblem& pr, const QubitEval& ev, double tol_vec,
                      double triv_thr, BlochVec& out) {
  const double lmax = std::max(1.0, ev.lam[2]);
  for (int i = 0; i < 3; ++i) {
    if (ev.lam[i] > 1e-9 * lmax) continue;
    for (double sgn : {1.0, -1.0}) {
      const BlochVec u = ev.evec[i] * sgn;
      // largest step keeping |h + t u| within the cap
      const double bq = 2.0 * ev.h.dot(u);
      const double cq = ev.h.dot(ev.h) - (pr.cap - 1e-6) * (pr.cap - 1e-6);
      const double disc = bq * bq - 4.0 * cq;
      if (disc <= 0.0) continue;
      const double tmax = (-bq + std::sqrt(disc)) / 2.0;
      for (double t : {std::min(tmax, 0.2), std::min(tmax, 0.05)}) {
        if (t <= 1e-9) continue;
        const BlochVec h2 = ev.h + u * t;
        const double rho2 = (ev.m.apply(h2) - pr.g).norm();
        if (rho2 <= tol_vec && trivial_dist(pr, h2) > triv_thr) {
          out = h2;
          return true;
        }
      }
    }
  }
  return false;
}

struct QubitContext {
  QubitProblem pr;
  const CMatrix* g1 = nullptr;
  const std::vector<CMatrix>* factors = nullptr;
  double tol = kDefaultTol;
  double tol_vec = 0.0;
  double triv_thr = 0.0;
};

// Matrix-level verification of a candidate; the returned residual is exact.
std::optional<OrbitResult> verify_qubit(const QubitContext& cx, const BlochVec& h,
                                        std::vector<double> p) {
  if (h.norm() > cx.pr.cap + 1e-12) return std::nullopt;
  if (trivial_dist(cx.pr, h) <= cx.triv_thr) return std::nullopt;
  cleanup_weights(p);
  const CMatrix hm = bloch_encode(h);
  CMatrix recon(2, 2);
  for (std::size_t k = 0; k < cx.factors->size(); ++k) {
    if (p[k] == 0.0) continue;
    const CMatrix& s = (*cx.factors)[k];
    recon += s.adjoint() * hm * s * Complex(p[k]);
  }
  const double resid = (recon - *cx.g1).frobenius_norm();
  if (resid > cx.tol) return std::nullopt;
  OrbitResult res;
  res.status = Status::kCertifiedYes;
  res.h_op = hm;
  res.p = std::move(p);
  res.residual = resid;
  return res;
}

std::optional<OrbitResult> attempt_candidate(const QubitContext& cx, std::vector<double> p) {
  for (int round = 0; round < 4; ++round) {
    cleanup_weights(p);
    QubitEval ev = eval_weights(cx.pr, p);
    BlochVec h = ev.h;
    if (ev.rho <= cx.tol_vec && trivial_dist(cx.pr, h) <= cx.triv_thr) {
      BlochVec h2;
      if (nullspace_escape(cx.pr, ev, cx.tol_vec, cx.triv_thr, h2)) h = h2;
    }
    if (ev.rho <= cx.tol_vec) {
      if (auto res = verify_qubit(cx, h, p)) return res;
    }
    // Re-fit the weights against the current candidate.
    std::vector<std::vector<double>> cols;
    cols.reserve(cx.pr.rt.size());
    for (const auto& r : cx.pr.rt) {
      const BlochVec v = r.apply(h);
      cols.push_back({v.x, v.y, v.z});
    }
    SimplexFeasibility lp = simplex_solve(cols, {cx.pr.g.x, cx.pr.g.y, cx.pr.g.z}, cx.tol);
    if (lp.status != Status::kCertifiedYes) break;
    p = lp.p;
  }
  return std::nullopt;
}

// Simplex grid nodes for m in {1,2,3}, step 1e-3.
template <typename F>
void for_grid_nodes(std::size_t m, int steps, F&& fn) {
  std::vector<double> p(m, 0.0);
  if (m == 1) {
    p[0] = 1.0;
    fn(p);
    return;
  }
  if (m == 2) {
    for (int i = 0; i <= steps; ++i) {
      p[0] = static_cast<double>(i) / steps;
      p[1] = 1.0 - p[0];
      fn(p);
    }
    return;
  }
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; j <= steps - i; ++j) {
      p[0] = static_cast<double>(i) / steps;
      p[1] = static_cast<double>(j) / steps;
      p[2] = 1.0 - p[0] - p[1];
      fn(p);
    }
  }
}

// Exhaustive grid certification for qubit instances with at most 3 factors.
// Every node must either exclude solutions from its cell or pin the unique
// solution to the trivial set; see the header contract for the band caveat.
OrbitResult grid_certify(const QubitContext& cx, OrbitResult best) {
  const std::size_t m = cx.pr.rt.size();
  const int steps = 1000;
  const double delta = 1.0 / steps;
  const double cover = (m <= 2) ? delta : 2.0 * delta;  // l1 covering radius
  const double slack = cx.tol_vec + cover * cx.pr.cap;

  bool gray = false;
  double band_max = 0.0;
  std::optional<OrbitResult> rescued;

  for_grid_nodes(m, steps, [&](const std::vector<double>& p) {
    if (gray && !rescued) {
      // keep scanning only for a rescue once certification already failed
    }
    const Mat3 mm = weighted_sum(cx.pr.rt, p);
    const Sym3 b = mtm(mm);
    double lam[3];
    sym3_eigenvalues(b, lam);
    const double sigma = std::sqrt(std::max(lam[0], 0.0));
    if (sigma >= 10.0 * cover) {
      BlochVec h;
      if (!solve3(mm, cx.pr.g, h)) {
        gray = true;
        return;
      }
      const double w = slack / (sigma - cover);
      if (h.norm() - w > cx.pr.cap) return;  // no solution reaches the ball in this cell
      const double tau = trivial_dist(cx.pr, h);
      if (tau <= 1e-7 && tau + w <= 0.02) {
        band_max = std::max(band_max, tau + w);
        return;
      }
      if (tau > cx.triv_thr && !rescued) {
        if (auto res = verify_qubit(cx, h, p)) {
          rescued = res;
          return;
        }
      }
      gray = true;
      return;
    }
    // Near-singular node: either provably empty or a nullspace family lives here.
    QubitEval ev = eval_weights(cx.pr, p);
    if (ev.rho > cx.tol_vec + 2.0 * cover * cx.pr.cap) return;
    if (!rescued) {
      BlochVec h2;
      if (nullspace_escape(cx.pr, ev, cx.tol_vec, cx.triv_thr, h2)) {
        if (auto res = verify_qubit(cx, h2, p)) {
          rescued = res;
          return;
        }
      }
    }
    gray = true;
  });

  if (rescued) return *rescued;
  if (!gray) {
    best.status = Status::kCertifiedNo;
    best.residual = band_max;
    return best;
  }
  best.status = Status::kInconclusive;
  return best;
}

OrbitResult qubit_orbit(const CMatrix& g1, const std::vector<CMatrix>& factors, double tol,
                        int budget, std::uint64_t seed) {
  QubitContext cx;
  cx.g1 = &g1;
  cx.factors = &factors;
  cx.tol = tol;
  cx.tol_vec = 0.5 * tol;
  cx.triv_thr = 10.0 * tol;
  cx.pr.g = bloch_decode(g1, 1e-8);
  for (const auto& f : factors) {
    const Mat3 r = su2_to_so3(f, 1e-8);
    cx.pr.rt.push_back(r.transpose());
    cx.pr.trivial.push_back(r.apply(cx.pr.g));
  }
  const std::size_t m = factors.size();

  std::vector<std::pair<double, std::vector<double>>> cands;
  auto push_cand = [&](std::vector<double> p) {
    cleanup_weights(p);
    const QubitEval ev = eval_weights(cx.pr, p);
    cands.emplace_back(ev.rho, std::move(p));
  };

  for (std::size_t a = 0; a < m; ++a) {
    std::vector<double> p(m, 0.0);
    p[a] = 1.0;
    push_cand(p);
    for (std::size_t b2 = 0; b2 < m; ++b2) {
      if (a == b2) continue;
      for (double eps : {0.02, 0.25}) {
        std::vector<double> q(m, 0.0);
        q[a] = 1.0 - eps;
        q[b2] = eps;
        push_cand(q);
      }
      if (b2 > a) {
        std::vector<double> q(m, 0.0);
        q[a] = q[b2] = 0.5;
        push_cand(q);
      }
    }
  }
  if (m >= 3 && m <= 8) {
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b2 = a + 1; b2 < m; ++b2)
        for (std::size_t c = b2 + 1; c < m; ++c) {
          std::vector<double> q(m, 0.0);
          q[a] = q[b2] = q[c] = 1.0 / 3.0;
          push_cand(q);
        }
  }
  push_cand(std::vector<double>(m, 1.0 / static_cast<double>(m)));

  auto softmax = [](const std::vector<double>& z) {
    std::vector<double> p(z.size());
    const double zmax = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      p[i] = std::exp(z[i] - zmax);
      sum += p[i];
    }
    for (double& x : p) x /= sum;
    return p;
  };
  for (int r = 0; r < budget; ++r) {
    Rng rng(seed, static_cast<std::uint64_t>(r));
    std::vector<double> z(m);
    for (double& x : z) x = rng.normal();
    auto f = [&](const std::vector<double>& zz) { return eval_weights(cx.pr, softmax(zz)).rho; };
    nelder_mead(f, z, 250, 0.7);
    push_cand(softmax(z));
  }

  std::sort(cands.begin(), cands.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  OrbitResult best;
  best.status = Status::kInconclusive;
  best.residual = std::numeric_limits<double>::infinity();
  std::size_t tried = 0;
  for (const auto& [rho, p] : cands) {
    if (rho < best.residual) {
      best.residual = rho * std::sqrt(2.0);
      best.h_op = bloch_encode(eval_weights(cx.pr, p).h);
      best.p = p;
    }
    if (rho > 1e-3 && tried > 8) break;  // hopeless tail
    if (auto res = attempt_candidate(cx, p)) return *res;
    if (++tried > 220) break;
  }

  if (m <= 3) return grid_certify(cx, std::move(best));
  return best;
}

// Dense real linear solve with partial pivoting; a is consumed.
std::vector<double> solve_dense(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    const double d = a[col][col];
    if (std::abs(d) < 1e-300) continue;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / d;
      if (f == 0.0) continue;
      for (std::size_t c2 = col; c2 < n; ++c2) a[r][c2] -= f * a[col][c2];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(a[i][i]) > 1e-300) x[i] = b[i] / a[i][i];
  return x;
}

OrbitResult general_orbit(const CMatrix& g1, const std::vector<CMatrix>& factors, double tol,
                          int budget, std::uint64_t seed) {
  const std::size_t d = g1.rows();
  const std::size_t dim = d * d;
  const std::size_t m = factors.size();
  const std::vector<double> target = vectorize_hermitian(g1);

  std::vector<CMatrix> trivial;
  trivial.reserve(m);
  for (const auto& s : factors) trivial.push_back(s * g1 * s.adjoint());

  // Per-factor linear maps H -> S^dag H S over Hermitian coordinates.
  std::vector<std::vector<std::vector<double>>> maps(m);
  for (std::size_t k = 0; k < m; ++k) {
    maps[k].assign(dim, std::vector<double>(dim, 0.0));
    for (std::size_t j = 0; j < dim; ++j) {
      std::vector<double> e(dim, 0.0);
      e[j] = 1.0;
      const CMatrix ej = unvectorize_hermitian(e, d);
      const std::vector<double> img = vectorize_hermitian(factors[k].adjoint() * ej * factors[k]);
      for (std::size_t i = 0; i < dim; ++i) maps[k][i][j] = img[i];
    }
  }

  auto conj_residual = [&](const CMatrix& h, const std::vector<double>& p) {
    CMatrix recon(d, d);
    for (std::size_t k = 0; k < m; ++k) {
      if (p[k] == 0.0) continue;
      recon += factors[k].adjoint() * h * factors[k] * Complex(p[k]);
    }
    return (recon - g1).frobenius_norm();
  };

  OrbitResult best;
  best.status = Status::kInconclusive;
  best.residual = std::numeric_limits<double>::infinity();

  for (int restart = 0; restart < budget; ++restart) {
    Rng rng(seed, 100000 + static_cast<std::uint64_t>(restart));
    CMatrix a(d, d);
    for (auto& v : a.data()) v = rng.cnormal();
    CMatrix h = a * a.adjoint();
    h *= Complex(1.0) / h.trace();

    std::vector<double> p(m, 1.0 / static_cast<double>(m));
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 300; ++it) {
      std::vector<std::vector<double>> cols(m);
      for (std::size_t k = 0; k < m; ++k)
        cols[k] = vectorize_hermitian(factors[k].adjoint() * h * factors[k]);
      SimplexFeasibility lp = simplex_solve(cols, target, tol);
      if (!lp.p.empty()) p = lp.p;

      // Least squares for H at fixed weights, then project to the PSD slab.
      std::vector<std::vector<double>> mp(dim, std::vector<double>(dim, 0.0));
      for (std::size_t k = 0; k < m; ++k) {
        if (p[k] == 0.0) continue;
        for (std::size_t i = 0; i < dim; ++i)
          for (std::size_t j = 0; j < dim; ++j) mp[i][j] += p[k] * maps[k][i][j];
      }
      std::vector<std::vector<double>> nrm(dim, std::vector<double>(dim, 0.0));
      std::vector<double> rhs(dim, 0.0);
      for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
          double s = 0.0;
          for (std::size_t r = 0; r < dim; ++r) s += mp[r][i] * mp[r][j];
          nrm[i][j] = s;
        }
        nrm[i][i] += 1e-12;
        double s = 0.0;
        for (std::size_t r = 0; r < dim; ++r) s += mp[r][i] * target[r];
        rhs[i] = s;
      }
      h = unvectorize_hermitian(solve_dense(std::move(nrm), std::move(rhs)), d);
      EigenSys es = hermitian_eigen(h);
      CMatrix hp(d, d);
      for (std::size_t kk = 0; kk < d; ++kk) {
        const double lam = std::max(es.values[kk], 1e-5);
        for (std::size_t i = 0; i < d; ++i)
          for (std::size_t j = 0; j < d; ++j)
            hp(i, j) += lam * es.vectors(i, kk) * std::conj(es.vectors(j, kk));
      }
      h = hp * (Complex(1.0) / hp.trace());

      const double rho = conj_residual(h, p);
      if (rho < best.residual) {
        best.residual = rho;
        best.h_op = h;
        best.p = p;
      }
      if (rho <= 0.5 * tol) {
        bool nontrivial = true;
        for (const auto& t : trivial)
          nontrivial = nontrivial && (h - t).frobenius_norm() > 10.0 * tol;
        if (nontrivial) {
          std::vector<double> pc = p;
          cleanup_weights(pc);
          const double resid = conj_residual(h, pc);
          if (resid <= tol) {
            OrbitResult res;
            res.status = Status::kCertifiedYes;
            res.h_op = h;
            res.p = std::move(pc);
            res.residual = resid;
            return res;
          }
        }
      }
      if (it > 30 && rho > prev - 1e-15) break;
      prev = std::min(prev, rho);
    }
  }
  return best;
}

}  // namespace

OrbitResult orbit_search(const CMatrix& g1, const std::vector<CMatrix>& factors, double tol,
                         int budget, std::uint64_t seed) {
  if (budget < 1) throw std::invalid_argument("orbit_search: budget must be positive");
  if (g1.rows() != g1.cols() || g1.rows() == 0)
    throw std::invalid_argument("orbit_search: source operator not square");
  if (!g1.is_hermitian(1e-8)) throw std::invalid_argument("orbit_search: source operator not Hermitian");
  if (std::abs(g1.trace() - Complex(1.0)) > 1e-8)
    throw std::invalid_argument("orbit_search: source operator trace not 1");
  if (factors.empty()) throw std::invalid_argument("orbit_search: no factors");
  for (const auto& f : factors) {
    if (f.rows() != g1.rows() || f.cols() != g1.rows())
      throw std::invalid_argument("orbit_search: factor dimension mismatch");
    if (!f.is_unitary(1e-8)) throw std::invalid_argument("orbit_search: non-unitary factor");
  }

  bool any_nontrivial = false;
  for (const auto& f : factors) any_nontrivial = any_nontrivial || factor_nontrivial(f, tol);
  if (!any_nontrivial) {
    OrbitResult res;
    res.status = Status::kCertifiedNo;
    res.h_op = g1;
    res.residual = 0.0;
    return res;
  }

  if (g1.rows() == 2) return qubit_orbit(g1, factors, tol, budget, seed);
  if (g1.rows() <= 6) return general_orbit(g1, factors, tol, budget, seed);
  throw std::invalid_argument("orbit_search: local dimension above 6 not supported");
}

}  // namespace loccn
