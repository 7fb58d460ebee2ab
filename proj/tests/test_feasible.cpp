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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "loccn/feasible.hpp"
#include "loccn/linalg.hpp"
#include "loccn/rng.hpp"

using namespace loccn;

namespace {

constexpr double kPi = 3.14159265358979323846;

double combo_residual(const std::vector<std::vector<double>>& cols,
                      const std::vector<double>& target, const std::vector<double>& p) {
  std::vector<double> acc(target.size(), 0.0);
  for (std::size_t k = 0; k < cols.size(); ++k)
    for (std::size_t j = 0; j < target.size(); ++j) acc[j] += p[k] * cols[k][j];
  double s = 0.0;
  for (std::size_t j = 0; j < target.size(); ++j) {
    const double d = acc[j] - target[j];
    s += d * d;
  }
  return std::sqrt(s);
}

double on_simplex_defect(const std::vector<double>& p) {
  double sum = 0.0, neg = 0.0;
  for (double v : p) {
    sum += v;
    neg = std::min(neg, v);
  }
  return std::max(std::abs(sum - 1.0), -neg);
}

// sum_k p_k f_k^dag H f_k against G, recomputed without library helpers.
double orbit_recon_residual(const CMatrix& g, const std::vector<CMatrix>& factors,
                            const OrbitResult& r) {
  CMatrix acc(g.rows(), g.cols());
  for (std::size_t k = 0; k < factors.size(); ++k)
    acc = acc + factors[k].adjoint() * r.h_op * factors[k] * r.p[k];
  return (acc - g).frobenius_norm();
}

}  // namespace

TEST_CASE("simplex solves a unique two-column instance") {
  const std::vector<std::vector<double>> cols = {{1.0, 0.0}, {0.0, 1.0}};
  const SimplexFeasibility f = simplex_solve(cols, {0.6, 0.4});
  REQUIRE(f.status == Status::kCertifiedYes);
  CHECK(f.p.size() == 2);
  CHECK(f.p[0] == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(f.p[1] == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(f.residual <= 1e-12);
  CHECK_FALSE(f.plane_ok.has_value());
}

TEST_CASE("simplex rejects targets outside the hull") {
  const std::vector<std::vector<double>> cols = {{1.0, 0.0}, {0.0, 1.0}};
  // Convex combinations of the unit vectors have nonnegative entries.
  const SimplexFeasibility f = simplex_solve(cols, {2.0, -1.0});
  CHECK(f.status == Status::kCertifiedNo);
}

TEST_CASE("simplex handles zero columns and empty input") {
  const std::vector<std::vector<double>> cols = {{0.0, 0.0}, {1.0, 0.0}};
  SimplexFeasibility f = simplex_solve(cols, {0.5, 0.0});
  REQUIRE(f.status == Status::kCertifiedYes);
  CHECK(f.p[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f.p[0] == doctest::Approx(0.5).epsilon(1e-12));

  f = simplex_solve(cols, {1.0, 0.0});
  REQUIRE(f.status == Status::kCertifiedYes);
  CHECK(f.p[1] == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(simplex_solve({}, {0.0}).status == Status::kCertifiedNo);
  CHECK_THROWS_AS(simplex_solve({{1.0}, {1.0, 2.0}}, {1.0}), std::invalid_argument);
}

TEST_CASE("simplex reports a valid point when solutions are degenerate") {
  const std::vector<std::vector<double>> cols = {{1.0, 0.0}, {0.0, 1.0}, {0.5, 0.5}};
  const SimplexFeasibility f = simplex_solve(cols, {0.5, 0.5});
  REQUIRE(f.status == Status::kCertifiedYes);
  CHECK(on_simplex_defect(f.p) <= 1e-12);
  CHECK(combo_residual(cols, {0.5, 0.5}, f.p) <= 1e-12);
}

TEST_CASE("simplex is deterministic") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<double>> cols(3, std::vector<double>(3));
    std::vector<double> target(3);
    for (auto& c : cols)
      for (double& v : c) v = (2.0 * rng.uniform01() - 1.0);
    for (double& v : target) v = (2.0 * rng.uniform01() - 1.0);
    const SimplexFeasibility a = simplex_solve(cols, target);
    const SimplexFeasibility b = simplex_solve(cols, target);
    CHECK(a.status == b.status);
    REQUIRE(a.p.size() == b.p.size());
    for (std::size_t k = 0; k < a.p.size(); ++k) CHECK(a.p[k] == b.p[k]);
  }
}

TEST_CASE("hull membership with the coordinate-sum plane check") {
  // Cyclic shifts of one vector; every point sits on the sum-zero plane.
  const std::vector<std::vector<double>> pts = {
      {0.1, 0.1, -0.2}, {-0.2, 0.1, 0.1}, {0.1, -0.2, 0.1}};

  SimplexFeasibility f = hull_membership(pts, {0.1, -0.1, 0.0}, kDefaultTol, true);
  REQUIRE(f.status == Status::kCertifiedYes);
  REQUIRE(f.plane_ok.has_value());
  CHECK(*f.plane_ok);
  // Unique solution: the target decomposes as (1/3, 0, 2/3).
  REQUIRE(f.p.size() == 3);
  CHECK(f.p[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  CHECK(f.p[1] == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(f.p[2] == doctest::Approx(2.0 / 3.0).epsilon(1e-10));

  // On the plane but outside the triangle.
  f = hull_membership(pts, {0.25, 0.1, -0.35}, kDefaultTol, true);
  CHECK(f.status == Status::kCertifiedNo);
  REQUIRE(f.plane_ok.has_value());
  CHECK(*f.plane_ok);

  // Off the plane entirely.
  f = hull_membership(pts, {0.1, 0.1, 0.1}, kDefaultTol, true);
  CHECK(f.status == Status::kCertifiedNo);
  REQUIRE(f.plane_ok.has_value());
  CHECK_FALSE(*f.plane_ok);

  // The plane check only applies to 3-vectors.
  f = hull_membership({{1.0, 0.0}, {0.0, 1.0}}, {0.5, 0.5}, kDefaultTol, true);
  CHECK(f.status == Status::kCertifiedYes);
  CHECK_FALSE(f.plane_ok.has_value());
}

TEST_CASE("hermitian vectorization is the documented isometry") {
  CMatrix h(2, 2);
  h(0, 0) = 1.0;
  h(0, 1) = Complex(2.0, 3.0);
  h(1, 0) = Complex(2.0, -3.0);
  h(1, 1) = 4.0;
  const std::vector<double> v = vectorize_hermitian(h);
  const double r2 = std::sqrt(2.0);
  REQUIRE(v.size() == 4);
  CHECK(v[0] == doctest::Approx(1.0));
  CHECK(v[1] == doctest::Approx(4.0));
  CHECK(v[2] == doctest::Approx(2.0 * r2));
  CHECK(v[3] == doctest::Approx(3.0 * r2));

  double n2 = 0.0;
  for (double x : v) n2 += x * x;
  CHECK(std::sqrt(n2) == doctest::Approx(h.frobenius_norm()).epsilon(1e-14));

  Rng rng(5);
  CMatrix a(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) a(i, j) = Complex((2.0 * rng.uniform01() - 1.0), (2.0 * rng.uniform01() - 1.0));
  const CMatrix herm = (a + a.adjoint()) * 0.5;
  const std::vector<double> w = vectorize_hermitian(herm);
  double wn2 = 0.0;
  for (double x : w) wn2 += x * x;
  CHECK(std::sqrt(wn2) == doctest::Approx(herm.frobenius_norm()).epsilon(1e-13));
  CHECK((unvectorize_hermitian(w, 3) - herm).frobenius_norm() <= 1e-14);

  CHECK_THROWS_AS(vectorize_hermitian(CMatrix(2, 3)), std::invalid_argument);
  CHECK_THROWS_AS(unvectorize_hermitian(w, 2), std::invalid_argument);
}

TEST_CASE("orbit search on the maximally mixed qubit finds an axis family") {
  const CMatrix id2 = CMatrix::identity(2);
  const OrbitResult r = orbit_search(id2 * 0.5, {id2, pauli(3)});
  REQUIRE(r.status == Status::kCertifiedYes);
  CHECK(r.residual <= 1e-8);
  CHECK(orbit_recon_residual(id2 * 0.5, {id2, pauli(3)}, r) <= 1e-8);
  // Solutions are exactly the equatorial pairs: h_z forced to zero, h != 0.
  const BlochVec h = bloch_decode(r.h_op);
  CHECK(std::abs(h.z) <= 1e-7);
  CHECK(std::sqrt(h.x * h.x + h.y * h.y) > 1e-4);
  CHECK(on_simplex_defect(r.p) <= 1e-9);
}

TEST_CASE("orbit search stretches generic sources away from the source orbit") {
  const CMatrix g = bloch_encode({0.08, 0.08, 0.2});
  const std::vector<CMatrix> factors = {CMatrix::identity(2), pauli(3)};
  const OrbitResult r = orbit_search(g, factors);
  REQUIRE(r.status == Status::kCertifiedYes);
  CHECK(r.residual <= 1e-8);
  CHECK(orbit_recon_residual(g, factors, r) <= 1e-8);
  // Nontriviality: the found operator is no factor conjugate of the source.
  const CMatrix conj = pauli(3) * g * pauli(3);
  CHECK((r.h_op - g).frobenius_norm() > 1e-4);
  CHECK((r.h_op - conj).frobenius_norm() > 1e-4);
  // The z component passes through untouched; x and y stretch by 1/(2p-1).
  const BlochVec h = bloch_decode(r.h_op);
  CHECK(h.z == doctest::Approx(0.2).epsilon(1e-8));
  const double scale = 2.0 * r.p[0] - 1.0;
  CHECK(h.x * scale == doctest::Approx(0.08).epsilon(1e-7));
  CHECK(h.y * scale == doctest::Approx(0.08).epsilon(1e-7));
}

TEST_CASE("orbit search certifies no when every factor is trivial") {
  const CMatrix id2 = CMatrix::identity(2);
  const CMatrix g = bloch_encode({0.1, 0.0, 0.05});
  const OrbitResult r = orbit_search(g, {id2, id2 * Complex(0.0, 1.0)});
  CHECK(r.status == Status::kCertifiedNo);
}

TEST_CASE("orbit search grid certificate pins axis-aligned rotation instances") {
  // A quarter turn around z: off-axis components of any solution are forced
  // to zero, so only the trivial operator remains.
  CMatrix u90(2, 2);
  u90(0, 0) = std::polar(1.0, -0.7853981633974483);
  u90(1, 1) = std::polar(1.0, 0.7853981633974483);
  const OrbitResult r = orbit_search(bloch_encode({0.0, 0.0, 0.2}), {CMatrix::identity(2), u90});
  CHECK(r.status == Status::kCertifiedNo);
}

TEST_CASE("orbit search keeps the aligned component and frees the rest") {
  // Source on the x axis with the {1, X} factor pair: p = 1/2 solutions leave
  // the x component fixed and the orthogonal components unconstrained.
  const CMatrix g = bloch_encode({0.1, 0.0, 0.0});
  const std::vector<CMatrix> factors = {CMatrix::identity(2), pauli(1)};
  const OrbitResult r = orbit_search(g, factors);
  REQUIRE(r.status == Status::kCertifiedYes);
  CHECK(orbit_recon_residual(g, factors, r) <= 1e-8);
  const BlochVec h = bloch_decode(r.h_op);
  CHECK(h.x == doctest::Approx(0.1).epsilon(1e-8));
  CHECK(std::sqrt(h.y * h.y + h.z * h.z) > 1e-4);
}

TEST_CASE("orbit search stays inconclusive beyond the qubit certificate") {
  // Diagonal qutrit source with a diagonal phase factor: all solutions are
  // trivial, but the no certificate only covers qubits.
  CMatrix g3(3, 3), f3(3, 3);
  g3(0, 0) = 0.5;
  g3(1, 1) = 0.3;
  g3(2, 2) = 0.2;
  f3(0, 0) = 1.0;
  f3(1, 1) = std::polar(1.0, 2.0 * kPi / 3.0);
  f3(2, 2) = std::polar(1.0, -2.0 * kPi / 3.0);
  const OrbitResult r = orbit_search(g3, {CMatrix::identity(3), f3});
  CHECK(r.status == Status::kInconclusive);
}

TEST_CASE("orbit search validates its inputs") {
  const CMatrix id2 = CMatrix::identity(2);
  const CMatrix g = id2 * 0.5;
  CHECK_THROWS_AS(orbit_search(g, {id2}, kDefaultTol, 0), std::invalid_argument);
  CHECK_THROWS_AS(orbit_search(CMatrix(2, 3), {id2}), std::invalid_argument);

  CMatrix skew(2, 2);
  skew(0, 1) = Complex(0.0, 1.0);
  skew(1, 0) = Complex(0.0, 1.0);
  skew(0, 0) = skew(1, 1) = 0.5;
  CHECK_THROWS_AS(orbit_search(skew, {id2}), std::invalid_argument);
  CHECK_THROWS_AS(orbit_search(id2, {id2}), std::invalid_argument);  // trace 2
  CHECK_THROWS_AS(orbit_search(g, {}), std::invalid_argument);
  CHECK_THROWS_AS(orbit_search(g, {CMatrix::identity(3)}), std::invalid_argument);
  CHECK_THROWS_AS(orbit_search(g, {id2 * 2.0}), std::invalid_argument);

  // Trivial factor lists short-circuit to certified-no at any dimension; a
  // nontrivial factor reaches the dimension limit.
  const CMatrix g8 = CMatrix::identity(8) * 0.125;
  CHECK(orbit_search(g8, {CMatrix::identity(8)}).status == Status::kCertifiedNo);
  CMatrix f8 = CMatrix::identity(8);
  for (std::size_t i = 4; i < 8; ++i) f8(i, i) = -1.0;
  CHECK_THROWS_AS(orbit_search(g8, {CMatrix::identity(8), f8}), std::invalid_argument);
}
