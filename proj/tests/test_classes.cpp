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
#include <string>
#include <vector>

#include "loccn/classes.hpp"
#include "loccn/groups.hpp"
#include "loccn/linalg.hpp"

using namespace loccn;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Generic coefficient vector used across the cases below.
AlphaVec sample_alpha() {
  return AlphaVec::normalized(
      {Complex(0.60, 0.0), Complex(0.52, 0.05), Complex(0.36, -0.02), Complex(0.48, 0.0)});
}

}  // namespace

TEST_CASE("bell states") {
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(bell(Bell::kPhiPlus).amps[0] - Complex(s)) < 1e-15);
  CHECK(std::abs(bell(Bell::kPhiMinus).amps[3] + Complex(s)) < 1e-15);
  CHECK(std::abs(bell(Bell::kPsiPlus).amps[1] - Complex(s)) < 1e-15);
  CHECK(std::abs(bell(Bell::kPsiMinus).amps[2] + Complex(s)) < 1e-15);
  for (auto k : {Bell::kPhiPlus, Bell::kPhiMinus, Bell::kPsiPlus, Bell::kPsiMinus})
    CHECK(bell(k).norm() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("four-qubit class representative and phase convention") {
  const ClassSpec l = l_class();
  // Support on even-weight strings only; the two extreme amplitudes carry
  // phase pi/6 and magnitude 1/2, the six middle ones magnitude 1/sqrt(12).
  const StateVector& rep = l.representative;
  REQUIRE(rep.amps.size() == 16);
  const Complex heavy = rep.amps[0];
  CHECK(std::abs(heavy) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::arg(heavy) == doctest::Approx(kPi / 6.0).epsilon(1e-12));
  CHECK(std::abs(rep.amps[15] - heavy) < 1e-12);
  for (std::size_t idx : {3u, 5u, 6u, 9u, 10u, 12u}) {
    CHECK(std::abs(rep.amps[idx]) == doctest::Approx(1.0 / std::sqrt(12.0)).epsilon(1e-12));
    CHECK(std::abs(rep.amps[idx] - rep.amps[3]) < 1e-12);
  }
  for (std::size_t idx : {1u, 2u, 4u, 7u, 8u, 11u, 13u, 14u}) CHECK(std::abs(rep.amps[idx]) == 0.0);

  // Eigenvalue exactly one for every element, including the phased order-3
  // generator; projective stabilization alone would not pass this.
  for (double r : verify_stabilizer(rep, l.stabilizer)) CHECK(r < 1e-12);
}

TEST_CASE("pauli_class construction and rejection") {
  const AlphaVec a = sample_alpha();
  const StateVector psi = build_psi_m(a, 2);
  const ClassSpec spec = pauli_class(4, psi);
  CHECK(spec.name == "pauli4");
  CHECK(spec.stabilizer.size() == 4);
  CHECK(spec.dims == std::vector<int>{2, 2, 2, 2});
  for (double r : verify_stabilizer(spec.representative, spec.stabilizer)) CHECK(r < 1e-12);

  // A state without the symmetry is rejected.
  StateVector skew = psi;
  skew.amps[1] += 0.3;
  skew = skew.normalized();
  CHECK_THROWS_AS(pauli_class(4, skew), std::invalid_argument);
  CHECK_THROWS_AS(pauli_class(3, psi), std::invalid_argument);
}

TEST_CASE("seed state and its recursive extensions") {
  const AlphaVec a = sample_alpha();
  const StateVector base = psi2(a);
  CHECK(base.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(inner(build_psi_m(a, 2), base)) == doctest::Approx(1.0).epsilon(1e-12));

  // The full Pauli strings stabilize every level with eigenvalue one.
  for (int m = 2; m <= 3; ++m) {
    const StateVector psi = build_psi_m(a, m);
    CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
    const int n = 1 << m;
    LocalSymmetry sx, sz;
    sx.factors.assign(static_cast<std::size_t>(n), pauli(1));
    sz.factors.assign(static_cast<std::size_t>(n), pauli(3));
    const StabilizerGroup g = close_group({sx, sz}, 64);
    CHECK(g.size() == 4);
    for (double r : verify_stabilizer(psi, g)) CHECK(r < 1e-12);
  }

  CHECK_THROWS_AS(build_psi_m(a, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_psi_m(a, 5), std::invalid_argument);
}

TEST_CASE("block swap invariance") {
  const AlphaVec a = sample_alpha();
  CHECK(verify_uk_invariance(a, 3, 2) < 1e-13);
  CHECK(verify_uk_invariance(a, 4, 2) < 1e-13);
  CHECK(verify_uk_invariance(a, 4, 3) < 1e-13);
  CHECK_THROWS_AS(verify_uk_invariance(a, 2, 2), std::invalid_argument);
}

TEST_CASE("building through intermediate levels agrees") {
  const AlphaVec a = sample_alpha();
  for (int m = 2; m <= 4; ++m) {
    const StateVector direct = build_psi_m(a, m);
    for (int k = 2; k <= m; ++k) {
      const StateVector via = build_psi_m_via_k(a, m, k);
      CHECK(std::abs(inner(direct, via)) == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
  // The pair list rebuilding level 4 from level 2 uses 3 symmetrizers on
  // 16 qubits; level 3 from level 2 uses 1 on 8.
  CHECK(symmetrizer_K(3, 2).size() == 1);
  CHECK(symmetrizer_K(4, 2).size() == 3);
  CHECK(symmetrizer_K(4, 4).empty());
}

TEST_CASE("genericity predicates") {
  CHECK(alpha_generic(sample_alpha()));

  // Two equal squares break the pairwise condition.
  CHECK_FALSE(alpha_generic(
      AlphaVec::normalized({Complex(0.5, 0.0), Complex(0.5, 0.0), Complex(0.3, 0.0), Complex(0.2, 0.0)})));
  // alpha_j = exp(i pi j / 4): the squares form a multiset invariant under
  // multiplication by i, breaking the rescaling condition.
  const Complex w = std::polar(1.0, kPi / 4.0);
  CHECK_FALSE(alpha_generic(AlphaVec::normalized({Complex(1.0), w, w * w, w * w * w})));

  // Membership additionally needs the third slot to vanish.
  CHECK_FALSE(p_set_member(sample_alpha()));
  const AlphaVec in_p = AlphaVec::normalized(
      {Complex(0.60, 0.0), Complex(0.52, 0.0), Complex(0.0, 0.0), Complex(0.48, 0.0)});
  CHECK(alpha_generic(in_p));
  CHECK(p_set_member(in_p));
}

TEST_CASE("reduction maps annihilate the third slot") {
  const AlphaVec a = sample_alpha();
  for (int i = 1; i <= 3; ++i) {
    const AlphaVec b = lambda_map(i, a);
    CHECK(std::abs(b.a[2]) < 1e-12);
    CHECK(b.norm() == doctest::Approx(1.0).epsilon(1e-12));
    // Canonical phase: the dominant coefficient is real positive.
    int jmax = 0;
    for (int j = 1; j < 4; ++j)
      if (std::abs(b.a[j]) > std::abs(b.a[jmax])) jmax = j;
    CHECK(b.a[jmax].imag() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(b.a[jmax].real() > 0.0);
  }
  CHECK_THROWS_AS(lambda_map(0, a), std::invalid_argument);
  CHECK_THROWS_AS(
      lambda_map(1, AlphaVec::normalized({Complex(0.5, 0.0), Complex(0.5, 0.0), Complex(0.3, 0.0),
                                          Complex(0.2, 0.0)})),
      std::invalid_argument);
}

TEST_CASE("chained genericity") {
  std::string diag;
  CHECK(generic_chain_check(sample_alpha(), 2, &diag));
  CHECK(diag.empty());

  CHECK_FALSE(generic_chain_check(
      AlphaVec::normalized({Complex(0.5, 0.0), Complex(0.5, 0.0), Complex(0.3, 0.0),
                            Complex(0.2, 0.0)}),
      1, &diag));
  CHECK(diag == "seed alpha not generic");
}

TEST_CASE("builtin class registry") {
  REQUIRE(find_builtin_class("L") != nullptr);
  CHECK(find_builtin_class("L")->stabilizer.size() == 12);
  REQUIRE(find_builtin_class("pauli4") != nullptr);
  CHECK(find_builtin_class("pauli4")->dims.size() == 4);
  REQUIRE(find_builtin_class("pauli8") != nullptr);
  CHECK(find_builtin_class("pauli8")->stabilizer.size() == 4);
  CHECK(find_builtin_class("nope") == nullptr);
}

TEST_CASE("alpha normalization") {
  CHECK_THROWS_AS(AlphaVec::normalized({Complex(0.0), Complex(0.0), Complex(0.0), Complex(0.0)}),
                  std::invalid_argument);
  const AlphaVec v = AlphaVec::normalized({Complex(3.0), Complex(4.0), Complex(0.0), Complex(0.0)});
  CHECK(v.a[0].real() == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(v.a[1].real() == doctest::Approx(0.8).epsilon(1e-15));
}
