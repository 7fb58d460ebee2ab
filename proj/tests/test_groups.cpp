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
#include <stdexcept>
#include <vector>

#include "loccn/classes.hpp"
#include "loccn/groups.hpp"
#include "loccn/linalg.hpp"
#include "loccn/state.hpp"

using namespace loccn;

namespace {

LocalSymmetry string_of(const CMatrix& f, int n) {
  LocalSymmetry s;
  s.factors.assign(static_cast<std::size_t>(n), f);
  return s;
}

}  // namespace

TEST_CASE("symmetry products and tensors") {
  const LocalSymmetry a = string_of(pauli(1), 2);
  const LocalSymmetry b = string_of(pauli(3), 2);
  const LocalSymmetry ab = symmetry_product(a, b);
  CHECK((ab.factors[0] - pauli(1) * pauli(3)).max_abs() == 0.0);

  const CMatrix full = full_tensor(ab);
  CHECK((full - tensor({pauli(1) * pauli(3), pauli(1) * pauli(3)})).max_abs() == 0.0);

  const LocalSymmetry adj = symmetry_adjoint(ab);
  CHECK((symmetry_product(ab, adj).factors[0] - CMatrix::identity(2)).max_abs() < 1e-15);

  CHECK_THROWS_AS(symmetry_product(a, string_of(pauli(1), 3)), std::invalid_argument);
  CHECK_THROWS_AS(symmetry_identity({2, 0}), std::invalid_argument);
}

TEST_CASE("tensor equality folds per-factor phases") {
  const Complex i(0.0, 1.0);
  LocalSymmetry plain, folded, half;
  plain.factors = {pauli(1), pauli(1)};
  folded.factors = {pauli(1) * i, pauli(1) * (-i)};  // phases cancel
  half.factors = {pauli(1) * i, pauli(1)};           // one dangling phase

  CHECK(tensor_equal(plain, folded, 1e-12));
  CHECK_FALSE(tensor_equal(plain, half, 1e-12));
  CHECK(tensor_prop_equal(plain, half, 1e-12));

  // (XZ) (x) (XZ) and (ZX) (x) (ZX) differ by (-1)^2 = 1.
  LocalSymmetry xz, zx;
  xz.factors = {pauli(1) * pauli(3), pauli(1) * pauli(3)};
  zx.factors = {pauli(3) * pauli(1), pauli(3) * pauli(1)};
  CHECK(tensor_distance(xz, zx) == 0.0);
  CHECK(tensor_equal(xz, zx, 1e-12));

  // Distinct strings are far apart.
  LocalSymmetry zz;
  zz.factors = {pauli(3), pauli(3)};
  CHECK(tensor_distance(plain, zz) == doctest::Approx(std::sqrt(8.0)).epsilon(1e-12));
  CHECK_FALSE(tensor_equal(plain, zz, 1e-6));
  CHECK_FALSE(tensor_prop_equal(plain, zz, 1e-6));
}

TEST_CASE("factor_nontrivial") {
  CHECK(factor_nontrivial(pauli(1), 1e-9));
  CHECK_FALSE(factor_nontrivial(CMatrix::identity(2), 1e-9));
  CHECK_FALSE(factor_nontrivial(CMatrix::identity(3) * Complex(0.0, 1.0), 1e-9));
  CHECK_THROWS_AS(factor_nontrivial(CMatrix(2, 3), 1e-9), std::invalid_argument);
}

TEST_CASE("pauli string closures") {
  // Even party count: (XZ)^n and (ZX)^n coincide, the closure is the
  // four-element abelian group {1, X..X, Z..Z, Y..Y}.
  StabilizerGroup even = close_group({string_of(pauli(1), 4), string_of(pauli(3), 4)}, 64);
  CHECK(even.size() == 4);
  CHECK(even.identity_index == 0);
  CHECK(even.dims() == std::vector<int>{2, 2, 2, 2});

  // Single qubit: the dangling -1 from XZ = -ZX survives, size 8.
  StabilizerGroup single = close_group({string_of(pauli(1), 1), string_of(pauli(3), 1)}, 64);
  CHECK(single.size() == 8);

  // Closure property: products and adjoints stay inside.
  for (const auto& x : even.elements) {
    CHECK(find_element(even, symmetry_adjoint(x), 1e-9).has_value());
    for (const auto& y : even.elements)
      CHECK(find_element(even, symmetry_product(x, y), 1e-9).has_value());
  }

  CHECK_THROWS_AS(close_group({string_of(pauli(1), 4), string_of(pauli(3), 4)}, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(close_group({}, 4), std::invalid_argument);
  LocalSymmetry bad;
  bad.factors = {pauli(1) * Complex(2.0, 0.0)};
  CHECK_THROWS_AS(close_group({bad}, 4), std::invalid_argument);
}

TEST_CASE("verify_stabilizer on the bell pair") {
  const StateVector phi = bell(Bell::kPhiPlus);
  StabilizerGroup g = close_group({string_of(pauli(1), 2), string_of(pauli(3), 2)}, 16);
  REQUIRE(g.size() == 4);
  for (double r : verify_stabilizer(phi, g)) CHECK(r < 1e-14);

  // phi- is flipped by the X string: residual sqrt(2) |amp| scale.
  const StateVector mi = bell(Bell::kPhiMinus);
  const std::vector<double> res = verify_stabilizer(mi, g);
  bool some_large = false;
  for (double r : res) some_large = some_large || r > 1.0;
  CHECK(some_large);
}

TEST_CASE("commutes") {
  auto [ok, nrm] = commutes(pauli(1), pauli(1));
  CHECK(ok);
  CHECK(nrm == 0.0);
  auto [bad, nrm2] = commutes(pauli(1), pauli(3), 1e-9);
  CHECK_FALSE(bad);
  CHECK(nrm2 == doctest::Approx(std::sqrt(8.0) * 2.0 / 2.0).epsilon(1e-12));
  // [X, Z] = -2i Y, norm 2 sqrt(2).
  CHECK(nrm2 == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("admissible symmetries of a state") {
  StabilizerGroup g = close_group({string_of(pauli(1), 4), string_of(pauli(3), 4)}, 16);
  REQUIRE(g.size() == 4);

  // Party 0 keeps an X-aligned operator: only the identity and the X string
  // commute everywhere.
  std::vector<BlochVec> blochs{{0.1, 0.0, 0.0}, {0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
  const StateInClass state = StateInClass::from_bloch("pauli4", blochs);

  const std::vector<std::size_t> all = admissible_set(state, g, -1, 1e-9);
  REQUIRE(all.size() == 2);
  CHECK(all[0] == g.identity_index);
  CHECK(factor_nontrivial(g.elements[all[1]].factors[0], 1e-9));
  CHECK(commutes(bloch_encode({0.1, 0, 0}), g.elements[all[1]].factors[0], 1e-9).first);

  // Exempting party 0 readmits every element.
  CHECK(admissible_set(state, g, 0, 1e-9).size() == 4);

  CHECK_THROWS_AS(admissible_set(state, g, 7, 1e-9), std::invalid_argument);
}

TEST_CASE("tetrahedral stabilizer of the four-qubit class") {
  const ClassSpec l = l_class();
  CHECK(l.name == "L");
  CHECK(l.dims == std::vector<int>{2, 2, 2, 2});
  REQUIRE(l.stabilizer.size() == 12);
  CHECK(l.stabilizer.identity_index == 0);
  CHECK(std::abs(l.representative.norm() - 1.0) < 1e-12);

  // Every element is a fourth power string with identical factors, all
  // stabilizing the representative with eigenvalue one, not just a phase.
  for (const auto& e : l.stabilizer.elements) {
    REQUIRE(e.factors.size() == 4);
    for (int i = 1; i < 4; ++i) CHECK((e.factors[0] - e.factors[i]).max_abs() == 0.0);
    CHECK(e.factors[0].is_unitary(1e-12));
  }
  for (double r : verify_stabilizer(l.representative, l.stabilizer)) CHECK(r < 1e-12);

  // Pairwise distinct, closed under products.
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = 0; j < 12; ++j) {
      if (i != j) CHECK_FALSE(tensor_equal(l.stabilizer.elements[i], l.stabilizer.elements[j], 1e-8));
      CHECK(find_element(l.stabilizer,
                         symmetry_product(l.stabilizer.elements[i], l.stabilizer.elements[j]),
                         1e-8)
                .has_value());
    }

  // The order-3 generator cycles the Pauli axes; its cube is a phase.
  const CMatrix& u = l_symmetry_u();
  CHECK((u * pauli(1) * u.adjoint() - pauli(3)).max_abs() < 1e-14);
  CHECK((u * u * u + CMatrix::identity(2)).max_abs() < 1e-14);
}
