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

#pragma once

#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "loccn/groups.hpp"
#include "loccn/linalg.hpp"

namespace loccn {

/// A class of states: a representative vector plus the finite group of local
/// symmetries fixing it (eigenvalue exactly 1, not just projectively).
struct ClassSpec {
  std::string name;
  StateVector representative;
  StabilizerGroup stabilizer;
  std::vector<int> dims;

  int parties() const { return static_cast<int>(dims.size()); }
};

enum class Bell { kPhiPlus, kPhiMinus, kPsiPlus, kPsiMinus };

StateVector bell(Bell kind);

/// Four-qubit class with a twelve-element stabilizer; each element is a
/// fourth power s x s x s x s of a phased single-qubit unitary.
ClassSpec l_class();

/// The order-3 rotation generating the non-Pauli part of the l_class
/// stabilizer (cyclically permutes the three Pauli axes).
const CMatrix& l_symmetry_u();

/// Qubit class on `parties` qubits stabilized by the two full Pauli strings
/// (and hence all four); errors if the representative is not actually
/// stabilized or its shape disagrees with the party count.
ClassSpec pauli_class(int parties, const StateVector& representative, double tol = kDefaultTol);

/// Coefficient vector of the seed state family; unit norm enforced at
/// construction.
struct AlphaVec {
  std::array<Complex, 4> a{};

  static AlphaVec normalized(const std::array<Complex, 4>& raw);
  double norm() const;
};

/// Four-qubit seed state sum_i alpha_i sigma_i^(1) sigma_i^(3) |phi+phi+>.
StateVector psi2(const AlphaVec& alpha);

/// Genericity of alpha: pairwise distinct squares and no scalar q != 1 with
/// {alpha_i^2} = {q alpha_i^2} as multisets, at the given tolerance on the
/// defining inequalities.
bool alpha_generic(const AlphaVec& alpha, double tol = 1e-8);

/// Alternate membership predicate: generic and with a vanishing third slot
/// (the component the lambda maps annihilate).
bool p_set_member(const AlphaVec& alpha, double tol = 1e-8);

/// Qubit-pair list whose symmetrizers rebuild the level-m state from copies
/// of the level-k state; 2 <= k <= m <= 4.  Empty when k == m.
std::vector<std::pair<int, int>> symmetrizer_K(int m, int k);

/// (1 + SWAP_{qa,qb})/2 applied to a qubit state, unnormalized.  Errors when
/// the result is annihilated.
StateVector apply_pair_symmetrizer(const StateVector& psi, int qa, int qb);

/// Level-m state on 2^m qubits, built by recursive halving symmetrization;
/// 2 <= m <= 4.  Errors if symmetrization annihilates the state.
StateVector build_psi_m(const AlphaVec& alpha, int m);

/// Same state built from 2^(m-k) copies of the level-k state through the
/// symmetrizer_K pair list, renormalized at the end only.
StateVector build_psi_m_via_k(const AlphaVec& alpha, int m, int k = 2);

/// Residual |U_k psi_m - psi_m| for the block-swap permutation exchanging
/// qubits i and 2^k + i, i = 1 .. 2^k - 1.  Valid for 2 <= k < m <= 4.
double verify_uk_invariance(const AlphaVec& alpha, int m, int k);

/// Image of alpha under the i-th reduction map (i in {1,2,3}): symmetrized
/// two-copy state contracted with two singlet pairs, expanded again in seed
/// form.  The returned vector has its third slot at numerical zero; the
/// expansion residual is verified to 1e-9.  Errors on non-generic alpha and
/// on annihilating projections.
AlphaVec lambda_map(int i, const AlphaVec& alpha, double tol = kDefaultTol);

/// Checks genericity of alpha and of every composition of reduction maps up
/// to the given depth (1 <= depth <= 4).  On failure, the diagnostic names
/// the first failing composition.
bool generic_chain_check(const AlphaVec& alpha, int depth, std::string* diagnostic = nullptr);

/// Built-in classes: "pauli4", "pauli8", "pauli16", "L".  Null when unknown.
const ClassSpec* find_builtin_class(std::string_view name);

}  // namespace loccn
