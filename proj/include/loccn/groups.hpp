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

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "loccn/linalg.hpp"
#include "loccn/state.hpp"

namespace loccn {

/// Product of local unitaries, one factor per party.  Factors may carry
/// individual phases; identity of two symmetries is decided at the level of
/// the full tensor product, so per-factor phase gauge never matters.
struct LocalSymmetry {
  std::vector<CMatrix> factors;

  int parties() const { return static_cast<int>(factors.size()); }
};

LocalSymmetry symmetry_identity(const std::vector<int>& dims);
LocalSymmetry symmetry_product(const LocalSymmetry& a, const LocalSymmetry& b);
LocalSymmetry symmetry_adjoint(const LocalSymmetry& a);

/// Dense tensor product of the factors.  Guarded against large dimensions;
/// errors when the product dimension exceeds 4096.
CMatrix full_tensor(const LocalSymmetry& s);

/// Frobenius distance between two factored tensors, computed from per-party
/// inner products without materializing the tensors.
double tensor_distance(const LocalSymmetry& a, const LocalSymmetry& b);

/// Equality of the full tensor products at tolerance (scaled by sqrt of the
/// tensor dimension).
bool tensor_equal(const LocalSymmetry& a, const LocalSymmetry& b, double tol = kDefaultTol);

/// Equality up to a global phase, the phase fitted from the dominant
/// component of the factored inner product.
bool tensor_prop_equal(const LocalSymmetry& a, const LocalSymmetry& b, double tol = kDefaultTol);

/// Whether a single factor differs from a multiple of the identity.
bool factor_nontrivial(const CMatrix& f, double tol = kDefaultTol);

/// Finite group of local symmetries; element 0 is the identity and no two
/// elements coincide as tensors.
struct StabilizerGroup {
  std::vector<LocalSymmetry> elements;
  std::size_t identity_index = 0;

  std::size_t size() const { return elements.size(); }
  int parties() const { return elements.empty() ? 0 : elements.front().parties(); }
  std::vector<int> dims() const;
};

/// Closes a generating set under products.  Errors on non-unitary or
/// shape-inconsistent generators, and when closure exceeds max_size.
StabilizerGroup close_group(const std::vector<LocalSymmetry>& generators,
                            std::size_t max_size = 256, double tol = kDefaultTol);

/// Index of the element tensor-equal to s, if present.
std::optional<std::size_t> find_element(const StabilizerGroup& g, const LocalSymmetry& s,
                                        double tol = kDefaultTol);

/// Residual |S psi - psi| for every element; the stabilizer property holds
/// when all residuals are at most the caller's tolerance.
std::vector<double> verify_stabilizer(const StateVector& psi, const StabilizerGroup& g);

/// Commutator test between a party operator and one symmetry factor.
/// Returns (commutes within tol, Frobenius norm of the commutator).
std::pair<bool, double> commutes(const CMatrix& op, const CMatrix& factor,
                                 double tol = kDefaultTol);

/// Indices of group elements whose factors commute with the state's operator
/// at every party except the exempt one (-1 exempts nobody).  The identity is
/// always admissible.
std::vector<std::size_t> admissible_set(const StateInClass& state, const StabilizerGroup& g,
                                        int exempt_party, double tol = kDefaultTol);

/// Group average (1/m) sum_k S_k op S_k^dag over explicit unitaries.
/// Pre: the list is non-empty and closed under products.
CMatrix twirl(const CMatrix& op, const std::vector<CMatrix>& subgroup);

/// Whether every pair of elements commutes up to a global phase.
bool pairwise_prop_commute(const StabilizerGroup& g, double tol = kDefaultTol);

}  // namespace loccn
