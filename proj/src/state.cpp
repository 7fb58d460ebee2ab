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

#include "loccn/state.hpp"

#include <cmath>
#include <stdexcept>

namespace loccn {

namespace {

void validate_op(const CMatrix& g, double tol, std::size_t party) {
  const std::string where = "party " + std::to_string(party);
  if (g.rows() != g.cols() || g.rows() == 0)
    throw std::invalid_argument("StateInClass: non-square operator at " + where);
  if (!g.is_hermitian(tol))
    throw std::invalid_argument("StateInClass: operator not Hermitian at " + where);
  if (std::abs(g.trace() - Complex(1.0)) > 1e-10)
    throw std::invalid_argument("StateInClass: operator trace not 1 at " + where);
  EigenSys es = hermitian_eigen(g);
  if (es.values.front() < 1e-8)
    throw std::invalid_argument("StateInClass: operator not positive definite at " + where);
}

}  // namespace

StateInClass StateInClass::make(std::string class_id, std::vector<CMatrix> ops, double tol) {
  if (ops.empty()) throw std::invalid_argument("StateInClass: no party operators");
  for (std::size_t i = 0; i < ops.size(); ++i) validate_op(ops[i], tol, i);
  StateInClass s;
  s.class_id = std::move(class_id);
  s.ops = std::move(ops);
  return s;
}

StateInClass StateInClass::from_bloch(std::string class_id, const std::vector<BlochVec>& blochs,
                                      double tol) {
  std::vector<CMatrix> ops;
  ops.reserve(blochs.size());
  for (const auto& b : blochs) ops.push_back(bloch_encode(b));
  return make(std::move(class_id), std::move(ops), tol);
}

BlochVec StateInClass::bloch(int party) const {
  if (party < 0 || party >= parties()) throw std::invalid_argument("StateInClass: party out of range");
  if (ops[party].rows() != 2) throw std::invalid_argument("StateInClass: party is not a qubit");
  return bloch_decode(ops[party], 1e-6);
}

StateInClass StateInClass::with_op(int party, const CMatrix& op, double tol) const {
  if (party < 0 || party >= parties()) throw std::invalid_argument("StateInClass: party out of range");
  std::vector<CMatrix> next = ops;
  next[party] = op;
  return make(class_id, std::move(next), tol);
}

double state_distance(const StateInClass& a, const StateInClass& b) {
  if (a.ops.size() != b.ops.size()) throw std::invalid_argument("state_distance: party count mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.ops.size(); ++i) {
    const double d = (a.ops[i] - b.ops[i]).frobenius_norm();
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace loccn
