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

#include "loccn/groups.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <unordered_map>

namespace loccn {

namespace {

void check_factor_shapes(const LocalSymmetry& s, const std::vector<int>& dims,
                         const char* what) {
  if (s.parties() != static_cast<int>(dims.size()))
    throw std::invalid_argument(std::string(what) + ": party count mismatch");
  for (std::size_t i = 0; i < s.factors.size(); ++i) {
    const auto& f = s.factors[i];
    if (f.rows() != static_cast<std::size_t>(dims[i]) || f.cols() != f.rows())
      throw std::invalid_argument(std::string(what) + ": factor dimension mismatch");
  }
}

double tensor_scale(const LocalSymmetry& a) {
  double p = 1.0;
  for (const auto& f : a.factors) p *= f.frobenius_norm();
  return p;
}

// Quantized phase-insensitive invariants of one element; used only to bucket
// candidates before the exact tensor comparison.
std::uint64_t element_hash(const LocalSymmetry& s) {
  std::uint64_t h = 1469598103934665603ULL;
  auto feed = [&h](double v) {
    const auto q = static_cast<std::int64_t>(std::llround(v * 1e6));
    h ^= static_cast<std::uint64_t>(q);
    h *= 1099511628211ULL;
  };
  for (const auto& f : s.factors) {
    feed(std::abs(f.trace()));
    feed(std::abs((f * f).trace()));
  }
  return h;
}

}  // namespace

LocalSymmetry symmetry_identity(const std::vector<int>& dims) {
  LocalSymmetry s;
  s.factors.reserve(dims.size());
  for (int d : dims) {
    if (d < 1) throw std::invalid_argument("symmetry_identity: bad dimension");
    s.factors.push_back(CMatrix::identity(static_cast<std::size_t>(d)));
  }
  return s;
}

LocalSymmetry symmetry_product(const LocalSymmetry& a, const LocalSymmetry& b) {
  if (a.parties() != b.parties())
    throw std::invalid_argument("symmetry_product: party count mismatch");
  LocalSymmetry out;
  out.factors.reserve(a.factors.size());
  for (std::size_t i = 0; i < a.factors.size(); ++i)
    out.factors.push_back(a.factors[i] * b.factors[i]);
  return out;
}

LocalSymmetry symmetry_adjoint(const LocalSymmetry& a) {
  LocalSymmetry out;
  out.factors.reserve(a.factors.size());
  for (const auto& f : a.factors) out.factors.push_back(f.adjoint());
  return out;
}

CMatrix full_tensor(const LocalSymmetry& s) {
  std::size_t total = 1;
  for (const auto& f : s.factors) {
    total *= f.rows();
    if (total > 4096) throw std::invalid_argument("full_tensor: tensor dimension exceeds 4096");
  }
  return tensor(s.factors);
}

double tensor_distance(const LocalSymmetry& a, const LocalSymmetry& b) {
  if (a.parties() != b.parties())
    throw std::invalid_argument("tensor_distance: party count mismatch");
  // |A - B|^2 = prod|a_i|^2 + prod|b_i|^2 - 2 Re prod <a_i, b_i>.  The three
  // products cancel almost exactly for near-equal inputs, so small returned
  // distances are noise-limited near sqrt(eps) times the tensor norm; use
  // factors_prop_equal based tests for identification.
  long double na2 = 1.0L, nb2 = 1.0L;
  std::complex<long double> ip = 1.0L;
  for (std::size_t i = 0; i < a.factors.size(); ++i) {
    na2 *= static_cast<long double>(frobenius_inner(a.factors[i], a.factors[i]).real());
    nb2 *= static_cast<long double>(frobenius_inner(b.factors[i], b.factors[i]).real());
    const Complex f = frobenius_inner(a.factors[i], b.factors[i]);
    ip *= std::complex<long double>(f.real(), f.imag());
  }
  const long double d2 = na2 + nb2 - 2.0L * ip.real();
  return static_cast<double>(std::sqrt(std::max(0.0L, d2)));
}

namespace {

// Factorwise identification: every factor pair must agree up to a unit phase;
// the product of the fitted phases is written out for the caller to constrain.
bool factors_prop_equal(const LocalSymmetry& a, const LocalSymmetry& b, double tol,
                        Complex* phase_product) {
  if (a.parties() != b.parties())
    throw std::invalid_argument("tensor_equal: party count mismatch");
  Complex prod = 1.0;
  for (std::size_t i = 0; i < a.factors.size(); ++i) {
    const CMatrix& fa = a.factors[i];
    const CMatrix& fb = b.factors[i];
    if (fa.rows() != fb.rows() || fa.cols() != fb.cols()) return false;
    const double na2 = frobenius_inner(fa, fa).real();
    const double nb2 = frobenius_inner(fb, fb).real();
    const Complex ip = frobenius_inner(fb, fa);
    // min over |c| = 1 of |fa - c fb|^2.
    const double d2 = na2 + nb2 - 2.0 * std::abs(ip);
    const double scale = std::max(1.0, std::sqrt(na2 * nb2));
    if (std::sqrt(std::max(0.0, d2)) > tol * scale) return false;
    prod *= ip / std::abs(ip);
  }
  if (phase_product != nullptr) *phase_product = prod;
  return true;
}

}  // namespace

bool tensor_equal(const LocalSymmetry& a, const LocalSymmetry& b, double tol) {
  Complex phase = 1.0;
  if (!factors_prop_equal(a, b, tol, &phase)) return false;
  // Fitted phases must multiply back to one; distinct phase-proportional
  // group elements sit at least |exp(i pi/6) - 1| away, so the floor is safe.
  return std::abs(phase - Complex(1.0)) <= std::max(100.0 * tol, 1e-7);
}

bool tensor_prop_equal(const LocalSymmetry& a, const LocalSymmetry& b, double tol) {
  return factors_prop_equal(a, b, tol, nullptr);
}

bool factor_nontrivial(const CMatrix& f, double tol) {
  if (f.rows() != f.cols()) throw std::invalid_argument("factor_nontrivial: non-square");
  const Complex c = f.trace() / static_cast<double>(f.rows());
  CMatrix diff = f;
  for (std::size_t i = 0; i < f.rows(); ++i) diff(i, i) -= c;
  return diff.frobenius_norm() > tol * std::max(1.0, f.frobenius_norm());
}

std::vector<int> StabilizerGroup::dims() const {
  std::vector<int> d;
  if (elements.empty()) return d;
  for (const auto& f : elements.front().factors) d.push_back(static_cast<int>(f.rows()));
  return d;
}

StabilizerGroup close_group(const std::vector<LocalSymmetry>& generators, std::size_t max_size,
                            double tol) {
  if (generators.empty()) throw std::invalid_argument("close_group: no generators");
  std::vector<int> dims;
  for (const auto& f : generators.front().factors) dims.push_back(static_cast<int>(f.rows()));
  for (const auto& g : generators) {
    check_factor_shapes(g, dims, "close_group");
    for (const auto& f : g.factors)
      if (!f.is_unitary(tol)) throw std::invalid_argument("close_group: non-unitary generator");
  }

  StabilizerGroup group;
  group.elements.push_back(symmetry_identity(dims));
  group.identity_index = 0;
  std::unordered_multimap<std::uint64_t, std::size_t> buckets;
  buckets.emplace(element_hash(group.elements[0]), 0);

  auto lookup = [&](const LocalSymmetry& s) -> std::optional<std::size_t> {
    auto [lo, hi] = buckets.equal_range(element_hash(s));
    for (auto it = lo; it != hi; ++it)
      if (tensor_equal(group.elements[it->second], s, tol)) return it->second;
    return std::nullopt;
  };

  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    const std::size_t i = queue.front();
    queue.pop_front();
    for (const auto& g : generators) {
      LocalSymmetry prod = symmetry_product(group.elements[i], g);
      if (lookup(prod)) continue;
      if (group.elements.size() >= max_size)
        throw std::invalid_argument("close_group: closure exceeds max_size");
      group.elements.push_back(std::move(prod));
      const std::size_t idx = group.elements.size() - 1;
      buckets.emplace(element_hash(group.elements[idx]), idx);
      queue.push_back(idx);
    }
  }
  return group;
}

std::optional<std::size_t> find_element(const StabilizerGroup& g, const LocalSymmetry& s,
                                        double tol) {
  for (std::size_t i = 0; i < g.elements.size(); ++i)
    if (tensor_equal(g.elements[i], s, tol)) return i;
  return std::nullopt;
}

std::vector<double> verify_stabilizer(const StateVector& psi, const StabilizerGroup& g) {
  if (g.elements.empty()) throw std::invalid_argument("verify_stabilizer: empty group");
  std::vector<double> residuals;
  residuals.reserve(g.elements.size());
  for (const auto& s : g.elements) {
    StateVector mapped = apply_local(s.factors, psi);
    double acc = 0.0;
    for (std::size_t i = 0; i < mapped.amps.size(); ++i) acc += std::norm(mapped.amps[i] - psi.amps[i]);
    residuals.push_back(std::sqrt(acc));
  }
  return residuals;
}

std::pair<bool, double> commutes(const CMatrix& op, const CMatrix& factor, double tol) {
  const double nrm = commutator(op, factor).frobenius_norm();
  const double scale = std::max(1.0, op.frobenius_norm() * factor.frobenius_norm());
  return {nrm <= tol * scale, nrm};
}

std::vector<std::size_t> admissible_set(const StateInClass& state, const StabilizerGroup& g,
                                        int exempt_party, double tol) {
  if (g.parties() != state.parties())
    throw std::invalid_argument("admissible_set: party count mismatch");
  if (exempt_party < -1 || exempt_party >= state.parties())
    throw std::invalid_argument("admissible_set: exempt party out of range");
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < g.elements.size(); ++k) {
    bool ok = true;
    for (int i = 0; i < state.parties() && ok; ++i) {
      if (i == exempt_party) continue;
      ok = commutes(state.ops[i], g.elements[k].factors[i], tol).first;
    }
    if (ok) out.push_back(k);
  }
  return out;
}

CMatrix twirl(const CMatrix& op, const std::vector<CMatrix>& subgroup) {
  if (subgroup.empty()) throw std::invalid_argument("twirl: empty subgroup");
  CMatrix acc(op.rows(), op.cols());
  for (const auto& s : subgroup) {
    if (s.rows() != op.rows() || !s.is_unitary(1e-8))
      throw std::invalid_argument("twirl: subgroup element not a matching unitary");
    acc += s * op * s.adjoint();
  }
  return acc * Complex(1.0 / static_cast<double>(subgroup.size()));
}

bool pairwise_prop_commute(const StabilizerGroup& g, double tol) {
  for (std::size_t i = 0; i < g.elements.size(); ++i) {
    for (std::size_t j = i + 1; j < g.elements.size(); ++j) {
      const LocalSymmetry ab = symmetry_product(g.elements[i], g.elements[j]);
      const LocalSymmetry ba = symmetry_product(g.elements[j], g.elements[i]);
      if (!tensor_prop_equal(ab, ba, tol)) return false;
    }
  }
  return true;
}

}  // namespace loccn
