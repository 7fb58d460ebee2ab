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

#include "loccn/classes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace loccn {

namespace {

constexpr double kPi = 3.14159265358979323846;

StateVector qubits(int n, std::vector<Complex> amps) {
  return StateVector(std::vector<int>(n, 2), std::move(amps));
}

// Contracts <psi-| onto the qubit pair (qa, qb); the result lives on the
// remaining qubits in their original order.
StateVector project_singlet(const StateVector& v, int qa, int qb) {
  const int n = static_cast<int>(v.dims.size());
  if (qa < 0 || qb < 0 || qa >= n || qb >= n || qa == qb)
    throw std::invalid_argument("project_singlet: bad qubit pair");
  for (int d : v.dims)
    if (d != 2) throw std::invalid_argument("project_singlet: qubit-only operation");
  if (qa > qb) std::swap(qa, qb);
  const int sa = n - 1 - qa;  // bit positions, party 0 most significant
  const int sb = n - 1 - qb;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  auto remove_bit = [](std::size_t x, int pos) {
    const std::size_t low = x & ((std::size_t{1} << pos) - 1);
    return ((x >> (pos + 1)) << pos) | low;
  };

  std::vector<Complex> out(std::size_t{1} << (n - 2), 0.0);
  for (std::size_t idx = 0; idx < v.amps.size(); ++idx) {
    const bool ba = (idx >> sa) & 1;
    const bool bb = (idx >> sb) & 1;
    if (ba == bb) continue;
    const double coef = (!ba && bb) ? inv_sqrt2 : -inv_sqrt2;
    const std::size_t j = remove_bit(remove_bit(idx, sa), sb);
    out[j] += coef * v.amps[idx];
  }
  return qubits(n - 2, std::move(out));
}

const std::array<AlphaVec, 1>& default_alpha() {
  static const std::array<AlphaVec, 1> a{
      AlphaVec::normalized({Complex(1.0), Complex(2.0), Complex(3.0), Complex(4.0)})};
  return a;
}

}  // namespace

StateVector bell(Bell kind) {
  const double s = 1.0 / std::sqrt(2.0);
  switch (kind) {
    case Bell::kPhiPlus: return qubits(2, {s, 0.0, 0.0, s});
    case Bell::kPhiMinus: return qubits(2, {s, 0.0, 0.0, -s});
    case Bell::kPsiPlus: return qubits(2, {0.0, s, s, 0.0});
    case Bell::kPsiMinus: return qubits(2, {0.0, s, -s, 0.0});
  }
  throw std::invalid_argument("bell: unknown kind");
}

const CMatrix& l_symmetry_u() {
  // (1 + i(sigma_1 + sigma_2 + sigma_3)) / 2, an order-3 axis rotation.
  static const CMatrix u = CMatrix::from_rows({{Complex(0.5, 0.5), Complex(0.5, 0.5)},
                                               {Complex(-0.5, 0.5), Complex(0.5, -0.5)}});
  return u;
}

ClassSpec l_class() {
  const Complex w1 = std::polar(1.0, kPi / 3.0);
  const Complex w2 = std::polar(1.0, 2.0 * kPi / 3.0);
  StateVector rep = tensor(bell(Bell::kPhiMinus), bell(Bell::kPhiMinus));
  {
    const StateVector t1 = tensor(bell(Bell::kPhiPlus), bell(Bell::kPhiPlus));
    const StateVector t2 = tensor(bell(Bell::kPsiPlus), bell(Bell::kPsiPlus));
    for (std::size_t i = 0; i < rep.amps.size(); ++i)
      rep.amps[i] += w1 * t1.amps[i] + w2 * t2.amps[i];
  }
  const double nrm = rep.norm();
  for (auto& a : rep.amps) a /= nrm;

  // The fourth powers of the raw rotation fix the representative only up to
  // a cube root of unity; the stored factor carries the compensating phase
  // so every group element has eigenvalue exactly 1.
  const CMatrix zu = l_symmetry_u() * std::polar(1.0, kPi / 6.0);
  auto string4 = [](const CMatrix& f) {
    LocalSymmetry s;
    s.factors.assign(4, f);
    return s;
  };
  StabilizerGroup group = close_group({string4(zu), string4(pauli(1)), string4(pauli(3))}, 256);
  if (group.size() != 12) throw std::runtime_error("l_class: unexpected stabilizer size");
  for (double r : verify_stabilizer(rep, group))
    if (r > 1e-10) throw std::runtime_error("l_class: stabilizer residual too large");

  ClassSpec spec;
  spec.name = "L";
  spec.representative = std::move(rep);
  spec.stabilizer = std::move(group);
  spec.dims = {2, 2, 2, 2};
  return spec;
}

ClassSpec pauli_class(int parties, const StateVector& representative, double tol) {
  const int n = static_cast<int>(representative.dims.size());
  if (n < 2) throw std::invalid_argument("pauli_class: need at least two parties");
  if (parties != n)
    throw std::invalid_argument("pauli_class: party count disagrees with the representative");
  for (int d : representative.dims)
    if (d != 2) throw std::invalid_argument("pauli_class: qubit-only classes");
  if (std::abs(representative.norm() - 1.0) > 1e-8)
    throw std::invalid_argument("pauli_class: representative not normalized");

  auto string_n = [n](const CMatrix& f) {
    LocalSymmetry s;
    s.factors.assign(static_cast<std::size_t>(n), f);
    return s;
  };
  StabilizerGroup group = close_group({string_n(pauli(1)), string_n(pauli(3))}, 256);
  for (double r : verify_stabilizer(representative, group))
    if (r > std::max(tol, 1e-9))
      throw std::invalid_argument("pauli_class: representative not stabilized by the Pauli strings");

  ClassSpec spec;
  spec.name = "pauli" + std::to_string(n);
  spec.representative = representative;
  spec.stabilizer = std::move(group);
  spec.dims.assign(static_cast<std::size_t>(n), 2);
  return spec;
}

AlphaVec AlphaVec::normalized(const std::array<Complex, 4>& raw) {
  double s = 0.0;
  for (const auto& v : raw) s += std::norm(v);
  if (s <= 1e-24) throw std::invalid_argument("AlphaVec: zero vector");
  AlphaVec out;
  const double inv = 1.0 / std::sqrt(s);
  for (int i = 0; i < 4; ++i) out.a[i] = raw[i] * inv;
  return out;
}

double AlphaVec::norm() const {
  double s = 0.0;
  for (const auto& v : a) s += std::norm(v);
  return std::sqrt(s);
}

StateVector psi2(const AlphaVec& alpha) {
  const StateVector base = tensor(bell(Bell::kPhiPlus), bell(Bell::kPhiPlus));
  StateVector acc = qubits(4, std::vector<Complex>(16, 0.0));
  const CMatrix id = CMatrix::identity(2);
  for (int i = 0; i < 4; ++i) {
    if (alpha.a[i] == Complex(0.0)) continue;
    const StateVector term = apply_local({id, pauli(i), id, pauli(i)}, base);
    for (std::size_t k = 0; k < 16; ++k) acc.amps[k] += alpha.a[i] * term.amps[k];
  }
  return acc;
}

bool alpha_generic(const AlphaVec& alpha, double tol) {
  std::array<Complex, 4> sq;
  for (int i = 0; i < 4; ++i) sq[i] = alpha.a[i] * alpha.a[i];
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (std::abs(sq[i] - sq[j]) <= tol) return false;

  // A scalar q relating the squares as multisets must map one square onto
  // another; only those ratios are candidates.
  auto multiset_match = [&](Complex q) {
    std::array<bool, 4> used{};
    for (int i = 0; i < 4; ++i) {
      const Complex want = q * sq[i];
      bool found = false;
      for (int j = 0; j < 4 && !found; ++j) {
        if (!used[j] && std::abs(sq[j] - want) <= tol) {
          used[j] = true;
          found = true;
        }
      }
      if (!found) return false;
    }
    return true;
  };
  for (int i = 0; i < 4; ++i) {
    if (std::abs(sq[i]) <= tol) continue;
    for (int j = 0; j < 4; ++j) {
      const Complex q = sq[j] / sq[i];
      if (std::abs(q - Complex(1.0)) <= tol) continue;
      if (multiset_match(q)) return false;
    }
  }
  return true;
}

bool p_set_member(const AlphaVec& alpha, double tol) {
  return alpha_generic(alpha, tol) && std::abs(alpha.a[2]) <= tol;
}

std::vector<std::pair<int, int>> symmetrizer_K(int m, int k) {
  if (k < 2 || m < k || m > 4) throw std::invalid_argument("symmetrizer_K: need 2 <= k <= m <= 4");
  if (m == k) return {};
  // Two half blocks at level m-1, then the top joining pair.
  std::vector<std::pair<int, int>> out = symmetrizer_K(m - 1, k);
  const int shift = 1 << (m - 1);
  const std::size_t half = out.size();
  for (std::size_t i = 0; i < half; ++i)
    out.emplace_back(out[i].first + shift, out[i].second + shift);
  out.emplace_back(0, shift);
  return out;
}

StateVector apply_pair_symmetrizer(const StateVector& psi, int qa, int qb) {
  const StateVector swapped = swap_qubits(psi, qa, qb);
  StateVector out = psi;
  for (std::size_t i = 0; i < out.amps.size(); ++i)
    out.amps[i] = 0.5 * (out.amps[i] + swapped.amps[i]);
  if (out.norm() <= 1e-12 * std::max(1.0, psi.norm()))
    throw std::invalid_argument("apply_pair_symmetrizer: symmetrization annihilated the state");
  return out;
}

StateVector build_psi_m(const AlphaVec& alpha, int m) {
  if (m < 2 || m > 4) throw std::invalid_argument("build_psi_m: need 2 <= m <= 4");
  StateVector v = psi2(alpha);
  for (int level = 3; level <= m; ++level) {
    StateVector w = tensor(v, v);
    w = apply_pair_symmetrizer(w, 0, static_cast<int>(w.dims.size()) / 2);
    v = w.normalized();
  }
  return v;
}

StateVector build_psi_m_via_k(const AlphaVec& alpha, int m, int k) {
  const auto pairs = symmetrizer_K(m, k);
  StateVector v = build_psi_m(alpha, k);
  StateVector w = v;
  for (int c = 1; c < (1 << (m - k)); ++c) w = tensor(w, v);
  for (const auto& [a, b] : pairs) w = apply_pair_symmetrizer(w, a, b);
  return w.normalized();
}

double verify_uk_invariance(const AlphaVec& alpha, int m, int k) {
  if (k < 2 || k >= m || m > 4)
    throw std::invalid_argument("verify_uk_invariance: need 2 <= k < m <= 4");
  const StateVector v = build_psi_m(alpha, m);
  StateVector w = v;
  const int block = 1 << k;
  for (int i = 1; i < block; ++i) w = swap_qubits(w, i, block + i);
  double acc = 0.0;
  for (std::size_t i = 0; i < v.amps.size(); ++i) acc += std::norm(w.amps[i] - v.amps[i]);
  return std::sqrt(acc);
}

AlphaVec lambda_map(int i, const AlphaVec& alpha, double tol) {
  if (i < 1 || i > 3) throw std::invalid_argument("lambda_map: index must be 1, 2 or 3");
  if (!alpha_generic(alpha)) throw std::invalid_argument("lambda_map: alpha not generic");

  StateVector w = tensor(psi2(alpha), psi2(alpha));
  w = apply_pair_symmetrizer(w, 0, 4);

  static const std::array<std::array<std::pair<int, int>, 2>, 3> pair_table{{
      {{{2, 6}, {3, 7}}},
      {{{1, 5}, {3, 7}}},
      {{{1, 5}, {2, 6}}},
  }};
  std::vector<int> removed;
  for (const auto& [ra, rb] : pair_table[i - 1]) {
    auto shift = [&removed](int q) {
      int s = q;
      for (int r : removed)
        if (r < q) --s;
      return s;
    };
    const int a = shift(ra);
    const int b = shift(rb);
    w = project_singlet(w, a, b);
    removed.push_back(ra);
    removed.push_back(rb);
  }
  if (w.norm() <= 1e-10)
    throw std::invalid_argument("lambda_map: singlet projection annihilated the state");
  w = w.normalized();

  // Expansion basis: seed-form states over the crossed pairing (0,2),(1,3).
  const StateVector crossed = swap_qubits(tensor(bell(Bell::kPhiPlus), bell(Bell::kPhiPlus)), 1, 2);
  const CMatrix id = CMatrix::identity(2);
  std::array<Complex, 4> c;
  StateVector recon = qubits(4, std::vector<Complex>(16, 0.0));
  for (int j = 0; j < 4; ++j) {
    const StateVector bj = apply_local({pauli(j), pauli(j), id, id}, crossed);
    c[j] = inner(bj, w);
    for (std::size_t k = 0; k < 16; ++k) recon.amps[k] += c[j] * bj.amps[k];
  }
  double resid = 0.0;
  for (std::size_t k = 0; k < 16; ++k) resid += std::norm(recon.amps[k] - w.amps[k]);
  resid = std::sqrt(resid);
  if (resid > std::max(tol, 1e-9))
    throw std::runtime_error("lambda_map: expansion residual above tolerance");

  // Canonical phase: dominant coefficient real positive.
  int jmax = 0;
  for (int j = 1; j < 4; ++j)
    if (std::abs(c[j]) > std::abs(c[jmax])) jmax = j;
  const double mag = std::abs(c[jmax]);
  if (mag > 1e-300) {
    const Complex ph = std::conj(c[jmax]) / mag;
    for (auto& v : c) v *= ph;
  }
  return AlphaVec::normalized(c);
}

bool generic_chain_check(const AlphaVec& alpha, int depth, std::string* diagnostic) {
  if (depth < 1 || depth > 4)
    throw std::invalid_argument("generic_chain_check: depth must be in [1, 4]");
  if (!alpha_generic(alpha)) {
    if (diagnostic) *diagnostic = "seed alpha not generic";
    return false;
  }
  struct Node {
    AlphaVec alpha;
    std::string word;
    int depth;
  };
  std::vector<Node> stack{{alpha, "", 0}};
  while (!stack.empty()) {
    Node node = std::move(stack.back());
    stack.pop_back();
    if (node.depth == depth) continue;
    for (int i = 1; i <= 3; ++i) {
      const std::string word = node.word + static_cast<char>('0' + i);
      AlphaVec img;
      try {
        img = lambda_map(i, node.alpha);
      } catch (const std::invalid_argument&) {
        if (diagnostic) *diagnostic = "degenerate projection at composition " + word;
        return false;
      }
      if (!alpha_generic(img)) {
        if (diagnostic) *diagnostic = "image not generic at composition " + word;
        return false;
      }
      stack.push_back({img, word, node.depth + 1});
    }
  }
  return true;
}

const ClassSpec* find_builtin_class(std::string_view name) {
  static const ClassSpec l = l_class();
  static const ClassSpec p4 = pauli_class(4, build_psi_m(default_alpha()[0], 2));
  static const ClassSpec p8 = pauli_class(8, build_psi_m(default_alpha()[0], 3));
  static const ClassSpec p16 = pauli_class(16, build_psi_m(default_alpha()[0], 4));
  if (name == "L") return &l;
  if (name == "pauli4") return &p4;
  if (name == "pauli8") return &p8;
  if (name == "pauli16") return &p16;
  return nullptr;
}

}  // namespace loccn
