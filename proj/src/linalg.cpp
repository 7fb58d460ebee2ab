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

#include "loccn/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace loccn {

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  CMatrix m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) throw std::invalid_argument("from_rows: ragged rows");
    std::size_t j = 0;
    for (const auto& v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

CMatrix CMatrix::operator+(const CMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix add: shape mismatch");
  CMatrix m(rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) m.data_[i] = data_[i] + o.data_[i];
  return m;
}

CMatrix CMatrix::operator-(const CMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix sub: shape mismatch");
  CMatrix m(rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) m.data_[i] = data_[i] - o.data_[i];
  return m;
}

CMatrix CMatrix::operator*(const CMatrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("matrix mul: shape mismatch");
  CMatrix m(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const Complex a = data_[i * cols_ + k];
      if (a == Complex(0.0)) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) {
        m.data_[i * o.cols_ + j] += a * o.data_[k * o.cols_ + j];
      }
    }
  }
  return m;
}

CMatrix CMatrix::operator*(Complex s) const {
  CMatrix m(rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) m.data_[i] = data_[i] * s;
  return m;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix add: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

CMatrix& CMatrix::operator*=(Complex s) {
  for (auto& v : data_) v *= s;
  return *this;
}

CMatrix CMatrix::adjoint() const {
  CMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

CMatrix CMatrix::transpose() const {
  CMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

Complex CMatrix::trace() const {
  if (rows_ != cols_) throw std::invalid_argument("trace: non-square");
  Complex t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double CMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& v : data_) s += std::norm(v);
  return std::sqrt(s);
}

double CMatrix::max_abs() const {
  double s = 0.0;
  for (const auto& v : data_) s = std::max(s, std::abs(v));
  return s;
}

bool CMatrix::is_hermitian(double tol) const {
  if (rows_ != cols_) return false;
  return (*this - adjoint()).frobenius_norm() <= tol * std::max(1.0, frobenius_norm());
}

bool CMatrix::is_unitary(double tol) const {
  if (rows_ != cols_) return false;
  return (adjoint() * *this - identity(rows_)).frobenius_norm() <=
         tol * std::max(1.0, static_cast<double>(rows_));
}

CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

Complex frobenius_inner(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("frobenius_inner: shape mismatch");
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) s += std::conj(a.data()[i]) * b.data()[i];
  return s;
}

CMatrix tensor(const std::vector<CMatrix>& factors) {
  if (factors.empty()) throw std::invalid_argument("tensor: empty factor list");
  CMatrix acc = CMatrix::identity(1);
  for (const auto& f : factors) {
    CMatrix next(acc.rows() * f.rows(), acc.cols() * f.cols());
    for (std::size_t i1 = 0; i1 < acc.rows(); ++i1)
      for (std::size_t j1 = 0; j1 < acc.cols(); ++j1) {
        const Complex a = acc(i1, j1);
        if (a == Complex(0.0)) continue;
        for (std::size_t i2 = 0; i2 < f.rows(); ++i2)
          for (std::size_t j2 = 0; j2 < f.cols(); ++j2)
            next(i1 * f.rows() + i2, j1 * f.cols() + j2) = a * f(i2, j2);
      }
    acc = std::move(next);
  }
  return acc;
}

const CMatrix& pauli(int i) {
  static const CMatrix s0 = CMatrix::from_rows({{1.0, 0.0}, {0.0, 1.0}});
  static const CMatrix s1 = CMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
  static const CMatrix s2 = CMatrix::from_rows({{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}});
  static const CMatrix s3 = CMatrix::from_rows({{1.0, 0.0}, {0.0, -1.0}});
  switch (i) {
    case 0: return s0;
    case 1: return s1;
    case 2: return s2;
    case 3: return s3;
    default: throw std::invalid_argument("pauli: index out of range");
  }
}

double BlochVec::norm() const { return std::sqrt(x * x + y * y + z * z); }
double BlochVec::dot(const BlochVec& o) const { return x * o.x + y * o.y + z * o.z; }
BlochVec BlochVec::operator+(const BlochVec& o) const { return {x + o.x, y + o.y, z + o.z}; }
BlochVec BlochVec::operator-(const BlochVec& o) const { return {x - o.x, y - o.y, z - o.z}; }
BlochVec BlochVec::operator*(double s) const { return {x * s, y * s, z * s}; }

CMatrix bloch_encode(const BlochVec& g) {
  CMatrix m(2, 2);
  m(0, 0) = Complex(0.5 + g.z, 0.0);
  m(0, 1) = Complex(g.x, -g.y);
  m(1, 0) = Complex(g.x, g.y);
  m(1, 1) = Complex(0.5 - g.z, 0.0);
  return m;
}

BlochVec bloch_decode(const CMatrix& h, double tol) {
  if (h.rows() != 2 || h.cols() != 2) throw std::invalid_argument("bloch_decode: not 2x2");
  if (!h.is_hermitian(tol)) throw std::invalid_argument("bloch_decode: not Hermitian");
  if (std::abs(h.trace() - Complex(1.0)) > tol) throw std::invalid_argument("bloch_decode: trace not 1");
  BlochVec g;
  g.x = h(1, 0).real();
  g.y = h(1, 0).imag();
  g.z = 0.5 * (h(0, 0).real() - h(1, 1).real());
  return g;
}

Mat3 Mat3::identity() {
  Mat3 r;
  r(0, 0) = r(1, 1) = r(2, 2) = 1.0;
  return r;
}

Mat3 Mat3::transpose() const {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
  return r;
}

Mat3 Mat3::operator*(const Mat3& o) const {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
      r(i, j) = s;
    }
  return r;
}

BlochVec Mat3::apply(const BlochVec& v) const {
  return {(*this)(0, 0) * v.x + (*this)(0, 1) * v.y + (*this)(0, 2) * v.z,
          (*this)(1, 0) * v.x + (*this)(1, 1) * v.y + (*this)(1, 2) * v.z,
          (*this)(2, 0) * v.x + (*this)(2, 1) * v.y + (*this)(2, 2) * v.z};
}

Mat3 su2_to_so3(const CMatrix& u, double tol) {
  if (u.rows() != 2 || u.cols() != 2 || !u.is_unitary(tol))
    throw std::invalid_argument("su2_to_so3: input not a 2x2 unitary");
  Mat3 r;
  const CMatrix ud = u.adjoint();
  for (int b = 0; b < 3; ++b) {
    const CMatrix col = u * pauli(b + 1) * ud;
    for (int a = 0; a < 3; ++a) {
      r(a, b) = 0.5 * frobenius_inner(pauli(a + 1), col).real();
    }
  }
  return r;
}

EigenSys hermitian_eigen(const CMatrix& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("hermitian_eigen: non-square");
  const std::size_t n = h.rows();
  // Work on the Hermitian part; callers validate Hermiticity where required.
  CMatrix a = (h + h.adjoint()) * Complex(0.5);
  CMatrix v = CMatrix::identity(n);
  const double scale = std::max(1.0, a.frobenius_norm());

  auto off_norm = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < 60; ++sweep) {
    if (off_norm() <= 1e-14 * scale) break;
    if (sweep == 59) throw std::runtime_error("hermitian_eigen: Jacobi failed to converge");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex w = a(p, q);
        const double r = std::abs(w);
        if (r <= 1e-300) continue;
        const Complex phase = w / r;  // e^{i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * r);
        double t;
        if (tau >= 0.0)
          t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
        else
          t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // J = P.J2 with P = diag(1, conj(phase)); A <- J^dag A J, V <- V J.
        const Complex ep = std::conj(phase);
        for (std::size_t i = 0; i < n; ++i) {
          const Complex aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - s * ep * aiq;
          a(i, q) = s * aip + c * ep * aiq;
          const Complex vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - s * ep * viq;
          v(i, q) = s * vip + c * ep * viq;
        }
        for (std::size_t j = 0; j < n; ++j) {
          const Complex apj = a(p, j), aqj = a(q, j);
          a(p, j) = c * apj - s * phase * aqj;
          a(q, j) = s * apj + c * phase * aqj;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });
  EigenSys out;
  out.values.resize(n);
  out.vectors = CMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

CMatrix psd_sqrt(const CMatrix& h, double tol) {
  if (!h.is_hermitian(tol)) throw std::invalid_argument("psd_sqrt: not Hermitian");
  EigenSys es = hermitian_eigen(h);
  const double lead = std::max(1.0, std::abs(es.values.back()));
  if (es.values.front() < -tol * lead)
    throw std::invalid_argument("psd_sqrt: negative eigenvalue");
  const std::size_t n = h.rows();
  CMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lam = std::sqrt(std::max(0.0, es.values[k]));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out(i, j) += lam * es.vectors(i, k) * std::conj(es.vectors(j, k));
  }
  return (out + out.adjoint()) * Complex(0.5);
}

CMatrix psd_inv_sqrt(const CMatrix& h, double tol, double floor) {
  if (!h.is_hermitian(tol)) throw std::invalid_argument("psd_inv_sqrt: not Hermitian");
  EigenSys es = hermitian_eigen(h);
  if (es.values.front() <= floor)
    throw std::invalid_argument("psd_inv_sqrt: eigenvalue at or below floor");
  const std::size_t n = h.rows();
  CMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lam = 1.0 / std::sqrt(es.values[k]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out(i, j) += lam * es.vectors(i, k) * std::conj(es.vectors(j, k));
  }
  return (out + out.adjoint()) * Complex(0.5);
}

StateVector::StateVector(std::vector<int> d, std::vector<Complex> a)
    : dims(std::move(d)), amps(std::move(a)) {
  std::size_t total = 1;
  for (int x : dims) {
    if (x < 1) throw std::invalid_argument("StateVector: non-positive local dimension");
    total *= static_cast<std::size_t>(x);
  }
  if (amps.size() != total) throw std::invalid_argument("StateVector: amplitude count mismatch");
}

std::size_t StateVector::total_dim() const {
  std::size_t total = 1;
  for (int x : dims) total *= static_cast<std::size_t>(x);
  return total;
}

double StateVector::norm() const {
  double s = 0.0;
  for (const auto& v : amps) s += std::norm(v);
  return std::sqrt(s);
}

StateVector StateVector::normalized() const {
  const double n = norm();
  if (n <= 1e-300) throw std::invalid_argument("StateVector: cannot normalize zero vector");
  StateVector out = *this;
  for (auto& v : out.amps) v /= n;
  return out;
}

Complex inner(const StateVector& a, const StateVector& b) {
  if (a.amps.size() != b.amps.size()) throw std::invalid_argument("inner: size mismatch");
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.amps.size(); ++i) s += std::conj(a.amps[i]) * b.amps[i];
  return s;
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  StateVector out;
  out.dims = a.dims;
  out.dims.insert(out.dims.end(), b.dims.begin(), b.dims.end());
  out.amps.resize(a.amps.size() * b.amps.size());
  for (std::size_t i = 0; i < a.amps.size(); ++i)
    for (std::size_t j = 0; j < b.amps.size(); ++j)
      out.amps[i * b.amps.size() + j] = a.amps[i] * b.amps[j];
  return out;
}

StateVector apply_local(const std::vector<CMatrix>& ops, const StateVector& psi) {
  if (ops.size() != psi.dims.size())
    throw std::invalid_argument("apply_local: operator count does not match party count");
  StateVector cur = psi;
  std::size_t right = cur.total_dim();
  std::size_t left = 1;
  for (std::size_t p = 0; p < ops.size(); ++p) {
    const std::size_t d = static_cast<std::size_t>(psi.dims[p]);
    const CMatrix& op = ops[p];
    if (op.rows() != d || op.cols() != d)
      throw std::invalid_argument("apply_local: operator dimension mismatch");
    right /= d;
    std::vector<Complex> next(cur.amps.size());
    for (std::size_t l = 0; l < left; ++l) {
      const std::size_t base = l * d * right;
      for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b < d; ++b) {
          const Complex w = op(a, b);
          if (w == Complex(0.0)) continue;
          const std::size_t dst = base + a * right;
          const std::size_t src = base + b * right;
          for (std::size_t r = 0; r < right; ++r) next[dst + r] += w * cur.amps[src + r];
        }
      }
    }
    cur.amps = std::move(next);
    left *= d;
  }
  return cur;
}

StateVector swap_qubits(const StateVector& psi, int a, int b) {
  const int n = static_cast<int>(psi.dims.size());
  if (a < 0 || b < 0 || a >= n || b >= n) throw std::invalid_argument("swap_qubits: index out of range");
  for (int d : psi.dims)
    if (d != 2) throw std::invalid_argument("swap_qubits: qubit-only operation");
  if (a == b) return psi;
  StateVector out = psi;
  const int sa = n - 1 - a;
  const int sb = n - 1 - b;
  const std::size_t ma = std::size_t{1} << sa;
  const std::size_t mb = std::size_t{1} << sb;
  for (std::size_t i = 0; i < out.amps.size(); ++i) {
    const bool ba = (i & ma) != 0;
    const bool bb = (i & mb) != 0;
    if (ba != bb) {
      const std::size_t j = i ^ ma ^ mb;
      if (j > i) std::swap(out.amps[i], out.amps[j]);
    }
  }
  return out;
}

}  // namespace loccn
