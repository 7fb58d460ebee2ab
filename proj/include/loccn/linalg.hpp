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
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace loccn {

using Complex = std::complex<double>;

/// Default numeric tolerance used by every operation that accepts one.
inline constexpr double kDefaultTol = 1e-9;

/// Dense complex matrix, row-major.  Sized for per-party operators and
/// small tensor products; nothing here is tuned for large dimensions.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static CMatrix identity(std::size_t n);
  static CMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<Complex>& data() { return data_; }
  const std::vector<Complex>& data() const { return data_; }

  CMatrix operator+(const CMatrix& o) const;
  CMatrix operator-(const CMatrix& o) const;
  CMatrix operator*(const CMatrix& o) const;
  CMatrix operator*(Complex s) const;
  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator*=(Complex s);

  CMatrix adjoint() const;
  CMatrix transpose() const;
  Complex trace() const;
  double frobenius_norm() const;
  double max_abs() const;

  bool is_hermitian(double tol = kDefaultTol) const;
  bool is_unitary(double tol = kDefaultTol) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

CMatrix commutator(const CMatrix& a, const CMatrix& b);

/// tr(a^dag b), the Frobenius inner product.
Complex frobenius_inner(const CMatrix& a, const CMatrix& b);

/// Kronecker product of the factors in order; the first factor owns the most
/// significant index block.  Errors on an empty list.
CMatrix tensor(const std::vector<CMatrix>& factors);

/// Pauli matrix; i in {0,1,2,3} with sigma_0 the identity.
const CMatrix& pauli(int i);

/// Bloch vector of a single-qubit operator G = I/2 + g . sigma.
struct BlochVec {
  double x = 0.0, y = 0.0, z = 0.0;

  double norm() const;
  double dot(const BlochVec& o) const;
  BlochVec operator+(const BlochVec& o) const;
  BlochVec operator-(const BlochVec& o) const;
  BlochVec operator*(double s) const;
};

/// Bloch encoding I/2 + g.sigma.  Valid states require |g| < 1/2; encoding
/// itself accepts any vector.
CMatrix bloch_encode(const BlochVec& g);

/// Inverse of bloch_encode.  Errors if h is not Hermitian 2x2 with trace 1
/// within tol.
BlochVec bloch_decode(const CMatrix& h, double tol = kDefaultTol);

/// Real 3x3 matrix, row-major; used for the adjoint rotations of SU(2).
struct Mat3 {
  std::array<double, 9> m{};

  static Mat3 identity();
  double& operator()(int r, int c) { return m[r * 3 + c]; }
  double operator()(int r, int c) const { return m[r * 3 + c]; }
  Mat3 transpose() const;
  Mat3 operator*(const Mat3& o) const;
  BlochVec apply(const BlochVec& v) const;
};

/// Adjoint rotation O of a single-qubit unitary u: u sigma_a u^dag =
/// sum_b O_ba sigma_b, i.e. bloch(u H u^dag) = O . bloch(H).  Insensitive to
/// the phase of u.  Errors if u is not unitary 2x2 within tol.
Mat3 su2_to_so3(const CMatrix& u, double tol = kDefaultTol);

/// Eigendecomposition of a Hermitian matrix, values ascending, eigenvectors
/// as the columns of `vectors`.  Cyclic Jacobi; intended for per-party
/// operators and other small matrices.
struct EigenSys {
  std::vector<double> values;
  CMatrix vectors;
};
EigenSys hermitian_eigen(const CMatrix& h);

/// Principal square root of a positive semidefinite Hermitian matrix.
/// Errors if h is not Hermitian within tol or has an eigenvalue below -tol.
CMatrix psd_sqrt(const CMatrix& h, double tol = kDefaultTol);

/// Inverse principal square root of a positive definite Hermitian matrix.
/// Errors as psd_sqrt, and additionally on eigenvalues at or below floor.
CMatrix psd_inv_sqrt(const CMatrix& h, double tol = kDefaultTol, double floor = 1e-12);

/// Pure multipartite state as a dense amplitude vector over the listed local
/// dimensions, party 0 most significant.  Norm is tracked, not enforced:
/// apply_local deliberately returns unnormalized vectors.
struct StateVector {
  std::vector<int> dims;
  std::vector<Complex> amps;

  StateVector() = default;
  StateVector(std::vector<int> d, std::vector<Complex> a);

  std::size_t total_dim() const;
  double norm() const;
  StateVector normalized() const;
};

Complex inner(const StateVector& a, const StateVector& b);

/// Kronecker product of two states; dims concatenate.
StateVector tensor(const StateVector& a, const StateVector& b);

/// Applies one operator per party.  Operators must be square with the
/// matching local dimension; errors otherwise.  Output is unnormalized.
StateVector apply_local(const std::vector<CMatrix>& ops, const StateVector& psi);

/// Swaps two qubit positions of a qubit-only state.
StateVector swap_qubits(const StateVector& psi, int a, int b);

}  // namespace loccn
