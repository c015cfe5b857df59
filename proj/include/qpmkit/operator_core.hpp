/*
 * Copyright 2026 The qpmkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Dense>

namespace qpmkit {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Complex = std::complex<double>;

namespace tolerance {
// Hermiticity is judged relative to the largest entry modulus (floor 1).
inline constexpr double kHermiticity = 1e-10;
inline constexpr double kPsd = 1e-9;
inline constexpr double kIsometry = 1e-9;
inline constexpr double kIdentitySum = 1e-9;
}  // namespace tolerance

bool all_finite(const ComplexMatrix& m) noexcept;

// Largest entry modulus of m - m*.
double hermiticity_deviation(const ComplexMatrix& m);

/// Self-adjoint square matrix. Construction checks finiteness and
/// hermiticity, then stores the exactly symmetrized matrix (m + m*) / 2.
class HermitianOperator {
 public:
  HermitianOperator() = default;
  explicit HermitianOperator(const ComplexMatrix& m);

  static HermitianOperator identity(std::size_t dim);
  static HermitianOperator zero(std::size_t dim);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }

  friend bool operator==(const HermitianOperator& a, const HermitianOperator& b) {
    return a.m_.rows() == b.m_.rows() && a.m_ == b.m_;
  }

 private:
  ComplexMatrix m_;
};

struct EigenDecomposition {
  RealVector values;       // ascending
  ComplexMatrix vectors;   // columns are orthonormal eigenvectors
};

/// Largest singular value. Throws EmptyInput for a 0x0 or 0xn matrix.
double operator_norm(const ComplexMatrix& m);

/// Same as above for a Hermitian operator, via max |eigenvalue|.
double operator_norm(const HermitianOperator& a);

EigenDecomposition eig_hermitian(const HermitianOperator& a);
EigenDecomposition eig_hermitian(const ComplexMatrix& a);

// Eigenvalues only, ascending. The input is trusted to be Hermitian.
RealVector hermitian_eigenvalues(const ComplexMatrix& a);

/// Principal square root. Eigenvalues in [-kPsd, 0) are clamped to zero;
/// anything lower raises NotPsd.
HermitianOperator sqrt_psd(const HermitianOperator& a);

/// Inverse square root of a positive definite operator; eigenvalues at or
/// below `floor` raise NotPsd.
ComplexMatrix inverse_sqrt_pd(const HermitianOperator& a, double floor);

/// Extends a k x d isometry to a k x k unitary whose leading d columns are
/// bitwise the input. Completion columns come from Gram-Schmidt on the
/// standard basis, choosing at each step the basis vector with the largest
/// residual (ties to the lowest index).
ComplexMatrix complete_to_unitary(const ComplexMatrix& v);

/// ||V*V - I|| in operator norm.
double isometry_residual(const ComplexMatrix& v);

/// Unitary factor W of the polar decomposition M = W |M|.
ComplexMatrix polar_unitary(const ComplexMatrix& m);

/// Projects a Hermitian matrix onto the PSD cone by clamping eigenvalues.
ComplexMatrix clamp_psd(const ComplexMatrix& a);

}  // namespace qpmkit
