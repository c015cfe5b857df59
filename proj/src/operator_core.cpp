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

#include "qpmkit/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qpmkit/error.hpp"

namespace qpmkit {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyInput: return "empty input";
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::Shape: return "shape mismatch";
    case ErrorCode::InvariantViolation: return "invariant violation";
    case ErrorCode::NotPsd: return "not positive semidefinite";
    case ErrorCode::Parse: return "parse error";
    case ErrorCode::Version: return "unsupported schema version";
    case ErrorCode::Io: return "i/o error";
  }
  return "unknown error";
}

bool all_finite(const ComplexMatrix& m) noexcept {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

double hermiticity_deviation(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) fail(ErrorCode::Shape, "hermiticity check needs a square matrix");
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

HermitianOperator::HermitianOperator(const ComplexMatrix& m) {
  if (m.rows() != m.cols())
    fail(ErrorCode::Shape, "Hermitian operator must be square, got " + std::to_string(m.rows()) +
                               "x" + std::to_string(m.cols()));
  if (!all_finite(m)) fail(ErrorCode::InvalidArgument, "operator has non-finite entries");
  if (m.size() > 0) {
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const double dev = hermiticity_deviation(m);
    if (dev > tolerance::kHermiticity * scale)
      fail(ErrorCode::InvariantViolation,
           "operator is not Hermitian (deviation " + std::to_string(dev) + ")");
  }
  m_ = (m + m.adjoint()) * 0.5;
}

HermitianOperator HermitianOperator::identity(std::size_t dim) {
  HermitianOperator h;
  h.m_ = ComplexMatrix::Identity(dim, dim);
  return h;
}

HermitianOperator HermitianOperator::zero(std::size_t dim) {
  HermitianOperator h;
  h.m_ = ComplexMatrix::Zero(dim, dim);
  return h;
}

double operator_norm(const ComplexMatrix& m) {
  if (m.size() == 0) fail(ErrorCode::EmptyInput, "operator norm of an empty matrix");
  if (m.rows() == 1 || m.cols() == 1) return m.norm();
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

double operator_norm(const HermitianOperator& a) {
  if (a.dim() == 0) fail(ErrorCode::EmptyInput, "operator norm of an empty matrix");
  const RealVector ev = hermitian_eigenvalues(a.matrix());
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

RealVector hermitian_eigenvalues(const ComplexMatrix& a) {
  if (a.rows() == 1) return RealVector::Constant(1, a(0, 0).real());
  if (a.rows() == 2) {
    // closed form keeps the 2x2 case, which dominates enumeration loops, cheap
    const double p = a(0, 0).real();
    const double q = a(1, 1).real();
    const double mean = 0.5 * (p + q);
    const double r = std::hypot(0.5 * (p - q), std::abs(a(0, 1)));
    RealVector ev(2);
    ev << mean - r, mean + r;
    return ev;
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

EigenDecomposition eig_hermitian(const HermitianOperator& a) {
  if (a.dim() == 0) fail(ErrorCode::EmptyInput, "eigendecomposition of an empty matrix");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a.matrix());
  if (es.info() != Eigen::Success)
    fail(ErrorCode::InvariantViolation, "Hermitian eigensolver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

EigenDecomposition eig_hermitian(const ComplexMatrix& a) {
  return eig_hermitian(HermitianOperator(a));
}

HermitianOperator sqrt_psd(const HermitianOperator& a) {
  const EigenDecomposition ed = eig_hermitian(a);
  const double lmin = ed.values(0);
  if (lmin < -tolerance::kPsd)
    fail(ErrorCode::NotPsd, "square root of an operator with eigenvalue " + std::to_string(lmin));
  RealVector root = ed.values.cwiseMax(0.0).cwiseSqrt();
  const ComplexMatrix r = ed.vectors * root.cast<Complex>().asDiagonal() * ed.vectors.adjoint();
  return HermitianOperator(((r + r.adjoint()) * 0.5).eval());
}

ComplexMatrix inverse_sqrt_pd(const HermitianOperator& a, double floor) {
  const EigenDecomposition ed = eig_hermitian(a);
  if (ed.values(0) <= floor)
    fail(ErrorCode::NotPsd, "inverse square root of a singular operator (lambda_min " +
                                std::to_string(ed.values(0)) + ")");
  RealVector inv = ed.values.cwiseSqrt().cwiseInverse();
  const ComplexMatrix r = ed.vectors * inv.cast<Complex>().asDiagonal() * ed.vectors.adjoint();
  return (r + r.adjoint()) * 0.5;
}

double isometry_residual(const ComplexMatrix& v) {
  if (v.size() == 0) fail(ErrorCode::EmptyInput, "isometry check of an empty matrix");
  const ComplexMatrix g = v.adjoint() * v - ComplexMatrix::Identity(v.cols(), v.cols());
  return operator_norm(g);
}

ComplexMatrix complete_to_unitary(const ComplexMatrix& v) {
  const Eigen::Index k = v.rows();
  const Eigen::Index d = v.cols();
  if (d == 0 || k == 0) fail(ErrorCode::EmptyInput, "cannot complete an empty isometry");
  if (d > k) fail(ErrorCode::InvariantViolation, "a k x d isometry needs k >= d");
  if (!all_finite(v)) fail(ErrorCode::InvalidArgument, "isometry has non-finite entries");
  const double res = isometry_residual(v);
  if (res > tolerance::kIsometry)
    fail(ErrorCode::InvariantViolation, "input is not an isometry (residual " + std::to_string(res) + ")");

  ComplexMatrix w(k, k);
  w.leftCols(d) = v;
  std::vector<bool> used(static_cast<std::size_t>(k), false);
  for (Eigen::Index col = d; col < k; ++col) {
    const auto basis = w.leftCols(col);
    Eigen::Index best = -1;
    double best_norm = -1.0;
    ComplexVector best_vec;
    for (Eigen::Index e = 0; e < k; ++e) {
      if (used[static_cast<std::size_t>(e)]) continue;
      ComplexVector r = ComplexVector::Unit(k, e);
      // two passes of classical Gram-Schmidt
      for (int pass = 0; pass < 2; ++pass) r -= basis * (basis.adjoint() * r);
      const double n = r.norm();
      if (n > best_norm + 1e-14) {
        best_norm = n;
        best = e;
        best_vec = std::move(r);
      }
    }
    used[static_cast<std::size_t>(best)] = true;
    w.col(col) = best_vec / best_norm;
  }
  return w;
}

ComplexMatrix polar_unitary(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

ComplexMatrix clamp_psd(const ComplexMatrix& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es((a + a.adjoint()) * 0.5);
  const RealVector lam = es.eigenvalues().cwiseMax(0.0);
  const ComplexMatrix r = es.eigenvectors() * lam.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
  return (r + r.adjoint()) * 0.5;
}

}  // namespace qpmkit
