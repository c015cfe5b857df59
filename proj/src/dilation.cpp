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

#include "qpmkit/dilation.hpp"

#include <algorithm>
#include <string>

#include "qpmkit/error.hpp"

namespace qpmkit {

SpectralReport is_spectral(const Qpm& e) {
  SpectralReport rep;
  for (std::size_t a = 0; a < e.size(); ++a) {
    const ComplexMatrix& p = e.effect(a);
    rep.idempotency_residual = std::max(rep.idempotency_residual, operator_norm(ComplexMatrix(p * p - p)));
    for (std::size_t b = a + 1; b < e.size(); ++b)
      rep.orthogonality_residual =
          std::max(rep.orthogonality_residual, operator_norm(ComplexMatrix(p * e.effect(b))));
  }
  rep.ok = rep.idempotency_residual <= kSpectralTolerance && rep.orthogonality_residual <= kSpectralTolerance;
  return rep;
}

SpectralMeasure::SpectralMeasure(Qpm measure) : measure_(std::move(measure)) {
  require_valid(measure_, "spectral measure");
  const SpectralReport rep = is_spectral(measure_);
  if (!rep.ok)
    fail(ErrorCode::InvariantViolation,
         "measure is not projection valued (idempotency " + std::to_string(rep.idempotency_residual) +
             ", orthogonality " + std::to_string(rep.orthogonality_residual) + ")");
}

namespace {

constexpr double kPivotTolerance = 1e-10;

// Orthonormal basis for the column space of m, columns taken in index order.
ComplexMatrix column_range(const ComplexMatrix& m) {
  std::vector<ComplexVector> basis;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    ComplexVector r = m.col(j);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) r -= q * q.dot(r);
    const double n = r.norm();
    if (n > kPivotTolerance) basis.push_back(r / n);
  }
  ComplexMatrix q(m.rows(), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) q.col(static_cast<Eigen::Index>(k)) = basis[k];
  return q;
}

}  // namespace

DilationTriple naimark_dilate(const Qpm& e, bool minimal) {
  require_valid(e, "naimark dilation");
  const auto m = static_cast<Eigen::Index>(e.size());
  const auto d = static_cast<Eigen::Index>(e.dim());

  std::vector<ComplexMatrix> blocks;  // rows of V belonging to atom a
  blocks.reserve(e.size());
  for (const auto& eff : e.effects()) {
    const ComplexMatrix root = sqrt_psd(eff).matrix();
    if (!minimal) {
      blocks.push_back(root);
    } else {
      const ComplexMatrix q = column_range(eff.matrix());
      blocks.push_back(q.adjoint() * root);
    }
  }

  Eigen::Index k = 0;
  for (const auto& b : blocks) k += b.rows();
  ComplexMatrix v = ComplexMatrix::Zero(k, d);
  std::vector<HermitianOperator> projections;
  projections.reserve(e.size());
  Eigen::Index offset = 0;
  for (Eigen::Index a = 0; a < m; ++a) {
    const ComplexMatrix& b = blocks[static_cast<std::size_t>(a)];
    v.middleRows(offset, b.rows()) = b;
    ComplexMatrix p = ComplexMatrix::Zero(k, k);
    p.block(offset, offset, b.rows(), b.rows()).setIdentity();
    projections.emplace_back(p);
    offset += b.rows();
  }
  return {static_cast<std::size_t>(k), SpectralMeasure(Qpm(e.space(), std::move(projections))), std::move(v)};
}

double dilation_residual(const Qpm& e, const SpectralMeasure& f, const ComplexMatrix& v) {
  const Qpm& fm = f.measure();
  if (fm.space().labels() != e.space().labels()) fail(ErrorCode::Shape, "dilation uses a different outcome space");
  if (v.rows() != static_cast<Eigen::Index>(fm.dim()) || v.cols() != static_cast<Eigen::Index>(e.dim()))
    fail(ErrorCode::Shape, "intertwiner must be " + std::to_string(fm.dim()) + "x" + std::to_string(e.dim()));
  double worst = 0.0;
  for (std::size_t a = 0; a < e.size(); ++a) {
    const ComplexMatrix r = v.adjoint() * fm.effect(a) * v - e.effect(a);
    worst = std::max(worst, operator_norm(r));
  }
  return worst;
}

}  // namespace qpmkit
