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

#include <cstdint>
#include <optional>
#include <vector>

#include "qpmkit/qpm.hpp"

namespace qpmkit {

inline constexpr double kSpectralTolerance = 1e-9;
inline constexpr double kDilationTolerance = 1e-9;

struct SpectralReport {
  bool ok = false;
  double idempotency_residual = 0.0;   // max_a ||F(a)^2 - F(a)||
  double orthogonality_residual = 0.0; // max_{a != b} ||F(a) F(b)||
};

SpectralReport is_spectral(const Qpm& e);

/// A valid measure whose effects are mutually orthogonal projections.
class SpectralMeasure {
 public:
  SpectralMeasure() = default;
  explicit SpectralMeasure(Qpm measure);

  const Qpm& measure() const noexcept { return measure_; }
  std::size_t dim() const noexcept { return measure_.dim(); }

 private:
  Qpm measure_;
};

/// E(a) = V* F(a) V with F spectral on C^env_dim and V an env_dim x d isometry.
struct DilationTriple {
  std::size_t env_dim = 0;
  SpectralMeasure spectral;
  ComplexMatrix isometry;
};

/// Block Naimark dilation on C^m (x) C^d with V = sum_a |a> (x) E(a)^{1/2}.
/// The minimal form compresses each block to the range of E(a), found by
/// Gram-Schmidt over the columns of E(a) in index order (pivot tolerance 1e-10).
DilationTriple naimark_dilate(const Qpm& e, bool minimal);

/// max_a ||V* F(a) V - E(a)||.
double dilation_residual(const Qpm& e, const SpectralMeasure& f, const ComplexMatrix& v);

struct BuresConfig {
  std::size_t restarts = 64;
  std::size_t max_iterations = 500;
  std::size_t env_multiplicity = 1;
  std::uint64_t seed = 0;
  double improvement_tol = 1e-9;
  // Optional d x d unitary W: random initial gauges G become (I_r (x) W) G (I_r (x) W)*.
  std::optional<ComplexMatrix> frame;
};

/// Bracket for the Bures-type distance. `lower` is rho / 2; `upper` is the
/// best value of ||V1 - V2|| found over block dilations
///   V1 = sum_a |a> (x) J E1(a)^{1/2},  V2 = sum_a |a> (x) U_a J E2(a)^{1/2}
/// with J the embedding of C^d as the first block of C^r (x) C^d and U_a
/// unitary on C^r (x) C^d. `dual_lower` is a second certified lower bound,
///   sqrt(2 - 2 sum_a ||E1(a)^{1/2} sigma E2(a)^{1/2}||_1),
/// evaluated at the best density matrix sigma found; it is exact at the
/// optimal sigma once the environment is large enough.
struct BuresResult {
  double lower = 0.0;
  double upper = 0.0;
  double dual_lower = 0.0;
  double rho = 0.0;
  std::vector<ComplexMatrix> gauges;
  std::size_t restarts_used = 0;
  bool converged = false;
};

BuresResult bures_distance(const Qpm& e1, const Qpm& e2, const BuresConfig& config = {});

/// ||V1 - V2|| for the dilation pair defined by `gauges` (see BuresResult).
double bures_gauge_value(const Qpm& e1, const Qpm& e2, const std::vector<ComplexMatrix>& gauges,
                         std::size_t env_multiplicity);

/// Isometries V1, V2 of the gauge pair, as columns of C^m (x) C^r (x) C^d.
std::pair<ComplexMatrix, ComplexMatrix> bures_dilation_pair(const Qpm& e1, const Qpm& e2,
                                                             const std::vector<ComplexMatrix>& gauges,
                                                             std::size_t env_multiplicity);

/// rho/2 - 1e-7 <= upper <= sqrt(rho) + 1e-7 and lower <= upper + 1e-7,
/// with rho recomputed from the inputs.
bool naimark_continuity_check(const Qpm& e1, const Qpm& e2, const BuresResult& b);

}  // namespace qpmkit
