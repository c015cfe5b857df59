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
#include <span>
#include <string>
#include <vector>

#include "qpmkit/operator_core.hpp"

namespace qpmkit {

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num * b.den == b.num * a.den;
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.num * b.den < b.num * a.den;  // dens are positive
  }
};

enum class Geometry { Finite, Interval, Circle };

const char* to_string(Geometry g) noexcept;

// Half-open cell [lo, hi) of the unit interval; circle cells use the fraction
// of a full turn as coordinate.
struct Cell {
  Rational lo;
  Rational hi;
  friend bool operator==(const Cell&, const Cell&) = default;
};

/// Finite list of outcome atoms. Atoms optionally carry cells that partition
/// [0, 1) when the space discretizes an interval or a circle.
class OutcomeSpace {
 public:
  OutcomeSpace() = default;
  explicit OutcomeSpace(std::vector<std::string> labels);
  OutcomeSpace(std::vector<std::string> labels, Geometry geometry, std::vector<Cell> cells);

  /// m atoms labelled "0" ... "m-1".
  static OutcomeSpace finite(std::size_t m);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  Geometry geometry() const noexcept { return geometry_; }
  const std::vector<Cell>& cells() const noexcept { return cells_; }

  friend bool operator==(const OutcomeSpace&, const OutcomeSpace&) = default;

 private:
  std::vector<std::string> labels_;
  Geometry geometry_ = Geometry::Finite;
  std::vector<Cell> cells_;
};

/// Quantum probability measure on finitely many atoms: one d x d effect per
/// atom. The constructor only enforces shape; positivity and normalization
/// are checked by validate_qpm so that invalid inputs can still be reported.
class Qpm {
 public:
  Qpm() = default;
  Qpm(OutcomeSpace space, std::vector<HermitianOperator> effects);

  const OutcomeSpace& space() const noexcept { return space_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return effects_.size(); }
  const std::vector<HermitianOperator>& effects() const noexcept { return effects_; }
  const ComplexMatrix& effect(std::size_t a) const { return effects_.at(a).matrix(); }

  friend bool operator==(const Qpm&, const Qpm&) = default;

 private:
  OutcomeSpace space_;
  std::size_t dim_ = 0;
  std::vector<HermitianOperator> effects_;
};

struct ValidationReport {
  bool ok = true;
  std::vector<double> min_eigenvalues;  // one per effect
  double sum_residual = 0.0;            // ||sum_a E(a) - I||
  std::vector<std::string> violations;
};

ValidationReport validate_qpm(const Qpm& e);

/// Throws InvariantViolation naming the first failed check.
void require_valid(const Qpm& e, const std::string& what);

/// Throws Shape unless both measures live on the same atoms and dimension.
void require_compatible(const Qpm& e, const Qpm& f);

struct ScalarMeasure {
  OutcomeSpace space;
  std::vector<Complex> weights;
};

struct TestFunction {
  OutcomeSpace space;
  std::vector<Complex> values;

  static TestFunction constant(const OutcomeSpace& space, Complex c);
  static TestFunction indicator(const OutcomeSpace& space, std::size_t atom);
};

/// weights[a] = <E(a) xi, eta>, linear in xi and conjugate-linear in eta.
ScalarMeasure scalar_measure(const Qpm& e, const ComplexVector& xi, const ComplexVector& eta);

/// Sum of moduli over atoms; on a finite space the finest partition attains
/// the total variation.
double tv_norm(const ScalarMeasure& mu);

/// sum_a f(a) E(a).
ComplexMatrix apply_ucp(const Qpm& e, const TestFunction& f);

struct MetricOptions {
  std::size_t exact_cap = 16;       // enumerate exactly when m <= exact_cap
  std::uint64_t seed = 0x5eed;      // heuristic starts beyond the cap
  std::size_t heuristic_starts = 32;
};

inline constexpr std::size_t kMaxExactCap = 24;

/// rho = ||E - F||_TV. Exact mode also reports the optimal sign vector
/// (first entry fixed to +1, lexicographically least among ties with
/// + ordered before -). Heuristic mode gives the bracket [value, upper].
struct RhoResult {
  double value = 0.0;
  double upper = 0.0;
  bool exact = true;
  std::vector<int> signs;
};

struct DeltaResult {
  double value = 0.0;
  double upper = 0.0;
  bool exact = true;
  std::vector<std::size_t> subset;  // ascending atom indices
};

RhoResult rho_distance(const Qpm& e, const Qpm& f, const MetricOptions& opts = {});
DeltaResult delta_distance(const Qpm& e, const Qpm& f, const MetricOptions& opts = {});

/// sup over unit xi, eta of tv_norm(E_{xi,eta}); equals 1 for every valid measure.
double total_variation(const Qpm& e, const MetricOptions& opts = {});

/// max over functionals T and atom subsets S of |Tr((E(S) - F(S)) T)|.
/// The subset maximum is found exactly for any m: the optimum is always a
/// half-plane subset of the complex numbers Tr(D_a T).
double sw_gap(const Qpm& e, const Qpm& f, std::span<const ComplexMatrix> functionals);

/// max over functionals T and test functions g of |Tr((phi_E(g) - phi_F(g)) T)|.
double bw_gap(const Qpm& e, const Qpm& f, std::span<const ComplexMatrix> functionals,
              std::span<const TestFunction> fns);

/// Matrix units |i><j|, a basis of the d x d trace-class operators.
std::vector<ComplexMatrix> matrix_unit_functionals(std::size_t dim);

}  // namespace qpmkit
