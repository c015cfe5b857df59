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

#include <optional>
#include <utility>
#include <vector>

#include "qpmkit/channels.hpp"

namespace qpmkit {

/// Probability weights on a finite input space.
class InputMeasure {
 public:
  InputMeasure() = default;
  InputMeasure(InputSpace inputs, std::vector<double> weights);

  static InputMeasure uniform(const InputSpace& inputs);

  const InputSpace& inputs() const noexcept { return inputs_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  bool is_null(std::size_t x) const { return weights_.at(x) == 0.0; }
  std::vector<std::size_t> support() const;

  friend bool operator==(const InputMeasure&, const InputMeasure&) = default;

 private:
  InputSpace inputs_;
  std::vector<double> weights_;
};

/// A channel read as its mu-a.e. class. When `canonical` is set, every null
/// input carries the uniform measure I/m.
class ModMuChannel {
 public:
  ModMuChannel(Channel rep, InputMeasure mu, bool canonical);

  const Channel& rep() const noexcept { return rep_; }
  const InputMeasure& mu() const noexcept { return mu_; }
  bool canonical() const noexcept { return canonical_; }

 private:
  Channel rep_;
  InputMeasure mu_;
  bool canonical_ = false;
};

struct WeightFunction {
  InputSpace inputs;
  std::vector<Complex> values;

  static WeightFunction constant(const InputSpace& inputs, Complex c);
  static WeightFunction indicator(const InputSpace& inputs, std::size_t x);
};

struct EquivWitness {
  std::size_t atom = 0;
  std::size_t input = 0;
  double deviation = 0.0;
};

struct EquivResult {
  bool equivalent = true;
  std::optional<EquivWitness> witness;  // first failure, inputs outer, atoms inner
};

/// ||E(a|x) - F(a|x)|| <= tol for all atoms and all x in the support of mu.
EquivResult equiv_mod_mu(const Channel& e, const Channel& f, const InputMeasure& mu, double tol);

/// Atom indicators, the alternating sign vector and the half/half sign vector.
std::vector<TestFunction> ucp_basis_functions(const OutcomeSpace& space);

/// Same relation checked through the UCP maps: ||Phi_E(g)(x) - Phi_F(g)(x)||
/// <= tol * sum|g| for every basis test function g and support point x.
bool ucp_equiv_mod_mu(const Channel& e, const Channel& f, const InputMeasure& mu, double tol);

/// Keeps E on the support and puts the uniform measure on null inputs.
ModMuChannel canonicalize_mod_mu(const Channel& e, const InputMeasure& mu);

/// sum_x mu(x) w(x) <Phi_E(f)(x) xi, eta>.
Complex bw_pairing(const ModMuChannel& e, const TestFunction& f, const WeightFunction& w,
                   const ComplexVector& xi, const ComplexVector& eta);

struct BwTestFamily {
  std::vector<TestFunction> fns;
  std::vector<WeightFunction> weights;
  std::vector<std::pair<ComplexVector, ComplexVector>> vectors;
};

/// Atom indicators x singleton input indicators x standard basis pairs
/// (e_i, e_j); separates mu-classes on a finite input space.
BwTestFamily canonical_bw_family(const Channel& shape);

/// max over the family of |bw_pairing(E, ...) - bw_pairing(F, ...)|.
double bw_gap_mod_mu(const ModMuChannel& e, const ModMuChannel& f, const BwTestFamily& family);

/// One isometry V : C^d -> C^m (x) C^d with E(a|x) = V* F(a|x) V on the
/// support of mu, F(.|x) projection valued for every x.
struct ModMuDilation {
  ComplexMatrix isometry;
  Channel projective;
};

ModMuDilation naimark_mod_mu(const ModMuChannel& e);

/// max over support points x and atoms a of ||V* F(a|x) V - E(a|x)||.
double mod_mu_dilation_residual(const ModMuChannel& e, const ModMuDilation& dil);

}  // namespace qpmkit
