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

#include "qpmkit/modmu.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qpmkit/dilation.hpp"
#include "qpmkit/error.hpp"

namespace qpmkit {

InputMeasure::InputMeasure(InputSpace inputs, std::vector<double> weights)
    : inputs_(std::move(inputs)), weights_(std::move(weights)) {
  if (weights_.size() != inputs_.size())
    fail(ErrorCode::Shape, "need one weight per input point");
  double total = 0.0;
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0) fail(ErrorCode::InvalidArgument, "input weights must be finite and nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12)
    fail(ErrorCode::InvalidArgument, "input weights sum to " + std::to_string(total) + ", not 1");
  if (support().empty()) fail(ErrorCode::InvalidArgument, "input measure has empty support");
}

InputMeasure InputMeasure::uniform(const InputSpace& inputs) {
  return InputMeasure(inputs, std::vector<double>(inputs.size(), 1.0 / static_cast<double>(inputs.size())));
}

std::vector<std::size_t> InputMeasure::support() const {
  std::vector<std::size_t> s;
  for (std::size_t x = 0; x < weights_.size(); ++x)
    if (weights_[x] > 0.0) s.push_back(x);
  return s;
}

namespace {

Qpm uniform_qpm(const OutcomeSpace& space, std::size_t dim) {
  const double w = 1.0 / static_cast<double>(space.size());
  std::vector<HermitianOperator> effects(space.size(),
                                         HermitianOperator(ComplexMatrix(ComplexMatrix::Identity(dim, dim) * w)));
  return Qpm(space, std::move(effects));
}

void check_measure(const Channel& e, const InputMeasure& mu) {
  if (e.inputs() != mu.inputs()) fail(ErrorCode::Shape, "input measure lives on a different input space");
}

}  // namespace

ModMuChannel::ModMuChannel(Channel rep, InputMeasure mu, bool canonical)
    : rep_(std::move(rep)), mu_(std::move(mu)), canonical_(canonical) {
  check_measure(rep_, mu_);
  if (canonical_) {
    const Qpm ref = uniform_qpm(rep_.space(), rep_.dim());
    for (std::size_t x = 0; x < rep_.size(); ++x)
      if (mu_.is_null(x) && !(rep_.at(x) == ref))
        fail(ErrorCode::InvariantViolation, "canonical representative must be uniform at null input " +
                                                rep_.inputs().labels()[x]);
  }
}

WeightFunction WeightFunction::constant(const InputSpace& inputs, Complex c) {
  return {inputs, std::vector<Complex>(inputs.size(), c)};
}

WeightFunction WeightFunction::indicator(const InputSpace& inputs, std::size_t x) {
  if (x >= inputs.size()) fail(ErrorCode::InvalidArgument, "indicator input out of range");
  WeightFunction w{inputs, std::vector<Complex>(inputs.size(), 0.0)};
  w.values[x] = 1.0;
  return w;
}

EquivResult equiv_mod_mu(const Channel& e, const Channel& f, const InputMeasure& mu, double tol) {
  require_compatible(e, f);
  check_measure(e, mu);
  EquivResult out;
  for (std::size_t x : mu.support()) {
    for (std::size_t a = 0; a < e.atoms(); ++a) {
      const double dev = operator_norm(HermitianOperator(ComplexMatrix(e.at(x).effect(a) - f.at(x).effect(a))));
      if (dev > tol) {
        out.equivalent = false;
        out.witness = EquivWitness{a, x, dev};
        return out;
      }
    }
  }
  return out;
}

std::vector<TestFunction> ucp_basis_functions(const OutcomeSpace& space) {
  std::vector<TestFunction> fns;
  const std::size_t m = space.size();
  for (std::size_t a = 0; a < m; ++a) fns.push_back(TestFunction::indicator(space, a));
  TestFunction alt = TestFunction::constant(space, 1.0);
  TestFunction half = TestFunction::constant(space, 1.0);
  for (std::size_t a = 0; a < m; ++a) {
    if (a % 2 == 1) alt.values[a] = -1.0;
    if (a >= (m + 1) / 2) half.values[a] = -1.0;
  }
  fns.push_back(std::move(alt));
  fns.push_back(std::move(half));
  return fns;
}

bool ucp_equiv_mod_mu(const Channel& e, const Channel& f, const InputMeasure& mu, double tol) {
  require_compatible(e, f);
  check_measure(e, mu);
  const std::vector<std::size_t> support = mu.support();
  for (const TestFunction& g : ucp_basis_functions(e.space())) {
    double mass = 0.0;
    for (const Complex& v : g.values) mass += std::abs(v);
    const auto pe = apply_channel_ucp(e, g);
    const auto pf = apply_channel_ucp(f, g);
    for (std::size_t x : support)
      if (operator_norm(ComplexMatrix(pe[x] - pf[x])) > tol * mass) return false;
  }
  return true;
}

ModMuChannel canonicalize_mod_mu(const Channel& e, const InputMeasure& mu) {
  check_measure(e, mu);
  std::vector<Qpm> fam;
  const Qpm ref = uniform_qpm(e.space(), e.dim());
  for (std::size_t x = 0; x < e.size(); ++x) fam.push_back(mu.is_null(x) ? ref : e.at(x));
  return ModMuChannel(Channel(e.inputs(), std::move(fam)), mu, true);
}

Complex bw_pairing(const ModMuChannel& e, const TestFunction& f, const WeightFunction& w,
                   const ComplexVector& xi, const ComplexVector& eta) {
  const Channel& c = e.rep();
  if (w.inputs != c.inputs() || w.values.size() != c.size())
    fail(ErrorCode::Shape, "weight function lives on a different input space");
  const auto d = static_cast<Eigen::Index>(c.dim());
  if (xi.size() != d || eta.size() != d) fail(ErrorCode::Shape, "vectors must have dimension " + std::to_string(d));
  const auto phi = apply_channel_ucp(c, f);
  Complex total = 0.0;
  const auto& mu = e.mu().weights();
  for (std::size_t x = 0; x < c.size(); ++x) {
    if (mu[x] == 0.0 || w.values[x] == Complex(0.0, 0.0)) continue;
    total += mu[x] * w.values[x] * eta.dot(phi[x] * xi);
  }
  return total;
}

BwTestFamily canonical_bw_family(const Channel& shape) {
  BwTestFamily fam;
  for (std::size_t a = 0; a < shape.atoms(); ++a) fam.fns.push_back(TestFunction::indicator(shape.space(), a));
  for (std::size_t x = 0; x < shape.size(); ++x) fam.weights.push_back(WeightFunction::indicator(shape.inputs(), x));
  const auto d = static_cast<Eigen::Index>(shape.dim());
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) fam.vectors.emplace_back(ComplexVector::Unit(d, i), ComplexVector::Unit(d, j));
  return fam;
}

double bw_gap_mod_mu(const ModMuChannel& e, const ModMuChannel& f, const BwTestFamily& family) {
  require_compatible(e.rep(), f.rep());
  if (!(e.mu() == f.mu())) fail(ErrorCode::Shape, "mod-mu channels use different input measures");
  if (family.fns.empty() || family.weights.empty() || family.vectors.empty())
    fail(ErrorCode::InvalidArgument, "test family is empty");
  double best = 0.0;
  for (const auto& g : family.fns)
    for (const auto& w : family.weights)
      for (const auto& [xi, eta] : family.vectors)
        best = std::max(best, std::abs(bw_pairing(e, g, w, xi, eta) - bw_pairing(f, g, w, xi, eta)));
  return best;
}

namespace {

// V_x = sum_a |a> (x) E(a|x)^{1/2}
ComplexMatrix block_isometry(const Qpm& q) {
  const auto d = static_cast<Eigen::Index>(q.dim());
  ComplexMatrix v(static_cast<Eigen::Index>(q.size()) * d, d);
  for (std::size_t a = 0; a < q.size(); ++a)
    v.middleRows(static_cast<Eigen::Index>(a) * d, d) = sqrt_psd(q.effects()[a]).matrix();
  return v;
}

}  // namespace

ModMuDilation naimark_mod_mu(const ModMuChannel& e) {
  const Channel& c = e.rep();
  require_valid(c, "mod-mu dilation");
  const auto d = static_cast<Eigen::Index>(c.dim());
  const auto m = static_cast<Eigen::Index>(c.atoms());
  const auto k = m * d;
  const std::vector<std::size_t> support = e.mu().support();

  std::vector<ComplexMatrix> reference;  // |a><a| (x) I_d
  for (Eigen::Index a = 0; a < m; ++a) {
    ComplexMatrix p = ComplexMatrix::Zero(k, k);
    p.block(a * d, a * d, d, d).setIdentity();
    reference.push_back(std::move(p));
  }

  ModMuDilation out;
  out.isometry = block_isometry(c.at(support.front()));
  const ComplexMatrix u0 = complete_to_unitary(out.isometry);

  std::vector<Qpm> fam;
  for (std::size_t x = 0; x < c.size(); ++x) {
    std::vector<HermitianOperator> proj;
    if (e.mu().is_null(x)) {
      for (const auto& p : reference) proj.emplace_back(p);
    } else {
      // W_x = U_x U_0* maps V onto V_x
      const ComplexMatrix wx = complete_to_unitary(block_isometry(c.at(x))) * u0.adjoint();
      for (const auto& p : reference) {
        const ComplexMatrix f = wx.adjoint() * p * wx;
        proj.emplace_back(ComplexMatrix((f + f.adjoint()) * 0.5));
      }
    }
    fam.emplace_back(c.space(), std::move(proj));
  }
  out.projective = Channel(c.inputs(), std::move(fam));
  for (std::size_t x = 0; x < c.size(); ++x) {
    const SpectralReport rep = is_spectral(out.projective.at(x));
    if (!rep.ok)
      fail(ErrorCode::InvariantViolation, "dilated family is not projection valued at input " + c.inputs().labels()[x]);
  }
  return out;
}

double mod_mu_dilation_residual(const ModMuChannel& e, const ModMuDilation& dil) {
  const Channel& c = e.rep();
  const auto k = static_cast<Eigen::Index>(dil.projective.dim());
  if (dil.isometry.rows() != k || dil.isometry.cols() != static_cast<Eigen::Index>(c.dim()) ||
      dil.projective.inputs() != c.inputs() || dil.projective.space() != c.space())
    fail(ErrorCode::Shape, "dilation does not match the channel");
  double worst = 0.0;
  for (std::size_t x : e.mu().support())
    for (std::size_t a = 0; a < c.atoms(); ++a) {
      const ComplexMatrix r = dil.isometry.adjoint() * dil.projective.at(x).effect(a) * dil.isometry - c.at(x).effect(a);
      worst = std::max(worst, operator_norm(r));
    }
  return worst;
}

}  // namespace qpmkit
