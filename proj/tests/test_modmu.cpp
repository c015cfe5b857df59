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

#include <doctest.h>

#include "qpmkit/dilation.hpp"
#include "qpmkit/discretize.hpp"
#include "qpmkit/error.hpp"
#include "qpmkit/modmu.hpp"
#include "support.hpp"

using namespace qpmkit;
using namespace qpmkit::testing;

namespace {

Channel z_channel_with_x_at(std::size_t n, std::size_t where) {
  std::vector<Qpm> fam(n, z_measurement());
  fam[where] = x_measurement();
  return Channel(InputSpace::finite(n), fam);
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Io;
}

}  // namespace

TEST_SUITE("modmu") {

TEST_CASE("input measure invariants") {
  const InputSpace s = InputSpace::finite(3);
  CHECK(InputMeasure(s, {0.5, 0.5, 0.0}).support() == std::vector<std::size_t>{0, 1});
  CHECK(InputMeasure(s, {0.5, 0.5, 0.0}).is_null(2));
  CHECK(code_of([&] { InputMeasure(s, {0.5, 0.6, 0.0}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { InputMeasure(s, {1.5, -0.5, 0.0}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { InputMeasure(s, {0.0, 0.0, 0.0}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { InputMeasure(s, {1.0}); }) == ErrorCode::Shape);
  const InputMeasure u = InputMeasure::uniform(s);
  for (double w : u.weights()) CHECK(w == doctest::Approx(1.0 / 3));
}

TEST_CASE("equivalence examples") {
  const Channel z = constant_channel(z_measurement(), 3), zx = z_channel_with_x_at(3, 2);
  const InputMeasure mu(InputSpace::finite(3), {0.5, 0.5, 0.0});
  CHECK(equiv_mod_mu(z, zx, mu, 1e-9).equivalent);
  CHECK_FALSE(equiv_mod_mu(z, zx, mu, 1e-9).witness);

  const EquivResult r = equiv_mod_mu(z, zx, InputMeasure::uniform(InputSpace::finite(3)), 1e-9);
  CHECK_FALSE(r.equivalent);
  REQUIRE(r.witness);
  CHECK(r.witness->input == 2);
  CHECK(r.witness->atom == 0);
  CHECK(r.witness->deviation == doctest::Approx(std::sqrt(0.5)));

  CHECK(equiv_mod_mu(zx, zx, InputMeasure::uniform(InputSpace::finite(3)), 0.0).equivalent);
  CHECK(code_of([&] { equiv_mod_mu(z, constant_channel(z_measurement(), 2), mu, 1e-9); }) == ErrorCode::Shape);
}

TEST_CASE("equivalence through the ucp maps") {
  const Channel z = constant_channel(z_measurement(), 3), zx = z_channel_with_x_at(3, 2);
  const InputMeasure mu(InputSpace::finite(3), {0.5, 0.5, 0.0});
  CHECK(ucp_equiv_mod_mu(z, zx, mu, 1e-9));
  CHECK_FALSE(ucp_equiv_mod_mu(z, zx, InputMeasure::uniform(InputSpace::finite(3)), 1e-9));
  CHECK(ucp_equiv_mod_mu(zx, zx, mu, 1e-9));
  CHECK(ucp_basis_functions(OutcomeSpace::finite(4)).size() == 6);
}

TEST_CASE("single atom difference is detected both ways") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Channel e = random_channel(2, 3, 3, s);
    std::vector<Qpm> fam = e.family();
    fam[1] = random_qpm(2, 3, 1000 + s);
    const Channel f(e.inputs(), fam);
    const InputMeasure on(e.inputs(), {0.2, 0.3, 0.5}), off(e.inputs(), {0.4, 0.0, 0.6});
    CHECK_FALSE(equiv_mod_mu(e, f, on, 1e-9).equivalent);
    CHECK_FALSE(ucp_equiv_mod_mu(e, f, on, 1e-9));
    CHECK(equiv_mod_mu(e, f, off, 1e-9).equivalent);
    CHECK(ucp_equiv_mod_mu(e, f, off, 1e-9));
  }
}

TEST_CASE("canonical representatives") {
  const Channel e = random_channel(2, 3, 3, 1);
  const InputMeasure full(e.inputs(), {0.2, 0.3, 0.5});
  CHECK(canonicalize_mod_mu(e, full).rep() == e);

  const Channel two = random_channel(2, 3, 2, 2);
  const ModMuChannel c = canonicalize_mod_mu(two, InputMeasure(two.inputs(), {1.0, 0.0}));
  CHECK(c.canonical());
  CHECK(c.rep().at(0) == two.at(0));
  for (std::size_t a = 0; a < 3; ++a)
    CHECK(operator_norm(ComplexMatrix(c.rep().at(1).effect(a) - ComplexMatrix::Identity(2, 2) / 3.0)) <= 1e-15);

  const InputMeasure mu(e.inputs(), {0.5, 0.0, 0.5});
  std::vector<Qpm> fam = e.family();
  fam[1] = random_qpm(2, 3, 99);
  const Channel f(e.inputs(), fam);
  const ModMuChannel ce = canonicalize_mod_mu(e, mu), cf = canonicalize_mod_mu(f, mu);
  CHECK(max_effect_gap(ce.rep(), cf.rep()) <= 1e-12);
  CHECK(canonicalize_mod_mu(ce.rep(), mu).rep() == ce.rep());
  CHECK(code_of([&] { ModMuChannel bad(e, mu, true); }) == ErrorCode::InvariantViolation);
}

TEST_CASE("bw pairing examples") {
  const Channel e = random_channel(2, 3, 3, 8);
  const InputMeasure mu(e.inputs(), {0.2, 0.3, 0.5});
  const ModMuChannel c(e, mu, false);
  CounterRng rng(8);
  const ComplexVector xi = random_unit(2, rng), eta = random_unit(2, rng);
  const Complex one = bw_pairing(c, TestFunction::constant(e.space(), 1.0), WeightFunction::constant(e.inputs(), 1.0), xi, xi);
  CHECK(std::abs(one - 1.0) <= 1e-12);
  const Complex zero = bw_pairing(c, TestFunction::indicator(e.space(), 1), WeightFunction::constant(e.inputs(), 0.0), xi, eta);
  CHECK(zero == Complex(0.0));

  WeightFunction beta = WeightFunction::constant(e.inputs(), 0.0);
  beta.values[0] = beta.values[2] = 1.0;
  const Complex direct = mu.weights()[0] * eta.dot(e.at(0).effect(1) * xi) + mu.weights()[2] * eta.dot(e.at(2).effect(1) * xi);
  CHECK(std::abs(bw_pairing(c, TestFunction::indicator(e.space(), 1), beta, xi, eta) - direct) <= 1e-12);
  CHECK(code_of([&] { bw_pairing(c, TestFunction::indicator(e.space(), 1), beta, ComplexVector::Zero(3), eta); }) ==
        ErrorCode::Shape);
}

TEST_CASE("bw pairing is linear in f and w and conjugate linear in eta") {
  CounterRng rng(14);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Channel e = random_channel(3, 4, 3, s);
    const ModMuChannel c(e, InputMeasure(e.inputs(), {0.1, 0.6, 0.3}), false);
    auto rand_f = [&] {
      TestFunction f = TestFunction::constant(e.space(), 0.0);
      for (auto& v : f.values) v = rng.complex_normal();
      return f;
    };
    auto rand_w = [&] {
      WeightFunction w = WeightFunction::constant(e.inputs(), 0.0);
      for (auto& v : w.values) v = rng.complex_normal();
      return w;
    };
    const TestFunction f1 = rand_f(), f2 = rand_f();
    const WeightFunction w1 = rand_w(), w2 = rand_w();
    const ComplexVector xi = random_unit(3, rng), eta1 = random_unit(3, rng), eta2 = random_unit(3, rng);
    const Complex a = rng.complex_normal(), b = rng.complex_normal();

    TestFunction fsum = f1;
    for (std::size_t k = 0; k < fsum.values.size(); ++k) fsum.values[k] = a * f1.values[k] + b * f2.values[k];
    CHECK(std::abs(bw_pairing(c, fsum, w1, xi, eta1) -
                   (a * bw_pairing(c, f1, w1, xi, eta1) + b * bw_pairing(c, f2, w1, xi, eta1))) <= 1e-12);

    WeightFunction wsum = w1;
    for (std::size_t k = 0; k < wsum.values.size(); ++k) wsum.values[k] = a * w1.values[k] + b * w2.values[k];
    CHECK(std::abs(bw_pairing(c, f1, wsum, xi, eta1) -
                   (a * bw_pairing(c, f1, w1, xi, eta1) + b * bw_pairing(c, f1, w2, xi, eta1))) <= 1e-12);

    const ComplexVector eta = a * eta1 + b * eta2;
    CHECK(std::abs(bw_pairing(c, f1, w1, xi, eta) - (std::conj(a) * bw_pairing(c, f1, w1, xi, eta1) +
                                                     std::conj(b) * bw_pairing(c, f1, w1, xi, eta2))) <= 1e-12);
  }
}

TEST_CASE("bw gap separates classes on the support") {
  const Channel z = constant_channel(z_measurement(), 3), zx = z_channel_with_x_at(3, 2);
  const InputMeasure mu(InputSpace::finite(3), {0.5, 0.5, 0.0});
  const BwTestFamily fam = canonical_bw_family(z);
  CHECK(fam.fns.size() == 2);
  CHECK(fam.weights.size() == 3);
  CHECK(fam.vectors.size() == 4);
  CHECK(bw_gap_mod_mu(canonicalize_mod_mu(z, mu), canonicalize_mod_mu(z, mu), fam) == 0.0);
  CHECK(bw_gap_mod_mu(ModMuChannel(z, mu, false), ModMuChannel(zx, mu, false), fam) == 0.0);
  const InputMeasure uni = InputMeasure::uniform(InputSpace::finite(3));
  CHECK(bw_gap_mod_mu(ModMuChannel(z, uni, false), ModMuChannel(zx, uni, false), fam) > 0.1);
  CHECK(code_of([&] { bw_gap_mod_mu(ModMuChannel(z, uni, false), ModMuChannel(zx, mu, false), fam); }) ==
        ErrorCode::Shape);
  CHECK(code_of([&] { bw_gap_mod_mu(ModMuChannel(z, uni, false), ModMuChannel(zx, uni, false), BwTestFamily{}); }) ==
        ErrorCode::InvalidArgument);

  for (std::uint64_t s = 0; s < 20; ++s) {
    const Channel e = random_channel(2, 2, 3, s);
    std::vector<Qpm> fam2 = e.family();
    fam2[s % 3] = random_qpm(2, 2, 500 + s);
    const Channel f(e.inputs(), fam2);
    std::vector<double> w{0.25, 0.25, 0.25};
    w[s % 3] = s % 2 == 0 ? 0.0 : 0.25;
    const double total = w[0] + w[1] + w[2];
    for (double& v : w) v /= total;
    const InputMeasure m(e.inputs(), w);
    const bool eq = equiv_mod_mu(e, f, m, 1e-9).equivalent;
    const double gap = bw_gap_mod_mu(canonicalize_mod_mu(e, m), canonicalize_mod_mu(f, m), canonical_bw_family(e));
    CHECK(eq == (gap <= 1e-12));
  }
}

TEST_CASE("fixed isometry dilation") {
  for (std::uint64_t s = 0; s < 15; ++s) {
    const std::size_t d = 1 + s % 3, m = 2 + s % 3, n = 2 + s % 3;
    const Channel e = random_channel(d, m, n, s);
    std::vector<double> w(n, 1.0);
    w[n - 1] = 0.0;
    for (double& v : w) v /= static_cast<double>(n - 1);
    const ModMuChannel c = canonicalize_mod_mu(e, InputMeasure(e.inputs(), w));
    const ModMuDilation dil = naimark_mod_mu(c);
    CHECK(isometry_residual(dil.isometry) <= 1e-9);
    CHECK(mod_mu_dilation_residual(c, dil) <= 1e-8);
    for (std::size_t x = 0; x < n; ++x) CHECK(is_spectral(dil.projective.at(x)).ok);
  }
}

TEST_CASE("dilation of a constant channel is the plain dilation") {
  const Qpm q = random_qpm(2, 3, 3);
  const Channel e = constant_channel(q, 3);
  const ModMuDilation dil = naimark_mod_mu(ModMuChannel(e, InputMeasure::uniform(e.inputs()), false));
  const DilationTriple t = naimark_dilate(q, false);
  CHECK(operator_norm(ComplexMatrix(dil.isometry - t.isometry)) <= 1e-12);
  for (std::size_t x = 0; x < 3; ++x)
    for (std::size_t a = 0; a < 3; ++a)
      CHECK(operator_norm(ComplexMatrix(dil.projective.at(x).effect(a) - t.spectral.measure().effect(a))) <= 1e-9);
}

TEST_CASE("scalar channel dilation") {
  const Channel e = random_channel(1, 4, 3, 12);
  const ModMuChannel c(e, InputMeasure::uniform(e.inputs()), false);
  CHECK(mod_mu_dilation_residual(c, naimark_mod_mu(c)) <= 1e-10);
}

TEST_CASE("dilations of equivalent channels stay equivalent") {
  const Channel e = random_channel(2, 3, 3, 40);
  const InputMeasure mu(e.inputs(), {0.6, 0.0, 0.4});
  const ModMuDilation a = naimark_mod_mu(ModMuChannel(e, mu, false));
  const ModMuDilation b = naimark_mod_mu(canonicalize_mod_mu(e, mu));
  CHECK(equiv_mod_mu(a.projective, b.projective, mu, 1e-9).equivalent);
  CHECK(operator_norm(ComplexMatrix(a.isometry - b.isometry)) <= 1e-12);
}

}
