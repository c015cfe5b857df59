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

#include "qpmkit/discretize.hpp"
#include "qpmkit/error.hpp"
#include "support.hpp"

using namespace qpmkit;
using namespace qpmkit::testing;

namespace {

std::vector<double> weights(const Qpm& q) {
  std::vector<double> w;
  for (std::size_t a = 0; a < q.size(); ++a) w.push_back(q.effect(a)(0, 0).real());
  return w;
}

std::vector<std::size_t> pairing(std::size_t coarse) {
  std::vector<std::size_t> map;
  for (std::size_t k = 0; k < 2 * coarse; ++k) map.push_back(k / 2);
  return map;
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

TEST_SUITE("discretize") {

TEST_CASE("space construction") {
  const OutcomeSpace s = make_space({Geometry::Interval, 4});
  CHECK(s.labels().front() == "[0,1/4)");
  CHECK(s.labels().back() == "[3/4,1)");
  CHECK(s.cells()[1].lo == Rational{1, 4});
  CHECK(s.cells()[1].hi == Rational{1, 2});
  CHECK(make_space({Geometry::Circle, 3}).size() == 3);
  CHECK(make_space({Geometry::Finite, 5}).labels()[4] == "4");
  CHECK(code_of([] { make_space({Geometry::Interval, 3}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { make_space({Geometry::Circle, 0}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("scalar density examples") {
  CHECK(weights(discretize_scalar_density(DensitySpec::uniform(), {Geometry::Interval, 4})) ==
        std::vector<double>{0.25, 0.25, 0.25, 0.25});
  const DensitySpec half = DensitySpec::table({{0, 1}, {1, 2}, {1, 1}}, {2.0, 0.0});
  CHECK(weights(discretize_scalar_density(half, {Geometry::Interval, 4})) == std::vector<double>{0.5, 0.5, 0.0, 0.0});
  for (double w : weights(discretize_scalar_density(DensitySpec::uniform(), {Geometry::Circle, 3})))
    CHECK(w == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(validate_qpm(discretize_scalar_density(half, {Geometry::Interval, 8})).ok);
}

TEST_CASE("unnormalized densities are rejected") {
  const DensitySpec heavy = DensitySpec::table({{0, 1}, {1, 1}}, {1.5});
  CHECK(code_of([&] { discretize_scalar_density(heavy, {Geometry::Interval, 2}); }) == ErrorCode::InvalidArgument);
  const DensitySpec crooked = DensitySpec::table({{0, 1}, {3, 4}, {1, 2}, {1, 1}}, {1, 1, 1});
  CHECK(code_of([&] { discretize_scalar_density(crooked, {Geometry::Interval, 2}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { discretize_scalar_density(DensitySpec::table({}, {0.5, 0.4}), {Geometry::Finite, 2}); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("coarsening examples") {
  const Qpm fine = discretize_scalar_density(DensitySpec::uniform(), {Geometry::Interval, 4});
  const OutcomeSpace two = make_space({Geometry::Interval, 2});
  CHECK(weights(coarsen(fine, pairing(2), two)) == std::vector<double>{0.5, 0.5});
  const Qpm q = random_qpm(3, 5, 4);
  const Qpm one = coarsen(q, std::vector<std::size_t>(5, 0), OutcomeSpace::finite(1));
  CHECK(operator_norm(ComplexMatrix(one.effect(0) - ComplexMatrix::Identity(3, 3))) <= 1e-12);
  CHECK(code_of([&] { coarsen(q, {0, 0, 1}, OutcomeSpace::finite(2)); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { coarsen(q, {0, 0, 0, 0, 0}, OutcomeSpace::finite(2)); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { coarsen(q, {0, 0, 0, 0, 7}, OutcomeSpace::finite(2)); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("coarsening commutes with discretization") {
  const DensitySpec table = DensitySpec::table({{0, 1}, {1, 4}, {1, 2}, {1, 1}}, {2.0, 0.0, 1.0});
  for (std::size_t n : {4, 8, 16}) {
    const Qpm fine = discretize_scalar_density(table, {Geometry::Interval, 2 * n});
    const Qpm direct = discretize_scalar_density(table, {Geometry::Interval, n});
    const Qpm pushed = coarsen(fine, pairing(n), make_space({Geometry::Interval, n}));
    CHECK(weights(pushed) == weights(direct));
    CHECK(pushed.space() == direct.space());
  }
}

TEST_CASE("matrix valued refinement pair") {
  const Qpm fine = random_qpm(3, 8, 10);
  const Qpm pushed = coarsen(fine, pairing(4), OutcomeSpace::finite(4));
  for (std::size_t k = 0; k < 4; ++k)
    CHECK(operator_norm(ComplexMatrix(pushed.effect(k) - (fine.effect(2 * k) + fine.effect(2 * k + 1)))) <= 1e-12);
}

TEST_CASE("refinement never decreases rho") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Qpm e = random_qpm(2, 8, 2 * s), f = random_qpm(2, 8, 2 * s + 1);
    const OutcomeSpace c4 = OutcomeSpace::finite(4);
    CHECK(rho_distance(e, f).value >= rho_distance(coarsen(e, pairing(4), c4), coarsen(f, pairing(4), c4)).value - 1e-12);

    const Qpm ce = random_qpm(2, 4, 100 + s), cf = random_qpm(2, 4, 200 + s);
    std::vector<ComplexMatrix> split_e, split_f;
    for (std::size_t k = 0; k < 8; ++k) {
      split_e.push_back(0.5 * ce.effect(k / 2));
      split_f.push_back(0.5 * cf.effect(k / 2));
    }
    CHECK(std::abs(rho_distance(make_qpm(split_e), make_qpm(split_f)).value - rho_distance(ce, cf).value) <= 1e-12);
  }
}

TEST_CASE("random measures are valid and reproducible") {
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const std::size_t d = 1 + s % 4, m = 1 + s % 6;
    const Qpm q = random_qpm(d, m, s);
    const ValidationReport r = validate_qpm(q);
    CHECK(r.ok);
    CHECK(r.sum_residual <= 1e-12);
  }
  for (std::uint64_t s = 0; s < 50; ++s) {
    const double p = random_qpm(1, 2, s).effect(0)(0, 0).real();
    CHECK(p > 0.0);
    CHECK(p < 1.0);
  }
  CHECK(random_qpm(3, 4, 77) == random_qpm(3, 4, 77));
  CHECK_FALSE(random_qpm(3, 4, 77) == random_qpm(3, 4, 78));
  CHECK(code_of([] { random_qpm(0, 2, 1); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("random channels") {
  for (std::uint64_t s = 0; s < 50; ++s) CHECK(validate_channel(random_channel(2, 3, 4, s)).ok);
  const Channel c = random_channel(2, 3, 4, 5);
  CHECK(c == random_channel(2, 3, 4, 5));
  CHECK_FALSE(c.at(0) == c.at(1));
  CHECK(code_of([] { random_channel(2, 3, 0, 1); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("random sequences") {
  const ChannelSequence none = random_sequence(2, 2, 2, 10, 3, Drift::None);
  CHECK(none.size() == 10);
  CHECK(none == random_sequence(2, 2, 2, 10, 3, Drift::None));
  for (const Channel& c : none.terms()) CHECK(validate_channel(c).ok);

  const ChannelSequence shrink = random_sequence(2, 3, 2, 64, 3, Drift::Shrink);
  for (const Channel& c : shrink.terms()) CHECK(validate_channel(c).ok);
  // term t is B + (R - B) / t, so t * dist(term t, term 2t) is constant
  const double c1 = effect_distance(shrink[0], shrink[1]);
  CHECK(c1 > 0.0);
  for (std::size_t t = 2; t <= 32; t *= 2)
    CHECK(static_cast<double>(t) * effect_distance(shrink[t - 1], shrink[2 * t - 1]) == doctest::Approx(c1).epsilon(1e-9));

  CHECK(random_sequence(2, 2, 1, 1, 0, Drift::None).size() == 1);
  CHECK(code_of([] { random_sequence(2, 2, 1, 0, 0, Drift::None); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("channel mixing") {
  const Channel e = random_channel(2, 2, 2, 1), f = random_channel(2, 2, 2, 2);
  const Channel mid = mix_channels(e, f, 0.5);
  CHECK(validate_channel(mid).ok);
  CHECK(effect_distance(mix_channels(e, f, 0.0), e) <= 1e-15);
  CHECK(effect_distance(mid, e) == doctest::Approx(0.5 * effect_distance(e, f)).epsilon(1e-9));
}

}
