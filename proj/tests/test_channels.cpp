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
#include "qpmkit/modmu.hpp"
#include "support.hpp"

using namespace qpmkit;
using namespace qpmkit::testing;

namespace {

Channel z_then_x_at(std::size_t n, std::size_t where) {
  std::vector<Qpm> fam(n, z_measurement());
  fam[where] = x_measurement();
  return Channel(InputSpace::finite(n), fam);
}

ChannelSequence scalar_sequence(const std::vector<double>& p) {
  std::vector<Channel> terms;
  for (double v : p) terms.push_back(constant_channel(classical({v, 1.0 - v}), 1));
  return ChannelSequence(terms);
}

bool pairwise_within(const ChannelSequence& seq, const std::vector<std::size_t>& idx, double tol) {
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = i + 1; j < idx.size(); ++j)
      if (effect_distance(seq[idx[i]], seq[idx[j]]) > tol) return false;
  return true;
}

}  // namespace

TEST_SUITE("channels") {

TEST_CASE("channel construction") {
  CHECK_THROWS_AS(Channel(InputSpace::finite(2), {z_measurement()}), Error);
  CHECK_THROWS_AS(Channel(InputSpace::finite(2), {z_measurement(), classical({0.5, 0.5})}), Error);
  CHECK_THROWS_AS(InputSpace(std::vector<std::string>{}), Error);
  CHECK_THROWS_AS(ChannelSequence(std::vector<Channel>{}), Error);
  CHECK(InputSpace::finite(2).labels() == std::vector<std::string>{"x0", "x1"});
}

TEST_CASE("channel validation names the failing input") {
  CHECK(validate_channel(constant_channel(z_measurement(), 3)).ok);
  Channel bad(InputSpace::finite(3), {z_measurement(), make_qpm({diag({1, 0}), diag({0, 0.9})}), z_measurement()});
  const ChannelValidation v = validate_channel(bad);
  CHECK_FALSE(v.ok);
  REQUIRE(v.violations.size() == 1);
  CHECK(v.violations[0].find("x1") != std::string::npos);
  CHECK(v.per_input[1].sum_residual == doctest::Approx(0.1));
}

TEST_CASE("rho tilde examples") {
  const Channel z = constant_channel(z_measurement(), 3);
  CHECK(rho_tilde(z, z).value == 0.0);
  CHECK(rho_tilde(z, constant_channel(x_measurement(), 3)).value == doctest::Approx(std::sqrt(2.0)));
  const RhoTildeResult r = rho_tilde(z, z_then_x_at(3, 1));
  CHECK(r.value == doctest::Approx(std::sqrt(2.0)));
  CHECK(r.argmax == 1);
  CHECK(r.exact);
}

TEST_CASE("channel ucp map") {
  const Channel c = random_channel(2, 3, 4, 9);
  for (const auto& m : apply_channel_ucp(c, TestFunction::constant(c.space(), 1.0)))
    CHECK(operator_norm(ComplexMatrix(m - ComplexMatrix::Identity(2, 2))) <= 1e-12);
  const auto ind = apply_channel_ucp(c, TestFunction::indicator(c.space(), 2));
  for (std::size_t x = 0; x < 4; ++x) CHECK(ind[x] == c.at(x).effect(2));
  const auto k = apply_channel_ucp(constant_channel(trine(), 3), TestFunction{trine().space(), {0.3, Complex(0, 1), -2.0}});
  CHECK(k[0] == k[1]);
  CHECK(k[1] == k[2]);
}

TEST_CASE("operator norm path agrees with rho tilde") {
  CHECK(channel_opnorm_gap(constant_channel(z_measurement(), 2), constant_channel(x_measurement(), 2)) ==
        doctest::Approx(std::sqrt(2.0)));
  const Channel c = random_channel(2, 3, 2, 1);
  CHECK(channel_opnorm_gap(c, c) == 0.0);
  for (std::uint64_t s = 0; s < 30; ++s) {
    const std::size_t d = 1 + s % 3, m = 2 + s % 4, n = 1 + s % 3;
    const Channel e = random_channel(d, m, n, 2 * s), f = random_channel(d, m, n, 2 * s + 1);
    CHECK(std::abs(rho_tilde(e, f).value - channel_opnorm_gap(e, f)) <= 1e-9);
  }
}

TEST_CASE("rho tilde is a metric on samples") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const Channel e = random_channel(2, 3, 3, 3 * s), f = random_channel(2, 3, 3, 3 * s + 1),
                  r = random_channel(2, 3, 3, 3 * s + 2);
    const double ef = rho_tilde(e, f).value;
    CHECK(std::abs(ef - rho_tilde(f, e).value) <= 1e-12);
    CHECK(ef <= rho_tilde(e, r).value + rho_tilde(r, f).value + 1e-9);
    CHECK(ef > 0.0);
  }
}

TEST_CASE("pointwise set weak gap") {
  const auto units = matrix_unit_functionals(2);
  const Channel z = constant_channel(z_measurement(), 3);
  CHECK(psw_gap(z, z, units) == 0.0);
  const Channel zx = z_then_x_at(3, 2);
  CHECK(psw_gap(z, zx, units) == doctest::Approx(sw_gap(z_measurement(), x_measurement(), units)));
  const std::vector<ComplexMatrix> zero{ComplexMatrix::Zero(2, 2)};
  CHECK(psw_gap(z, zx, zero) == 0.0);
  CHECK_THROWS_AS(psw_gap(z, zx, std::vector<ComplexMatrix>{}), Error);
}

TEST_CASE("pointwise set and map gaps bound each other") {
  const auto units = matrix_unit_functionals(2);
  std::vector<TestFunction> ind;
  for (std::size_t a = 0; a < 3; ++a) ind.push_back(TestFunction::indicator(OutcomeSpace::finite(3), a));
  const ChannelSequence seq = random_sequence(2, 3, 2, 20, 5, Drift::Shrink);
  const Channel limit = seq[19];
  for (std::size_t t = 0; t < 19; ++t) {
    const double ps = psw_gap(seq[t], limit, units), pb = pbw_gap(seq[t], limit, units, ind);
    CHECK(pb <= ps + 1e-15);
    CHECK(ps <= 3.0 * pb + 1e-15);
  }
}

TEST_CASE("projection repairs slightly broken channels") {
  const Channel c = random_channel(2, 3, 2, 4);
  CHECK(effect_distance(project_to_channel(c), c) <= 1e-12);
  std::vector<Qpm> fam;
  for (const Qpm& q : c.family()) {
    std::vector<ComplexMatrix> eff;
    for (std::size_t a = 0; a < q.size(); ++a) eff.push_back(1.05 * q.effect(a));
    fam.push_back(make_qpm(eff));
  }
  const Channel repaired = project_to_channel(Channel(c.inputs(), fam));
  CHECK(validate_channel(repaired).ok);
  CHECK(effect_distance(repaired, c) <= 1e-12);
}

TEST_CASE("alternating sequence keeps the cluster with the last term") {
  std::vector<Channel> terms;
  const Channel e = constant_channel(z_measurement(), 2), f = constant_channel(x_measurement(), 2);
  for (int i = 0; i < 10; ++i) terms.push_back(i % 2 == 0 ? e : f);
  const ChannelSequence seq(terms);
  const Extraction x = extract_convergent_subsequence(seq, 0.1, matrix_unit_functionals(2));
  CHECK(x.indices == std::vector<std::size_t>{1, 3, 5, 7, 9});
  CHECK_FALSE(x.tail);
  CHECK(effect_distance(x.limit, f) <= 1e-12);
  for (double g : x.gap_trace) CHECK(g <= 1e-15);
}

TEST_CASE("explicitly convergent sequence is returned whole") {
  std::vector<double> p;
  for (int n = 1; n <= 60; ++n) p.push_back(0.5 + (n % 2 == 0 ? 1.0 : -1.0) / (4.0 * n));
  const ChannelSequence seq = scalar_sequence(p);
  const double tol = 0.4;
  const Extraction x = extract_convergent_subsequence(seq, tol, matrix_unit_functionals(1));
  CHECK(x.indices.size() == 60);
  CHECK(x.tail);
  CHECK(std::abs(x.limit.at(0).effect(0)(0, 0).real() - 0.5) <= tol);
  CHECK(std::abs(x.limit.at(0).effect(0)(0, 0).real() - 0.5) <= 0.05);
}

TEST_CASE("random sequences yield pairwise close subsequences") {
  const auto probe = matrix_unit_functionals(2);
  for (std::uint64_t s = 0; s < 3; ++s) {
    const ChannelSequence seq = random_sequence(2, 2, 2, 200, s, Drift::None);
    const Extraction x = extract_convergent_subsequence(seq, 0.15, probe);
    CHECK(std::is_sorted(x.indices.begin(), x.indices.end()));
    CHECK(std::adjacent_find(x.indices.begin(), x.indices.end()) == x.indices.end());
    CHECK(pairwise_within(seq, x.indices, 0.15));
    CHECK(validate_channel(x.limit).ok);

    std::vector<Channel> sub;
    for (std::size_t i : x.indices) sub.push_back(seq[i]);
    const Extraction again = extract_convergent_subsequence(ChannelSequence(sub), 0.15, probe);
    CHECK(again.indices.size() == sub.size());
  }
}

TEST_CASE("shrinking drift returns the tail with a monotone trace") {
  const ChannelSequence seq = random_sequence(2, 3, 2, 80, 13, Drift::Shrink);
  const Extraction x = extract_convergent_subsequence(seq, 0.15, matrix_unit_functionals(2));
  REQUIRE(x.tail);
  CHECK(x.indices.back() == 79);
  CHECK(x.indices.size() >= 9);
  for (std::size_t i = 1; i < x.gap_trace.size(); ++i) CHECK(x.gap_trace[i] <= x.gap_trace[i - 1] + 1e-15);
  CHECK(x.gap_trace.back() == 0.0);
  CHECK(x.limit_gaps.size() == x.indices.size());
}

TEST_CASE("degenerate extraction inputs") {
  const ChannelSequence one(std::vector<Channel>{random_channel(2, 2, 1, 3)});
  const Extraction x = extract_convergent_subsequence(one, 0.1, matrix_unit_functionals(2));
  CHECK(x.indices == std::vector<std::size_t>{0});
  try {
    extract_convergent_subsequence(one, 0.0, matrix_unit_functionals(2));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
}

}
