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

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numbers>
#include <vector>

#include "qpmkit/channels.hpp"
#include "qpmkit/operator_core.hpp"
#include "qpmkit/qpm.hpp"
#include "qpmkit/rng.hpp"

namespace qpmkit::testing {

inline ComplexMatrix mat(std::initializer_list<std::initializer_list<Complex>> rows) {
  ComplexMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (const Complex& z : r) m(i, j++) = z;
    ++i;
  }
  return m;
}

inline ComplexMatrix diag(std::initializer_list<double> d) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double v : d) m(i, i) = v, ++i;
  return m;
}

inline Qpm make_qpm(const std::vector<ComplexMatrix>& effects) {
  std::vector<HermitianOperator> hs;
  for (const auto& e : effects) hs.emplace_back(e);
  return Qpm(OutcomeSpace::finite(effects.size()), std::move(hs));
}

inline Qpm z_measurement() { return make_qpm({diag({1, 0}), diag({0, 1})}); }

inline Qpm x_measurement() {
  return make_qpm({mat({{0.5, 0.5}, {0.5, 0.5}}), mat({{0.5, -0.5}, {-0.5, 0.5}})});
}

inline Qpm classical(const std::vector<double>& p) {
  std::vector<ComplexMatrix> effects;
  for (double v : p) effects.push_back(ComplexMatrix::Constant(1, 1, v));
  return make_qpm(effects);
}

inline Qpm trine() {
  std::vector<ComplexMatrix> effects;
  for (int j = 0; j < 3; ++j) {
    const double t = 2.0 * std::numbers::pi * j / 3.0;
    ComplexVector v(2);
    v << std::cos(t / 2), std::sin(t / 2);
    effects.push_back((2.0 / 3.0) * v * v.adjoint());
  }
  return make_qpm(effects);
}

inline ComplexMatrix random_hermitian(std::size_t d, CounterRng& rng) {
  const ComplexMatrix g = ginibre(d, d, rng);
  return 0.5 * (g + g.adjoint());
}

inline ComplexVector random_unit(std::size_t d, CounterRng& rng) {
  ComplexVector v = ginibre(d, 1, rng).col(0);
  return v / v.norm();
}

inline std::vector<ComplexMatrix> differences(const Qpm& e, const Qpm& f) {
  std::vector<ComplexMatrix> d;
  for (std::size_t a = 0; a < e.size(); ++a) d.push_back(e.effect(a) - f.effect(a));
  return d;
}

// Largest spectral norm of sum_a eps_a D_a over phases eps_a drawn from the
// k-th roots of unity, first phase fixed to 1.
inline double phase_grid_norm(const Qpm& e, const Qpm& f, int k) {
  const auto d = differences(e, f);
  const std::size_t m = d.size();
  std::vector<int> idx(m, 0);
  double best = 0.0;
  while (true) {
    ComplexMatrix s = d[0];
    for (std::size_t a = 1; a < m; ++a) s += std::polar(1.0, 2.0 * std::numbers::pi * idx[a] / k) * d[a];
    best = std::max(best, s.jacobiSvd().singularValues()(0));
    std::size_t a = 1;
    while (a < m && ++idx[a] == k) idx[a++] = 0;
    if (a >= m) break;
  }
  return best;
}

// max over every nonempty proper subset of lambda_max(D(S)).
inline double subset_brute_force(const Qpm& e, const Qpm& f) {
  const auto d = differences(e, f);
  const std::size_t m = d.size();
  double best = 0.0;
  for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << m); ++mask) {
    ComplexMatrix s = ComplexMatrix::Zero(d[0].rows(), d[0].cols());
    for (std::size_t a = 0; a < m; ++a)
      if (mask >> a & 1) s += d[a];
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(s);
    best = std::max(best, es.eigenvalues().maxCoeff());
  }
  return best;
}

inline double max_effect_gap(const Channel& e, const Channel& f) {
  double worst = 0.0;
  for (std::size_t x = 0; x < e.size(); ++x)
    for (std::size_t a = 0; a < e.atoms(); ++a)
      worst = std::max(worst, operator_norm(ComplexMatrix(e.at(x).effect(a) - f.at(x).effect(a))));
  return worst;
}

inline Channel constant_channel(const Qpm& q, std::size_t n) {
  return Channel(InputSpace::finite(n), std::vector<Qpm>(n, q));
}

}  // namespace qpmkit::testing
