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

#include "qpmkit/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qpmkit/error.hpp"

namespace qpmkit {

namespace {

std::string rational_text(const Rational& r) {
  if (r.den == 1) return std::to_string(r.num);
  return std::to_string(r.num) + "/" + std::to_string(r.den);
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

OutcomeSpace make_space(const SpaceSpec& spec) {
  if (spec.cells == 0) fail(ErrorCode::InvalidArgument, "a space needs at least one cell");
  if (spec.kind == Geometry::Finite) return OutcomeSpace::finite(spec.cells);
  if (spec.kind == Geometry::Interval && !is_power_of_two(spec.cells))
    fail(ErrorCode::InvalidArgument, "interval cells are dyadic: cell count must be a power of two");
  const auto n = static_cast<std::int64_t>(spec.cells);
  std::vector<std::string> labels;
  std::vector<Cell> cells;
  for (std::int64_t k = 0; k < n; ++k) {
    auto reduce = [](std::int64_t num, std::int64_t den) {
      const std::int64_t g = std::gcd(num, den);
      return Rational{num / g, den / g};
    };
    Cell c{reduce(k, n), reduce(k + 1, n)};
    labels.push_back("[" + rational_text(c.lo) + "," + rational_text(c.hi) + ")");
    cells.push_back(c);
  }
  return OutcomeSpace(std::move(labels), spec.kind, std::move(cells));
}

Qpm discretize_scalar_density(const DensitySpec& density, const SpaceSpec& spec) {
  const OutcomeSpace space = make_space(spec);
  const std::size_t m = space.size();
  std::vector<double> weights(m, 0.0);

  if (density.kind == DensitySpec::Kind::Uniform) {
    std::fill(weights.begin(), weights.end(), 1.0 / static_cast<double>(m));
  } else if (spec.kind == Geometry::Finite) {
    if (density.values.size() != m) fail(ErrorCode::InvalidArgument, "need one mass per atom on a finite space");
    weights = density.values;
  } else {
    const auto& b = density.breakpoints;
    const auto& v = density.values;
    if (b.size() != v.size() + 1 || v.empty())
      fail(ErrorCode::InvalidArgument, "density table needs k values and k+1 breakpoints");
    if (!(b.front() == Rational{0, 1}) || !(b.back() == Rational{1, 1}))
      fail(ErrorCode::InvalidArgument, "density breakpoints must run from 0 to 1");
    for (std::size_t i = 0; i + 1 < b.size(); ++i)
      if (!(b[i] < b[i + 1]) || b[i].den <= 0) fail(ErrorCode::InvalidArgument, "density breakpoints must increase");
    for (double x : v)
      if (!std::isfinite(x) || x < 0.0) fail(ErrorCode::InvalidArgument, "density values must be finite and nonnegative");
    for (std::size_t c = 0; c < m; ++c) {
      const double lo = space.cells()[c].lo.value();
      const double hi = space.cells()[c].hi.value();
      double w = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        const double overlap = std::min(hi, b[i + 1].value()) - std::max(lo, b[i].value());
        if (overlap > 0.0) w += overlap * v[i];
      }
      weights[c] = w;
    }
  }

  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) fail(ErrorCode::InvalidArgument, "density weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9)
    fail(ErrorCode::InvalidArgument, "density is not normalized (total " + std::to_string(total) + ")");
  std::vector<HermitianOperator> effects;
  for (double w : weights) effects.emplace_back(ComplexMatrix::Constant(1, 1, w));
  return Qpm(space, std::move(effects));
}

Qpm coarsen(const Qpm& e, const std::vector<std::size_t>& mapping, const OutcomeSpace& coarse) {
  if (mapping.size() != e.size()) fail(ErrorCode::InvalidArgument, "mapping must cover every refined atom");
  std::vector<ComplexMatrix> sums(coarse.size(), ComplexMatrix::Zero(e.dim(), e.dim()));
  std::vector<bool> hit(coarse.size(), false);
  for (std::size_t a = 0; a < mapping.size(); ++a) {
    if (mapping[a] >= coarse.size()) fail(ErrorCode::InvalidArgument, "mapping points outside the coarse space");
    sums[mapping[a]] += e.effect(a);
    hit[mapping[a]] = true;
  }
  if (std::find(hit.begin(), hit.end(), false) != hit.end())
    fail(ErrorCode::InvalidArgument, "mapping must be surjective");
  std::vector<HermitianOperator> effects;
  for (const auto& s : sums) effects.emplace_back(s);
  return Qpm(coarse, std::move(effects));
}

Qpm random_qpm(std::size_t dim, std::size_t atoms, const CounterRng& stream) {
  if (dim == 0 || atoms == 0) fail(ErrorCode::InvalidArgument, "dimension and atom count must be >= 1");
  const auto d = static_cast<Eigen::Index>(dim);
  for (std::uint64_t attempt = 0; attempt < 8; ++attempt) {
    CounterRng rng = stream.split(attempt);
    std::vector<ComplexMatrix> p;
    ComplexMatrix s = ComplexMatrix::Zero(d, d);
    for (std::size_t a = 0; a < atoms; ++a) {
      const ComplexMatrix g = ginibre(dim, dim, rng);
      p.push_back(g * g.adjoint());
      s += p.back();
    }
    const HermitianOperator sh(ComplexMatrix((s + s.adjoint()) * 0.5));
    const RealVector ev = hermitian_eigenvalues(sh.matrix());
    if (ev(0) <= 1e-10 * std::max(1.0, ev(d - 1))) continue;
    const ComplexMatrix root = inverse_sqrt_pd(sh, 0.0);
    std::vector<HermitianOperator> effects;
    for (const auto& pa : p) {
      const ComplexMatrix eff = root * pa * root;
      effects.emplace_back(ComplexMatrix((eff + eff.adjoint()) * 0.5));
    }
    return Qpm(OutcomeSpace::finite(atoms), std::move(effects));
  }
  fail(ErrorCode::NotPsd, "random measure: frame operator stayed singular after 8 draws");
}

Qpm random_qpm(std::size_t dim, std::size_t atoms, std::uint64_t seed) {
  return random_qpm(dim, atoms, CounterRng(seed));
}

Channel random_channel(std::size_t dim, std::size_t atoms, std::size_t inputs, std::uint64_t seed) {
  if (inputs == 0) fail(ErrorCode::InvalidArgument, "input count must be >= 1");
  const CounterRng root(seed, 1);
  std::vector<Qpm> fam;
  for (std::size_t x = 0; x < inputs; ++x) fam.push_back(random_qpm(dim, atoms, root.split(x)));
  return Channel(InputSpace::finite(inputs), std::move(fam));
}

Channel mix_channels(const Channel& e, const Channel& f, double t) {
  require_compatible(e, f);
  std::vector<Qpm> fam;
  for (std::size_t x = 0; x < e.size(); ++x) {
    std::vector<HermitianOperator> effects;
    for (std::size_t a = 0; a < e.atoms(); ++a)
      effects.emplace_back(ComplexMatrix((1.0 - t) * e.at(x).effect(a) + t * f.at(x).effect(a)));
    fam.emplace_back(e.space(), std::move(effects));
  }
  return Channel(e.inputs(), std::move(fam));
}

ChannelSequence random_sequence(std::size_t dim, std::size_t atoms, std::size_t inputs, std::size_t length,
                                std::uint64_t seed, Drift drift) {
  if (length == 0) fail(ErrorCode::InvalidArgument, "sequence length must be >= 1");
  const CounterRng root(seed, 2);
  std::vector<Channel> terms;
  if (drift == Drift::None) {
    for (std::size_t t = 0; t < length; ++t) terms.push_back(random_channel(dim, atoms, inputs, root.split(t).next_u64()));
  } else {
    const Channel base = random_channel(dim, atoms, inputs, root.split(0).next_u64());
    const Channel target = random_channel(dim, atoms, inputs, root.split(1).next_u64());
    for (std::size_t t = 1; t <= length; ++t) terms.push_back(mix_channels(base, target, 1.0 / static_cast<double>(t)));
  }
  return ChannelSequence(std::move(terms));
}

}  // namespace qpmkit
