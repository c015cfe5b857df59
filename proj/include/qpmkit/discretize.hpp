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
#include <vector>

#include "qpmkit/channels.hpp"
#include "qpmkit/rng.hpp"

namespace qpmkit {

struct SpaceSpec {
  Geometry kind = Geometry::Finite;
  std::size_t cells = 1;  // atom count for finite spaces; must be a power of two for intervals
};

/// Finite spaces get labels "0".."m-1"; interval and circle spaces get
/// equal cells [k/n, (k+1)/n) labelled by their endpoints.
OutcomeSpace make_space(const SpaceSpec& spec);

/// Nonnegative density on [0, 1) (circle: fraction of a turn). A
/// piecewise-constant table has breakpoints 0 = b_0 < ... < b_k = 1 and
/// value v_i on [b_i, b_{i+1}). On a finite space the table values are read
/// directly as atom masses.
struct DensitySpec {
  enum class Kind { Uniform, PiecewiseConstant };
  Kind kind = Kind::Uniform;
  std::vector<Rational> breakpoints;
  std::vector<double> values;

  static DensitySpec uniform() { return {}; }
  static DensitySpec table(std::vector<Rational> breakpoints, std::vector<double> values) {
    return {Kind::PiecewiseConstant, std::move(breakpoints), std::move(values)};
  }
};

/// One-dimensional measure with weight = integral of the density over each
/// cell. Throws InvalidArgument unless the weights sum to 1 within 1e-9.
Qpm discretize_scalar_density(const DensitySpec& density, const SpaceSpec& space);

/// Pushes E forward along mapping[refined atom] = coarse atom. The mapping
/// must cover every refined atom and hit every coarse atom.
Qpm coarsen(const Qpm& e, const std::vector<std::size_t>& mapping, const OutcomeSpace& coarse);

/// Ginibre construction: P_a = G_a G_a*, S = sum P_a, E(a) = S^{-1/2} P_a S^{-1/2}.
/// A numerically singular S triggers a redraw on the next stream (at most 8).
Qpm random_qpm(std::size_t dim, std::size_t atoms, std::uint64_t seed);
Qpm random_qpm(std::size_t dim, std::size_t atoms, const CounterRng& stream);

/// Input x uses the split stream x of the seed.
Channel random_channel(std::size_t dim, std::size_t atoms, std::size_t inputs, std::uint64_t seed);

enum class Drift { None, Shrink };

/// Drift::None draws independent channels. Drift::Shrink draws a base
/// channel B and a target R once, then term t (1-based) is
/// (1 - 1/t) B + (1/t) R, so its effect distance to B is exactly
/// effect_distance(R, B) / t.
ChannelSequence random_sequence(std::size_t dim, std::size_t atoms, std::size_t inputs, std::size_t length,
                                std::uint64_t seed, Drift drift);

/// Convex combination (1 - t) E + t F of two shape-compatible channels.
Channel mix_channels(const Channel& e, const Channel& f, double t);

}  // namespace qpmkit
