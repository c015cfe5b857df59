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

#include <complex>
#include <cstdint>

#include "qpmkit/operator_core.hpp"

namespace qpmkit {

/// Counter-based generator: every draw is a hash of (key, counter), where the
/// key is derived from a 64-bit seed and a stream id. Streams split off a
/// parent are independent of each other and of draw order in the parent.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  CounterRng split(std::uint64_t stream) const;

  std::uint64_t next_u64();
  double uniform();           // [0, 1)
  double normal();            // standard normal, Box-Muller
  Complex complex_normal();   // E|z|^2 = 1

  std::uint64_t key() const noexcept { return key_; }

 private:
  struct FromKey {};
  CounterRng(FromKey, std::uint64_t key) : key_(key) {}

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

ComplexMatrix ginibre(std::size_t rows, std::size_t cols, CounterRng& rng);

/// Haar-distributed unitary via QR of a Ginibre matrix with phase fixing.
ComplexMatrix haar_unitary(std::size_t n, CounterRng& rng);

}  // namespace qpmkit
