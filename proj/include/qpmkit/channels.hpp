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

#include <span>
#include <string>
#include <vector>

#include "qpmkit/qpm.hpp"

namespace qpmkit {

class InputSpace {
 public:
  InputSpace() = default;
  explicit InputSpace(std::vector<std::string> labels);

  static InputSpace finite(std::size_t n);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  friend bool operator==(const InputSpace&, const InputSpace&) = default;

 private:
  std::vector<std::string> labels_;
};

/// One measure E(.|x) per input point, all on the same outcome space and
/// Hilbert dimension. Validity of the members is checked separately.
class Channel {
 public:
  Channel() = default;
  Channel(InputSpace inputs, std::vector<Qpm> family);

  const InputSpace& inputs() const noexcept { return inputs_; }
  const OutcomeSpace& space() const noexcept { return family_.front().space(); }
  std::size_t dim() const noexcept { return family_.front().dim(); }
  std::size_t atoms() const noexcept { return family_.front().size(); }
  std::size_t size() const noexcept { return family_.size(); }
  const std::vector<Qpm>& family() const noexcept { return family_; }
  const Qpm& at(std::size_t x) const { return family_.at(x); }

  friend bool operator==(const Channel&, const Channel&) = default;

 private:
  InputSpace inputs_;
  std::vector<Qpm> family_;
};

class ChannelSequence {
 public:
  ChannelSequence() = default;
  explicit ChannelSequence(std::vector<Channel> terms);

  std::size_t size() const noexcept { return terms_.size(); }
  const std::vector<Channel>& terms() const noexcept { return terms_; }
  const Channel& operator[](std::size_t i) const { return terms_.at(i); }

  friend bool operator==(const ChannelSequence&, const ChannelSequence&) = default;

 private:
  std::vector<Channel> terms_;
};

struct ChannelValidation {
  bool ok = true;
  std::vector<ValidationReport> per_input;
  std::vector<std::string> violations;  // prefixed with the input label
};

ChannelValidation validate_channel(const Channel& e);
void require_valid(const Channel& e, const std::string& what);
void require_compatible(const Channel& e, const Channel& f);

struct RhoTildeResult {
  double value = 0.0;
  std::size_t argmax = 0;  // first maximizing input
  bool exact = true;
};

/// sup over inputs of rho(E_x, F_x).
RhoTildeResult rho_tilde(const Channel& e, const Channel& f, const MetricOptions& opts = {});

/// x -> phi_{E_x}(f).
std::vector<ComplexMatrix> apply_channel_ucp(const Channel& e, const TestFunction& f);

/// sup over +-1 test functions and inputs of ||Phi_E(f)(x) - Phi_F(f)(x)||,
/// computed through apply_channel_ucp and singular values. Enumerates all
/// 2^m sign vectors, so m is limited to kMaxExactCap.
double channel_opnorm_gap(const Channel& e, const Channel& f);

/// max over inputs of sw_gap(E_x, F_x, functionals).
double psw_gap(const Channel& e, const Channel& f, std::span<const ComplexMatrix> functionals);

/// max over inputs of bw_gap(E_x, F_x, functionals, fns).
double pbw_gap(const Channel& e, const Channel& f, std::span<const ComplexMatrix> functionals,
               std::span<const TestFunction> fns);

/// max over inputs and atoms of ||E(a|x) - F(a|x)||; the metric used for
/// subsequence extraction.
double effect_distance(const Channel& e, const Channel& f);

/// Nearest-valid repair: clamps every effect to the PSD cone and then
/// renormalizes with S^{-1/2} E(a) S^{-1/2}, S = sum_a E(a).
Qpm project_to_qpm(const Qpm& e);
Channel project_to_channel(const Channel& e);

struct Extraction {
  std::vector<std::size_t> indices;  // strictly increasing
  Channel limit;
  // gap_trace[k] = max over later selected terms l of psw_gap(term_k, term_l)
  std::vector<double> gap_trace;
  // limit_gaps[k] = psw_gap(term_k, limit)
  std::vector<double> limit_gaps;
  bool tail = false;  // indices form a contiguous tail of the sequence
};

/// Picks a subsequence whose terms are pairwise within `tol` in
/// effect_distance. Two candidates are compared: the longest tail that is
/// already tol-Cauchy, and the largest cluster of a greedy tol/2-net built
/// in sequence order. The longer one wins; ties go to the tail, then to the
/// cluster holding the latest term. The limit is the coordinatewise mean of
/// the chosen terms passed through project_to_channel.
Extraction extract_convergent_subsequence(const ChannelSequence& seq, double tol,
                                          std::span<const ComplexMatrix> probe);

}  // namespace qpmkit
