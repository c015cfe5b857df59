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

#include "qpmkit/channels.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "qpmkit/error.hpp"

namespace qpmkit {

InputSpace::InputSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) fail(ErrorCode::EmptyInput, "input space needs at least one point");
  std::set<std::string> seen(labels_.begin(), labels_.end());
  if (seen.size() != labels_.size()) fail(ErrorCode::InvalidArgument, "input labels must be distinct");
}

InputSpace InputSpace::finite(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t x = 0; x < n; ++x) labels.push_back("x" + std::to_string(x));
  return InputSpace(std::move(labels));
}

Channel::Channel(InputSpace inputs, std::vector<Qpm> family)
    : inputs_(std::move(inputs)), family_(std::move(family)) {
  if (inputs_.size() == 0) fail(ErrorCode::EmptyInput, "channel needs at least one input");
  if (family_.size() != inputs_.size())
    fail(ErrorCode::Shape, "expected " + std::to_string(inputs_.size()) + " measures, got " +
                               std::to_string(family_.size()));
  for (const Qpm& q : family_) {
    if (q.dim() != family_.front().dim() || q.space() != family_.front().space())
      fail(ErrorCode::Shape, "channel members must share outcome space and dimension");
  }
}

ChannelSequence::ChannelSequence(std::vector<Channel> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) fail(ErrorCode::EmptyInput, "sequence needs at least one term");
  for (const Channel& c : terms_) require_compatible(terms_.front(), c);
}

ChannelValidation validate_channel(const Channel& e) {
  ChannelValidation out;
  for (std::size_t x = 0; x < e.size(); ++x) {
    ValidationReport rep = validate_qpm(e.at(x));
    if (!rep.ok) {
      out.ok = false;
      for (const auto& v : rep.violations) out.violations.push_back("input " + e.inputs().labels()[x] + ": " + v);
    }
    out.per_input.push_back(std::move(rep));
  }
  return out;
}

void require_valid(const Channel& e, const std::string& what) {
  const ChannelValidation v = validate_channel(e);
  if (!v.ok) fail(ErrorCode::InvariantViolation, what + ": " + v.violations.front());
}

void require_compatible(const Channel& e, const Channel& f) {
  if (e.inputs() != f.inputs()) fail(ErrorCode::Shape, "channels have different input spaces");
  require_compatible(e.at(0), f.at(0));
}

RhoTildeResult rho_tilde(const Channel& e, const Channel& f, const MetricOptions& opts) {
  require_compatible(e, f);
  RhoTildeResult out;
  out.value = -1.0;
  for (std::size_t x = 0; x < e.size(); ++x) {
    const RhoResult r = rho_distance(e.at(x), f.at(x), opts);
    out.exact = out.exact && r.exact;
    if (r.value > out.value) {
      out.value = r.value;
      out.argmax = x;
    }
  }
  return out;
}

std::vector<ComplexMatrix> apply_channel_ucp(const Channel& e, const TestFunction& f) {
  std::vector<ComplexMatrix> out;
  out.reserve(e.size());
  for (const Qpm& q : e.family()) out.push_back(apply_ucp(q, f));
  return out;
}

double channel_opnorm_gap(const Channel& e, const Channel& f) {
  require_compatible(e, f);
  require_valid(e, "first channel");
  require_valid(f, "second channel");
  const std::size_t m = e.atoms();
  if (m > kMaxExactCap) fail(ErrorCode::InvalidArgument, "too many atoms for sign enumeration");
  double best = 0.0;
  TestFunction g = TestFunction::constant(e.space(), 1.0);
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << m); ++k) {
    for (std::size_t a = 0; a < m; ++a) g.values[a] = ((k >> a) & 1U) ? -1.0 : 1.0;
    const auto pe = apply_channel_ucp(e, g);
    const auto pf = apply_channel_ucp(f, g);
    for (std::size_t x = 0; x < pe.size(); ++x) best = std::max(best, operator_norm(ComplexMatrix(pe[x] - pf[x])));
  }
  return best;
}

double psw_gap(const Channel& e, const Channel& f, std::span<const ComplexMatrix> functionals) {
  require_compatible(e, f);
  double best = 0.0;
  for (std::size_t x = 0; x < e.size(); ++x) best = std::max(best, sw_gap(e.at(x), f.at(x), functionals));
  return best;
}

double pbw_gap(const Channel& e, const Channel& f, std::span<const ComplexMatrix> functionals,
               std::span<const TestFunction> fns) {
  require_compatible(e, f);
  double best = 0.0;
  for (std::size_t x = 0; x < e.size(); ++x) best = std::max(best, bw_gap(e.at(x), f.at(x), functionals, fns));
  return best;
}

double effect_distance(const Channel& e, const Channel& f) {
  require_compatible(e, f);
  double best = 0.0;
  for (std::size_t x = 0; x < e.size(); ++x)
    for (std::size_t a = 0; a < e.atoms(); ++a)
      best = std::max(best, operator_norm(HermitianOperator(ComplexMatrix(e.at(x).effect(a) - f.at(x).effect(a)))));
  return best;
}

Qpm project_to_qpm(const Qpm& e) {
  std::vector<ComplexMatrix> clamped;
  ComplexMatrix sum = ComplexMatrix::Zero(e.dim(), e.dim());
  for (const auto& eff : e.effects()) {
    clamped.push_back(clamp_psd(eff.matrix()));
    sum += clamped.back();
  }
  const ComplexMatrix s = inverse_sqrt_pd(HermitianOperator(sum), 1e-12);
  std::vector<HermitianOperator> effects;
  for (const auto& c : clamped) {
    const ComplexMatrix n = s * c * s;
    effects.emplace_back(ComplexMatrix((n + n.adjoint()) * 0.5));
  }
  return Qpm(e.space(), std::move(effects));
}

Channel project_to_channel(const Channel& e) {
  std::vector<Qpm> fam;
  for (const Qpm& q : e.family()) fam.push_back(project_to_qpm(q));
  return Channel(e.inputs(), std::move(fam));
}

namespace {

Channel mean_channel(const ChannelSequence& seq, const std::vector<std::size_t>& idx) {
  const Channel& first = seq[idx.front()];
  std::vector<Qpm> fam;
  for (std::size_t x = 0; x < first.size(); ++x) {
    std::vector<HermitianOperator> effects;
    for (std::size_t a = 0; a < first.atoms(); ++a) {
      ComplexMatrix acc = ComplexMatrix::Zero(first.dim(), first.dim());
      for (std::size_t i : idx) acc += seq[i].at(x).effect(a);
      acc /= static_cast<double>(idx.size());
      effects.emplace_back(acc);
    }
    fam.emplace_back(first.space(), std::move(effects));
  }
  return project_to_channel(Channel(first.inputs(), std::move(fam)));
}

}  // namespace

Extraction extract_convergent_subsequence(const ChannelSequence& seq, double tol,
                                          std::span<const ComplexMatrix> probe) {
  if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "tolerance must be positive");
  for (const Channel& c : seq.terms()) require_valid(c, "sequence term");
  const std::size_t n = seq.size();

  // pairwise distances, computed lazily
  std::vector<double> dist(n * n, -1.0);
  auto d = [&](std::size_t i, std::size_t j) {
    double& slot = dist[i * n + j];
    if (slot < 0.0) {
      slot = effect_distance(seq[i], seq[j]);
      dist[j * n + i] = slot;
    }
    return slot;
  };

  // longest tol-Cauchy tail
  std::size_t tail_start = n - 1;
  while (tail_start > 0) {
    const std::size_t s = tail_start - 1;
    bool ok = true;
    for (std::size_t j = tail_start; j < n && ok; ++j) ok = d(s, j) <= tol;
    if (!ok) break;
    tail_start = s;
  }
  const std::size_t tail_len = n - tail_start;

  // greedy tol/2-net in sequence order
  std::vector<std::size_t> centers;
  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t i = 0; i < n; ++i) {
    bool placed = false;
    for (std::size_t c = 0; c < centers.size() && !placed; ++c) {
      if (d(i, centers[c]) <= tol / 2.0) {
        clusters[c].push_back(i);
        placed = true;
      }
    }
    if (!placed) {
      centers.push_back(i);
      clusters.push_back({i});
    }
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < clusters.size(); ++c) {
    const auto& cand = clusters[c];
    const auto& cur = clusters[best];
    if (cand.size() > cur.size() || (cand.size() == cur.size() && cand.back() > cur.back())) best = c;
  }

  Extraction out;
  if (tail_len >= clusters[best].size()) {
    for (std::size_t i = tail_start; i < n; ++i) out.indices.push_back(i);
    out.tail = true;
  } else {
    out.indices = clusters[best];
    out.tail = false;
  }
  out.limit = mean_channel(seq, out.indices);

  const std::size_t k = out.indices.size();
  out.gap_trace.assign(k, 0.0);
  for (std::size_t i = k; i-- > 0;) {
    double g = 0.0;
    for (std::size_t j = i + 1; j < k; ++j) g = std::max(g, psw_gap(seq[out.indices[i]], seq[out.indices[j]], probe));
    out.gap_trace[i] = g;
  }
  for (std::size_t i : out.indices) out.limit_gaps.push_back(psw_gap(seq[i], out.limit, probe));
  return out;
}

}  // namespace qpmkit
