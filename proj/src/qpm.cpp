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

#include "qpmkit/qpm.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <set>

#include "qpmkit/error.hpp"
#include "qpmkit/rng.hpp"

namespace qpmkit {

const char* to_string(Geometry g) noexcept {
  switch (g) {
    case Geometry::Finite: return "finite";
    case Geometry::Interval: return "interval";
    case Geometry::Circle: return "circle";
  }
  return "finite";
}

OutcomeSpace::OutcomeSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) fail(ErrorCode::EmptyInput, "outcome space needs at least one atom");
  std::set<std::string> seen(labels_.begin(), labels_.end());
  if (seen.size() != labels_.size()) fail(ErrorCode::InvalidArgument, "outcome atom labels must be distinct");
}

OutcomeSpace::OutcomeSpace(std::vector<std::string> labels, Geometry geometry, std::vector<Cell> cells)
    : OutcomeSpace(std::move(labels)) {
  geometry_ = geometry;
  if (geometry == Geometry::Finite) {
    if (!cells.empty()) fail(ErrorCode::InvalidArgument, "finite outcome spaces carry no cells");
    return;
  }
  if (cells.size() != labels_.size())
    fail(ErrorCode::Shape, "need one cell per atom for interval and circle spaces");
  const Rational zero{0, 1};
  const Rational one{1, 1};
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const Cell& c = cells[i];
    if (c.lo.den <= 0 || c.hi.den <= 0) fail(ErrorCode::InvalidArgument, "cell endpoints need positive denominators");
    if (!(c.lo < c.hi)) fail(ErrorCode::InvalidArgument, "cell " + std::to_string(i) + " is empty");
    const Rational expected_lo = i == 0 ? zero : cells[i - 1].hi;
    if (!(c.lo == expected_lo)) fail(ErrorCode::InvalidArgument, "cells must be contiguous and start at 0");
  }
  if (!(cells.back().hi == one)) fail(ErrorCode::InvalidArgument, "cells must end at 1");
  cells_ = std::move(cells);
}

OutcomeSpace OutcomeSpace::finite(std::size_t m) {
  std::vector<std::string> labels;
  labels.reserve(m);
  for (std::size_t a = 0; a < m; ++a) labels.push_back(std::to_string(a));
  return OutcomeSpace(std::move(labels));
}

Qpm::Qpm(OutcomeSpace space, std::vector<HermitianOperator> effects)
    : space_(std::move(space)), effects_(std::move(effects)) {
  if (space_.size() == 0) fail(ErrorCode::EmptyInput, "measure needs at least one atom");
  if (effects_.size() != space_.size())
    fail(ErrorCode::Shape, "expected " + std::to_string(space_.size()) + " effects, got " +
                               std::to_string(effects_.size()));
  dim_ = effects_.front().dim();
  if (dim_ == 0) fail(ErrorCode::EmptyInput, "effects must have dimension >= 1");
  for (const auto& eff : effects_)
    if (eff.dim() != dim_) fail(ErrorCode::Shape, "effects have inconsistent dimensions");
}

ValidationReport validate_qpm(const Qpm& e) {
  ValidationReport rep;
  ComplexMatrix sum = ComplexMatrix::Zero(e.dim(), e.dim());
  for (std::size_t a = 0; a < e.size(); ++a) {
    const double lmin = hermitian_eigenvalues(e.effect(a))(0);
    rep.min_eigenvalues.push_back(lmin);
    if (lmin < -tolerance::kPsd) {
      rep.ok = false;
      rep.violations.push_back("effect " + e.space().labels()[a] + " is not PSD (lambda_min " +
                               std::to_string(lmin) + ")");
    }
    sum += e.effect(a);
  }
  sum -= ComplexMatrix::Identity(e.dim(), e.dim());
  rep.sum_residual = operator_norm(HermitianOperator(sum));
  if (rep.sum_residual > tolerance::kIdentitySum) {
    rep.ok = false;
    rep.violations.push_back("effects do not sum to identity (residual " + std::to_string(rep.sum_residual) + ")");
  }
  return rep;
}

void require_valid(const Qpm& e, const std::string& what) {
  const ValidationReport rep = validate_qpm(e);
  if (!rep.ok) fail(ErrorCode::InvariantViolation, what + ": " + rep.violations.front());
}

void require_compatible(const Qpm& e, const Qpm& f) {
  if (e.dim() != f.dim())
    fail(ErrorCode::Shape, "dimension mismatch: " + std::to_string(e.dim()) + " vs " + std::to_string(f.dim()));
  if (e.space().labels() != f.space().labels()) fail(ErrorCode::Shape, "measures live on different outcome spaces");
}

TestFunction TestFunction::constant(const OutcomeSpace& space, Complex c) {
  return {space, std::vector<Complex>(space.size(), c)};
}

TestFunction TestFunction::indicator(const OutcomeSpace& space, std::size_t atom) {
  if (atom >= space.size()) fail(ErrorCode::InvalidArgument, "indicator atom out of range");
  TestFunction f{space, std::vector<Complex>(space.size(), 0.0)};
  f.values[atom] = 1.0;
  return f;
}

ScalarMeasure scalar_measure(const Qpm& e, const ComplexVector& xi, const ComplexVector& eta) {
  const auto d = static_cast<Eigen::Index>(e.dim());
  if (xi.size() != d || eta.size() != d)
    fail(ErrorCode::Shape, "vectors must have dimension " + std::to_string(d));
  ScalarMeasure mu{e.space(), {}};
  mu.weights.reserve(e.size());
  for (std::size_t a = 0; a < e.size(); ++a) mu.weights.push_back(eta.dot(e.effect(a) * xi));
  return mu;
}

double tv_norm(const ScalarMeasure& mu) {
  double s = 0.0;
  for (const Complex& w : mu.weights) s += std::abs(w);
  return s;
}

ComplexMatrix apply_ucp(const Qpm& e, const TestFunction& f) {
  if (f.space.labels() != e.space().labels() || f.values.size() != e.size())
    fail(ErrorCode::Shape, "test function lives on a different outcome space");
  ComplexMatrix out = ComplexMatrix::Zero(e.dim(), e.dim());
  for (std::size_t a = 0; a < e.size(); ++a) out += f.values[a] * e.effect(a);
  return out;
}

namespace {

struct SignSearch {
  double value = 0.0;
  double upper = 0.0;
  bool exact = true;
  std::vector<int> signs;
};

constexpr double kTieTolerance = 1e-12;

void check_cap(const MetricOptions& opts) {
  if (opts.exact_cap > kMaxExactCap)
    fail(ErrorCode::InvalidArgument, "exact cap above " + std::to_string(kMaxExactCap));
}

double max_abs_eigenvalue(const ComplexMatrix& h) {
  const RealVector ev = hermitian_eigenvalues(h);
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

// Lexicographic with +1 ordered before -1.
bool sign_order_less(const std::vector<int>& a, const std::vector<int>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), std::greater<>{});
}

// Normalizes a sign vector so that its first entry is +1.
void normalize_signs(std::vector<int>& s) {
  if (!s.empty() && s.front() < 0)
    for (int& v : s) v = -v;
}

// Ascent on sum_a |<D_a xi, xi>| alternating between sign choice and the
// extremal eigenvector of sum_a eps_a D_a.
SignSearch sign_ascent(const std::vector<ComplexMatrix>& ops, const MetricOptions& opts) {
  const std::size_t m = ops.size();
  const Eigen::Index d = ops.front().rows();
  SignSearch best;
  best.exact = false;
  best.value = -1.0;
  CounterRng root(opts.seed, 0x7A11);
  const std::size_t starts = std::max<std::size_t>(opts.heuristic_starts, 1);
  for (std::size_t s = 0; s < starts + m; ++s) {
    ComplexVector xi;
    if (s < m) {
      // seed from the dominant eigenvector of each block
      const EigenDecomposition ed = eig_hermitian(ops[s]);
      const Eigen::Index k = std::abs(ed.values(0)) > std::abs(ed.values(d - 1)) ? 0 : d - 1;
      xi = ed.vectors.col(k);
    } else {
      CounterRng rng = root.split(s);
      xi = ginibre(static_cast<std::size_t>(d), 1, rng).col(0);
      xi.normalize();
    }
    std::vector<int> eps(m, 1);
    for (int iter = 0; iter < 200; ++iter) {
      std::vector<int> next(m);
      for (std::size_t a = 0; a < m; ++a) next[a] = xi.dot(ops[a] * xi).real() >= 0.0 ? 1 : -1;
      normalize_signs(next);
      if (iter > 0 && next == eps) break;
      eps = std::move(next);
      ComplexMatrix sum = ComplexMatrix::Zero(d, d);
      for (std::size_t a = 0; a < m; ++a) sum += static_cast<double>(eps[a]) * ops[a];
      const EigenDecomposition ed = eig_hermitian(sum);
      const Eigen::Index k = std::abs(ed.values(0)) > std::abs(ed.values(d - 1)) ? 0 : d - 1;
      xi = ed.vectors.col(k);
    }
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (std::size_t a = 0; a < m; ++a) sum += static_cast<double>(eps[a]) * ops[a];
    const double v = max_abs_eigenvalue(sum);
    if (v > best.value + kTieTolerance ||
        (std::abs(v - best.value) <= kTieTolerance && sign_order_less(eps, best.signs))) {
      best.value = std::max(v, best.value);
      best.signs = eps;
    }
  }
  best.upper = 0.0;
  for (const auto& op : ops) best.upper += max_abs_eigenvalue(op);
  best.upper = std::max(best.upper, best.value);
  return best;
}

// Lexicographic order with +1 before -1 equals descending integer order of
// the +1/-1 entries, so enumerate with entry a = -1 iff bit (m-1-a) is set.
SignSearch sign_enumeration(const std::vector<ComplexMatrix>& ops, const MetricOptions& opts) {
  check_cap(opts);
  const std::size_t m = ops.size();
  if (m > opts.exact_cap) return sign_ascent(ops, opts);
  const Eigen::Index d = ops.front().rows();
  SignSearch best;
  best.value = -1.0;
  const std::uint64_t count = std::uint64_t{1} << (m - 1);
  ComplexMatrix sum(d, d);
  for (std::uint64_t k = 0; k < count; ++k) {
    sum.setZero();
    for (std::size_t a = 0; a < m; ++a) {
      const bool neg = (k >> (m - 1 - a)) & 1U;
      if (neg) sum -= ops[a]; else sum += ops[a];
    }
    const double v = max_abs_eigenvalue(sum);
    // ascending k is ascending lexicographic order, so strict improvement
    // keeps the least optimizer
    if (v > best.value + kTieTolerance) {
      best.value = v;
      best.signs.assign(m, 1);
      for (std::size_t a = 0; a < m; ++a)
        if ((k >> (m - 1 - a)) & 1U) best.signs[a] = -1;
    }
  }
  best.upper = best.value;
  return best;
}

std::vector<ComplexMatrix> differences(const Qpm& e, const Qpm& f) {
  std::vector<ComplexMatrix> d;
  d.reserve(e.size());
  for (std::size_t a = 0; a < e.size(); ++a) d.push_back(e.effect(a) - f.effect(a));
  return d;
}

void check_metric_inputs(const Qpm& e, const Qpm& f) {
  require_compatible(e, f);
  require_valid(e, "first measure");
  require_valid(f, "second measure");
}

}  // namespace

double total_variation(const Qpm& e, const MetricOptions& opts) {
  require_valid(e, "total variation");
  std::vector<ComplexMatrix> ops;
  for (const auto& eff : e.effects()) ops.push_back(eff.matrix());
  return sign_enumeration(ops, opts).value;
}

RhoResult rho_distance(const Qpm& e, const Qpm& f, const MetricOptions& opts) {
  check_metric_inputs(e, f);
  const SignSearch s = sign_enumeration(differences(e, f), opts);
  return {std::clamp(s.value, 0.0, 2.0), std::clamp(s.upper, 0.0, 2.0), s.exact, s.signs};
}

DeltaResult delta_distance(const Qpm& e, const Qpm& f, const MetricOptions& opts) {
  check_metric_inputs(e, f);
  check_cap(opts);
  const std::vector<ComplexMatrix> diff = differences(e, f);
  const std::size_t m = diff.size();
  const Eigen::Index d = static_cast<Eigen::Index>(e.dim());
  DeltaResult out;

  if (m > opts.exact_cap) {
    const SignSearch s = sign_ascent(diff, opts);
    // D(S) - D(S^c) = 2 D(S) because the differences sum to zero
    ComplexMatrix ds = ComplexMatrix::Zero(d, d);
    std::vector<std::size_t> plus, minus;
    for (std::size_t a = 0; a < m; ++a) {
      if (s.signs[a] > 0) { ds += diff[a]; plus.push_back(a); } else { minus.push_back(a); }
    }
    const RealVector ev = hermitian_eigenvalues(ds);
    const bool use_plus = ev(ev.size() - 1) >= -ev(0);
    out.value = std::clamp(std::max(ev(ev.size() - 1), -ev(0)), 0.0, 1.0);
    out.upper = std::clamp(std::max(s.upper / 2.0, out.value), 0.0, 1.0);
    out.exact = false;
    out.subset = use_plus ? plus : minus;
    return out;
  }

  // Pairs {S, S^c}: enumerate S containing atom 0 and read S^c off -lambda_min.
  out.value = 0.0;
  bool have = false;
  ComplexMatrix ds(d, d);
  const std::uint64_t count = std::uint64_t{1} << (m - 1);
  auto consider = [&](double v, std::vector<std::size_t> subset) {
    if (!have || v > out.value + kTieTolerance) {
      out.value = v;
      out.subset = std::move(subset);
      have = true;
    } else if (std::abs(v - out.value) <= kTieTolerance && subset < out.subset) {
      out.value = std::max(v, out.value);
      out.subset = std::move(subset);
    }
  };
  for (std::uint64_t k = 0; k + 1 < count; ++k) {  // k == count - 1 is S = everything
    std::vector<std::size_t> in{0}, out_set;
    ds = diff[0];
    for (std::size_t a = 1; a < m; ++a) {
      if ((k >> (a - 1)) & 1U) { ds += diff[a]; in.push_back(a); } else { out_set.push_back(a); }
    }
    const RealVector ev = hermitian_eigenvalues(ds);
    consider(ev(ev.size() - 1), std::move(in));
    consider(-ev(0), std::move(out_set));
  }
  out.value = std::clamp(out.value, 0.0, 1.0);
  out.upper = out.value;
  return out;
}

namespace {

Complex pairing(const ComplexMatrix& a, const ComplexMatrix& t) {
  // Tr(A T)
  return (a.cwiseProduct(t.transpose())).sum();
}

void check_functionals(std::span<const ComplexMatrix> functionals, std::size_t dim) {
  if (functionals.empty()) fail(ErrorCode::InvalidArgument, "functional list is empty");
  for (const auto& t : functionals) {
    if (t.rows() != static_cast<Eigen::Index>(dim) || t.cols() != static_cast<Eigen::Index>(dim))
      fail(ErrorCode::Shape, "functional must be " + std::to_string(dim) + "x" + std::to_string(dim));
    if (!all_finite(t)) fail(ErrorCode::InvalidArgument, "functional has non-finite entries");
  }
}

// max over subsets S of |sum_{a in S} t_a|.
double max_subset_modulus(const std::vector<Complex>& t) {
  std::vector<double> crit;
  for (const Complex& z : t) {
    if (z == Complex(0.0, 0.0)) continue;
    const double phi = std::arg(z);
    for (double c : {phi - std::numbers::pi / 2, phi + std::numbers::pi / 2}) {
      double w = std::fmod(c, 2 * std::numbers::pi);
      if (w < 0) w += 2 * std::numbers::pi;
      crit.push_back(w);
    }
  }
  if (crit.empty()) return 0.0;
  std::sort(crit.begin(), crit.end());
  double best = 0.0;
  for (std::size_t i = 0; i < crit.size(); ++i) {
    const double lo = crit[i];
    const double hi = i + 1 < crit.size() ? crit[i + 1] : crit.front() + 2 * std::numbers::pi;
    const double theta = 0.5 * (lo + hi);
    const Complex dir = std::polar(1.0, -theta);
    Complex s = 0.0;
    for (const Complex& z : t)
      if ((dir * z).real() > 0.0) s += z;
    best = std::max(best, std::abs(s));
  }
  return best;
}

}  // namespace

double sw_gap(const Qpm& e, const Qpm& f, std::span<const ComplexMatrix> functionals) {
  require_compatible(e, f);
  check_functionals(functionals, e.dim());
  double best = 0.0;
  for (const auto& t : functionals) {
    std::vector<Complex> vals;
    vals.reserve(e.size());
    for (std::size_t a = 0; a < e.size(); ++a) vals.push_back(pairing(e.effect(a) - f.effect(a), t));
    best = std::max(best, max_subset_modulus(vals));
  }
  return best;
}

double bw_gap(const Qpm& e, const Qpm& f, std::span<const ComplexMatrix> functionals,
              std::span<const TestFunction> fns) {
  require_compatible(e, f);
  check_functionals(functionals, e.dim());
  if (fns.empty()) fail(ErrorCode::InvalidArgument, "test function list is empty");
  double best = 0.0;
  for (const auto& g : fns) {
    const ComplexMatrix diff = apply_ucp(e, g) - apply_ucp(f, g);
    for (const auto& t : functionals) best = std::max(best, std::abs(pairing(diff, t)));
  }
  return best;
}

std::vector<ComplexMatrix> matrix_unit_functionals(std::size_t dim) {
  std::vector<ComplexMatrix> out;
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      ComplexMatrix t = ComplexMatrix::Zero(dim, dim);
      t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
      out.push_back(std::move(t));
    }
  return out;
}

}  // namespace qpmkit
