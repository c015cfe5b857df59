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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qpmkit/dilation.hpp"
#include "qpmkit/error.hpp"
#include "qpmkit/rng.hpp"

namespace qpmkit {

namespace {

// Square roots of the effects of both measures plus the gauge geometry.
struct GaugeProblem {
  std::vector<ComplexMatrix> a;  // E1(a)^{1/2}
  std::vector<ComplexMatrix> b;  // E2(a)^{1/2}
  Eigen::Index d = 0;
  Eigen::Index rd = 0;

  // X = sum_a A_a J* U_a J B_a
  ComplexMatrix cross(const std::vector<ComplexMatrix>& u) const {
    ComplexMatrix x = ComplexMatrix::Zero(d, d);
    for (std::size_t i = 0; i < a.size(); ++i) x += a[i] * u[i].topLeftCorner(d, d) * b[i];
    return x;
  }

  double objective(const std::vector<ComplexMatrix>& u) const {
    const ComplexMatrix x = cross(u);
    const ComplexMatrix h = (x + x.adjoint()) * 0.5;
    return hermitian_eigenvalues(h)(0);
  }
};

GaugeProblem make_problem(const Qpm& e1, const Qpm& e2, std::size_t r) {
  GaugeProblem p;
  p.d = static_cast<Eigen::Index>(e1.dim());
  p.rd = p.d * static_cast<Eigen::Index>(r);
  for (std::size_t i = 0; i < e1.size(); ++i) {
    p.a.push_back(sqrt_psd(e1.effects()[i]).matrix());
    p.b.push_back(sqrt_psd(e2.effects()[i]).matrix());
  }
  return p;
}

double upper_from_objective(double lambda_min) {
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * lambda_min));
}

struct RunResult {
  double objective = 0.0;
  std::vector<ComplexMatrix> gauges;
  bool converged = false;
};

constexpr double kInitialTemperature = 0.05;
constexpr double kTemperatureDecay = 0.85;
constexpr double kFinalTemperature = 1e-7;

// Gibbs state exp(-H/tau)/Z of a Hermitian matrix given its eigensystem.
ComplexMatrix gibbs_state(const EigenDecomposition& ed, double tau) {
  RealVector w = (-(ed.values.array() - ed.values(0)) / tau).exp();
  w /= w.sum();
  return ed.vectors * w.cast<Complex>().asDiagonal() * ed.vectors.adjoint();
}

// Alternating maximization of lambda_min(Herm X(U)). Each sweep forms the
// Gibbs state sigma of Herm X at a temperature annealed toward zero, takes
// for every atom the polar unitary maximizing Re Tr(sigma A_a J* U_a J B_a),
// and moves toward it with step halving until lambda_min increases.
RunResult optimize(const GaugeProblem& p, std::vector<ComplexMatrix> u, const BuresConfig& cfg) {
  RunResult run;
  double current = p.objective(u);
  double last_improvement = std::numeric_limits<double>::infinity();
  std::vector<ComplexMatrix> target(u.size());
  std::vector<ComplexMatrix> trial(u.size());
  double tau = kInitialTemperature;
  for (std::size_t it = 0; it < cfg.max_iterations; ++it, tau = std::max(kFinalTemperature, tau * kTemperatureDecay)) {
    const ComplexMatrix x = p.cross(u);
    const ComplexMatrix sigma = gibbs_state(eig_hermitian(ComplexMatrix((x + x.adjoint()) * 0.5)), tau);

    for (std::size_t i = 0; i < u.size(); ++i) {
      ComplexMatrix mi = ComplexMatrix::Zero(p.rd, p.rd);
      mi.topLeftCorner(p.d, p.d) = p.b[i] * sigma * p.a[i];
      target[i] = polar_unitary(mi).adjoint();
    }

    bool accepted = false;
    for (double t = 1.0; t >= 1.0 / 1024.0; t *= 0.5) {
      for (std::size_t i = 0; i < u.size(); ++i)
        trial[i] = t == 1.0 ? target[i] : polar_unitary(ComplexMatrix((1.0 - t) * u[i] + t * target[i]));
      const double value = p.objective(trial);
      if (value > current) {
        last_improvement = value - current;
        current = value;
        u.swap(trial);
        accepted = true;
        break;
      }
    }
    const bool cold = tau <= kFinalTemperature;
    if (!accepted) {
      if (cold) {
        last_improvement = 0.0;
        break;
      }
      continue;
    }
    if (cold && last_improvement < cfg.improvement_tol) break;
  }
  run.objective = current;
  run.gauges = std::move(u);
  run.converged = last_improvement < cfg.improvement_tol;
  return run;
}

// sum_a ||A_a sigma B_a||_1
double dual_objective(const GaugeProblem& p, const ComplexMatrix& sigma) {
  double total = 0.0;
  for (std::size_t i = 0; i < p.a.size(); ++i) {
    Eigen::JacobiSVD<ComplexMatrix> svd(p.a[i] * sigma * p.b[i]);
    total += svd.singularValues().sum();
  }
  return total;
}

// Mirror descent on density matrices supported on span(q), starting from the
// maximally mixed state. The trace norm is smoothed as
// Tr (M*M + eps^2)^{1/2} with eps annealed toward zero, and steps adapt by
// backtracking on the smoothed objective. Returns the smallest exact
// objective value seen.
double minimize_dual(const GaugeProblem& p, const ComplexMatrix& q, int iterations) {
  const Eigen::Index k = q.cols();
  auto state = [&](const ComplexMatrix& log_rho) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(log_rho);
    RealVector w = (es.eigenvalues().array() - es.eigenvalues().maxCoeff()).exp();
    w /= w.sum();
    return ComplexMatrix(q * (es.eigenvectors() * w.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint()) *
                         q.adjoint());
  };
  auto smoothed = [&](const ComplexMatrix& sigma, double eps, ComplexMatrix* grad) {
    double value = 0.0;
    if (grad) grad->setZero(p.d, p.d);
    for (std::size_t i = 0; i < p.a.size(); ++i) {
      const ComplexMatrix m = p.a[i] * sigma * p.b[i];
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m.adjoint() * m);
      const RealVector root = (es.eigenvalues().array().max(0.0) + eps * eps).sqrt();
      value += root.sum();
      if (grad) {
        const ComplexMatrix inv =
            es.eigenvectors() * root.cwiseInverse().cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
        *grad += p.b[i] * inv * m.adjoint() * p.a[i];
      }
    }
    if (grad) *grad = ((*grad + grad->adjoint()) * 0.5).eval();
    return value;
  };

  ComplexMatrix log_rho = ComplexMatrix::Zero(k, k);
  ComplexMatrix sigma = state(log_rho);
  double best = dual_objective(p, sigma);
  double step = 1.0;
  double eps = 1e-2;
  ComplexMatrix grad(p.d, p.d);
  for (int it = 0; it < iterations; ++it) {
    if (it > 0 && it % 25 == 0) eps = std::max(1e-9, eps * 0.1);
    const double f0 = smoothed(sigma, eps, &grad);
    const ComplexMatrix g = q.adjoint() * grad * q;
    bool moved = false;
    for (int ls = 0; ls < 30; ++ls) {
      ComplexMatrix next_log = log_rho - step * g;
      next_log = ((next_log + next_log.adjoint()) * 0.5).eval();
      const ComplexMatrix next = state(next_log);
      if (smoothed(next, eps, nullptr) < f0) {
        log_rho = std::move(next_log);
        sigma = next;
        step *= 1.5;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    best = std::min(best, dual_objective(p, sigma));
    if (!moved) step = 1.0;
  }
  return best;
}

// Certified lower bound: any density matrix sigma gives
// beta >= sqrt(2 - 2 sum_a ||E1(a)^{1/2} sigma E2(a)^{1/2}||_1).
// Candidates are the near-extremal eigenspaces of the optimized Herm X.
double dual_certificate(const GaugeProblem& p, const std::vector<ComplexMatrix>& gauges) {
  const ComplexMatrix x = p.cross(gauges);
  const EigenDecomposition ed = eig_hermitian(ComplexMatrix((x + x.adjoint()) * 0.5));
  double best = dual_objective(p, ComplexMatrix::Identity(p.d, p.d) / static_cast<double>(p.d));
  Eigen::Index last_k = 0;
  for (double gap : {1e-6, 1e-4, 1e-3, 1e-2, 1e-1}) {
    Eigen::Index k = 1;
    while (k < p.d && ed.values(k) - ed.values(0) <= gap) ++k;
    if (k == last_k) continue;
    last_k = k;
    best = std::min(best, minimize_dual(p, ed.vectors.leftCols(k), 150));
  }
  best = std::min(best, minimize_dual(p, ComplexMatrix::Identity(p.d, p.d), 300));
  return upper_from_objective(best);
}

ComplexMatrix amplified_frame(const ComplexMatrix& w, std::size_t r) {
  const Eigen::Index d = w.rows();
  ComplexMatrix out = ComplexMatrix::Zero(d * static_cast<Eigen::Index>(r), d * static_cast<Eigen::Index>(r));
  for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(r); ++k) out.block(k * d, k * d, d, d) = w;
  return out;
}

void check_gauges(const Qpm& e1, const std::vector<ComplexMatrix>& gauges, std::size_t r) {
  const auto rd = static_cast<Eigen::Index>(e1.dim() * r);
  if (gauges.size() != e1.size()) fail(ErrorCode::Shape, "need one gauge per atom");
  for (const auto& g : gauges)
    if (g.rows() != rd || g.cols() != rd) fail(ErrorCode::Shape, "gauge must be " + std::to_string(rd) + " square");
}

}  // namespace

BuresResult bures_distance(const Qpm& e1, const Qpm& e2, const BuresConfig& cfg) {
  require_compatible(e1, e2);
  require_valid(e1, "first measure");
  require_valid(e2, "second measure");
  if (cfg.restarts == 0) fail(ErrorCode::InvalidArgument, "bures distance needs at least one restart");
  if (cfg.env_multiplicity == 0) fail(ErrorCode::InvalidArgument, "environment multiplicity must be >= 1");
  const std::size_t r = cfg.env_multiplicity;
  const auto d = static_cast<Eigen::Index>(e1.dim());
  const auto rd = d * static_cast<Eigen::Index>(r);
  if (cfg.frame) {
    if (cfg.frame->rows() != d || cfg.frame->cols() != d) fail(ErrorCode::Shape, "frame must be d x d");
    if (isometry_residual(*cfg.frame) > tolerance::kIsometry) fail(ErrorCode::InvalidArgument, "frame must be unitary");
  }

  BuresResult out;
  out.rho = rho_distance(e1, e2).value;
  out.lower = out.rho / 2.0;

  if (d == 1) {
    // scalar gauges are phases, so the optimum is the Bhattacharyya overlap
    double overlap = 0.0;
    for (std::size_t i = 0; i < e1.size(); ++i)
      overlap += std::sqrt(std::max(0.0, e1.effect(i)(0, 0).real()) * std::max(0.0, e2.effect(i)(0, 0).real()));
    out.upper = upper_from_objective(overlap);
    out.dual_lower = out.upper;
    out.gauges.assign(e1.size(), ComplexMatrix::Identity(rd, rd));
    out.converged = true;
    out.restarts_used = 0;
    return out;
  }

  const GaugeProblem problem = make_problem(e1, e2, r);
  const CounterRng root(cfg.seed, 0xB0E5);
  const std::optional<ComplexMatrix> frame =
      cfg.frame ? std::optional<ComplexMatrix>(amplified_frame(*cfg.frame, r)) : std::nullopt;

  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < cfg.restarts; ++k) {
    // restart 0 starts from identity gauges; the rest come in adjoint pairs
    // so that swapping the arguments replays mirrored trajectories
    std::vector<ComplexMatrix> init(e1.size());
    for (std::size_t i = 0; i < e1.size(); ++i) {
      if (k == 0) {
        init[i] = ComplexMatrix::Identity(rd, rd);
        continue;
      }
      CounterRng rng = root.split((k - 1) / 2).split(i);
      ComplexMatrix g = haar_unitary(static_cast<std::size_t>(rd), rng);
      if ((k - 1) % 2 == 1) g.adjointInPlace();
      if (frame) g = *frame * g * frame->adjoint();
      init[i] = std::move(g);
    }
    RunResult run = optimize(problem, std::move(init), cfg);
    ++out.restarts_used;
    if (run.objective > best) {
      best = run.objective;
      out.gauges = std::move(run.gauges);
      out.converged = run.converged;
    }
  }
  out.upper = upper_from_objective(best);
  out.dual_lower = dual_certificate(problem, out.gauges);
  return out;
}

std::pair<ComplexMatrix, ComplexMatrix> bures_dilation_pair(const Qpm& e1, const Qpm& e2,
                                                             const std::vector<ComplexMatrix>& gauges,
                                                             std::size_t r) {
  require_compatible(e1, e2);
  check_gauges(e1, gauges, r);
  const auto d = static_cast<Eigen::Index>(e1.dim());
  const auto rd = d * static_cast<Eigen::Index>(r);
  const auto m = static_cast<Eigen::Index>(e1.size());
  ComplexMatrix v1 = ComplexMatrix::Zero(m * rd, d);
  ComplexMatrix v2 = ComplexMatrix::Zero(m * rd, d);
  for (Eigen::Index a = 0; a < m; ++a) {
    const auto i = static_cast<std::size_t>(a);
    v1.block(a * rd, 0, d, d) = sqrt_psd(e1.effects()[i]).matrix();
    ComplexMatrix embedded = ComplexMatrix::Zero(rd, d);
    embedded.topRows(d) = sqrt_psd(e2.effects()[i]).matrix();
    v2.block(a * rd, 0, rd, d) = gauges[i] * embedded;
  }
  return {std::move(v1), std::move(v2)};
}

double bures_gauge_value(const Qpm& e1, const Qpm& e2, const std::vector<ComplexMatrix>& gauges, std::size_t r) {
  const auto [v1, v2] = bures_dilation_pair(e1, e2, gauges, r);
  return operator_norm(ComplexMatrix(v1 - v2));
}

bool naimark_continuity_check(const Qpm& e1, const Qpm& e2, const BuresResult& b) {
  const double rho = rho_distance(e1, e2).value;
  constexpr double slack = 1e-7;
  // both total variations equal 1, so the lower bound reads rho / 2
  return rho / 2.0 - slack <= b.upper && b.upper <= std::sqrt(rho) + slack && b.lower <= std::sqrt(rho) + slack &&
         b.lower <= b.upper + slack;
}

}  // namespace qpmkit
