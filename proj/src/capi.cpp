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

#include "qpmkit/qpmkit.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include <json.hpp>

#include "qpmkit/channels.hpp"
#include "qpmkit/dilation.hpp"
#include "qpmkit/discretize.hpp"
#include "qpmkit/error.hpp"
#include "qpmkit/instance_io.hpp"
#include "qpmkit/modmu.hpp"
#include "qpmkit/qpm.hpp"

struct qpmk_instance {
  qpmkit::Instance value;
};

namespace {

using namespace qpmkit;
using nlohmann::json;

thread_local std::string g_last_error;

qpmk_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyInput: return QPMK_ERR_EMPTY_INPUT;
    case ErrorCode::InvalidArgument: return QPMK_ERR_INVALID_ARGUMENT;
    case ErrorCode::Shape: return QPMK_ERR_SHAPE;
    case ErrorCode::InvariantViolation: return QPMK_ERR_INVARIANT;
    case ErrorCode::NotPsd: return QPMK_ERR_NOT_PSD;
    case ErrorCode::Parse: return QPMK_ERR_PARSE;
    case ErrorCode::Version: return QPMK_ERR_VERSION;
    case ErrorCode::Io: return QPMK_ERR_IO;
  }
  return QPMK_ERR_INTERNAL;
}

template <class F>
qpmk_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return QPMK_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown failure";
  }
  return QPMK_ERR_INTERNAL;
}

void need(const void* p, const char* name) {
  if (p == nullptr) fail(ErrorCode::InvalidArgument, std::string(name) + " is null");
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(char** report, const json& j) {
  if (report != nullptr) *report = copy_string(j.dump(2));
}

qpmk_instance* wrap(Instance inst) { return new qpmk_instance{std::move(inst)}; }

const Qpm& as_qpm(const qpmk_instance* inst, const char* name) {
  need(inst, name);
  if (const auto* q = std::get_if<Qpm>(&inst->value.data)) return *q;
  fail(ErrorCode::Shape, std::string(name) + " is a " + to_string(inst->value.kind()) + ", expected a qpm");
}

const Channel& as_channel(const qpmk_instance* inst, const char* name) {
  need(inst, name);
  if (const auto* c = std::get_if<Channel>(&inst->value.data)) return *c;
  if (const auto* cm = std::get_if<ChannelWithMeasure>(&inst->value.data)) return cm->channel;
  fail(ErrorCode::Shape, std::string(name) + " is a " + to_string(inst->value.kind()) + ", expected a channel");
}

const InputMeasure& as_measure(const qpmk_instance* inst, const char* name) {
  need(inst, name);
  if (const auto* m = std::get_if<InputMeasure>(&inst->value.data)) return *m;
  if (const auto* cm = std::get_if<ChannelWithMeasure>(&inst->value.data)) return cm->measure;
  fail(ErrorCode::Shape, std::string(name) + " is a " + to_string(inst->value.kind()) + ", expected a measure");
}

json qpm_report(const ValidationReport& r) {
  return {{"ok", r.ok}, {"min_eigenvalues", r.min_eigenvalues}, {"sum_residual", r.sum_residual},
          {"violations", r.violations}};
}

json channel_report(const ChannelValidation& r) {
  json per = json::array();
  for (const auto& p : r.per_input) per.push_back(qpm_report(p));
  return {{"ok", r.ok}, {"per_input", per}, {"violations", r.violations}};
}

}  // namespace

extern "C" {

const char* qpmk_version(void) { return "0.1.0"; }

const char* qpmk_status_name(qpmk_status status) {
  switch (status) {
    case QPMK_OK: return "ok";
    case QPMK_ERR_EMPTY_INPUT: return to_string(ErrorCode::EmptyInput);
    case QPMK_ERR_INVALID_ARGUMENT: return to_string(ErrorCode::InvalidArgument);
    case QPMK_ERR_SHAPE: return to_string(ErrorCode::Shape);
    case QPMK_ERR_INVARIANT: return to_string(ErrorCode::InvariantViolation);
    case QPMK_ERR_NOT_PSD: return to_string(ErrorCode::NotPsd);
    case QPMK_ERR_PARSE: return to_string(ErrorCode::Parse);
    case QPMK_ERR_VERSION: return to_string(ErrorCode::Version);
    case QPMK_ERR_IO: return to_string(ErrorCode::Io);
    case QPMK_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* qpmk_last_error(void) { return g_last_error.c_str(); }

void qpmk_string_free(char* s) { std::free(s); }

qpmk_status qpmk_instance_load(const char* path, qpmk_instance** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = wrap(load_instance(path));
  });
}

qpmk_status qpmk_instance_parse(const char* text, size_t length, qpmk_instance** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    *out = wrap(parse_instance(std::string_view(text, length)));
  });
}

qpmk_status qpmk_instance_save(const qpmk_instance* inst, const char* path) {
  return guarded([&] {
    need(inst, "instance");
    need(path, "path");
    save_instance(inst->value, path);
  });
}

qpmk_status qpmk_instance_serialize(const qpmk_instance* inst, char** out) {
  return guarded([&] {
    need(inst, "instance");
    need(out, "out");
    *out = copy_string(serialize_instance(inst->value));
  });
}

void qpmk_instance_free(qpmk_instance* inst) { delete inst; }

qpmk_status qpmk_instance_kind(const qpmk_instance* inst, qpmk_kind* out) {
  return guarded([&] {
    need(inst, "instance");
    need(out, "out");
    *out = static_cast<qpmk_kind>(inst->value.kind());
  });
}

qpmk_status qpmk_instance_shape(const qpmk_instance* inst, qpmk_shape* out) {
  return guarded([&] {
    need(inst, "instance");
    need(out, "out");
    qpmk_shape s{1, 1, 1, 1};
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          auto from_channel = [&](const Channel& c) {
            s.dim = c.dim();
            s.atoms = c.atoms();
            s.inputs = c.size();
          };
          if constexpr (std::is_same_v<T, Qpm>) {
            s.dim = v.dim();
            s.atoms = v.size();
          } else if constexpr (std::is_same_v<T, Channel>) {
            from_channel(v);
          } else if constexpr (std::is_same_v<T, ChannelWithMeasure>) {
            from_channel(v.channel);
          } else if constexpr (std::is_same_v<T, ChannelSequence>) {
            from_channel(v[0]);
            s.terms = v.size();
          } else if constexpr (std::is_same_v<T, InputMeasure>) {
            s.dim = 0;
            s.atoms = 0;
            s.inputs = v.weights().size();
          } else {
            s.dim = v.dim;
            s.atoms = v.triple.spectral.measure().size();
          }
        },
        inst->value.data);
    *out = s;
  });
}

qpmk_status qpmk_qpm_from_effects(size_t dim, size_t atoms, const double* re, const double* im,
                                  qpmk_instance** out) {
  return guarded([&] {
    need(re, "re");
    need(im, "im");
    need(out, "out");
    if (dim == 0 || atoms == 0) fail(ErrorCode::EmptyInput, "dim and atoms must be positive");
    std::vector<HermitianOperator> effects;
    for (size_t a = 0; a < atoms; ++a) {
      ComplexMatrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
      for (size_t i = 0; i < dim; ++i)
        for (size_t j = 0; j < dim; ++j) {
          const size_t k = a * dim * dim + i * dim + j;
          m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = {re[k], im[k]};
        }
      effects.emplace_back(m);
    }
    *out = wrap(Instance{Qpm(OutcomeSpace::finite(atoms), std::move(effects)), std::nullopt});
  });
}

qpmk_status qpmk_effect(const qpmk_instance* inst, size_t input, size_t atom, double* re, double* im) {
  return guarded([&] {
    need(inst, "instance");
    need(re, "re");
    need(im, "im");
    const Qpm* q = nullptr;
    if (const auto* p = std::get_if<Qpm>(&inst->value.data)) {
      if (input != 0) fail(ErrorCode::InvalidArgument, "a single measure only has input 0");
      q = p;
    } else if (const auto* s = std::get_if<ChannelSequence>(&inst->value.data)) {
      if (input >= (*s)[0].size()) fail(ErrorCode::InvalidArgument, "input index out of range");
      q = &(*s)[0].at(input);
    } else {
      const Channel& c = as_channel(inst, "instance");
      if (input >= c.size()) fail(ErrorCode::InvalidArgument, "input index out of range");
      q = &c.at(input);
    }
    if (atom >= q->size()) fail(ErrorCode::InvalidArgument, "atom index out of range");
    const ComplexMatrix& m = q->effect(atom);
    const size_t d = q->dim();
    for (size_t i = 0; i < d; ++i)
      for (size_t j = 0; j < d; ++j) {
        re[i * d + j] = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)).real();
        im[i * d + j] = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)).imag();
      }
  });
}

qpmk_status qpmk_generate_qpm(size_t dim, size_t atoms, uint64_t seed, qpmk_instance** out) {
  return guarded([&] {
    need(out, "out");
    *out = wrap(Instance{random_qpm(dim, atoms, seed), Provenance{"random_qpm", seed}});
  });
}

qpmk_status qpmk_generate_channel(size_t dim, size_t atoms, size_t inputs, uint64_t seed, qpmk_instance** out) {
  return guarded([&] {
    need(out, "out");
    *out = wrap(Instance{random_channel(dim, atoms, inputs, seed), Provenance{"random_channel", seed}});
  });
}

qpmk_status qpmk_generate_sequence(size_t dim, size_t atoms, size_t inputs, size_t length, uint64_t seed,
                                   int shrink, qpmk_instance** out) {
  return guarded([&] {
    need(out, "out");
    const Drift drift = shrink ? Drift::Shrink : Drift::None;
    *out = wrap(Instance{random_sequence(dim, atoms, inputs, length, seed, drift),
                         Provenance{shrink ? "random_sequence/shrink" : "random_sequence", seed}});
  });
}

qpmk_status qpmk_validate(const qpmk_instance* inst, int* valid, char** report) {
  return guarded([&] {
    need(inst, "instance");
    need(valid, "valid");
    json j;
    bool ok = true;
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Qpm>) {
            const ValidationReport r = validate_qpm(v);
            ok = r.ok;
            j = qpm_report(r);
          } else if constexpr (std::is_same_v<T, Channel>) {
            const ChannelValidation r = validate_channel(v);
            ok = r.ok;
            j = channel_report(r);
          } else if constexpr (std::is_same_v<T, ChannelWithMeasure>) {
            const ChannelValidation r = validate_channel(v.channel);
            ok = r.ok && v.measure.inputs() == v.channel.inputs();
            j = channel_report(r);
            j["measure_matches_inputs"] = v.measure.inputs() == v.channel.inputs();
          } else if constexpr (std::is_same_v<T, ChannelSequence>) {
            json terms = json::array();
            for (std::size_t t = 0; t < v.size(); ++t) {
              const ChannelValidation r = validate_channel(v[t]);
              ok = ok && r.ok;
              terms.push_back(channel_report(r));
            }
            j = {{"terms", terms}};
          } else if constexpr (std::is_same_v<T, InputMeasure>) {
            j = {{"support", v.support()}};
          } else {
            const SpectralReport s = is_spectral(v.triple.spectral.measure());
            const double iso = isometry_residual(v.triple.isometry);
            ok = s.ok && iso <= tolerance::kIsometry;
            j = {{"idempotency_residual", s.idempotency_residual},
                 {"orthogonality_residual", s.orthogonality_residual},
                 {"isometry_residual", iso}};
          }
        },
        inst->value.data);
    j["kind"] = to_string(inst->value.kind());
    j["ok"] = ok;
    *valid = ok ? 1 : 0;
    emit(report, j);
  });
}

qpmk_status qpmk_distance(const qpmk_instance* a, const qpmk_instance* b, qpmk_metric metric, size_t exact_cap,
                          qpmk_distance_result* out, char** report) {
  return guarded([&] {
    need(out, "out");
    const Qpm& e = as_qpm(a, "first instance");
    const Qpm& f = as_qpm(b, "second instance");
    require_valid(e, "first instance");
    require_valid(f, "second instance");
    MetricOptions opts;
    opts.exact_cap = exact_cap;
    json j;
    if (metric == QPMK_METRIC_DELTA) {
      const DeltaResult r = delta_distance(e, f, opts);
      *out = {r.value, r.upper, r.exact ? 1 : 0};
      j = {{"metric", "delta"}, {"value", r.value}, {"upper", r.upper}, {"exact", r.exact},
           {"certificate", {{"subset", r.subset}}}};
    } else if (metric == QPMK_METRIC_RHO || metric == QPMK_METRIC_TV) {
      const RhoResult r = rho_distance(e, f, opts);
      *out = {r.value, r.upper, r.exact ? 1 : 0};
      j = {{"metric", metric == QPMK_METRIC_RHO ? "rho" : "tv"}, {"value", r.value}, {"upper", r.upper},
           {"exact", r.exact}, {"certificate", {{"signs", r.signs}}}};
      if (metric == QPMK_METRIC_TV)
        j["total_variation"] = {total_variation(e, opts), total_variation(f, opts)};
    } else {
      fail(ErrorCode::InvalidArgument, "unknown metric");
    }
    emit(report, j);
  });
}

void qpmk_bures_default_options(qpmk_bures_options* options) {
  if (options == nullptr) return;
  const BuresConfig c;
  *options = {c.restarts, c.env_multiplicity, c.max_iterations, c.seed};
}

qpmk_status qpmk_bures(const qpmk_instance* a, const qpmk_instance* b, const qpmk_bures_options* options,
                       qpmk_bures_result* out, char** report) {
  return guarded([&] {
    need(out, "out");
    const Qpm& e = as_qpm(a, "first instance");
    const Qpm& f = as_qpm(b, "second instance");
    BuresConfig c;
    if (options != nullptr) {
      c.restarts = options->restarts;
      c.env_multiplicity = options->env_multiplicity;
      c.max_iterations = options->max_iterations;
      c.seed = options->seed;
    }
    const BuresResult r = bures_distance(e, f, c);
    const bool bracket = naimark_continuity_check(e, f, r);
    *out = {r.lower, r.upper, r.dual_lower, r.rho, r.converged ? 1 : 0, bracket ? 1 : 0};
    emit(report, {{"lower", r.lower},
                  {"upper", r.upper},
                  {"dual_lower", r.dual_lower},
                  {"rho", r.rho},
                  {"sqrt_rho", std::sqrt(r.rho)},
                  {"converged", r.converged},
                  {"restarts_used", r.restarts_used},
                  {"bracket_ok", bracket}});
  });
}

qpmk_status qpmk_dilate(const qpmk_instance* inst, int minimal, qpmk_instance** out, double* residual) {
  return guarded([&] {
    need(out, "out");
    const Qpm& e = as_qpm(inst, "instance");
    DilationTriple t = naimark_dilate(e, minimal != 0);
    const double res = dilation_residual(e, t.spectral, t.isometry);
    if (residual != nullptr) *residual = res;
    *out = wrap(Instance{DilationRecord{e.dim(), std::move(t)}, inst->value.provenance});
  });
}

qpmk_status qpmk_channel_distance(const qpmk_instance* a, const qpmk_instance* b, qpmk_channel_distance_result* out,
                                  char** report) {
  return guarded([&] {
    need(out, "out");
    const Channel& e = as_channel(a, "first instance");
    const Channel& f = as_channel(b, "second instance");
    require_valid(e, "first instance");
    require_valid(f, "second instance");
    const RhoTildeResult r = rho_tilde(e, f);
    const double op = channel_opnorm_gap(e, f);
    const bool agree = std::abs(r.value - op) <= 1e-9;
    *out = {r.value, r.argmax, r.exact ? 1 : 0, op, agree ? 1 : 0};
    emit(report, {{"rho_tilde", r.value},
                  {"argmax", r.argmax},
                  {"argmax_label", e.inputs().labels().at(r.argmax)},
                  {"exact", r.exact},
                  {"operator_norm", op},
                  {"paths_agree", agree}});
  });
}

qpmk_status qpmk_converge(const qpmk_instance* sequence, double tol, const qpmk_instance* mu, qpmk_instance** limit,
                          char** report) {
  return guarded([&] {
    need(sequence, "sequence");
    const auto* seq = std::get_if<ChannelSequence>(&sequence->value.data);
    if (seq == nullptr)
      fail(ErrorCode::Shape, std::string("instance is a ") + to_string(sequence->value.kind()) + ", expected a sequence");
    for (std::size_t t = 0; t < seq->size(); ++t) require_valid((*seq)[t], "term " + std::to_string(t));

    const InputMeasure* m = mu != nullptr ? &as_measure(mu, "measure") : nullptr;
    ChannelSequence work = *seq;
    if (m != nullptr) {
      std::vector<Channel> terms;
      for (const Channel& c : seq->terms()) terms.push_back(canonicalize_mod_mu(c, *m).rep());
      work = ChannelSequence(std::move(terms));
    }
    const auto probe = matrix_unit_functionals(work[0].dim());
    Extraction x = extract_convergent_subsequence(work, tol, probe);
    json j = {{"indices", x.indices}, {"tail", x.tail}, {"gap_trace", x.gap_trace}, {"limit_gaps", x.limit_gaps}};
    if (m != nullptr) {
      const ModMuChannel lim = canonicalize_mod_mu(x.limit, *m);
      const BwTestFamily family = canonical_bw_family(lim.rep());
      std::vector<double> bw;
      for (std::size_t i : x.indices) bw.push_back(bw_gap_mod_mu(ModMuChannel(work[i], *m, true), lim, family));
      j["bw_gaps"] = bw;
      x.limit = lim.rep();
    }
    emit(report, j);
    if (limit != nullptr) *limit = wrap(Instance{std::move(x.limit), std::nullopt});
  });
}

qpmk_status qpmk_equiv(const qpmk_instance* a, const qpmk_instance* b, const qpmk_instance* mu, double tol,
                       int* equivalent, char** report) {
  return guarded([&] {
    need(equivalent, "equivalent");
    const Channel& e = as_channel(a, "first instance");
    const Channel& f = as_channel(b, "second instance");
    const InputMeasure& m = as_measure(mu, "measure");
    const EquivResult r = equiv_mod_mu(e, f, m, tol);
    const bool via_ucp = ucp_equiv_mod_mu(e, f, m, tol);
    *equivalent = r.equivalent ? 1 : 0;
    json j = {{"equivalent", r.equivalent}, {"ucp_equivalent", via_ucp}, {"witness", nullptr}};
    if (r.witness)
      j["witness"] = {{"input", r.witness->input},
                      {"input_label", e.inputs().labels().at(r.witness->input)},
                      {"atom", r.witness->atom},
                      {"deviation", r.witness->deviation}};
    emit(report, j);
  });
}

}  // extern "C"
