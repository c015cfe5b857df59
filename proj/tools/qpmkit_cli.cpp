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

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qpmkit/qpmkit.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInvalid = 2;

struct CliFailure {
  int code;
};

struct InstanceDeleter {
  void operator()(qpmk_instance* p) const { qpmk_instance_free(p); }
};
using InstancePtr = std::unique_ptr<qpmk_instance, InstanceDeleter>;

void check(qpmk_status status) {
  if (status == QPMK_OK) return;
  std::cerr << "error (" << qpmk_status_name(status) << "): " << qpmk_last_error() << "\n";
  const bool invalid = status == QPMK_ERR_INVARIANT || status == QPMK_ERR_NOT_PSD;
  throw CliFailure{invalid ? kExitInvalid : kExitError};
}

InstancePtr load(const std::string& path) {
  qpmk_instance* p = nullptr;
  check(qpmk_instance_load(path.c_str(), &p));
  return InstancePtr(p);
}

json take_report(char* text) {
  json j = json::parse(text);
  qpmk_string_free(text);
  return j;
}

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qpmkit: distances, dilations and channels for finite quantum probability measures"};
  app.require_subcommand(1);

  std::string kind = "qpm", drift = "none", out_path;
  std::size_t dim = 2, atoms = 2, inputs = 1, length = 1;
  std::uint64_t seed = 0;
  auto* gen = app.add_subcommand("gen", "Generate a seeded random instance");
  gen->add_option("--kind", kind)->check(CLI::IsMember({"qpm", "channel", "sequence"}));
  gen->add_option("--dim", dim)->required()->check(CLI::PositiveNumber);
  gen->add_option("--atoms", atoms)->required()->check(CLI::PositiveNumber);
  gen->add_option("--inputs", inputs)->check(CLI::PositiveNumber);
  gen->add_option("--len", length)->check(CLI::PositiveNumber);
  gen->add_option("--drift", drift)->check(CLI::IsMember({"none", "shrink"}));
  gen->add_option("--seed", seed)->required();
  gen->add_option("-o,--output", out_path)->required();

  std::string file1, file2, mu_file;
  auto* validate = app.add_subcommand("validate", "Check the invariants of an instance file");
  validate->add_option("file", file1)->required();

  std::string metric = "rho";
  std::size_t exact_cap = 16;
  auto* dist = app.add_subcommand("dist", "Distance between two measures");
  dist->add_option("--metric", metric)->check(CLI::IsMember({"rho", "delta", "tv"}));
  dist->add_option("file1", file1)->required();
  dist->add_option("file2", file2)->required();
  dist->add_option("--exact-cap", exact_cap);

  qpmk_bures_options bopts;
  qpmk_bures_default_options(&bopts);
  auto* bures = app.add_subcommand("bures", "Bracket the Bures-type distance between two measures");
  bures->add_option("file1", file1)->required();
  bures->add_option("file2", file2)->required();
  bures->add_option("--restarts", bopts.restarts)->check(CLI::PositiveNumber);
  bures->add_option("--env-mult", bopts.env_multiplicity)->check(CLI::PositiveNumber);
  bures->add_option("--max-iterations", bopts.max_iterations)->check(CLI::PositiveNumber);
  bures->add_option("--seed", bopts.seed)->required();

  bool minimal = false;
  auto* dilate = app.add_subcommand("dilate", "Naimark dilation of a measure");
  dilate->add_option("file", file1)->required();
  dilate->add_flag("--minimal", minimal);
  dilate->add_option("-o,--output", out_path, "defaults to FILE.dilation.json");

  auto* cdist = app.add_subcommand("channel-dist", "Uniform distance between two channels");
  cdist->add_option("file1", file1)->required();
  cdist->add_option("file2", file2)->required();

  double tol = 0.0;
  auto* converge = app.add_subcommand("converge", "Extract a convergent subsequence");
  converge->add_option("file", file1)->required();
  converge->add_option("--tol", tol)->required();
  converge->add_option("--mu", mu_file);
  converge->add_option("-o,--output", out_path, "limit file, defaults to FILE.limit.json");

  double equiv_tol = 1e-9;
  auto* equiv = app.add_subcommand("equiv", "Equality of two channels modulo an input measure");
  equiv->add_option("file1", file1)->required();
  equiv->add_option("file2", file2)->required();
  equiv->add_option("--mu", mu_file)->required();
  equiv->add_option("--tol", equiv_tol);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      qpmk_instance* p = nullptr;
      if (kind == "qpm") check(qpmk_generate_qpm(dim, atoms, seed, &p));
      else if (kind == "channel") check(qpmk_generate_channel(dim, atoms, inputs, seed, &p));
      else check(qpmk_generate_sequence(dim, atoms, inputs, length, seed, drift == "shrink", &p));
      InstancePtr inst(p);
      check(qpmk_instance_save(inst.get(), out_path.c_str()));
      print({{"kind", kind}, {"output", out_path}, {"seed", seed}});
    } else if (validate->parsed()) {
      InstancePtr inst = load(file1);
      int ok = 0;
      char* report = nullptr;
      check(qpmk_validate(inst.get(), &ok, &report));
      print(take_report(report));
      return ok ? kExitOk : kExitInvalid;
    } else if (dist->parsed()) {
      InstancePtr a = load(file1), b = load(file2);
      const qpmk_metric m = metric == "rho" ? QPMK_METRIC_RHO : metric == "delta" ? QPMK_METRIC_DELTA : QPMK_METRIC_TV;
      qpmk_distance_result r;
      char* report = nullptr;
      check(qpmk_distance(a.get(), b.get(), m, exact_cap, &r, &report));
      print(take_report(report));
    } else if (bures->parsed()) {
      InstancePtr a = load(file1), b = load(file2);
      qpmk_bures_result r;
      char* report = nullptr;
      check(qpmk_bures(a.get(), b.get(), &bopts, &r, &report));
      print(take_report(report));
    } else if (dilate->parsed()) {
      InstancePtr inst = load(file1);
      qpmk_instance* p = nullptr;
      double residual = 0.0;
      check(qpmk_dilate(inst.get(), minimal ? 1 : 0, &p, &residual));
      InstancePtr dil(p);
      if (out_path.empty()) out_path = file1 + ".dilation.json";
      check(qpmk_instance_save(dil.get(), out_path.c_str()));
      print({{"output", out_path}, {"residual", residual}, {"minimal", minimal}});
    } else if (cdist->parsed()) {
      InstancePtr a = load(file1), b = load(file2);
      qpmk_channel_distance_result r;
      char* report = nullptr;
      check(qpmk_channel_distance(a.get(), b.get(), &r, &report));
      print(take_report(report));
    } else if (converge->parsed()) {
      InstancePtr seq = load(file1);
      InstancePtr mu;
      if (!mu_file.empty()) mu = load(mu_file);
      qpmk_instance* p = nullptr;
      char* report = nullptr;
      check(qpmk_converge(seq.get(), tol, mu.get(), &p, &report));
      InstancePtr limit(p);
      if (out_path.empty()) out_path = file1 + ".limit.json";
      check(qpmk_instance_save(limit.get(), out_path.c_str()));
      json j = take_report(report);
      j["limit"] = out_path;
      print(j);
    } else if (equiv->parsed()) {
      InstancePtr a = load(file1), b = load(file2), mu = load(mu_file);
      int eq = 0;
      char* report = nullptr;
      check(qpmk_equiv(a.get(), b.get(), mu.get(), equiv_tol, &eq, &report));
      print(take_report(report));
    }
  } catch (const CliFailure& f) {
    return f.code;
  }
  return kExitOk;
}
