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

#include "qpmkit/instance_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qpmkit/error.hpp"

namespace qpmkit {

using nlohmann::json;

const char* to_string(InstanceKind kind) noexcept {
  switch (kind) {
    case InstanceKind::Qpm: return "qpm";
    case InstanceKind::Channel: return "channel";
    case InstanceKind::ChannelMeasure: return "channel+measure";
    case InstanceKind::Sequence: return "sequence";
    case InstanceKind::Measure: return "measure";
    case InstanceKind::Dilation: return "dilation";
  }
  return "qpm";
}

namespace {

// ---------------------------------------------------------------- writing

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string json_string(const std::string& s) { return json(s).dump(); }

std::string pad(int n) { return std::string(static_cast<std::size_t>(n), ' '); }

std::string string_list(const std::vector<std::string>& items) {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + json_string(items[i]);
  return out + "]";
}

std::string matrix_text(const ComplexMatrix& m, int indent) {
  std::string out = "[\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out += pad(indent + 2) + "[";
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out += (j ? ", [" : "[") + number(m(i, j).real()) + ", " + number(m(i, j).imag()) + "]";
    out += i + 1 < m.rows() ? "],\n" : "]\n";
  }
  return out + pad(indent) + "]";
}

std::string effects_text(const Qpm& q, int indent) {
  std::string out = "[\n";
  for (std::size_t a = 0; a < q.size(); ++a)
    out += pad(indent + 2) + matrix_text(q.effect(a), indent + 2) + (a + 1 < q.size() ? ",\n" : "\n");
  return out + pad(indent) + "]";
}

std::string family_text(const Channel& c, int indent) {
  std::string out = "[\n";
  for (std::size_t x = 0; x < c.size(); ++x)
    out += pad(indent + 2) + effects_text(c.at(x), indent + 2) + (x + 1 < c.size() ? ",\n" : "\n");
  return out + pad(indent) + "]";
}

std::string space_text(const OutcomeSpace& s, int indent) {
  std::string out = "{\n" + pad(indent + 2) + "\"atoms\": " + string_list(s.labels()) + ",\n";
  out += pad(indent + 2) + "\"geometry\": " + json_string(to_string(s.geometry()));
  if (s.geometry() != Geometry::Finite) {
    out += ",\n" + pad(indent + 2) + "\"cells\": [";
    for (std::size_t i = 0; i < s.cells().size(); ++i) {
      const Cell& c = s.cells()[i];
      out += (i ? ", " : "") + std::string("[[") + std::to_string(c.lo.num) + ", " + std::to_string(c.lo.den) +
             "], [" + std::to_string(c.hi.num) + ", " + std::to_string(c.hi.den) + "]]";
    }
    out += "]";
  }
  return out + "\n" + pad(indent) + "}";
}

std::string weights_text(const std::vector<double>& w) {
  std::string out = "[";
  for (std::size_t i = 0; i < w.size(); ++i) out += (i ? ", " : "") + number(w[i]);
  return out + "]";
}

struct Fields {
  std::vector<std::pair<std::string, std::string>> items;
  void add(std::string key, std::string value) { items.emplace_back(std::move(key), std::move(value)); }
};

void channel_fields(Fields& f, const Channel& c) {
  f.add("dim", std::to_string(c.dim()));
  f.add("space", space_text(c.space(), 2));
  f.add("inputs", string_list(c.inputs().labels()));
}

// ---------------------------------------------------------------- reading

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  fail(ErrorCode::Parse, path + ": " + what);
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> required,
                std::initializer_list<const char*> optional = {}) {
  if (!j.is_object()) bad(path, "expected an object");
  std::set<std::string> allowed;
  for (const char* k : required) {
    allowed.insert(k);
    if (!j.contains(k)) bad(path, std::string("missing field '") + k + "'");
  }
  for (const char* k : optional) allowed.insert(k);
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) bad(path, "unknown field '" + key + "'");
}

double read_number(const json& j, const std::string& path) {
  if (!j.is_number()) bad(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) bad(path, "non-finite number");
  return v;
}

std::size_t read_count(const json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
    bad(path, "expected a nonnegative integer");
  return j.get<std::size_t>();
}

std::vector<std::string> read_labels(const json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string()) bad(path + "[" + std::to_string(i) + "]", "expected a string");
    out.push_back(j[i].get<std::string>());
  }
  return out;
}

ComplexMatrix read_matrix(const json& j, std::size_t rows, std::size_t cols, const std::string& path) {
  if (!j.is_array() || j.size() != rows) bad(path, "expected " + std::to_string(rows) + " rows");
  ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string rp = path + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != cols) bad(rp, "expected " + std::to_string(cols) + " entries");
    for (std::size_t k = 0; k < cols; ++k) {
      const std::string ep = rp + "[" + std::to_string(k) + "]";
      const json& z = j[i][k];
      if (!z.is_array() || z.size() != 2) bad(ep, "complex entries are [re, im] pairs");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = {read_number(z[0], ep), read_number(z[1], ep)};
    }
  }
  return m;
}

Rational read_rational(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
    bad(path, "rationals are [numerator, denominator] integer pairs");
  Rational r{j[0].get<std::int64_t>(), j[1].get<std::int64_t>()};
  if (r.den <= 0) bad(path, "denominator must be positive");
  return r;
}

OutcomeSpace read_space(const json& j, const std::string& path) {
  check_keys(j, path, {"atoms", "geometry"}, {"cells"});
  std::vector<std::string> atoms = read_labels(j["atoms"], path + ".atoms");
  if (!j["geometry"].is_string()) bad(path + ".geometry", "expected a string");
  const std::string g = j["geometry"].get<std::string>();
  Geometry geometry;
  if (g == "finite") geometry = Geometry::Finite;
  else if (g == "interval") geometry = Geometry::Interval;
  else if (g == "circle") geometry = Geometry::Circle;
  else bad(path + ".geometry", "unknown geometry '" + g + "'");
  std::vector<Cell> cells;
  if (j.contains("cells")) {
    const json& c = j["cells"];
    if (!c.is_array()) bad(path + ".cells", "expected an array");
    for (std::size_t i = 0; i < c.size(); ++i) {
      const std::string cp = path + ".cells[" + std::to_string(i) + "]";
      if (!c[i].is_array() || c[i].size() != 2) bad(cp, "cells are [lo, hi] pairs");
      cells.push_back({read_rational(c[i][0], cp), read_rational(c[i][1], cp)});
    }
  } else if (geometry != Geometry::Finite) {
    bad(path, "interval and circle spaces need cells");
  }
  return OutcomeSpace(std::move(atoms), geometry, std::move(cells));
}

Qpm read_effects(const json& j, const OutcomeSpace& space, std::size_t dim, const std::string& path) {
  if (!j.is_array() || j.size() != space.size()) bad(path, "expected " + std::to_string(space.size()) + " effects");
  std::vector<HermitianOperator> effects;
  for (std::size_t a = 0; a < j.size(); ++a)
    effects.emplace_back(read_matrix(j[a], dim, dim, path + "[" + std::to_string(a) + "]"));
  return Qpm(space, std::move(effects));
}

Channel read_family(const json& j, const InputSpace& inputs, const OutcomeSpace& space, std::size_t dim,
                    const std::string& path) {
  if (!j.is_array() || j.size() != inputs.size())
    bad(path, "expected " + std::to_string(inputs.size()) + " measures, one per input");
  std::vector<Qpm> fam;
  for (std::size_t x = 0; x < j.size(); ++x) fam.push_back(read_effects(j[x], space, dim, path + "[" + std::to_string(x) + "]"));
  return Channel(inputs, std::move(fam));
}

std::vector<double> read_weights(const json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "expected an array of numbers");
  std::vector<double> w;
  for (std::size_t i = 0; i < j.size(); ++i) w.push_back(read_number(j[i], path + "[" + std::to_string(i) + "]"));
  return w;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

Instance parse_instance(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    fail(ErrorCode::Parse, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
  } catch (const json::exception& e) {
    fail(ErrorCode::Parse, e.what());
  }
  if (!root.is_object()) bad("$", "expected an object");
  if (!root.contains("schema") || root["schema"] != std::string(kSchemaName)) bad("$.schema", "not a qpmkit instance");
  if (!root.contains("version") || !root["version"].is_number_integer()) bad("$.version", "missing integer version");
  if (root["version"].get<std::int64_t>() != kSchemaVersion)
    fail(ErrorCode::Version, "schema version " + root["version"].dump() + " is not supported (expected " +
                                 std::to_string(kSchemaVersion) + ")");
  if (!root.contains("kind") || !root["kind"].is_string()) bad("$.kind", "missing kind");
  const std::string kind = root["kind"].get<std::string>();

  Instance out;
  if (kind == "qpm") {
    check_keys(root, "$", {"schema", "version", "kind", "dim", "space", "effects"}, {"provenance"});
    const OutcomeSpace space = read_space(root["space"], "$.space");
    out.data = read_effects(root["effects"], space, read_count(root["dim"], "$.dim"), "$.effects");
  } else if (kind == "channel" || kind == "channel+measure") {
    const bool with_mu = kind == "channel+measure";
    if (with_mu)
      check_keys(root, "$", {"schema", "version", "kind", "dim", "space", "inputs", "family", "measure"}, {"provenance"});
    else
      check_keys(root, "$", {"schema", "version", "kind", "dim", "space", "inputs", "family"}, {"provenance"});
    const OutcomeSpace space = read_space(root["space"], "$.space");
    const InputSpace inputs(read_labels(root["inputs"], "$.inputs"));
    Channel c = read_family(root["family"], inputs, space, read_count(root["dim"], "$.dim"), "$.family");
    if (with_mu)
      out.data = ChannelWithMeasure{std::move(c), InputMeasure(inputs, read_weights(root["measure"], "$.measure"))};
    else
      out.data = std::move(c);
  } else if (kind == "sequence") {
    check_keys(root, "$", {"schema", "version", "kind", "dim", "space", "inputs", "terms"}, {"provenance"});
    const OutcomeSpace space = read_space(root["space"], "$.space");
    const InputSpace inputs(read_labels(root["inputs"], "$.inputs"));
    const std::size_t dim = read_count(root["dim"], "$.dim");
    const json& terms = root["terms"];
    if (!terms.is_array() || terms.empty()) bad("$.terms", "expected a nonempty array");
    std::vector<Channel> seq;
    for (std::size_t t = 0; t < terms.size(); ++t)
      seq.push_back(read_family(terms[t], inputs, space, dim, "$.terms[" + std::to_string(t) + "]"));
    out.data = ChannelSequence(std::move(seq));
  } else if (kind == "measure") {
    check_keys(root, "$", {"schema", "version", "kind", "inputs", "weights"}, {"provenance"});
    out.data = InputMeasure(InputSpace(read_labels(root["inputs"], "$.inputs")), read_weights(root["weights"], "$.weights"));
  } else if (kind == "dilation") {
    check_keys(root, "$", {"schema", "version", "kind", "dim", "env_dim", "space", "isometry", "projections"},
               {"provenance"});
    const OutcomeSpace space = read_space(root["space"], "$.space");
    const std::size_t dim = read_count(root["dim"], "$.dim");
    const std::size_t env = read_count(root["env_dim"], "$.env_dim");
    ComplexMatrix v = read_matrix(root["isometry"], env, dim, "$.isometry");
    SpectralMeasure f(read_effects(root["projections"], space, env, "$.projections"));
    out.data = DilationRecord{dim, DilationTriple{env, std::move(f), std::move(v)}};
  } else {
    bad("$.kind", "unknown kind '" + kind + "'");
  }

  if (root.contains("provenance")) {
    const json& p = root["provenance"];
    check_keys(p, "$.provenance", {"generator", "seed"});
    if (!p["generator"].is_string()) bad("$.provenance.generator", "expected a string");
    if (!p["seed"].is_number_unsigned() && !(p["seed"].is_number_integer() && p["seed"].get<std::int64_t>() >= 0))
      bad("$.provenance.seed", "expected a nonnegative integer");
    out.provenance = Provenance{p["generator"].get<std::string>(), p["seed"].get<std::uint64_t>()};
  }
  return out;
}

std::string serialize_instance(const Instance& instance) {
  Fields f;
  f.add("schema", json_string(std::string(kSchemaName)));
  f.add("version", std::to_string(kSchemaVersion));
  f.add("kind", json_string(to_string(instance.kind())));
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Qpm>) {
          f.add("dim", std::to_string(v.dim()));
          f.add("space", space_text(v.space(), 2));
          f.add("effects", effects_text(v, 2));
        } else if constexpr (std::is_same_v<T, Channel>) {
          channel_fields(f, v);
          f.add("family", family_text(v, 2));
        } else if constexpr (std::is_same_v<T, ChannelWithMeasure>) {
          channel_fields(f, v.channel);
          f.add("family", family_text(v.channel, 2));
          f.add("measure", weights_text(v.measure.weights()));
        } else if constexpr (std::is_same_v<T, ChannelSequence>) {
          channel_fields(f, v[0]);
          std::string terms = "[\n";
          for (std::size_t t = 0; t < v.size(); ++t)
            terms += pad(4) + family_text(v[t], 4) + (t + 1 < v.size() ? ",\n" : "\n");
          f.add("terms", terms + pad(2) + "]");
        } else if constexpr (std::is_same_v<T, InputMeasure>) {
          f.add("inputs", string_list(v.inputs().labels()));
          f.add("weights", weights_text(v.weights()));
        } else {
          f.add("dim", std::to_string(v.dim));
          f.add("env_dim", std::to_string(v.triple.env_dim));
          f.add("space", space_text(v.triple.spectral.measure().space(), 2));
          f.add("isometry", matrix_text(v.triple.isometry, 2));
          f.add("projections", effects_text(v.triple.spectral.measure(), 2));
        }
      },
      instance.data);
  if (instance.provenance)
    f.add("provenance", "{\"generator\": " + json_string(instance.provenance->generator) +
                            ", \"seed\": " + std::to_string(instance.provenance->seed) + "}");

  std::string out = "{\n";
  for (std::size_t i = 0; i < f.items.size(); ++i)
    out += "  " + json_string(f.items[i].first) + ": " + f.items[i].second + (i + 1 < f.items.size() ? ",\n" : "\n");
  return out + "}\n";
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_instance(ss.str());
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

void save_instance(const Instance& instance, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot write '" + path + "'");
  out << serialize_instance(instance);
  if (!out) fail(ErrorCode::Io, "write to '" + path + "' failed");
}

}  // namespace qpmkit
