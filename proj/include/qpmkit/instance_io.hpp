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
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "qpmkit/channels.hpp"
#include "qpmkit/dilation.hpp"
#include "qpmkit/modmu.hpp"

namespace qpmkit {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::string_view kSchemaName = "qpmkit-instance";

enum class InstanceKind { Qpm, Channel, ChannelMeasure, Sequence, Measure, Dilation };

const char* to_string(InstanceKind kind) noexcept;

struct ChannelWithMeasure {
  Channel channel;
  InputMeasure measure;
  friend bool operator==(const ChannelWithMeasure&, const ChannelWithMeasure&) = default;
};

/// Dilation of a measure on `space`: H has dimension `dim`, the spectral
/// measure acts on C^env_dim.
struct DilationRecord {
  std::size_t dim = 0;
  DilationTriple triple;
};

struct Provenance {
  std::string generator;
  std::uint64_t seed = 0;
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct Instance {
  std::variant<Qpm, Channel, ChannelWithMeasure, ChannelSequence, InputMeasure, DilationRecord> data;
  std::optional<Provenance> provenance;

  InstanceKind kind() const noexcept { return static_cast<InstanceKind>(data.index()); }
};

/// Strict parser: unknown fields, non-finite numbers, ragged matrices and
/// unsupported versions are all rejected. Syntax errors report line and column.
Instance parse_instance(std::string_view text);

/// Canonical text: fixed key order, two-space indentation, one matrix row per
/// line, doubles printed with 17 significant digits.
std::string serialize_instance(const Instance& instance);

Instance load_instance(const std::string& path);
void save_instance(const Instance& instance, const std::string& path);

}  // namespace qpmkit
