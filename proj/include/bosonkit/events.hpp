// Copyright 2026 The bosonkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bosonkit/occupation.hpp"

namespace bosonkit {

enum class SamplerKind { boson_exact, boson_direct, distinguishable, uniform, external };

inline const char* to_string(SamplerKind k) {
  switch (k) {
    case SamplerKind::boson_exact: return "boson-exact";
    case SamplerKind::boson_direct: return "boson-direct";
    case SamplerKind::distinguishable: return "distinguishable";
    case SamplerKind::uniform: return "uniform";
    case SamplerKind::external: return "external";
  }
  return "?";
}

inline SamplerKind sampler_kind_from_string(const std::string& s) {
  if (s == "boson-exact") return SamplerKind::boson_exact;
  if (s == "boson-direct") return SamplerKind::boson_direct;
  if (s == "distinguishable") return SamplerKind::distinguishable;
  if (s == "uniform") return SamplerKind::uniform;
  if (s == "external") return SamplerKind::external;
  throw FormatError("unknown sampler provenance '" + s + "'");
}

/// Ordered record of sampled output patterns. Validation counters depend on
/// the order, so it is preserved through every transformation.
struct EventStream {
  int m = 0;
  int n = 0;
  SamplerKind provenance = SamplerKind::external;
  std::uint64_t seed = 0;
  std::vector<ModeOccupation> events;

  std::size_t size() const noexcept { return events.size(); }
  bool empty() const noexcept { return events.empty(); }
};

}  // namespace bosonkit
