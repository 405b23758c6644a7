// Copyright 2026 The VarOpt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VAROPT_SERIALIZE_HPP_
#define VAROPT_SERIALIZE_HPP_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "varopt/types.hpp"

namespace varopt {

// Binary layout, little-endian:
//
//   "VOPT"                 magic, 4 bytes
//   u16  version           = 1
//   u32  capacity_k
//   u64  items_seen
//   f64  total_weight_seen
//   f64  threshold
//   u32  entry_count
//   entry_count x { u16 key_len, key bytes, f64 original, f64 adjusted }
inline constexpr std::uint16_t kSampleFormatVersion = 1;

std::vector<std::uint8_t> serialize_sample(const Sample& sample);

// Throws ParseError (with the byte offset) on a bad magic or version,
// truncation, trailing bytes, or a non-finite weight.
Sample deserialize_sample(std::span<const std::uint8_t> bytes);

// Text form: '#'-prefixed header lines for the scalar fields, then one
// "key<TAB>original_weight<TAB>adjusted_weight" line per entry. Weights are
// written in shortest round-trip form.
void write_sample_text(std::ostream& out, const Sample& sample);
// Throws ParseError with a 1-based line number.
Sample read_sample_text(std::istream& in);

// Detects the binary magic, otherwise parses text.
Sample read_sample(std::istream& in);
void write_sample(std::ostream& out, const Sample& sample, bool binary);

}  // namespace varopt

#endif  // VAROPT_SERIALIZE_HPP_
