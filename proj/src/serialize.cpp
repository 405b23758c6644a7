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

#include "varopt/serialize.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <istream>
#include <iterator>
#include <limits>
#include <ostream>
#include <sstream>
#include <string_view>

#include "varopt/errors.hpp"

namespace varopt {
namespace {

constexpr std::string_view kMagic = "VOPT";

class Writer {
 public:
  explicit Writer(std::vector<std::uint8_t>& out) : out_(out) {}

  void bytes(std::string_view s) { out_.insert(out_.end(), s.begin(), s.end()); }

  template <typename U>
  void uint(U v) {
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
  }

  void f64(double v) { uint(std::bit_cast<std::uint64_t>(v)); }

 private:
  std::vector<std::uint8_t>& out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::size_t offset() const { return pos_; }
  bool done() const { return pos_ == in_.size(); }

  std::string_view bytes(std::size_t n, const char* what) {
    need(n, what);
    const auto* p = reinterpret_cast<const char*>(in_.data() + pos_);
    pos_ += n;
    return {p, n};
  }

  template <typename U>
  U uint(const char* what) {
    need(sizeof(U), what);
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      v |= static_cast<U>(static_cast<U>(in_[pos_ + i]) << (8 * i));
    }
    pos_ += sizeof(U);
    return v;
  }

  double f64(const char* what) {
    const std::size_t at = pos_;
    const double v = std::bit_cast<double>(uint<std::uint64_t>(what));
    if (!std::isfinite(v)) {
      throw ParseError(std::string("non-finite ") + what, at);
    }
    return v;
  }

 private:
  void need(std::size_t n, const char* what) {
    if (in_.size() - pos_ < n) {
      throw ParseError(std::string("truncated input reading ") + what, pos_);
    }
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

bool parse_double(std::string_view s, double& out) {
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size() &&
         std::isfinite(out);
}

template <typename U>
bool parse_uint(std::string_view s, U& out) {
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

void check_key(const std::string& key) {
  if (key.find_first_of("\t\n\r") != std::string::npos) {
    throw DomainError("key contains a tab or newline: '" + key + "'");
  }
}

}  // namespace

std::vector<std::uint8_t> serialize_sample(const Sample& sample) {
  if (sample.capacity_k > std::numeric_limits<std::uint32_t>::max() ||
      sample.entries.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw DomainError("sample too large for the wire format");
  }
  std::vector<std::uint8_t> out;
  Writer w(out);
  w.bytes(kMagic);
  w.uint<std::uint16_t>(kSampleFormatVersion);
  w.uint<std::uint32_t>(static_cast<std::uint32_t>(sample.capacity_k));
  w.uint<std::uint64_t>(sample.items_seen);
  w.f64(sample.total_weight_seen);
  w.f64(sample.threshold);
  w.uint<std::uint32_t>(static_cast<std::uint32_t>(sample.entries.size()));
  for (const SampleEntry& e : sample.entries) {
    if (e.key.size() > std::numeric_limits<std::uint16_t>::max()) {
      throw DomainError("key longer than 65535 bytes");
    }
    w.uint<std::uint16_t>(static_cast<std::uint16_t>(e.key.size()));
    w.bytes(e.key);
    w.f64(e.original_weight);
    w.f64(e.adjusted_weight);
  }
  return out;
}

Sample deserialize_sample(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  if (r.bytes(kMagic.size(), "magic") != kMagic) {
    throw ParseError("bad magic, expected VOPT", 0);
  }
  const std::size_t version_at = r.offset();
  const auto version = r.uint<std::uint16_t>("version");
  if (version != kSampleFormatVersion) {
    throw ParseError("unsupported version " + std::to_string(version),
                     version_at);
  }
  Sample s;
  s.capacity_k = r.uint<std::uint32_t>("capacity_k");
  s.items_seen = r.uint<std::uint64_t>("items_seen");
  s.total_weight_seen = r.f64("total_weight_seen");
  s.threshold = r.f64("threshold");
  const auto count = r.uint<std::uint32_t>("entry_count");
  // Each entry takes at least 18 bytes; reject absurd counts up front.
  if (count > (bytes.size() - r.offset()) / 18) {
    throw ParseError("entry_count " + std::to_string(count) +
                         " exceeds the remaining input",
                     r.offset());
  }
  s.entries.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    SampleEntry e;
    const auto len = r.uint<std::uint16_t>("key_len");
    e.key = std::string(r.bytes(len, "key"));
    e.original_weight = r.f64("original_weight");
    e.adjusted_weight = r.f64("adjusted_weight");
    s.entries.push_back(std::move(e));
  }
  if (!r.done()) throw ParseError("trailing bytes after entries", r.offset());
  return s;
}

void write_sample_text(std::ostream& out, const Sample& sample) {
  out << "#VOPT\t" << kSampleFormatVersion << '\n'
      << "#capacity_k\t" << sample.capacity_k << '\n'
      << "#items_seen\t" << sample.items_seen << '\n'
      << "#total_weight_seen\t" << format_double(sample.total_weight_seen)
      << '\n'
      << "#threshold\t" << format_double(sample.threshold) << '\n'
      << "#entry_count\t" << sample.entries.size() << '\n';
  for (const SampleEntry& e : sample.entries) {
    check_key(e.key);
    out << e.key << '\t' << format_double(e.original_weight) << '\t'
        << format_double(e.adjusted_weight) << '\n';
  }
}

Sample read_sample_text(std::istream& in) {
  Sample s;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  bool have_count = false;
  std::size_t expected_count = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string_view view(line);
    const std::size_t tab = view.find('\t');
    if (line_no == 1) {
      std::uint16_t version = 0;
      if (view.substr(0, tab) != "#VOPT" || tab == std::string_view::npos ||
          !parse_uint(view.substr(tab + 1), version)) {
        throw ParseError("missing '#VOPT<TAB>version' header", line_no);
      }
      if (version != kSampleFormatVersion) {
        throw ParseError("unsupported version " + std::to_string(version),
                         line_no);
      }
      have_header = true;
      continue;
    }
    if (view.empty()) continue;
    if (view.front() == '#') {
      if (tab == std::string_view::npos) continue;  // free-form comment
      const std::string_view name = view.substr(1, tab - 1);
      const std::string_view value = view.substr(tab + 1);
      bool ok = true;
      if (name == "capacity_k") {
        ok = parse_uint(value, s.capacity_k);
      } else if (name == "items_seen") {
        ok = parse_uint(value, s.items_seen);
      } else if (name == "total_weight_seen") {
        ok = parse_double(value, s.total_weight_seen);
      } else if (name == "threshold") {
        ok = parse_double(value, s.threshold);
      } else if (name == "entry_count") {
        ok = parse_uint(value, expected_count);
        have_count = ok;
      }
      if (!ok) {
        throw ParseError("bad value for '" + std::string(name) + "'",
                         line_no);
      }
      continue;
    }
    const std::size_t tab2 =
        tab == std::string_view::npos ? tab : view.find('\t', tab + 1);
    if (tab == 0 || tab2 == std::string_view::npos ||
        view.find('\t', tab2 + 1) != std::string_view::npos) {
      throw ParseError("expected key<TAB>original<TAB>adjusted", line_no);
    }
    SampleEntry e;
    e.key = std::string(view.substr(0, tab));
    if (!parse_double(view.substr(tab + 1, tab2 - tab - 1),
                      e.original_weight) ||
        !parse_double(view.substr(tab2 + 1), e.adjusted_weight)) {
      throw ParseError("bad weight", line_no);
    }
    s.entries.push_back(std::move(e));
  }
  if (!have_header) throw ParseError("empty input", 0);
  if (have_count && expected_count != s.entries.size()) {
    throw ParseError("entry_count " + std::to_string(expected_count) +
                         " but found " + std::to_string(s.entries.size()),
                     line_no);
  }
  return s;
}

Sample read_sample(std::istream& in) {
  const std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                        std::istreambuf_iterator<char>()};
  if (bytes.size() >= kMagic.size() &&
      std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) == 0) {
    return deserialize_sample(bytes);
  }
  std::string text(bytes.begin(), bytes.end());
  std::istringstream stream(std::move(text));
  return read_sample_text(stream);
}

void write_sample(std::ostream& out, const Sample& sample, bool binary) {
  if (binary) {
    const auto bytes = serialize_sample(sample);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
  } else {
    write_sample_text(out, sample);
  }
}

}  // namespace varopt
