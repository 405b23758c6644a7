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

#include "varopt/instances.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "varopt/errors.hpp"

namespace varopt {

std::vector<WeightedItem> bad_instance(std::size_t k, std::size_t ell) {
  if (k < 2) throw DomainError("bad_instance: k must be >= 2");
  if (ell < 1) throw DomainError("bad_instance: ell must be >= 1");
  std::vector<WeightedItem> items;
  items.reserve(k - 1 + ell);
  std::uint64_t arrival = 0;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    items.push_back({"L" + std::to_string(i), static_cast<double>(ell),
                     arrival++});
  }
  for (std::size_t i = 0; i < ell; ++i) {
    items.push_back({"u" + std::to_string(i), 1.0, arrival++});
  }
  return items;
}

std::vector<WeightedItem> pareto_instance(std::size_t n, double alpha,
                                          RandomSource& rng) {
  if (!(alpha > 0.0)) throw DomainError("pareto_instance: alpha must be > 0");
  std::vector<WeightedItem> items;
  items.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    items.push_back({"i" + std::to_string(i),
                     std::pow(rng.uniform(), -1.0 / alpha), i});
  }
  return items;
}

std::vector<WeightedItem> uniform_instance(std::size_t n, double lo,
                                           double hi, RandomSource& rng) {
  if (!(lo > 0.0 && hi > lo)) {
    throw DomainError("uniform_instance: need 0 < lo < hi");
  }
  std::vector<WeightedItem> items;
  items.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    items.push_back({"i" + std::to_string(i), lo + (hi - lo) * rng.uniform(),
                     i});
  }
  return items;
}

std::vector<WeightedItem> items_from_weights(std::span<const double> weights) {
  std::vector<WeightedItem> items;
  items.reserve(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    items.push_back({"i" + std::to_string(i), weights[i], i});
  }
  return items;
}

std::vector<double> weights_of(std::span<const WeightedItem> items) {
  std::vector<double> w;
  w.reserve(items.size());
  for (const auto& item : items) w.push_back(item.weight);
  return w;
}

std::optional<WeightedItem> parse_item_line(std::string_view line,
                                            std::size_t line_no) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  const auto first = line.find_first_not_of(" \t");
  if (first == std::string_view::npos || line[first] == '#') {
    return std::nullopt;
  }
  const auto tab = line.find('\t');
  if (tab == std::string_view::npos || tab == 0) {
    throw ParseError("expected key<TAB>weight", line_no);
  }
  std::string_view text = line.substr(tab + 1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) {
    text.remove_suffix(1);
  }
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  double weight = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(),
                                   weight);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ParseError("bad weight '" + std::string(text) + "'", line_no);
  }
  if (!std::isfinite(weight) || !(weight > 0.0)) {
    throw ParseError("weight must be positive and finite", line_no);
  }
  return WeightedItem{std::string(line.substr(0, tab)), weight, 0};
}

std::vector<WeightedItem> read_items(std::istream& in) {
  std::vector<WeightedItem> items;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto item = parse_item_line(line, line_no)) {
      item->arrival_index = items.size();
      items.push_back(std::move(*item));
    }
  }
  return items;
}

}  // namespace varopt
