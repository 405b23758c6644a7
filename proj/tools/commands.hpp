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

// Subcommands of the varopt command-line tool. Each command reads and writes
// through streams so it can be driven from tests.

#ifndef VAROPT_TOOLS_COMMANDS_HPP_
#define VAROPT_TOOLS_COMMANDS_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "varopt/estimate.hpp"
#include "varopt/reservoir.hpp"
#include "varopt/types.hpp"

namespace varopt::cli {

// Bad flag values found after parsing, such as an unknown scheme name.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SampleOptions {
  std::size_t k = 0;
  Implementation impl = Implementation::kTree;
  std::uint64_t seed = 0;
  bool fast_path = true;
};

// Streams `key<TAB>weight` lines through a reservoir. Errors carry the line
// number.
Sample sample_stream(std::istream& in, const SampleOptions& options);

// Reads every file, checks capacities and key disjointness, and merges.
Sample merge_files(const std::vector<std::string>& paths, std::size_t k,
                   std::uint64_t seed);

// Keys listed one per line; blank lines and '#' lines are skipped.
KeySelector read_key_list(std::istream& in);

std::string estimate_line(const Sample& sample, const KeySelector& selector,
                          std::optional<double> delta);

// Instance specs: file:PATH, pareto:N:ALPHA, uniform:N:LO:HI, bad:K:ELL,
// list:W1,W2,...
std::vector<WeightedItem> load_instance(std::string_view spec,
                                        std::uint64_t seed);

// Cell id per item for a partition token: "all" (one cell), "items" (one
// cell per item) or a positive integer N (N contiguous cells).
std::vector<std::size_t> partition_cells(std::string_view token,
                                         std::size_t n);

struct ExperimentOptions {
  std::string instance;
  std::vector<std::string> schemes;
  std::size_t k = 0;
  std::size_t trials = 1;
  std::vector<std::string> partitions = {"all", "items"};
  std::uint64_t seed = 0;
  std::size_t threads = 0;
};

inline constexpr std::string_view kExperimentHeader =
    "scheme,k,trials,partition,sse_mean,sigma_v,v_sigma,w_half";

void run_experiment(const ExperimentOptions& options, std::ostream& csv);

struct BenchOptions {
  std::vector<std::size_t> ks;
  std::size_t n = 1000000;
  std::string distribution = "pareto";
  std::vector<Implementation> impls = {Implementation::kTree};
  std::uint64_t seed = 0;
  bool fast_path = true;
};

inline constexpr std::string_view kBenchHeader =
    "impl,k,n,seconds,items_per_sec,simple_fraction";

struct BenchRow {
  Implementation impl;
  std::size_t k;
  std::size_t n;
  double seconds;
  double simple_fraction;
};

std::vector<BenchRow> run_bench(const BenchOptions& options,
                                std::ostream* table);

// Writes to `path` through a temporary file and a rename, or to `fallback`
// when `path` is empty or "-".
void write_output(const std::string& path, std::ostream& fallback,
                  const std::function<void(std::ostream&)>& body);

// Full command line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace varopt::cli

#endif  // VAROPT_TOOLS_COMMANDS_HPP_
