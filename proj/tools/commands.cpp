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

#include "commands.hpp"

#include <unistd.h>

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "varopt/baselines.hpp"
#include "varopt/empirical.hpp"
#include "varopt/errors.hpp"
#include "varopt/instances.hpp"
#include "varopt/merge.hpp"
#include "varopt/random.hpp"
#include "varopt/serialize.hpp"
#include "varopt/variance.hpp"

namespace varopt::cli {
namespace {

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// ParseError messages end in " (at N)"; callers here print the position
// themselves.
std::string bare_message(const ParseError& e) {
  std::string what = e.what();
  const std::size_t at = what.rfind(" (at ");
  return at == std::string::npos ? what : what.substr(0, at);
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = s.find(sep, start);
    parts.emplace_back(s.substr(start, end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return parts;
}

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw UsageError("bad " + std::string(what) + " '" + std::string(text) +
                     "'");
  }
  return value;
}

Sample read_sample_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  try {
    return read_sample(in);
  } catch (const ParseError& e) {
    throw std::runtime_error(path + ": " + bare_message(e) + " at " +
                             std::to_string(e.position()));
  }
}

}  // namespace

Sample sample_stream(std::istream& in, const SampleOptions& options) {
  const auto reservoir =
      make_reservoir(options.k, options.impl, {options.fast_path});
  RandomSource rng(derive_seed(options.seed, "sample", 0));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    try {
      auto item = parse_item_line(line, line_no);
      if (item) reservoir->insert(std::move(item->key), item->weight, rng);
    } catch (const ParseError& e) {
      throw std::runtime_error("input line " + std::to_string(line_no) + ": " +
                               bare_message(e));
    } catch (const DomainError& e) {
      throw std::runtime_error("input line " + std::to_string(line_no) + ": " +
                               e.what());
    }
  }
  return reservoir->sample();
}

Sample merge_files(const std::vector<std::string>& paths, std::size_t k,
                   std::uint64_t seed) {
  std::vector<Sample> samples;
  std::unordered_map<std::string, std::size_t> owner;
  for (std::size_t f = 0; f < paths.size(); ++f) {
    Sample s = read_sample_file(paths[f]);
    if (s.capacity_k < k) {
      throw std::runtime_error(paths[f] + ": capacity " +
                               std::to_string(s.capacity_k) +
                               " is below the requested k=" +
                               std::to_string(k));
    }
    for (const SampleEntry& e : s.entries) {
      const auto [it, fresh] = owner.emplace(e.key, f);
      if (!fresh) {
        throw std::runtime_error("duplicate key '" + e.key + "' in " +
                                 paths[it->second] + " and " + paths[f]);
      }
    }
    samples.push_back(std::move(s));
  }
  RandomSource rng(derive_seed(seed, "merge", 0));
  return merge(samples, k, rng);
}

KeySelector read_key_list(std::istream& in) {
  std::vector<std::string> keys;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    keys.push_back(line);
  }
  return KeySelector::keys(std::move(keys));
}

std::string estimate_line(const Sample& sample, const KeySelector& selector,
                          std::optional<double> delta) {
  std::string out;
  if (delta) {
    const ConfidenceInterval ci = confidence_interval(sample, selector, *delta);
    out = "estimate\t" + fmt(ci.estimate) + "\tlower\t" + fmt(ci.lower) +
          "\tupper\t" + fmt(ci.upper) + "\tdelta\t" + fmt(*delta);
  } else {
    out = "estimate\t" + fmt(subset_estimate(sample, selector));
  }
  return out + "\n";
}

std::vector<WeightedItem> load_instance(std::string_view spec,
                                        std::uint64_t seed) {
  const std::size_t colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw UsageError("instance spec '" + std::string(spec) +
                     "' has no kind prefix");
  }
  const std::string_view kind = spec.substr(0, colon);
  const std::string_view rest = spec.substr(colon + 1);
  RandomSource rng(derive_seed(seed, "instance", 0));
  if (kind == "file") {
    std::ifstream in{std::string(rest)};
    if (!in) throw std::runtime_error("cannot open '" + std::string(rest) + "'");
    try {
      return read_items(in);
    } catch (const ParseError& e) {
      throw std::runtime_error(std::string(rest) + " line " +
                               std::to_string(e.position()) + ": " +
                               bare_message(e));
    }
  }
  const auto args = split(rest, kind == "list" ? ',' : ':');
  auto expect = [&](std::size_t count) {
    if (args.size() != count) {
      throw UsageError("instance spec '" + std::string(spec) + "' expects " +
                       std::to_string(count) + " fields after '" +
                       std::string(kind) + ":'");
    }
  };
  if (kind == "pareto") {
    expect(2);
    return pareto_instance(parse_number<std::size_t>(args[0], "count"),
                           parse_number<double>(args[1], "alpha"), rng);
  }
  if (kind == "uniform") {
    expect(3);
    return uniform_instance(parse_number<std::size_t>(args[0], "count"),
                            parse_number<double>(args[1], "low"),
                            parse_number<double>(args[2], "high"), rng);
  }
  if (kind == "bad") {
    expect(2);
    return bad_instance(parse_number<std::size_t>(args[0], "k"),
                        parse_number<std::size_t>(args[1], "ell"));
  }
  if (kind == "list") {
    std::vector<double> weights;
    for (const auto& a : args) weights.push_back(parse_number<double>(a, "weight"));
    return items_from_weights(weights);
  }
  throw UsageError("unknown instance kind '" + std::string(kind) +
                   "' (valid: file, pareto, uniform, bad, list)");
}

std::vector<std::size_t> partition_cells(std::string_view token,
                                         std::size_t n) {
  std::vector<std::size_t> cells(n, 0);
  if (token == "all") return cells;
  if (token == "items") {
    for (std::size_t i = 0; i < n; ++i) cells[i] = i;
    return cells;
  }
  const auto parts = parse_number<std::size_t>(token, "partition");
  if (parts == 0) throw UsageError("partition count must be positive");
  for (std::size_t i = 0; i < n; ++i) cells[i] = i * parts / n;
  return cells;
}

void run_experiment(const ExperimentOptions& options, std::ostream& csv) {
  std::vector<Scheme> schemes;
  for (const std::string& name : options.schemes) {
    auto scheme = scheme_by_name(name);
    if (!scheme) {
      std::string valid;
      for (const auto& n : scheme_names()) valid += (valid.empty() ? "" : ", ") + n;
      throw UsageError("unknown scheme '" + name + "' (valid: " + valid + ")");
    }
    schemes.push_back(std::move(*scheme));
  }
  const auto items = load_instance(options.instance, options.seed);
  std::vector<std::vector<std::size_t>> partitions;
  for (const std::string& token : options.partitions) {
    partitions.push_back(partition_cells(token, items.size()));
  }
  csv << kExperimentHeader << '\n';
  for (std::size_t s = 0; s < schemes.size(); ++s) {
    for (std::size_t p = 0; p < partitions.size(); ++p) {
      EmpiricalOptions opt;
      opt.trials = options.trials;
      opt.seed = derive_seed(options.seed, "experiment", 0);
      opt.partition = partitions[p];
      opt.covariance_limit = 0;
      opt.threads = options.threads;
      const EmpiricalReport rep =
          empirical_report(schemes[s], items, options.k, opt);
      const VarianceReport& v = rep.variance;
      csv << options.schemes[s] << ',' << options.k << ',' << options.trials
          << ',' << options.partitions[p] << ',' << fmt(rep.sse_mean) << ','
          << fmt(v.sigma_v) << ',' << fmt(v.v_sigma) << ','
          << fmt(w_p(v.sigma_v, v.v_sigma, 0.5)) << '\n';
    }
  }
}

std::vector<BenchRow> run_bench(const BenchOptions& options,
                                std::ostream* table) {
  RandomSource gen(derive_seed(options.seed, "bench-items", 0));
  std::vector<WeightedItem> items;
  const auto spec = split(options.distribution, ':');
  if (spec[0] == "pareto") {
    const double alpha = spec.size() > 1 ? parse_number<double>(spec[1], "alpha") : 1.0;
    items = pareto_instance(options.n, alpha, gen);
  } else if (spec[0] == "uniform") {
    items = uniform_instance(options.n, 0.5, 1.5, gen);
  } else {
    throw UsageError("unknown distribution '" + options.distribution +
                     "' (valid: pareto[:ALPHA], uniform)");
  }
  if (table) *table << kBenchHeader << '\n';
  std::vector<BenchRow> rows;
  for (Implementation impl : options.impls) {
    for (std::size_t k : options.ks) {
      const auto reservoir = make_reservoir(k, impl, {options.fast_path});
      RandomSource rng(derive_seed(options.seed, "bench", k));
      const auto start = std::chrono::steady_clock::now();
      for (const WeightedItem& it : items) reservoir->insert(it, rng);
      const std::chrono::duration<double> elapsed =
          std::chrono::steady_clock::now() - start;
      const ReservoirCounters& c = reservoir->counters();
      const std::uint64_t steps = c.simple_steps + c.full_steps;
      BenchRow row{impl, k, options.n, elapsed.count(),
                   steps ? static_cast<double>(c.simple_steps) / steps : 0.0};
      if (table) {
        *table << to_string(impl) << ',' << k << ',' << options.n << ','
               << fmt(row.seconds) << ','
               << fmt(row.seconds > 0 ? options.n / row.seconds : 0.0) << ','
               << fmt(row.simple_fraction) << '\n';
      }
      rows.push_back(row);
    }
  }
  return rows;
}

void write_output(const std::string& path, std::ostream& fallback,
                  const std::function<void(std::ostream&)>& body) {
  if (path.empty() || path == "-") {
    body(fallback);
    fallback.flush();
    return;
  }
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  try {
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write '" + tmp + "'");
      body(out);
      out.flush();
      if (!out) throw std::runtime_error("write to '" + tmp + "' failed");
    }
    std::filesystem::rename(tmp, path);
  } catch (...) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw;
  }
}

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Variance-optimal weighted sampling of streams", "varopt"};
  app.require_subcommand(1);

  const std::vector<std::string> impl_names = {"tree", "amortized", "naive"};

  // sample
  auto* sample_cmd = app.add_subcommand(
      "sample", "Sample a key<TAB>weight stream into a fixed-size reservoir");
  SampleOptions sample_opt;
  std::string sample_input = "-", sample_impl = "tree";
  std::string format = "binary", out_path;
  bool no_fast_path = false;
  sample_cmd->add_option("input", sample_input, "Input file, '-' for stdin");
  sample_cmd->add_option("--k", sample_opt.k, "Sample size")
      ->required()
      ->check(CLI::PositiveNumber);
  sample_cmd->add_option("--impl", sample_impl, "Reservoir implementation")
      ->check(CLI::IsMember(impl_names));
  sample_cmd->add_option("--seed", sample_opt.seed, "Random seed");
  sample_cmd->add_flag("--no-fast-path", no_fast_path,
                       "Disable the constant-time step");

  // merge
  auto* merge_cmd =
      app.add_subcommand("merge", "Merge samples of disjoint streams");
  std::vector<std::string> merge_files_arg;
  std::size_t merge_k = 0;
  std::uint64_t merge_seed = 0;
  merge_cmd->add_option("samples", merge_files_arg, "Sample files")
      ->required()
      ->check(CLI::ExistingFile);
  merge_cmd->add_option("--k", merge_k, "Output sample size")
      ->required()
      ->check(CLI::PositiveNumber);
  merge_cmd->add_option("--seed", merge_seed, "Random seed");

  for (auto* cmd : {sample_cmd, merge_cmd}) {
    cmd->add_option("--out", out_path, "Output file (default stdout)");
    cmd->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"binary", "text"}));
  }

  // estimate
  auto* estimate_cmd =
      app.add_subcommand("estimate", "Estimate the weight of a key subset");
  std::string estimate_sample, keys_file, prefix;
  std::optional<double> confidence;
  estimate_cmd->add_option("sample", estimate_sample, "Sample file")
      ->required()
      ->check(CLI::ExistingFile);
  auto* keys_opt = estimate_cmd->add_option(
      "--keys", keys_file, "File listing the subset's keys, one per line");
  keys_opt->check(CLI::ExistingFile);
  estimate_cmd->add_option("--prefix", prefix, "Select keys with this prefix")
      ->excludes(keys_opt);
  estimate_cmd->add_option("--confidence", confidence,
                           "Also print a confidence interval at level delta");

  // experiment
  auto* experiment_cmd = app.add_subcommand(
      "experiment", "Compare sampling schemes over repeated trials (CSV)");
  ExperimentOptions exp_opt;
  exp_opt.schemes = {"varopt", "poisson", "priority"};
  experiment_cmd->add_option("--instance", exp_opt.instance,
                             "file:PATH, pareto:N:ALPHA, uniform:N:LO:HI, "
                             "bad:K:ELL or list:W1,W2,...")
      ->required();
  experiment_cmd->add_option("--schemes", exp_opt.schemes, "Scheme names")
      ->delimiter(',');
  experiment_cmd->add_option("--k", exp_opt.k, "Sample size")
      ->required()
      ->check(CLI::PositiveNumber);
  experiment_cmd->add_option("--trials", exp_opt.trials, "Number of trials")
      ->check(CLI::PositiveNumber);
  experiment_cmd
      ->add_option("--partition", exp_opt.partitions,
                   "Partitions for the squared error: all, items or N")
      ->delimiter(',');
  experiment_cmd->add_option("--seed", exp_opt.seed, "Random seed");
  experiment_cmd->add_option("--threads", exp_opt.threads,
                             "Worker threads (0 = hardware)");
  experiment_cmd->add_option("--out", out_path, "Output file (default stdout)");

  // bench
  auto* bench_cmd = app.add_subcommand(
      "bench", "Time the reservoir implementations on a synthetic stream");
  BenchOptions bench_opt;
  bench_opt.ks = {64, 1000, 4096};
  std::vector<std::string> bench_impls = {"tree"};
  bench_cmd->add_option("--k", bench_opt.ks, "Sample sizes")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--n", bench_opt.n, "Stream length");
  bench_cmd->add_option("--dist", bench_opt.distribution,
                        "Weights: pareto[:ALPHA] or uniform");
  bench_cmd->add_option("--impl", bench_impls, "Implementations")
      ->delimiter(',')
      ->check(CLI::IsMember(impl_names));
  bench_cmd->add_option("--seed", bench_opt.seed, "Random seed");
  bench_cmd->add_flag("--no-fast-path", no_fast_path,
                      "Disable the constant-time step");
  bench_cmd->add_option("--out", out_path, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  const bool binary = format == "binary";
  try {
    if (*sample_cmd) {
      sample_opt.impl = *parse_implementation(sample_impl);
      sample_opt.fast_path = !no_fast_path;
      Sample s;
      if (sample_input == "-") {
        s = sample_stream(in, sample_opt);
      } else {
        std::ifstream file(sample_input);
        if (!file) throw std::runtime_error("cannot open '" + sample_input + "'");
        s = sample_stream(file, sample_opt);
      }
      write_output(out_path, out,
                   [&](std::ostream& o) { write_sample(o, s, binary); });
    } else if (*merge_cmd) {
      const Sample s = merge_files(merge_files_arg, merge_k, merge_seed);
      write_output(out_path, out,
                   [&](std::ostream& o) { write_sample(o, s, binary); });
    } else if (*estimate_cmd) {
      const Sample s = read_sample_file(estimate_sample);
      KeySelector selector = KeySelector::all();
      if (!keys_file.empty()) {
        std::ifstream keys(keys_file);
        if (!keys) throw std::runtime_error("cannot open '" + keys_file + "'");
        selector = read_key_list(keys);
      } else if (estimate_cmd->count("--prefix")) {
        selector = KeySelector::prefix(prefix);
      }
      out << estimate_line(s, selector, confidence);
    } else if (*experiment_cmd) {
      write_output(out_path, out,
                   [&](std::ostream& o) { run_experiment(exp_opt, o); });
    } else if (*bench_cmd) {
      bench_opt.impls.clear();
      for (const auto& name : bench_impls) {
        bench_opt.impls.push_back(*parse_implementation(name));
      }
      bench_opt.fast_path = !no_fast_path;
      write_output(out_path, out,
                   [&](std::ostream& o) { run_bench(bench_opt, &o); });
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace varopt::cli
