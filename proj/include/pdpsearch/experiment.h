// Copyright 2026 The PDPSearch Authors
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

#ifndef PDPSEARCH_EXPERIMENT_H_
#define PDPSEARCH_EXPERIMENT_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pdpsearch/infection.h"
#include "pdpsearch/search.h"

namespace pdpsearch {

// One experiment: a graph, a targeted subpopulation (explicit partition
// file or infection parameters), one deterministic Target run and `trials`
// seeded PTarget runs, and the aggregation that turns their traces into
// budget-vs-discovery curves.
struct ExperimentConfig {
  std::string graph_path;
  bool weighted = false;
  long long min_weight = 0;  // >= 1 sparsifies; 0 keeps the graph as loaded

  std::string partition_path;  // exclusive with use_infection
  bool use_infection = false;
  InfectionConfig infection;  // seed_vertex resolved from the label below
  // Vertex labels (resolved against the loaded graph's id map at run
  // time; numbers in the JSON are accepted and treated as labels).
  std::string infection_seed_label;
  std::string search_seed_label;  // empty: fall back to the infection seed

  SoPDescriptor sop;
  int components_k = 1;
  int stop_threshold = 1;
  double epsilon = kInfiniteEpsilon;
  NoiseMode mode = NoiseMode::kAppendix;
  double delta = 1e-3;

  int trials = 1;
  long long budget_cap = 1;
  uint64_t master_seed = 0;
  int workers = 0;               // 0: one per hardware thread
  int search_seed_vertex = -1;   // -1: use the infection seed

  // Parses the JSON document (see README for the schema).  Throws
  // std::invalid_argument / ParseError on malformed or inconsistent
  // configs before any run starts.
  static ExperimentConfig FromJsonText(const std::string& text);
};

struct BudgetPoint {
  double mean = 0.0;
  double stddev = 0.0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<std::string> vertex_labels;  // dense id -> original label

  std::vector<int> targeted;  // the partition the runs used
  std::vector<std::vector<int>> ground_truth_components;
  int regime = 0;

  SearchTrace np_trace;                   // the single Target run
  std::vector<SearchTrace> trial_traces;  // PTarget, by trial index

  // Index b-1 holds budget b in 1..budget_cap.
  std::vector<BudgetPoint> discovery_curve;     // private mean +- stddev
  std::vector<long long> np_discovery_curve;    // non-private counts
  std::vector<double> epsilon_curve;            // mean spent epsilon
  std::vector<double> risk_multiplier_curve;    // mean e^epsilon
};

// Runs the full protocol; deterministic in (config, master seed) down to
// the emitted bytes.  Trials execute on up to `workers` threads; the
// aggregation folds them in trial order, so concurrency never changes the
// result.
ExperimentResult RunExperiment(const ExperimentConfig& cfg);

// Largest-component share of |T|: > 50% is regime 1, < 5% is regime 3,
// regime 2 otherwise.  The thresholds label plots and tests only; no
// algorithm reads them.
int ClassifyRegime(const std::vector<std::vector<int>>& components);

// Writes results.csv, results.json and curves.svg into out_dir (created if
// missing).  I/O failures carry the offending path.
void EmitOutputs(const ExperimentResult& result,
                 const std::filesystem::path& out_dir);

// Canonical shortest round-trip decimal for doubles; "inf" for infinity.
// Shared by the CSV/JSON writers so identical runs emit identical bytes.
std::string FormatDouble(double value);

}  // namespace pdpsearch

#endif  // PDPSEARCH_EXPERIMENT_H_
