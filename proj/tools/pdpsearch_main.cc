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

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "pdpsearch/experiment.h"
#include "pdpsearch/flow_lp.h"
#include "pdpsearch/infection.h"
#include "pdpsearch/search.h"

namespace {

using namespace pdpsearch;

EdgeListGraph LoadGraphFile(const std::string& path, bool weighted) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file " + path);
  return LoadEdgeList(in, weighted);
}

int ResolveLabel(const EdgeListGraph& loaded, const std::string& label) {
  auto it = loaded.id_of.find(label);
  if (it == loaded.id_of.end()) {
    throw std::runtime_error("vertex label '" + label + "' not in graph");
  }
  return it->second;
}

double ParseEpsilonFlag(const std::string& text) {
  if (text == "inf") return kInfiniteEpsilon;
  return std::stod(text);
}

NoiseMode ParseMode(const std::string& text) {
  if (text == "appendix") return NoiseMode::kAppendix;
  if (text == "maintext") return NoiseMode::kMaintext;
  throw std::runtime_error("mode must be appendix or maintext");
}

int RunIngest(const std::string& input, const std::string& out_prefix,
              bool weighted, long long min_weight) {
  EdgeListGraph loaded = LoadGraphFile(input, weighted);
  Graph graph = min_weight >= 1 ? SparsifyByWeight(loaded.graph, min_weight)
                                : loaded.graph;
  {
    std::ofstream out(out_prefix + ".edges");
    if (!out) throw std::runtime_error("cannot write " + out_prefix + ".edges");
    out << "# canonical edge list: n=" << graph.NumVertices() << "\n";
    for (size_t i = 0; i < graph.Edges().size(); ++i) {
      auto [u, v] = graph.Edges()[i];
      out << u << " " << v;
      if (graph.IsWeighted()) out << " " << graph.Weight(u, v);
      out << "\n";
    }
  }
  {
    std::ofstream out(out_prefix + ".idmap");
    if (!out) throw std::runtime_error("cannot write " + out_prefix + ".idmap");
    for (size_t id = 0; id < loaded.labels.size(); ++id) {
      out << id << " " << loaded.labels[id] << "\n";
    }
  }
  std::cout << "ingested n=" << graph.NumVertices()
            << " edges=" << graph.NumEdges() << "\n";
  return 0;
}

int RunInfect(const std::string& graph_path, bool weighted,
              const std::string& seed_label, double p, double q, int rounds,
              uint64_t rng_seed, bool no_protect_seed,
              const std::string& out_path) {
  EdgeListGraph loaded = LoadGraphFile(graph_path, weighted);
  InfectionConfig cfg;
  cfg.seed_vertex = ResolveLabel(loaded, seed_label);
  cfg.infect_probability = p;
  cfg.immune_probability = q;
  cfg.rounds = rounds;
  cfg.rng_seed = rng_seed;
  cfg.protect_seed = !no_protect_seed;
  std::vector<int> targeted = Infect(loaded.graph, cfg);
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  std::vector<std::string> labels;
  labels.reserve(targeted.size());
  for (int v : targeted) labels.push_back(loaded.labels[v]);
  WritePartitionLabels(out, labels);
  std::cout << "targeted size " << targeted.size() << " written to "
            << out_path << "\n";
  return 0;
}

int RunSearch(const std::string& graph_path, bool weighted,
              const std::string& partition_path, const std::string& seed_label,
              const std::string& sop_name, int sop_k, int k, int stop_threshold,
              const std::string& epsilon_text, const std::string& mode_text,
              uint64_t rng_seed, const std::string& trace_out) {
  EdgeListGraph loaded = LoadGraphFile(graph_path, weighted);
  std::ifstream pf(partition_path);
  if (!pf) throw std::runtime_error("cannot open partition " + partition_path);
  std::vector<int> targeted;
  for (const std::string& label : ReadPartitionLabels(pf)) {
    targeted.push_back(ResolveLabel(loaded, label));
  }
  Population pop(loaded.graph.NumVertices(), targeted);
  SoPDescriptor sop = SoPDescriptor::FromName(sop_name, sop_k);
  double epsilon = ParseEpsilonFlag(epsilon_text);
  NoiseMode mode = ParseMode(mode_text);
  int seed = ResolveLabel(loaded, seed_label);

  SearchTrace trace;
  if (std::isinf(epsilon)) {
    trace = Target(loaded.graph, pop, seed, sop, k, stop_threshold);
  } else {
    NoiseSource src(rng_seed, "search");
    trace = PTarget(loaded.graph, pop, seed, sop, k, stop_threshold, epsilon,
                    mode, src);
  }
  std::cout << "discovered " << trace.discoveries.size() << " targeted in "
            << trace.TotalBudget() << " queries across "
            << trace.component_events.size() << " components\n";
  if (!trace_out.empty()) {
    nlohmann::json queries = nlohmann::json::array();
    for (const auto& q : trace.queries) {
      queries.push_back({{"vertex", loaded.labels[q.vertex]},
                         {"targeted", q.targeted},
                         {"budget", q.budget}});
    }
    nlohmann::json events = nlohmann::json::array();
    for (const auto& e : trace.component_events) {
      events.push_back({{"budget", e.budget},
                        {"components", e.components},
                        {"epsilon", FormatDouble(e.epsilon_spent)},
                        {"risk_multiplier", FormatDouble(e.risk_multiplier)}});
    }
    nlohmann::json discoveries = nlohmann::json::array();
    for (int v : trace.discoveries) discoveries.push_back(loaded.labels[v]);
    nlohmann::json doc{{"queries", queries},
                       {"discoveries", discoveries},
                       {"component_events", events},
                       {"total_budget", trace.TotalBudget()}};
    std::ofstream out(trace_out);
    if (!out) throw std::runtime_error("cannot write " + trace_out);
    out << doc.dump(1) << "\n";
  }
  return 0;
}

int RunFlow(const std::string& graph_path, bool weighted,
            const std::string& vertex_label, const std::string& targets_csv,
            int k, const std::string& dump_lp) {
  EdgeListGraph loaded = LoadGraphFile(graph_path, weighted);
  int v = ResolveLabel(loaded, vertex_label);
  std::vector<int> targets;
  std::string token;
  std::istringstream ts(targets_csv);
  while (std::getline(ts, token, ',')) {
    if (!token.empty()) targets.push_back(ResolveLabel(loaded, token));
  }
  LayeredNetwork net = BuildLayeredNetwork(loaded.graph, v, targets, k);
  if (!dump_lp.empty()) {
    std::ofstream out(dump_lp);
    if (!out) throw std::runtime_error("cannot write " + dump_lp);
    WriteLpFormat(net, out);
  }
  FlowSolution sol = SolveFlowLp(net);
  bool ok = VerifyCertificate(net, sol);
  std::cout << "Flow_" << k << " = " << sol.value
            << " (certificate " << (ok ? "verified" : "FAILED") << ")\n";
  return ok ? 0 : 1;
}

int RunExperimentCmd(const std::string& config_path, const std::string& out_dir,
                     const std::string& master_seed_flag) {
  std::ifstream in(config_path);
  if (!in) throw std::runtime_error("cannot open config " + config_path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  ExperimentConfig cfg = ExperimentConfig::FromJsonText(buffer.str());
  // Seed priority: CLI flag, then environment, then config.
  if (!master_seed_flag.empty()) {
    cfg.master_seed = std::stoull(master_seed_flag);
  } else if (const char* env = std::getenv("PDPSEARCH_MASTER_SEED")) {
    cfg.master_seed = std::stoull(env);
  }
  ExperimentResult result = RunExperiment(cfg);
  EmitOutputs(result, out_dir);
  long long cap = cfg.budget_cap;
  std::cout << "regime " << result.regime << "; np discovered "
            << result.np_discovery_curve[cap - 1] << ", private mean "
            << FormatDouble(result.discovery_curve[cap - 1].mean)
            << " of " << result.targeted.size() << " targeted at budget "
            << cap << "\n";
  std::cout << "outputs in " << out_dir << "\n";
  return 0;
}

// Empirical protected-DP ratio check for the component search on a fixed
// 6-vertex neighboring pair (a protected vertex fully rewired).
int RunCheckPrivacy(int runs, double epsilon, const std::string& mode_text,
                    uint64_t rng_seed) {
  Graph g = Graph::FromEdges(
      6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 5}, {1, 4}});
  Graph g_prime = RewireVertex(g, 4, {0, 2});
  Population pop(6, {0, 1, 3});
  NoiseMode mode = ParseMode(mode_text);
  SoPDescriptor sop = SoPDescriptor::FromName("cn", 1);
  sop.configured_d_max = std::max(g.MaxDegree(), g_prime.MaxDegree());

  auto distribution = [&](const Graph& graph, std::string_view stream) {
    std::map<int, long long> counts;  // -1 keys the empty outcome
    NoiseSource base(rng_seed, stream);
    for (int run = 0; run < runs; ++run) {
      NoiseSource src = base.Split(std::to_string(run));
      std::vector<uint8_t> investigated(6, 0);
      investigated[0] = 1;
      SearchTrace trace;
      auto found = SearchCom(graph, pop, {0}, investigated, sop, epsilon, 2,
                             mode, &src, trace);
      counts[found.value_or(-1)] += 1;
    }
    return counts;
  };
  auto counts_g = distribution(g, "check/g");
  auto counts_gp = distribution(g_prime, "check/gp");

  bool ok = true;
  std::cout << "outcome  p(G)      p(G')     |log ratio|  bound(eps + 3sigma)\n";
  for (int outcome = -1; outcome < 6; ++outcome) {
    double n = static_cast<double>(runs);
    double p1 = (static_cast<double>(counts_g[outcome]) + 0.5) / (n + 1);
    double p2 = (static_cast<double>(counts_gp[outcome]) + 0.5) / (n + 1);
    double log_ratio = std::abs(std::log(p1 / p2));
    double sigma = std::sqrt((1 - p1) / ((n + 1) * p1) +
                             (1 - p2) / ((n + 1) * p2));
    double bound = epsilon + 3 * sigma;
    bool pass = log_ratio <= bound;
    ok = ok && pass;
    std::cout << (outcome < 0 ? std::string("(none)") : std::to_string(outcome))
              << "  " << FormatDouble(p1) << "  " << FormatDouble(p2) << "  "
              << FormatDouble(log_ratio) << "  " << FormatDouble(bound)
              << (pass ? "  ok" : "  VIOLATION") << "\n";
  }
  std::cout << (ok ? "empirical ratios within e^eps\n"
                   : "empirical ratio violation\n");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Privacy-preserving targeted search in social networks"};
  app.require_subcommand(1);

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Canonicalize an edge list");
  std::string in_path, out_prefix = "graph";
  bool weighted = false;
  long long min_weight = 0;
  ingest->add_option("--input", in_path, "edge list file")->required();
  ingest->add_option("--out-prefix", out_prefix, "output path prefix");
  ingest->add_flag("--weighted", weighted, "parse weights");
  ingest->add_option("--min-weight", min_weight,
                     "drop edges below this weight");

  // infect
  auto* infect = app.add_subcommand("infect", "Generate a targeted partition");
  std::string graph_path, seed_label = "0", partition_out = "partition.txt";
  double p = 0.5, q = 0.5;
  int rounds = 1;
  uint64_t rng_seed = 0;
  bool no_protect_seed = false;
  infect->add_option("--graph", graph_path, "edge list file")->required();
  infect->add_flag("--weighted", weighted, "parse weights");
  infect->add_option("--seed-vertex", seed_label, "seed vertex label");
  infect->add_option("--p", p, "infection probability")->required();
  infect->add_option("--q", q, "immunity probability")->required();
  infect->add_option("--rounds", rounds, "infection rounds")->required();
  infect->add_option("--rng-seed", rng_seed, "generator seed");
  infect->add_flag("--no-protect-seed", no_protect_seed,
                   "allow the seed to be immunized");
  infect->add_option("--out", partition_out, "partition file to write");

  // search
  auto* search = app.add_subcommand("search", "Run Target / PTarget");
  std::string partition_path, sop_name = "cn", epsilon_text = "inf";
  std::string mode_text = "appendix", trace_out;
  int sop_k = 1, k = 1, stop_threshold = 1;
  search->add_option("--graph", graph_path, "edge list file")->required();
  search->add_flag("--weighted", weighted, "parse weights");
  search->add_option("--partition", partition_path, "targeted labels file")
      ->required();
  search->add_option("--seed-vertex", seed_label, "seed vertex label")
      ->required();
  search->add_option("--sop", sop_name, "cn | path | triangle | flow");
  search->add_option("--sop-k", sop_k, "length bound for path/flow");
  search->add_option("--k", k, "components to recover")->required();
  search->add_option("--stop-threshold", stop_threshold,
                     "queries allowed per component search")
      ->required();
  search->add_option("--epsilon", epsilon_text, "per-round epsilon or 'inf'");
  search->add_option("--mode", mode_text, "appendix | maintext");
  search->add_option("--rng-seed", rng_seed, "noise seed");
  search->add_option("--trace-out", trace_out, "JSON trace output path");

  // flow
  auto* flow = app.add_subcommand("flow", "Compute Flow_k(v, S)");
  std::string vertex_label, targets_csv, dump_lp;
  flow->add_option("--graph", graph_path, "edge list file")->required();
  flow->add_flag("--weighted", weighted, "parse weights");
  flow->add_option("--vertex", vertex_label, "the vertex v")->required();
  flow->add_option("--targets", targets_csv, "comma-separated target labels")
      ->required();
  flow->add_option("--k", k, "length bound")->required();
  flow->add_option("--dump-lp", dump_lp, "write the LP in text format");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Run the full protocol");
  std::string config_path, out_dir = "out", master_seed_flag;
  experiment->add_option("--config", config_path, "JSON config")->required();
  experiment->add_option("--out", out_dir, "output directory");
  experiment->add_option("--master-seed", master_seed_flag,
                         "override the master seed");

  // check-privacy
  auto* check = app.add_subcommand("check-privacy",
                                   "Empirical DP ratio test for SearchCom");
  int runs = 100000;
  double epsilon = 1.0;
  check->add_option("--runs", runs, "runs per graph");
  check->add_option("--epsilon", epsilon, "per-round epsilon");
  check->add_option("--mode", mode_text, "appendix | maintext");
  check->add_option("--rng-seed", rng_seed, "noise seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) return RunIngest(in_path, out_prefix, weighted, min_weight);
    if (*infect) {
      return RunInfect(graph_path, weighted, seed_label, p, q, rounds,
                       rng_seed, no_protect_seed, partition_out);
    }
    if (*search) {
      return RunSearch(graph_path, weighted, partition_path, seed_label,
                       sop_name, sop_k, k, stop_threshold, epsilon_text,
                       mode_text, rng_seed, trace_out);
    }
    if (*flow) {
      return RunFlow(graph_path, weighted, vertex_label, targets_csv, k,
                     dump_lp);
    }
    if (*experiment) {
      return RunExperimentCmd(config_path, out_dir, master_seed_flag);
    }
    if (*check) return RunCheckPrivacy(runs, epsilon, mode_text, rng_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
