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

#include "pdpsearch/experiment.h"

#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace pdpsearch {

namespace {

using nlohmann::json;

double ParseEpsilon(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return kInfiniteEpsilon;
    throw std::invalid_argument("epsilon must be a number or \"inf\"");
  }
  return j.get<double>();
}

std::string SeedLabel(const json& j) {
  return j.is_string() ? j.get<std::string>() : std::to_string(j.get<long long>());
}

}  // namespace

ExperimentConfig ExperimentConfig::FromJsonText(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  cfg.graph_path = j.at("graph").get<std::string>();
  cfg.weighted = j.value("weighted", false);
  cfg.min_weight = j.value("min_weight", 0LL);

  if (j.contains("partition") == j.contains("infection")) {
    throw std::invalid_argument(
        "config needs exactly one of \"partition\" and \"infection\"");
  }
  if (j.contains("partition")) {
    cfg.partition_path = j.at("partition").get<std::string>();
  } else {
    cfg.use_infection = true;
    const json& inf = j.at("infection");
    cfg.infection_seed_label = SeedLabel(inf.at("seed_vertex"));
    cfg.infection.infect_probability = inf.at("p").get<double>();
    cfg.infection.immune_probability = inf.at("q").get<double>();
    cfg.infection.rounds = inf.at("rounds").get<int>();
    cfg.infection.rng_seed = inf.value("rng_seed", 0ULL);
    cfg.infection.protect_seed = inf.value("protect_seed", true);
  }

  const json& sop = j.at("sop");
  if (sop.is_string()) {
    cfg.sop =
        SoPDescriptor::FromName(sop.get<std::string>(), j.value("sop_k", 1));
  } else {
    cfg.sop = SoPDescriptor::FromName(sop.at("kind").get<std::string>(),
                                      sop.value("k", 1));
  }
  cfg.components_k = j.at("k").get<int>();
  cfg.stop_threshold = j.at("stop_threshold").get<int>();
  cfg.epsilon = ParseEpsilon(j.at("epsilon"));
  std::string mode = j.value("mode", "appendix");
  if (mode == "appendix") {
    cfg.mode = NoiseMode::kAppendix;
  } else if (mode == "maintext") {
    cfg.mode = NoiseMode::kMaintext;
  } else {
    throw std::invalid_argument("mode must be \"appendix\" or \"maintext\"");
  }
  cfg.delta = j.value("delta", 1e-3);
  cfg.trials = j.at("trials").get<int>();
  cfg.budget_cap = j.at("budget_cap").get<long long>();
  cfg.master_seed = j.value("master_seed", 0ULL);
  cfg.workers = j.value("workers", 0);
  if (j.contains("search_seed_vertex")) {
    cfg.search_seed_label = SeedLabel(j.at("search_seed_vertex"));
  }

  if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (cfg.budget_cap < 1) throw std::invalid_argument("budget cap must be >= 1");
  if (cfg.components_k < 1) throw std::invalid_argument("k must be >= 1");
  if (cfg.stop_threshold < 1) {
    throw std::invalid_argument("stop_threshold must be >= 1");
  }
  if (!(cfg.epsilon > 0.0)) {
    throw std::invalid_argument("epsilon must be positive or \"inf\"");
  }
  if (!(cfg.delta > 0.0) || !(cfg.delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  if (cfg.workers < 0) throw std::invalid_argument("workers must be >= 0");
  if (cfg.min_weight < 0) {
    throw std::invalid_argument("min_weight must be >= 0");
  }
  return cfg;
}

int ClassifyRegime(const std::vector<std::vector<int>>& components) {
  long long total = 0;
  size_t largest = 0;
  for (const auto& comp : components) {
    total += static_cast<long long>(comp.size());
    largest = std::max(largest, comp.size());
  }
  if (total == 0) {
    throw std::invalid_argument("regime classification needs a nonempty T");
  }
  double share = static_cast<double>(largest) / static_cast<double>(total);
  if (share > 0.5) return 1;
  if (share < 0.05) return 3;
  return 2;
}

namespace {

int ResolveLabel(const EdgeListGraph& loaded, const std::string& label,
                 const char* what) {
  auto it = loaded.id_of.find(label);
  if (it == loaded.id_of.end()) {
    throw std::invalid_argument(std::string(what) + " label '" + label +
                                "' not present in graph");
  }
  return it->second;
}

// Per-trial spent-epsilon step function evaluated at each budget 1..cap;
// steps only at component events, by construction.
std::vector<double> EpsilonAtBudgets(const SearchTrace& trace, long long cap) {
  std::vector<double> eps(cap, 0.0);
  size_t next_event = 0;
  double current = 0.0;
  for (long long b = 1; b <= cap; ++b) {
    while (next_event < trace.component_events.size() &&
           trace.component_events[next_event].budget <= b) {
      current = trace.component_events[next_event].epsilon_spent;
      ++next_event;
    }
    eps[b - 1] = current;
  }
  return eps;
}

std::vector<long long> DiscoveriesAtBudgets(const SearchTrace& trace,
                                            long long cap) {
  std::vector<long long> counts(cap, 0);
  size_t next = 0;
  long long current = 0;
  for (long long b = 1; b <= cap; ++b) {
    while (next < trace.discovery_budgets.size() &&
           trace.discovery_budgets[next] <= b) {
      ++current;
      ++next;
    }
    counts[b - 1] = current;
  }
  return counts;
}

}  // namespace

ExperimentResult RunExperiment(const ExperimentConfig& cfg) {
  ExperimentResult result;
  result.config = cfg;

  std::ifstream graph_file(cfg.graph_path);
  if (!graph_file) {
    throw std::invalid_argument("cannot open graph file " + cfg.graph_path);
  }
  EdgeListGraph loaded = LoadEdgeList(graph_file, cfg.weighted);
  Graph graph = cfg.min_weight >= 1
                    ? SparsifyByWeight(loaded.graph, cfg.min_weight)
                    : loaded.graph;
  result.vertex_labels = loaded.labels;

  if (cfg.use_infection) {
    InfectionConfig infection = cfg.infection;
    infection.seed_vertex =
        ResolveLabel(loaded, cfg.infection_seed_label, "infection seed");
    result.targeted = Infect(graph, infection);
  } else {
    std::ifstream partition_file(cfg.partition_path);
    if (!partition_file) {
      throw std::invalid_argument("cannot open partition file " +
                                  cfg.partition_path);
    }
    for (const std::string& label : ReadPartitionLabels(partition_file)) {
      result.targeted.push_back(ResolveLabel(loaded, label, "partition"));
    }
    std::sort(result.targeted.begin(), result.targeted.end());
    result.targeted.erase(
        std::unique(result.targeted.begin(), result.targeted.end()),
        result.targeted.end());
  }
  if (result.targeted.empty()) {
    throw std::invalid_argument("targeted subpopulation is empty");
  }

  int search_seed;
  if (!cfg.search_seed_label.empty()) {
    search_seed = ResolveLabel(loaded, cfg.search_seed_label, "search seed");
  } else if (cfg.use_infection) {
    search_seed = ResolveLabel(loaded, cfg.infection_seed_label, "search seed");
  } else {
    throw std::invalid_argument(
        "search_seed_vertex is required with an explicit partition");
  }

  Population population(graph.NumVertices(), result.targeted);
  if (!population.IsTargeted(search_seed)) {
    throw std::invalid_argument("search seed is not targeted");
  }
  result.ground_truth_components = TargetedComponents(graph, population);
  result.regime = ClassifyRegime(result.ground_truth_components);

  // One deterministic non-private run.
  {
    Population pop = population;
    result.np_trace = Target(graph, pop, search_seed, cfg.sop,
                             cfg.components_k, cfg.stop_threshold);
    result.np_trace.ledger.delta = cfg.delta;
  }

  // Seeded private trials, parallel up to `workers`, folded in trial
  // order.  Stream-splitting by trial index keeps earlier trials stable
  // when more are added.
  result.trial_traces.assign(cfg.trials, SearchTrace{});
  int workers = cfg.workers > 0
                    ? cfg.workers
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min(workers, cfg.trials));
  std::atomic<int> next_trial{0};
  auto worker = [&]() {
    for (;;) {
      int trial = next_trial.fetch_add(1);
      if (trial >= cfg.trials) return;
      NoiseSource src(cfg.master_seed, "trial/" + std::to_string(trial));
      Population pop = population;
      result.trial_traces[trial] =
          PTarget(graph, pop, search_seed, cfg.sop, cfg.components_k,
                  cfg.stop_threshold, cfg.epsilon, cfg.mode, src);
      result.trial_traces[trial].ledger.delta = cfg.delta;
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int i = 0; i < workers; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  // Aggregate: mean and population standard deviation per budget, plus the
  // epsilon / risk-multiplier step curves.
  const long long cap = cfg.budget_cap;
  result.np_discovery_curve = DiscoveriesAtBudgets(result.np_trace, cap);
  result.discovery_curve.assign(cap, {});
  result.epsilon_curve.assign(cap, 0.0);
  result.risk_multiplier_curve.assign(cap, 0.0);
  std::vector<double> sum(cap, 0.0), sum_sq(cap, 0.0);
  for (const SearchTrace& trace : result.trial_traces) {
    std::vector<long long> counts = DiscoveriesAtBudgets(trace, cap);
    std::vector<double> eps = EpsilonAtBudgets(trace, cap);
    for (long long b = 0; b < cap; ++b) {
      double d = static_cast<double>(counts[b]);
      sum[b] += d;
      sum_sq[b] += d * d;
      result.epsilon_curve[b] += eps[b];
      result.risk_multiplier_curve[b] += std::exp(eps[b]);
    }
  }
  const double n_trials = static_cast<double>(cfg.trials);
  for (long long b = 0; b < cap; ++b) {
    double mean = sum[b] / n_trials;
    double variance = std::max(0.0, sum_sq[b] / n_trials - mean * mean);
    result.discovery_curve[b] = {mean, std::sqrt(variance)};
    result.epsilon_curve[b] /= n_trials;
    result.risk_multiplier_curve[b] /= n_trials;
  }
  return result;
}

std::string FormatDouble(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

namespace {

const char* HaltReasonName(HaltReason reason) {
  switch (reason) {
    case HaltReason::kComponentBudget:
      return "component_budget";
    case HaltReason::kGlobalRounds:
      return "global_rounds";
    case HaltReason::kExhaustedVertices:
      return "exhausted_vertices";
  }
  return "unknown";
}

json TraceToJson(const SearchTrace& trace) {
  json queries = json::array();
  for (const auto& q : trace.queries) {
    queries.push_back({q.vertex, q.targeted ? 1 : 0, q.budget});
  }
  json events = json::array();
  for (const auto& e : trace.component_events) {
    events.push_back({{"budget", e.budget},
                      {"components", e.components},
                      {"epsilon", FormatDouble(e.epsilon_spent)},
                      {"risk_multiplier", FormatDouble(e.risk_multiplier)}});
  }
  return json{{"queries", queries},
              {"discoveries", trace.discoveries},
              {"discovery_budgets", trace.discovery_budgets},
              {"component_events", events},
              {"ledger",
               {{"per_round_epsilon", FormatDouble(trace.ledger.per_round_epsilon)},
                {"rounds_used", trace.ledger.rounds_used},
                {"delta", trace.ledger.delta},
                {"epsilon_basic", FormatDouble(ComposeBasic(trace.ledger))},
                {"epsilon_advanced",
                 FormatDouble(ComposeAdvanced(trace.ledger))}}},
              {"halted_by", HaltReasonName(trace.halted_by)}};
}

void WriteCsvRows(std::ostream& out, const std::string& trial_name,
                  const SearchTrace& trace, long long cap) {
  std::vector<long long> discovered = DiscoveriesAtBudgets(trace, cap);
  std::vector<double> eps = EpsilonAtBudgets(trace, cap);
  size_t next_event = 0;
  int components = 0;
  for (long long b = 1; b <= cap; ++b) {
    while (next_event < trace.component_events.size() &&
           trace.component_events[next_event].budget <= b) {
      components = trace.component_events[next_event].components;
      ++next_event;
    }
    out << trial_name << "," << b << "," << discovered[b - 1] << ","
        << components << "," << FormatDouble(eps[b - 1]) << ","
        << FormatDouble(std::exp(eps[b - 1])) << "\n";
  }
}

void WriteSvg(const ExperimentResult& result, std::ostream& out) {
  const long long cap = result.config.budget_cap;
  const double width = 900, height = 520;
  const double left = 70, right = 850, top = 40, bottom = 460;
  double max_y = 1.0;
  for (long long c : result.np_discovery_curve) {
    max_y = std::max(max_y, static_cast<double>(c));
  }
  for (const auto& p : result.discovery_curve) {
    max_y = std::max(max_y, p.mean + p.stddev);
  }
  double max_risk = 1.0;
  for (double r : result.risk_multiplier_curve) {
    if (std::isfinite(r)) max_risk = std::max(max_risk, r);
  }
  auto x_of = [&](long long b) {
    return left + (right - left) * static_cast<double>(b - 1) /
                      static_cast<double>(std::max<long long>(cap - 1, 1));
  };
  auto y_of = [&](double v) { return bottom - (bottom - top) * v / max_y; };
  auto y_risk = [&](double r) {
    double span = std::max(max_risk - 1.0, 1e-9);
    return bottom - (bottom - top) * (r - 1.0) / span;
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right
      << "\" y2=\"" << bottom << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left
      << "\" y2=\"" << bottom << "\" stroke=\"black\"/>\n";

  // 1-sigma band around the private mean.
  out << "<polygon fill=\"#f4b6b6\" stroke=\"none\" points=\"";
  for (long long b = 1; b <= cap; ++b) {
    const auto& p = result.discovery_curve[b - 1];
    out << FormatDouble(x_of(b)) << "," << FormatDouble(y_of(p.mean + p.stddev))
        << " ";
  }
  for (long long b = cap; b >= 1; --b) {
    const auto& p = result.discovery_curve[b - 1];
    out << FormatDouble(x_of(b)) << ","
        << FormatDouble(y_of(std::max(0.0, p.mean - p.stddev)));
    if (b > 1) out << " ";
  }
  out << "\"/>\n";

  auto polyline = [&](const char* color, auto&& value_at, auto&& y_scale) {
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (long long b = 1; b <= cap; ++b) {
      out << FormatDouble(x_of(b)) << "," << FormatDouble(y_scale(value_at(b)));
      if (b < cap) out << " ";
    }
    out << "\"/>\n";
  };
  polyline("#1f4da0", [&](long long b) {
    return static_cast<double>(result.np_discovery_curve[b - 1]);
  }, y_of);
  polyline("#c0392b", [&](long long b) {
    return result.discovery_curve[b - 1].mean;
  }, y_of);
  polyline("#1e8449", [&](long long b) {
    double r = result.risk_multiplier_curve[b - 1];
    return std::isfinite(r) ? r : max_risk;
  }, y_risk);

  // Component-event markers on the non-private curve.
  for (const auto& event : result.np_trace.component_events) {
    long long b = std::max<long long>(event.budget, 1);
    if (b > cap) continue;
    out << "<circle cx=\"" << FormatDouble(x_of(b)) << "\" cy=\""
        << FormatDouble(y_of(
               static_cast<double>(result.np_discovery_curve[b - 1])))
        << "\" r=\"4\" fill=\"#1f4da0\"/>\n";
  }
  out << "<text x=\"" << (left + 10) << "\" y=\"" << (top - 10)
      << "\" font-size=\"14\">discovered vs budget (blue: non-private, red: "
         "private mean +-1 sigma, green: risk multiplier)</text>\n";
  out << "<text x=\"" << (right - 40) << "\" y=\"" << (bottom + 30)
      << "\" font-size=\"12\">budget</text>\n";
  out << "</svg>\n";
}

}  // namespace

void EmitOutputs(const ExperimentResult& result,
                 const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory " +
                             out_dir.string() + ": " + ec.message());
  }
  auto open = [&](const char* name) {
    std::filesystem::path path = out_dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      throw std::runtime_error("cannot write " + path.string());
    }
    return out;
  };

  {
    std::ofstream csv = open("results.csv");
    csv << "trial,budget,discovered,components_found,epsilon,risk_multiplier\n";
    WriteCsvRows(csv, "np", result.np_trace, result.config.budget_cap);
    for (int trial = 0; trial < static_cast<int>(result.trial_traces.size());
         ++trial) {
      WriteCsvRows(csv, std::to_string(trial), result.trial_traces[trial],
                   result.config.budget_cap);
    }
  }

  {
    const ExperimentConfig& cfg = result.config;
    json config_echo{
        {"graph", cfg.graph_path},
        {"weighted", cfg.weighted},
        {"min_weight", cfg.min_weight},
        {"sop", {{"kind", cfg.sop.Name()}, {"k", cfg.sop.k}}},
        {"k", cfg.components_k},
        {"stop_threshold", cfg.stop_threshold},
        {"epsilon", FormatDouble(cfg.epsilon)},
        {"mode", cfg.mode == NoiseMode::kAppendix ? "appendix" : "maintext"},
        {"delta", cfg.delta},
        {"trials", cfg.trials},
        {"budget_cap", cfg.budget_cap},
        {"master_seed", cfg.master_seed},
    };
    json trials = json::array();
    for (const auto& trace : result.trial_traces) {
      trials.push_back(TraceToJson(trace));
    }
    std::vector<size_t> component_sizes;
    for (const auto& comp : result.ground_truth_components) {
      component_sizes.push_back(comp.size());
    }
    json curves{{"np", result.np_discovery_curve}};
    json mean = json::array(), stddev = json::array(), eps = json::array(),
         risk = json::array();
    for (long long b = 0; b < result.config.budget_cap; ++b) {
      mean.push_back(result.discovery_curve[b].mean);
      stddev.push_back(result.discovery_curve[b].stddev);
      eps.push_back(FormatDouble(result.epsilon_curve[b]));
      risk.push_back(FormatDouble(result.risk_multiplier_curve[b]));
    }
    curves["mean"] = mean;
    curves["stddev"] = stddev;
    curves["epsilon"] = eps;
    curves["risk_multiplier"] = risk;
    json doc{{"config", config_echo},
             {"targeted", result.targeted},
             {"ground_truth_component_sizes", component_sizes},
             {"regime", result.regime},
             {"np", TraceToJson(result.np_trace)},
             {"trials", trials},
             {"curves", curves}};
    std::ofstream js = open("results.json");
    js << doc.dump(1) << "\n";
  }

  {
    std::ofstream svg = open("curves.svg");
    WriteSvg(result, svg);
  }
}

}  // namespace pdpsearch
