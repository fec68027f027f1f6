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
//
// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// fails.  Criterion 9 shells out to the CLI binary given as argv[1].

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <vector>

#include "pdpsearch/experiment.h"
#include "pdpsearch/flow_lp.h"
#include "pdpsearch/infection.h"
#include "pdpsearch/proximity.h"
#include "pdpsearch/search.h"
#include "test_support.h"

namespace pdpsearch {
namespace {

namespace fs = std::filesystem;
using pdpsearch::testing::MaxFlowOracle;
using pdpsearch::testing::RandomGraph;

struct Criterion {
  bool pass = true;
  std::ostringstream detail;
};

// ---------------------------------------------------------------------
// 1. SFS output lists identical across every protected rewiring, exactly.
Criterion CheckSfsZeroPrivacyCost() {
  Criterion c;
  NoiseSource rng(20260811, "c1");
  long long rewirings = 0;
  for (int draw = 0; draw < 500 && c.pass; ++draw) {
    int n = 2 + static_cast<int>(rng.NextU64() % 6);  // 2..7
    double edge_p = 0.3 + 0.2 * static_cast<double>(rng.NextU64() % 3);
    Graph g = RandomGraph(n, edge_p, 0xC1000 + draw);
    std::vector<int> targeted, protected_vertices;
    for (int v = 0; v < n; ++v) {
      (rng.NextUniform() < 0.5 ? targeted : protected_vertices).push_back(v);
    }
    if (targeted.empty()) {
      targeted.push_back(protected_vertices.back());
      protected_vertices.pop_back();
    }
    Population pop(n, targeted);
    std::map<int, std::vector<int>> baseline;
    for (int seed : targeted) {
      Population fresh = pop;
      baseline[seed] = Sfs(g, fresh, seed).targeted;
    }
    for (int v : protected_vertices) {
      std::vector<int> others;
      for (int u = 0; u < n; ++u) {
        if (u != v) others.push_back(u);
      }
      for (uint32_t mask = 0; mask < (1u << others.size()) && c.pass; ++mask) {
        std::vector<int> new_neighbors;
        for (size_t i = 0; i < others.size(); ++i) {
          if (mask & (1u << i)) new_neighbors.push_back(others[i]);
        }
        Graph rewired = RewireVertex(g, v, new_neighbors);
        ++rewirings;
        for (int seed : targeted) {
          Population fresh = pop;
          if (Sfs(rewired, fresh, seed).targeted != baseline[seed]) {
            c.pass = false;
            c.detail << "divergence at draw " << draw << " vertex " << v
                     << " mask " << mask << " seed " << seed;
            break;
          }
        }
      }
    }
  }
  if (c.pass) {
    c.detail << "500 graph draws, " << rewirings
             << " full rewirings, outputs identical";
  }
  return c;
}

// ---------------------------------------------------------------------
// 2. Brute-force targeted sensitivity stays within the closed forms.
Criterion CheckSensitivityBounds() {
  Criterion c;
  struct Case {
    const char* name;
    int k;
    // The aggregate comparison from the criterion (given the probe's
    // largest observed d_max); the probe also enforces the per-pair bound.
    double (*limit)(int d_max);
  };
  const Case cases[] = {
      {"cn", 1, [](int) { return 1.0; }},
      {"path", 1, [](int) { return 0.0; }},
      {"triangle", 1, [](int d) { return static_cast<double>(d); }},
      {"flow", 2, [](int d) { return static_cast<double>(d); }},
      {"path", 2, [](int d) { return static_cast<double>(d); }},
      {"path", 3, [](int d) { return 2.0 * d * d; }},
  };
  for (const Case& test_case : cases) {
    SoPDescriptor sop = SoPDescriptor::FromName(test_case.name, test_case.k);
    SensitivityProbe probe =
        BruteForceTargetedSensitivity(sop, 6, 500, 0xC2000 + test_case.k);
    double limit = test_case.limit(probe.max_degree);
    bool exact_zero_ok =
        !(test_case.k == 1 && std::string(test_case.name) == "path") ||
        probe.max_difference == 0.0;
    if (probe.max_difference > limit || !probe.within_bound || !exact_zero_ok) {
      c.pass = false;
      c.detail << test_case.name << "_" << test_case.k << " max diff "
               << probe.max_difference << " vs limit " << limit << "; ";
    } else {
      c.detail << test_case.name << (test_case.k > 1 ? std::to_string(test_case.k) : "")
               << "=" << probe.max_difference << " ";
    }
  }
  if (c.pass) c.detail << "(500 trials each, n=6, per-pair bounds held)";
  return c;
}

// ---------------------------------------------------------------------
// 3. Flow LP anchor values, certificates, k-monotonicity, max-flow cap.
Criterion CheckFlowLp() {
  Criterion c;
  auto solve = [](const Graph& g, int v, const std::vector<int>& targets,
                  int k) {
    LayeredNetwork net = BuildLayeredNetwork(g, v, targets, k);
    FlowSolution sol = SolveFlowLp(net);
    if (!VerifyCertificate(net, sol)) {
      throw std::logic_error("certificate verification failed");
    }
    return sol.value;
  };
  try {
    Graph disconnected = Graph::FromEdges(4, {{0, 1}, {2, 3}});
    if (solve(disconnected, 3, {0, 1}, 3) != 0) {
      c.pass = false;
      c.detail << "disconnected instance nonzero; ";
    }
    Graph two_paths = Graph::FromEdges(5, {{0, 1}, {1, 4}, {2, 3}, {3, 4}});
    if (solve(two_paths, 4, {0, 2}, 2) != 2) {
      c.pass = false;
      c.detail << "two disjoint paths != 2; ";
    }
    Graph f1 = Graph::FromEdges(4, {{0, 2}, {1, 2}, {2, 3}});
    if (solve(f1, 3, {0, 1}, 2) != 1) {
      c.pass = false;
      c.detail << "coupled F1 != 1; ";
    }
    NoiseSource rng(0xC3, "instances");
    int solves = 3;
    for (int instance = 0; instance < 50 && c.pass; ++instance) {
      int n = 6 + static_cast<int>(rng.NextU64() % 15);  // 6..20
      double edge_p = 0.15 + 0.1 * static_cast<double>(rng.NextU64() % 3);
      Graph g = RandomGraph(n, edge_p, 0xC3000 + instance);
      int v = static_cast<int>(rng.NextU64() % n);
      std::vector<int> targets;
      for (int t = 0; t < n; ++t) {
        if (t != v && rng.NextUniform() < 0.25) targets.push_back(t);
      }
      if (targets.empty()) targets.push_back(v == 0 ? 1 : 0);
      Rational previous(-1);
      Rational oracle_cap(MaxFlowOracle(g, targets, v));
      for (int k = 1; k <= 4; ++k) {
        Rational value = solve(g, v, targets, k);
        ++solves;
        if (value < previous) {
          c.pass = false;
          c.detail << "monotonicity broke at instance " << instance << " k="
                   << k << "; ";
        }
        if (value > oracle_cap) {
          c.pass = false;
          c.detail << "exceeded max-flow oracle at instance " << instance
                   << " k=" << k << "; ";
        }
        previous = value;
      }
    }
    if (c.pass) {
      c.detail << "anchors 0/2/1 exact, " << solves
               << " certified solves, monotone in k, <= max-flow oracle";
    }
  } catch (const std::exception& e) {
    c.pass = false;
    c.detail << "exception: " << e.what();
  }
  return c;
}

// ---------------------------------------------------------------------
// 4. Composition formulas to 12 significant digits; risk anchor.
Criterion CheckComposition() {
  Criterion c;
  NoiseSource rng(0xC4, "triples");
  double worst_rel = 0.0;
  for (int i = 0; i < 100; ++i) {
    double epsilon = 0.001 + 1.999 * rng.NextUniform();
    int rounds = static_cast<int>(rng.NextU64() % 40);
    double delta = std::pow(10.0, -1.0 - 8.0 * rng.NextUniform());
    PrivacyLedger ledger{epsilon, rounds, delta};
    long double basic_hp =
        static_cast<long double>(rounds) * static_cast<long double>(epsilon);
    long double advanced_hp =
        rounds == 0
            ? 0.0L
            : 2.0L *
                  sqrtl(2.0L * static_cast<long double>(rounds) *
                        logl(1.0L / static_cast<long double>(delta))) *
                  static_cast<long double>(epsilon);
    auto rel_err = [](double got, long double want) {
      if (want == 0.0L) return static_cast<double>(std::abs(got));
      return static_cast<double>(
          fabsl(static_cast<long double>(got) - want) / fabsl(want));
    };
    worst_rel = std::max(worst_rel, rel_err(ComposeBasic(ledger), basic_hp));
    worst_rel =
        std::max(worst_rel, rel_err(ComposeAdvanced(ledger), advanced_hp));
  }
  if (worst_rel > 1e-12) {
    c.pass = false;
    c.detail << "relative error " << worst_rel << " > 1e-12";
    return c;
  }
  double plateau = RiskMultiplier(0.15);
  if (plateau < 1.16 || plateau > 1.17) {
    c.pass = false;
    c.detail << "risk_multiplier(0.15) = " << plateau << " outside [1.16,1.17]";
    return c;
  }
  c.detail << "100 random triples, worst relative error "
           << FormatDouble(worst_rel) << "; e^0.15 = " << FormatDouble(plateau);
  return c;
}

// ---------------------------------------------------------------------
// 5. Empirical protected-DP of the component search on a fixed pair.
Criterion CheckEmpiricalSearchComPrivacy() {
  Criterion c;
  Graph g = Graph::FromEdges(
      6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 5}, {1, 4}});
  Graph g_prime = RewireVertex(g, 4, {0, 2});
  Population pop(6, {0, 1, 3});
  SoPDescriptor sop = SoPDescriptor::FromName("cn", 1);
  sop.configured_d_max = std::max(g.MaxDegree(), g_prime.MaxDegree());
  const double epsilon = 1.0;
  const int runs = 100000;
  auto run_counts = [&](const Graph& graph, const char* stream) {
    std::map<int, long long> counts;
    NoiseSource base(0xC5, stream);
    for (int run = 0; run < runs; ++run) {
      NoiseSource src = base.Split(std::to_string(run));
      std::vector<uint8_t> investigated(6, 0);
      investigated[0] = 1;
      SearchTrace trace;
      auto found = SearchCom(graph, pop, {0}, investigated, sop, epsilon, 2,
                             NoiseMode::kAppendix, &src, trace);
      counts[found.value_or(-1)] += 1;
    }
    return counts;
  };
  auto counts_g = run_counts(g, "c5/g");
  auto counts_gp = run_counts(g_prime, "c5/gp");
  double worst_margin = -1e9;
  for (int outcome = -1; outcome < 6; ++outcome) {
    if (counts_g[outcome] + counts_gp[outcome] == 0) continue;
    double n = runs;
    double p1 = (counts_g[outcome] + 0.5) / (n + 1);
    double p2 = (counts_gp[outcome] + 0.5) / (n + 1);
    double log_ratio = std::abs(std::log(p1 / p2));
    double sigma =
        std::sqrt((1 - p1) / ((n + 1) * p1) + (1 - p2) / ((n + 1) * p2));
    worst_margin = std::max(worst_margin, log_ratio - (epsilon + 3 * sigma));
    if (log_ratio > epsilon + 3 * sigma) {
      c.pass = false;
      c.detail << "outcome " << outcome << " log ratio " << log_ratio
               << " > bound " << (epsilon + 3 * sigma) << "; ";
    }
  }
  if (c.pass) {
    c.detail << "1e5 runs per graph, every outcome within e^eps (worst slack "
             << FormatDouble(-worst_margin) << ")";
  }
  return c;
}

// ---------------------------------------------------------------------
// 6. PTarget(eps = inf) is trace-identical to Target.
Criterion CheckDegeneration() {
  Criterion c;
  SoPDescriptor cn = SoPDescriptor::FromName("cn", 1);
  for (int fixture = 0; fixture < 20 && c.pass; ++fixture) {
    NoiseSource rng(0xC600 + fixture, "gen");
    int n = 10 + static_cast<int>(rng.NextU64() % 30);
    Graph g = RandomGraph(n, 0.2, 0xC6000 + fixture);
    std::vector<int> targeted;
    for (int v = 0; v < n; ++v) {
      if (rng.NextUniform() < 0.3) targeted.push_back(v);
    }
    if (targeted.empty()) targeted.push_back(0);
    Population pop_np(n, targeted);
    Population pop_p(n, targeted);
    int seed_vertex = targeted[static_cast<size_t>(rng.NextU64()) % targeted.size()];
    int k = 1 + static_cast<int>(rng.NextU64() % 4);
    int stop = 1 + static_cast<int>(rng.NextU64() % 6);
    SearchTrace np = Target(g, pop_np, seed_vertex, cn, k, stop);
    NoiseSource src(fixture, "noise");
    SearchTrace p = PTarget(g, pop_p, seed_vertex, cn, k, stop,
                            kInfiniteEpsilon, NoiseMode::kAppendix, src);
    bool equal = np.queries.size() == p.queries.size() &&
                 np.discoveries == p.discoveries &&
                 np.discovery_budgets == p.discovery_budgets &&
                 np.halted_by == p.halted_by;
    for (size_t i = 0; equal && i < np.queries.size(); ++i) {
      equal = np.queries[i].vertex == p.queries[i].vertex &&
              np.queries[i].targeted == p.queries[i].targeted &&
              np.queries[i].budget == p.queries[i].budget;
    }
    if (!equal) {
      c.pass = false;
      c.detail << "trace mismatch on fixture " << fixture;
    }
  }
  if (c.pass) c.detail << "20 random fixtures, query-for-query equality";
  return c;
}

// ---------------------------------------------------------------------
// 7. Regime reproduction on the pre-registered 2000-vertex fixtures.
struct RegimeStats {
  long long np_at_cap = 0;
  double private_mean_at_cap = 0.0;
  int regime = 0;
  size_t targeted_size = 0;
};

RegimeStats RunRegime(const Graph& g, const InfectionConfig& infection, int k,
                      int stop, long long cap, int trials, uint64_t master) {
  RegimeStats stats;
  std::vector<int> targeted = Infect(g, infection);
  stats.targeted_size = targeted.size();
  Population pop(g.NumVertices(), targeted);
  stats.regime = ClassifyRegime(TargetedComponents(g, pop));
  SoPDescriptor cn = SoPDescriptor::FromName("cn", 1);
  const double epsilon = 0.05;  // Lap(20) on the sensitivity-1 CN statistic
  {
    Population fresh = pop;
    SearchTrace np =
        Target(g, fresh, infection.seed_vertex, cn, k, stop);
    stats.np_at_cap = np.DiscoveredAtBudget(cap);
  }
  double sum = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    NoiseSource src(master, "trial/" + std::to_string(trial));
    Population fresh = pop;
    SearchTrace trace = PTarget(g, fresh, infection.seed_vertex, cn, k, stop,
                                epsilon, NoiseMode::kMaintext, src);
    sum += static_cast<double>(trace.DiscoveredAtBudget(cap));
  }
  stats.private_mean_at_cap = sum / trials;
  return stats;
}

Criterion CheckRegimes() {
  Criterion c;
  Graph g = RandomGraph(2000, 8.0 / 1999.0, 90210);
  // Fixture integrity: the pre-registered draw (independent script) had
  // 8072 edges and max degree 20; any drift means the generator changed.
  if (g.NumEdges() != 8072 || g.MaxDegree() != 20) {
    c.pass = false;
    c.detail << "fixture drift: edges " << g.NumEdges() << " dmax "
             << g.MaxDegree();
    return c;
  }

  InfectionConfig regime1;
  regime1.seed_vertex = 0;
  regime1.infect_probability = 0.5;
  regime1.immune_probability = 0.05;
  regime1.rounds = 4;
  regime1.rng_seed = 4001;
  RegimeStats r1 = RunRegime(g, regime1, /*k=*/4, /*stop=*/30, /*cap=*/1550,
                             /*trials=*/200, /*master=*/0xC701);
  if (r1.regime != 1) {
    c.pass = false;
    c.detail << "regime-1 fixture classified as " << r1.regime << "; ";
  }
  double ratio = r1.np_at_cap > 0 ? r1.private_mean_at_cap /
                                        static_cast<double>(r1.np_at_cap)
                                  : 0.0;
  if (ratio < 0.9) {
    c.pass = false;
    c.detail << "regime-1 private/np ratio " << ratio << " < 0.9; ";
  }

  InfectionConfig regime3;
  regime3.seed_vertex = 0;
  regime3.infect_probability = 0.5;
  regime3.immune_probability = 0.92;
  regime3.rounds = 7;
  regime3.rng_seed = 4003;
  RegimeStats r3 = RunRegime(g, regime3, /*k=*/8, /*stop=*/25, /*cap=*/250,
                             /*trials=*/200, /*master=*/0xC703);
  if (r3.regime != 3) {
    c.pass = false;
    c.detail << "regime-3 fixture classified as " << r3.regime << "; ";
  }
  double np_frac =
      static_cast<double>(r3.np_at_cap) / static_cast<double>(r3.targeted_size);
  double private_frac = r3.private_mean_at_cap /
                        static_cast<double>(r3.targeted_size);
  if (np_frac >= 0.3 || private_frac >= 0.3) {
    c.pass = false;
    c.detail << "regime-3 fractions np " << np_frac << " private "
             << private_frac << " not both < 0.3; ";
  }
  if (c.pass) {
    c.detail << "regime1: private/np = " << FormatDouble(ratio)
             << " (np " << r1.np_at_cap << " of " << r1.targeted_size
             << "); regime3: np " << FormatDouble(np_frac) << ", private "
             << FormatDouble(private_frac) << " of |T|=" << r3.targeted_size;
  }
  return c;
}

// ---------------------------------------------------------------------
// 8. Star-graph infection expectation, three parameter settings.
Criterion CheckInfectionStatistics() {
  Criterion c;
  const int leaves = 30;
  std::vector<std::pair<int, int>> edges;
  for (int leaf = 1; leaf <= leaves; ++leaf) edges.emplace_back(0, leaf);
  Graph star = Graph::FromEdges(leaves + 1, edges);
  const std::pair<double, double> settings[] = {
      {0.3, 0.2}, {0.5, 0.5}, {0.8, 0.1}};
  const int trials = 10000;
  for (auto [p, q] : settings) {
    double sum = 0, sum_sq = 0;
    for (int trial = 0; trial < trials; ++trial) {
      InfectionConfig cfg;
      cfg.seed_vertex = 0;
      cfg.infect_probability = p;
      cfg.immune_probability = q;
      cfg.rounds = 1;
      cfg.rng_seed = 0xC80000 + trial;
      cfg.protect_seed = false;
      double size = static_cast<double>(Infect(star, cfg).size());
      sum += size;
      sum_sq += size * size;
    }
    double mean = sum / trials;
    double expected = (1.0 + leaves * p) * (1.0 - q);
    double sigma_mean = std::sqrt((sum_sq / trials - mean * mean) / trials);
    if (std::abs(mean - expected) > 3 * sigma_mean) {
      c.pass = false;
      c.detail << "p=" << p << " q=" << q << ": mean " << mean
               << " vs expected " << expected << " (3 sigma "
               << 3 * sigma_mean << "); ";
    } else {
      c.detail << "(" << p << "," << q << "): " << FormatDouble(mean) << "~"
               << FormatDouble(expected) << " ";
    }
  }
  if (c.pass) c.detail << "within 3 sigma over 1e4 trials each";
  return c;
}

// ---------------------------------------------------------------------
// 9. Byte-identical results.csv across two CLI invocations.
Criterion CheckReproducibility(const std::string& cli_path) {
  Criterion c;
  if (cli_path.empty()) {
    c.pass = false;
    c.detail << "CLI binary path missing (pass it as argv[1])";
    return c;
  }
  fs::path dir = fs::temp_directory_path() / "pdpsearch_acceptance_c9";
  fs::create_directories(dir);
  {
    std::ofstream graph(dir / "fixture.edges");
    graph << "0 1\n1 2\n2 3\n3 4\n4 5\n5 6\n6 7\n7 8\n8 9\n9 10\n10 11\n";
  }
  {
    std::ofstream partition(dir / "fixture.targets");
    partition << "0\n1\n3\n4\n6\n7\n9\n10\n";
  }
  {
    std::ofstream config(dir / "config.json");
    config << R"({
      "graph": ")" << (dir / "fixture.edges").string() << R"(",
      "partition": ")" << (dir / "fixture.targets").string() << R"(",
      "search_seed_vertex": 0,
      "sop": {"kind": "cn", "k": 1},
      "k": 3, "stop_threshold": 6, "epsilon": 0.1, "mode": "appendix",
      "trials": 4, "budget_cap": 18, "master_seed": 424242, "workers": 2
    })";
  }
  auto run_once = [&](const char* out_name) {
    std::string command = "\"" + cli_path + "\" experiment --config \"" +
                          (dir / "config.json").string() + "\" --out \"" +
                          (dir / out_name).string() + "\" > /dev/null";
    return std::system(command.c_str());
  };
  if (run_once("out1") != 0 || run_once("out2") != 0) {
    c.pass = false;
    c.detail << "CLI invocation failed";
    return c;
  }
  auto read_bytes = [](const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  };
  std::string csv1 = read_bytes(dir / "out1" / "results.csv");
  std::string csv2 = read_bytes(dir / "out2" / "results.csv");
  if (csv1.empty() || csv1 != csv2) {
    c.pass = false;
    c.detail << "results.csv differs between invocations";
    return c;
  }
  c.detail << "two `experiment` invocations, " << csv1.size()
           << " bytes, identical";
  return c;
}

}  // namespace
}  // namespace pdpsearch

int main(int argc, char** argv) {
  using namespace pdpsearch;
  std::string cli_path = argc > 1 ? argv[1] : "";
  struct Entry {
    const char* name;
    Criterion (*run)();
  };

  int failures = 0;
  int index = 0;
  auto report = [&](const char* name, Criterion c, double seconds) {
    ++index;
    std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << index << ". " << name
              << ": " << c.detail.str() << " (" << FormatDouble(seconds)
              << "s)" << std::endl;
    if (!c.pass) ++failures;
  };
  auto timed = [&](const char* name, auto&& fn) {
    auto start = std::chrono::steady_clock::now();
    Criterion c;
    try {
      c = fn();
    } catch (const std::exception& e) {
      c.pass = false;
      c.detail << "exception: " << e.what();
    }
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    report(name, std::move(c), seconds);
  };

  timed("SFS zero privacy cost (exact)", CheckSfsZeroPrivacyCost);
  timed("targeted sensitivity bounds", CheckSensitivityBounds);
  timed("Flow_k LP anchors, certificates, monotonicity", CheckFlowLp);
  timed("composition accounting to 12 digits", CheckComposition);
  timed("empirical protected-DP of SearchCom", CheckEmpiricalSearchComPrivacy);
  timed("PTarget(inf) degenerates to Target", CheckDegeneration);
  timed("regime reproduction at 2000 vertices", CheckRegimes);
  timed("infection star expectations", CheckInfectionStatistics);
  timed("byte-identical experiment reruns",
        [&] { return CheckReproducibility(cli_path); });

  if (failures == 0) {
    std::cout << "all acceptance criteria passed" << std::endl;
  } else {
    std::cout << failures << " acceptance criteria failed" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
