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

#include "pdpsearch/graph.h"

#include <algorithm>
#include <map>
#include <sstream>

namespace pdpsearch {

namespace {

std::pair<int, int> Canonical(int u, int v) {
  return u < v ? std::make_pair(u, v) : std::make_pair(v, u);
}

void CheckEdgeEndpoints(int n, int u, int v) {
  if (u < 0 || u >= n || v < 0 || v >= n) {
    throw std::invalid_argument("edge endpoint out of range");
  }
  if (u == v) {
    throw std::invalid_argument("self-loop rejected");
  }
}

}  // namespace

Graph Graph::FromEdges(int n, std::vector<std::pair<int, int>> edges) {
  Graph g;
  g.n_ = n;
  g.weighted_ = false;
  for (auto& [u, v] : edges) {
    CheckEdgeEndpoints(n, u, v);
    std::tie(u, v) = Canonical(u, v);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw std::invalid_argument("duplicate edge rejected");
  }
  g.edges_ = std::move(edges);
  g.BuildAdjacency();
  return g;
}

Graph Graph::FromWeightedEdges(int n, std::vector<WeightedEdge> edges) {
  Graph g;
  g.n_ = n;
  g.weighted_ = true;
  std::vector<std::pair<std::pair<int, int>, long long>> canon;
  canon.reserve(edges.size());
  for (const auto& e : edges) {
    CheckEdgeEndpoints(n, e.u, e.v);
    if (e.weight < 1) {
      throw std::invalid_argument("edge weight must be >= 1");
    }
    canon.emplace_back(Canonical(e.u, e.v), e.weight);
  }
  std::sort(canon.begin(), canon.end());
  for (size_t i = 1; i < canon.size(); ++i) {
    if (canon[i].first == canon[i - 1].first) {
      throw std::invalid_argument("duplicate edge rejected");
    }
  }
  g.edges_.reserve(canon.size());
  g.weights_.reserve(canon.size());
  for (const auto& [e, w] : canon) {
    g.edges_.push_back(e);
    g.weights_.push_back(w);
  }
  g.BuildAdjacency();
  return g;
}

void Graph::BuildAdjacency() {
  adj_.assign(n_, {});
  for (const auto& [u, v] : edges_) {
    adj_[u].push_back(v);
    adj_[v].push_back(u);
  }
  for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
}

void Graph::CheckVertex(int v) const {
  if (v < 0 || v >= n_) {
    throw std::invalid_argument("vertex id out of range");
  }
}

const std::vector<int>& Graph::Neighbors(int v) const {
  CheckVertex(v);
  return adj_[v];
}

int Graph::Degree(int v) const {
  CheckVertex(v);
  return static_cast<int>(adj_[v].size());
}

int Graph::MaxDegree() const {
  int d = 0;
  for (const auto& nb : adj_) d = std::max(d, static_cast<int>(nb.size()));
  return d;
}

bool Graph::HasEdge(int u, int v) const {
  CheckVertex(u);
  CheckVertex(v);
  const auto& nb = adj_[u];
  return std::binary_search(nb.begin(), nb.end(), v);
}

long long Graph::Weight(int u, int v) const {
  if (!weighted_) {
    throw std::invalid_argument("graph is unweighted");
  }
  auto it = std::lower_bound(edges_.begin(), edges_.end(), Canonical(u, v));
  if (it == edges_.end() || *it != Canonical(u, v)) {
    throw std::invalid_argument("edge not present");
  }
  return weights_[it - edges_.begin()];
}

std::string Graph::CanonicalSerialize() const {
  std::ostringstream out;
  out << n_ << "\n";
  for (size_t i = 0; i < edges_.size(); ++i) {
    out << edges_[i].first << " " << edges_[i].second;
    if (weighted_) out << " " << weights_[i];
    out << "\n";
  }
  return out.str();
}

EdgeListGraph LoadEdgeList(std::istream& in, bool weighted) {
  EdgeListGraph result;
  // Accumulate with merged weights; in unweighted mode a revisited edge is
  // an error per the ingestion contract.
  std::map<std::pair<int, int>, long long> weight_of;
  auto intern = [&result](const std::string& label) {
    auto [it, inserted] =
        result.id_of.emplace(label, static_cast<int>(result.labels.size()));
    if (inserted) result.labels.push_back(label);
    return it->second;
  };

  std::string line;
  long long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string u_label, v_label, w_field, extra;
    if (!(fields >> u_label)) continue;  // blank line
    if (u_label[0] == '#') continue;
    auto fail = [line_no](const std::string& what) {
      throw ParseError("line " + std::to_string(line_no) + ": " + what);
    };
    if (!(fields >> v_label)) fail("expected two fields");
    long long w = 1;
    if (fields >> w_field) {
      if (!weighted) fail("weight field on unweighted input");
      size_t pos = 0;
      try {
        w = std::stoll(w_field, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != w_field.size()) fail("malformed weight '" + w_field + "'");
      if (w < 1) fail("weight must be >= 1");
    }
    if (fields >> extra) fail("trailing field '" + extra + "'");
    if (u_label == v_label) fail("self-loop rejected");
    int u = intern(u_label);
    int v = intern(v_label);
    auto key = u < v ? std::make_pair(u, v) : std::make_pair(v, u);
    auto [it, inserted] = weight_of.emplace(key, w);
    if (!inserted) {
      if (!weighted) fail("duplicate edge");
      it->second += w;
    }
  }

  int n = static_cast<int>(result.labels.size());
  if (weighted) {
    std::vector<Graph::WeightedEdge> edges;
    edges.reserve(weight_of.size());
    for (const auto& [e, w] : weight_of) {
      edges.push_back({e.first, e.second, w});
    }
    result.graph = Graph::FromWeightedEdges(n, std::move(edges));
  } else {
    std::vector<std::pair<int, int>> edges(weight_of.size());
    std::transform(weight_of.begin(), weight_of.end(), edges.begin(),
                   [](const auto& kv) { return kv.first; });
    result.graph = Graph::FromEdges(n, std::move(edges));
  }
  return result;
}

Graph SparsifyByWeight(const Graph& g, long long min_weight) {
  if (!g.IsWeighted()) {
    throw std::invalid_argument("sparsify requires a weighted graph");
  }
  std::vector<Graph::WeightedEdge> kept;
  for (const auto& [u, v] : g.Edges()) {
    long long w = g.Weight(u, v);
    if (w >= min_weight) kept.push_back({u, v, w});
  }
  return Graph::FromWeightedEdges(g.NumVertices(), std::move(kept));
}

Graph RewireVertex(const Graph& g, int v,
                   const std::vector<int>& new_neighbors) {
  if (v < 0 || v >= g.NumVertices()) {
    throw std::invalid_argument("vertex id out of range");
  }
  for (int u : new_neighbors) {
    if (u < 0 || u >= g.NumVertices()) {
      throw std::invalid_argument("neighbor id out of range");
    }
    if (u == v) throw std::invalid_argument("self-loop rejected");
  }
  if (g.IsWeighted()) {
    std::vector<Graph::WeightedEdge> edges;
    for (const auto& [a, b] : g.Edges()) {
      if (a != v && b != v) edges.push_back({a, b, g.Weight(a, b)});
    }
    for (int u : new_neighbors) {
      long long w = g.HasEdge(u, v) ? g.Weight(u, v) : 1;
      edges.push_back({v, u, w});
    }
    return Graph::FromWeightedEdges(g.NumVertices(), std::move(edges));
  }
  std::vector<std::pair<int, int>> edges;
  for (const auto& [a, b] : g.Edges()) {
    if (a != v && b != v) edges.emplace_back(a, b);
  }
  for (int u : new_neighbors) edges.emplace_back(v, u);
  return Graph::FromEdges(g.NumVertices(), std::move(edges));
}

Population::Population(int n, const std::vector<int>& targeted)
    : n_(n), targeted_(targeted), is_targeted_(n, 0), queried_(n, 0) {
  std::sort(targeted_.begin(), targeted_.end());
  targeted_.erase(std::unique(targeted_.begin(), targeted_.end()),
                  targeted_.end());
  for (int v : targeted_) {
    if (v < 0 || v >= n_) {
      throw std::invalid_argument("targeted vertex out of range");
    }
    is_targeted_[v] = 1;
  }
}

Population::Population(const Population& other)
    : n_(other.n_),
      targeted_(other.targeted_),
      is_targeted_(other.is_targeted_),
      queried_(other.queried_),
      queries_(other.queries_.load()) {}

Population& Population::operator=(const Population& other) {
  if (this != &other) {
    n_ = other.n_;
    targeted_ = other.targeted_;
    is_targeted_ = other.is_targeted_;
    queried_ = other.queried_;
    queries_.store(other.queries_.load());
  }
  return *this;
}

bool Population::IsTargeted(int v) const {
  if (v < 0 || v >= n_) throw std::invalid_argument("vertex id out of range");
  return is_targeted_[v] != 0;
}

bool Population::QueryOracle(int v) const {
  if (v < 0 || v >= n_) throw std::invalid_argument("vertex id out of range");
  std::atomic_ref<unsigned char> flag(queried_[v]);
  if (flag.exchange(1) == 0) {
    queries_.fetch_add(1);
  }
  return is_targeted_[v] != 0;
}

bool Population::WasQueried(int v) const {
  if (v < 0 || v >= n_) throw std::invalid_argument("vertex id out of range");
  return std::atomic_ref<unsigned char>(queried_[v]).load() != 0;
}

std::vector<std::vector<int>> TargetedComponents(const Graph& g,
                                                 const Population& pop) {
  std::vector<std::vector<int>> components;
  std::vector<uint8_t> seen(g.NumVertices(), 0);
  for (int v : pop.Targeted()) {
    if (seen[v]) continue;
    std::vector<int> comp;
    std::vector<int> stack = {v};
    seen[v] = 1;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      comp.push_back(x);
      for (int y : g.Neighbors(x)) {
        if (!seen[y] && pop.IsTargeted(y)) {
          seen[y] = 1;
          stack.push_back(y);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    components.push_back(std::move(comp));
  }
  // Targeted() is ascending, so components are already ordered by smallest
  // member.
  return components;
}

std::vector<std::string> ReadPartitionLabels(std::istream& in) {
  std::vector<std::string> labels;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string label;
    if (!(fields >> label)) continue;
    if (label[0] == '#') continue;
    labels.push_back(label);
  }
  return labels;
}

void WritePartitionLabels(std::ostream& out,
                          const std::vector<std::string>& labels) {
  for (const auto& label : labels) out << label << "\n";
}

}  // namespace pdpsearch
