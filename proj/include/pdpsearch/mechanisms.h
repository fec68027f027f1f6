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

#ifndef PDPSEARCH_MECHANISMS_H_
#define PDPSEARCH_MECHANISMS_H_

#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pdpsearch {

// Privacy parameter sentinel: epsilon = infinity means "zero noise", which
// makes the private algorithms degenerate exactly to their non-private
// counterparts for differential testing.
inline constexpr double kInfiniteEpsilon =
    std::numeric_limits<double>::infinity();

// Seeded noise stream.  The same (seed, stream id) pair yields the same
// sample sequence on every run and platform: the engine is the
// standard-specified mt19937_64 and all variate mappings are explicit
// arithmetic (never std::*_distribution, whose output is
// implementation-defined).
class NoiseSource {
 public:
  NoiseSource(uint64_t seed, std::string_view stream_id);

  uint64_t seed() const { return seed_; }
  const std::string& stream_id() const { return stream_id_; }

  uint64_t NextU64() { return engine_(); }

  // Uniform draw in the open interval (0, 1).
  double NextUniform();

  // Derives an independent child stream; drawing from the child never
  // perturbs the parent sequence.
  NoiseSource Split(std::string_view child_id) const;

 private:
  uint64_t seed_;
  std::string stream_id_;
  std::mt19937_64 engine_;
};

// Inverse CDF of the centered Laplace distribution with the given scale;
// u = 1/2 maps to exactly 0.
double LaplaceInvCdf(double u, double scale);

// One draw from Lap(0, scale) via inverse CDF on a single uniform draw.
// scale must be positive; scale = +infinity is the declared zero-noise
// sentinel and returns exactly 0.
double SampleLaplace(double scale, NoiseSource& src);

// Report Noisy Max: perturbs every candidate value with independent
// Lap(gamma / epsilon) noise (in ascending candidate-id order, one draw
// each) and returns the argmax with its noisy value.  Ties break toward
// the smallest candidate id, which is what makes the epsilon = infinity
// mode a plain deterministic argmax.
std::pair<int, double> ReportNoisyMax(
    const std::vector<std::pair<int, double>>& values, double gamma,
    double epsilon, NoiseSource& src);

// Accounting state for one search run: every component-search invocation
// consumes one epsilon-round.
struct PrivacyLedger {
  double per_round_epsilon = 0.0;
  int rounds_used = 0;
  double delta = 0.0;
};

// Total epsilon under basic composition: rounds_used * per_round_epsilon.
double ComposeBasic(const PrivacyLedger& ledger);

// Total epsilon under advanced composition:
// 2 * sqrt(2 * rounds_used * ln(1/delta)) * per_round_epsilon.
// Requires 0 < delta < 1.
double ComposeAdvanced(const PrivacyLedger& ledger);

// e^epsilon: the factor by which any event's probability may grow due to
// one protected individual's data.
double RiskMultiplier(double epsilon);

}  // namespace pdpsearch

#endif  // PDPSEARCH_MECHANISMS_H_
