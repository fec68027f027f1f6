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

#include "pdpsearch/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pdpsearch/hashing.h"

namespace pdpsearch {

NoiseSource::NoiseSource(uint64_t seed, std::string_view stream_id)
    : seed_(seed),
      stream_id_(stream_id),
      engine_(HashString(HashChain(seed, 0x6E6F697365ULL), stream_id)) {}

double NoiseSource::NextUniform() { return ToOpenUnitInterval(engine_()); }

NoiseSource NoiseSource::Split(std::string_view child_id) const {
  std::string id = stream_id_;
  id += '/';
  id += child_id;
  return NoiseSource(seed_, id);
}

double LaplaceInvCdf(double u, double scale) {
  if (!(u > 0.0) || !(u < 1.0)) {
    throw std::invalid_argument("laplace inverse cdf needs u in (0, 1)");
  }
  double centered = u - 0.5;
  if (centered == 0.0) return 0.0;
  double sign = centered > 0.0 ? 1.0 : -1.0;
  return -scale * sign * std::log1p(-2.0 * std::abs(centered));
}

double SampleLaplace(double scale, NoiseSource& src) {
  if (std::isinf(scale) && scale > 0.0) return 0.0;  // zero-noise sentinel
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("laplace scale must be positive and finite");
  }
  return LaplaceInvCdf(src.NextUniform(), scale);
}

std::pair<int, double> ReportNoisyMax(
    const std::vector<std::pair<int, double>>& values, double gamma,
    double epsilon, NoiseSource& src) {
  if (values.empty()) {
    throw std::invalid_argument("report noisy max needs candidates");
  }
  if (gamma < 0.0) {
    throw std::invalid_argument("sensitivity bound must be nonnegative");
  }
  // Zero noise when epsilon is the infinity sentinel or gamma is 0.
  double scale;
  if (gamma == 0.0 || std::isinf(epsilon)) {
    scale = kInfiniteEpsilon;
  } else {
    if (!(epsilon > 0.0)) {
      throw std::invalid_argument("epsilon must be positive or infinite");
    }
    scale = gamma / epsilon;
  }
  std::vector<std::pair<int, double>> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  bool best_set = false;
  int best_id = 0;
  double best_value = 0.0;
  for (const auto& [id, value] : sorted) {
    double noisy = value + SampleLaplace(scale, src);
    if (!best_set || noisy > best_value) {
      best_set = true;
      best_id = id;
      best_value = noisy;
    }
  }
  return {best_id, best_value};
}

double ComposeBasic(const PrivacyLedger& ledger) {
  if (ledger.per_round_epsilon < 0.0) {
    throw std::invalid_argument("epsilon must be nonnegative");
  }
  if (ledger.rounds_used == 0) return 0.0;
  return static_cast<double>(ledger.rounds_used) * ledger.per_round_epsilon;
}

double ComposeAdvanced(const PrivacyLedger& ledger) {
  if (!(ledger.delta > 0.0) || !(ledger.delta < 1.0)) {
    throw std::invalid_argument("advanced composition needs delta in (0, 1)");
  }
  if (ledger.per_round_epsilon < 0.0) {
    throw std::invalid_argument("epsilon must be nonnegative");
  }
  if (ledger.rounds_used == 0) return 0.0;
  return 2.0 *
         std::sqrt(2.0 * static_cast<double>(ledger.rounds_used) *
                   std::log(1.0 / ledger.delta)) *
         ledger.per_round_epsilon;
}

double RiskMultiplier(double epsilon) {
  if (epsilon < 0.0) {
    throw std::invalid_argument("epsilon must be nonnegative");
  }
  return std::exp(epsilon);
}

}  // namespace pdpsearch
