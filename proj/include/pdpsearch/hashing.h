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

#ifndef PDPSEARCH_HASHING_H_
#define PDPSEARCH_HASHING_H_

#include <cstdint>
#include <string_view>

namespace pdpsearch {

// splitmix64 finalizer.  Platform-independent by construction; used for
// coupled per-index random draws (infection trials, synthetic graphs) and
// for deriving generator seeds from stream labels.
inline constexpr uint64_t Mix64(uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

inline constexpr uint64_t HashChain(uint64_t a, uint64_t b) {
  return Mix64(a * 0x9E3779B97F4A7C15ULL + b + 0x2545F4914F6CDD1DULL);
}

inline constexpr uint64_t HashString(uint64_t h, std::string_view s) {
  for (char c : s) h = HashChain(h, static_cast<unsigned char>(c));
  return h;
}

// Maps 64 random bits to a double in [0, 1) using the top 53 bits.
inline constexpr double ToUnitInterval(uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Same, but in the open interval (0, 1); safe to feed to log().
inline constexpr double ToOpenUnitInterval(uint64_t h) {
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace pdpsearch

#endif  // PDPSEARCH_HASHING_H_
