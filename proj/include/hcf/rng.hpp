/*
 * Copyright 2026 the HCF authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <random>

namespace hcf {

// splitmix64 finalizer; good enough to decorrelate derived seeds.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic sub-seed from a run seed and up to two stream coordinates.
// Sampling streams are keyed by (seed, epoch, entry) so results do not
// depend on how work is distributed across workers.
inline uint64_t deriveSeed(uint64_t seed, uint64_t a, uint64_t b = 0) {
  return splitmix64(splitmix64(seed ^ splitmix64(a)) ^ splitmix64(b ^ 0x5851f42d4c957f2dULL));
}

inline std::mt19937_64 makeEngine(uint64_t seed) { return std::mt19937_64(seed); }

// Unbiased draw from [0, n). Rejection keeps the distribution exact and the
// result independent of the standard library's uniform_int_distribution.
inline uint64_t boundedRand(std::mt19937_64& rng, uint64_t n) {
  const uint64_t threshold = (0 - n) % n;  // 2^64 mod n
  uint64_t r = rng();
  while (r < threshold) r = rng();
  return r % n;
}

// Uniform [0, 1) with 53 bits, bit-stable across standard libraries.
inline double uniformDouble(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace hcf
