// Copyright 2026 The deceptive-pi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DECEPTIVE_RANDOM_H_
#define DECEPTIVE_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <limits>

#include <boost/random/normal_distribution.hpp>

namespace deceptive {

// SplitMix64 finalizer.
constexpr uint64_t Mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives an independent stream seed from a parent seed and a counter key.
// The result depends only on the arguments, never on call order, so rollout
// i at step t gets the same stream no matter which worker produces it.
constexpr uint64_t DeriveSeed(uint64_t parent,
                              std::initializer_list<uint64_t> key) {
  uint64_t h = Mix64(parent + 0x9e3779b97f4a7c15ULL);
  for (uint64_t k : key) {
    h = Mix64(h ^ Mix64(k + 0x632be59bd9b4e019ULL));
  }
  return h;
}

// A single-owner stream of random numbers (SplitMix64 sequence). Satisfies
// UniformRandomBitGenerator so it can feed standard and Boost distributions.
class RandomStream {
 public:
  using result_type = uint64_t;

  explicit RandomStream(uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return Mix64(state_);
  }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Standard normal (Boost ziggurat; portable across standard libraries).
  double Normal() {
    boost::random::normal_distribution<double> normal;
    return normal(*this);
  }

  friend bool operator==(const RandomStream&, const RandomStream&) = default;

 private:
  uint64_t state_;
};

}  // namespace deceptive

#endif  // DECEPTIVE_RANDOM_H_
