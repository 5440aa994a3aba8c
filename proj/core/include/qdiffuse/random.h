// Copyright 2026 The qdiffuse Authors
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

#ifndef QDIFFUSE_RANDOM_H_
#define QDIFFUSE_RANDOM_H_

#include <complex>
#include <cstdint>
#include <random>

namespace qdiffuse {

// Purpose tags for deriving independent sub-streams from a master seed.
enum class StreamTag : std::uint64_t {
  kTrainData = 1,
  kTestData = 2,
  kInit = 3,
  kTrain = 4,
  kGenerate = 5,
  kAncilla = 6,
  kMeasure = 7,
  kBaseline = 8,
  kProperty = 9,
};

// A keyed, splittable random stream.
//
// A stream is identified by a 64-bit key. `split` derives a child key from the
// parent key and a tag without consuming any randomness from the parent, so
// the sub-stream for (purpose, step, sample) is the same no matter in which
// order, or on which thread, other sub-streams are drawn.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t key);

  RandomStream split(std::uint64_t tag) const;
  RandomStream split(StreamTag tag) const {
    return split(static_cast<std::uint64_t>(tag));
  }
  template <typename First, typename... Rest>
  RandomStream split(First first, Rest... rest) const
    requires(sizeof...(Rest) > 0)
  {
    return split(first).split(rest...);
  }

  std::uint64_t key() const { return key_; }

  // Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi);
  double normal();
  double normal(double mean, double stddev);
  // Re and Im independently N(0, 1).
  std::complex<double> complex_normal();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t key_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

}  // namespace qdiffuse

#endif  // QDIFFUSE_RANDOM_H_
