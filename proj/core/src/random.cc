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

#include "qdiffuse/random.h"

namespace qdiffuse {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t key) : key_(key), engine_(mix64(key)) {}

RandomStream RandomStream::split(std::uint64_t tag) const {
  return RandomStream(mix64(key_ ^ mix64(tag ^ 0xD6E8FEB86659FD93ULL)));
}

double RandomStream::uniform() { return uniform_(engine_); }

double RandomStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double RandomStream::normal() { return normal_(engine_); }

double RandomStream::normal(double mean, double stddev) {
  return mean + stddev * normal();
}

std::complex<double> RandomStream::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re, im};
}

}  // namespace qdiffuse
