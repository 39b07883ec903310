// Copyright 2026 The mfgp Authors
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

// Counter-based random streams (Philox4x32-10). A draw is a pure function of
// (seed, stream key, draw index), so results do not depend on evaluation
// order or on how work is split across threads.

#ifndef MFGP_RNG_HPP_
#define MFGP_RNG_HPP_

#include <array>
#include <cstdint>

namespace mfgp {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter Philox4x32(PhiloxCounter counter, PhiloxKey key);

enum class StreamPurpose : std::uint32_t {
  kInitialPosition = 1,
  kNoise = 2,
  kVisitOrder = 3,
  kTest = 4,
};

// A stream identified by (seed, purpose, a, b). Successive calls walk the
// draw index; two streams with different identifiers never overlap.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, StreamPurpose purpose, std::uint32_t a,
                std::uint32_t b);

  std::uint64_t NextU64();
  // Uniform on the open interval (0, 1).
  double NextUniform();
  // Standard normal (Box-Muller, one value per call).
  double NextNormal();
  // Uniform integer in [0, n), n >= 1.
  std::uint64_t NextBelow(std::uint64_t n);

 private:
  void Refill();

  PhiloxKey key_;
  PhiloxCounter counter_;
  std::array<std::uint32_t, 4> block_{};
  int used_ = 4;
};

}  // namespace mfgp

#endif  // MFGP_RNG_HPP_
