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

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "mfgp/simd.hpp"

namespace mfgp::simd {

namespace detail {
#if !MFGP_HAVE_AVX2
const KernelTable* Avx2Table() { return nullptr; }
#endif
#if !MFGP_HAVE_NEON
const KernelTable* NeonTable() { return nullptr; }
#endif
}  // namespace detail

namespace {

bool CpuHasAvx2() {
#if MFGP_HAVE_AVX2 && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa BestIsa() {
  if (IsaSupported(Isa::kAvx2)) return Isa::kAvx2;
  if (IsaSupported(Isa::kNeon)) return Isa::kNeon;
  return Isa::kScalar;
}

Isa InitialIsa() {
  if (const char* env = std::getenv("MFGP_SIMD")) {
    const std::string name(env);
    for (Isa isa : {Isa::kScalar, Isa::kAvx2, Isa::kNeon}) {
      if (name == IsaName(isa) && IsaSupported(isa)) return isa;
    }
  }
  return BestIsa();
}

std::atomic<Isa>& ActiveSlot() {
  static std::atomic<Isa> slot{InitialIsa()};
  return slot;
}

}  // namespace

std::string_view IsaName(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
    case Isa::kNeon:
      return "neon";
  }
  return "unknown";
}

bool IsaSupported(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
      return detail::Avx2Table() != nullptr && CpuHasAvx2();
    case Isa::kNeon:
      // NEON is mandatory on AArch64.
      return detail::NeonTable() != nullptr;
  }
  return false;
}

Isa ActiveIsa() { return ActiveSlot().load(std::memory_order_relaxed); }

void SetActiveIsa(Isa isa) {
  if (!IsaSupported(isa)) {
    throw std::invalid_argument("SIMD variant not supported here: " +
                                std::string(IsaName(isa)));
  }
  ActiveSlot().store(isa, std::memory_order_relaxed);
}

const KernelTable& KernelsFor(Isa isa) {
  if (!IsaSupported(isa)) {
    throw std::invalid_argument("SIMD variant not supported here: " +
                                std::string(IsaName(isa)));
  }
  switch (isa) {
    case Isa::kAvx2:
      return *detail::Avx2Table();
    case Isa::kNeon:
      return *detail::NeonTable();
    case Isa::kScalar:
      break;
  }
  return detail::ScalarTable();
}

const KernelTable& Kernels() { return KernelsFor(ActiveIsa()); }

}  // namespace mfgp::simd
