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

#ifndef MFGP_LAMBERT_W_HPP_
#define MFGP_LAMBERT_W_HPP_

namespace mfgp {

// -1/e, the branch point of the principal branch.
inline constexpr double kLambertBranchPoint = -0.36787944117144233;

// Principal branch W0 of the inverse of w -> w * exp(w).
//
// Defined for x >= -1/e; returns w >= -1 with |w e^w - x| <= 1e-12 max(1,|x|).
// Throws std::domain_error below the branch point.
double LambertW0(double x);

}  // namespace mfgp

#endif  // MFGP_LAMBERT_W_HPP_
