/* Copyright 2026 The rangelab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Every statistical threshold and profile-scaled budget of the acceptance
// suite. Bump kProfileVersion whenever a number changes.

#include <cstddef>
#include <string>

namespace rangelab::tolerances {

inline constexpr int kProfileVersion = 1;

// distributional tests
inline constexpr double kKsP = 0.01;           // accept when p > kKsP
inline constexpr double kNegativeControlP = 0.01;  // negative controls must reject below this

// exact and numerical identities
inline constexpr double kTelescoping = 1e-10;
inline constexpr double kPolynomialOracle = 1e-6;
inline constexpr double kIbpRelative = 1e-9;

// moment and scaling bands (relative)
inline constexpr double kSubMean = 0.03;
inline constexpr double kSupVarianceRatio = 0.10;
inline constexpr double kBoundaryVarianceRatio = 0.15;
inline constexpr double kMidLogVarianceRatio = 0.25;
inline constexpr double kEnergyVarianceRatio = 0.15;
inline constexpr double kEnvelopeFactor = 2.0;

// Hoelder exponent windows
inline constexpr double kHolderSupLo = 0.42, kHolderSupHi = 0.52;
inline constexpr double kHolderMidLo = 0.70, kHolderMidHi = 1.05;

/// Profile-scaled sizes.
struct Profile {
  std::string name;
  bool statistical = false;  // false: exact identities only
  std::size_t decomposition_paths = 200;
  std::size_t interpolation_paths = 200;
  std::size_t sub_replicas = 2000;
  std::size_t sup_replicas = 4000;
  std::size_t sup_gauss_replicas = 1000;
  std::size_t boundary_replicas = 4000;
  std::size_t mid_replicas = 2000;
  std::size_t silt_replicas = 500;
  std::size_t envelope_replicas = 300;
  std::size_t holder_replicas = 1000;
};

/// "fast" or "full"; anything else throws ConfigError.
Profile profile(const std::string& name);

}  // namespace rangelab::tolerances
