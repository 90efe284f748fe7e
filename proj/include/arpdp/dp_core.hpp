//
// Copyright 2026 The arpdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef ARPDP_DP_CORE_HPP_
#define ARPDP_DP_CORE_HPP_

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "arpdp/error.hpp"
#include "arpdp/rng.hpp"

namespace arpdp {

// Which graph elements neighboring inputs may differ by. Edge notion
// protects pairwise request relationships, node notion protects the
// presence of an individual device.
enum class PrivacyNotion { kEdge, kNode };

inline std::string ToString(PrivacyNotion notion) {
  return notion == PrivacyNotion::kEdge ? "edge" : "node";
}

inline PrivacyNotion NotionFromString(const std::string& s) {
  if (s == "edge") return PrivacyNotion::kEdge;
  if (s == "node") return PrivacyNotion::kNode;
  throw ValidationError("unknown privacy notion: \"" + s + "\"");
}

// Budget and bookkeeping for one release of a t-interval window.
struct PrivacyParams {
  double epsilon = 1.0;
  // Per-unit failure budget for the approximate-DP mechanisms; the actual
  // delta is delta_prime divided by the number of protected units.
  std::optional<double> delta_prime;
  int t = 1;  // Number of intervals composed into one release.
  PrivacyNotion notion = PrivacyNotion::kEdge;
  std::size_t user_count = 1;  // LAN size n; protected units are n or ~n^2.

  void Validate() const {
    if (!(epsilon > 0.0)) throw ValidationError("epsilon must be > 0");
    if (delta_prime.has_value() &&
        !(*delta_prime > 0.0 && *delta_prime < 1.0)) {
      throw ValidationError("delta_prime must lie in (0, 1)");
    }
    if (t < 1) throw ValidationError("t must be >= 1");
    if (user_count < 1) throw ValidationError("user_count must be >= 1");
  }
};

// Converts an (epsilon, delta) target into the zCDP parameter rho whose
// standard conversion back to approximate DP meets the target exactly:
//   rho = (sqrt(log(1/delta) + epsilon) - sqrt(log(1/delta)))^2.
// Evaluated as (epsilon / (sqrt(L+eps) + sqrt(L)))^2 to avoid cancellation
// between the two square roots when epsilon << log(1/delta).
inline double RhoFromEpsDelta(double epsilon, double delta) {
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be > 0");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ValidationError("delta must lie in (0, 1)");
  }
  const double log_inv_delta = std::log(1.0 / delta);
  const double root_sum =
      std::sqrt(log_inv_delta + epsilon) + std::sqrt(log_inv_delta);
  const double root_rho = epsilon / root_sum;
  return root_rho * root_rho;
}

// Inverse direction of the zCDP conversion: a rho-zCDP release also
// satisfies (epsilon, delta)-DP with epsilon = rho + 2*sqrt(rho*log(1/delta)).
inline double EpsFromRhoDelta(double rho, double delta) {
  if (!(rho >= 0.0)) throw ValidationError("rho must be >= 0");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ValidationError("delta must lie in (0, 1)");
  }
  return rho + 2.0 * std::sqrt(rho * std::log(1.0 / delta));
}

// Scales the per-unit failure budget down by the number of protected units,
// so that the overall delta stays negligible in the data size: n units under
// the node notion, n^2 possible directed edges under the edge notion.
inline double DeltaFromPrime(double delta_prime, PrivacyNotion notion,
                             std::size_t user_count) {
  if (!(delta_prime > 0.0 && delta_prime < 1.0)) {
    throw ValidationError("delta_prime must lie in (0, 1)");
  }
  if (user_count < 1) throw ValidationError("user_count must be >= 1");
  const double n = static_cast<double>(user_count);
  return notion == PrivacyNotion::kNode ? delta_prime / n
                                        : delta_prime / (n * n);
}

// One draw from Laplace(0, scale) by inverting the CDF on a 53-bit uniform.
inline double SampleLaplace(double scale, SeededRng& rng) {
  if (!(scale > 0.0)) throw ValidationError("laplace scale must be > 0");
  const double u = rng.UnitOpen();
  return u < 0.5 ? scale * std::log(2.0 * u) : -scale * std::log(2.0 - 2.0 * u);
}

// One draw from N(0, stddev^2) via Box-Muller. Consumes exactly two
// uniforms per call; no state is cached, so the draw count per released
// value is fixed and reruns reproduce.
inline double SampleGaussian(double stddev, SeededRng& rng) {
  if (!(stddev > 0.0)) throw ValidationError("gaussian stddev must be > 0");
  const double u1 = rng.UnitOpen();
  const double u2 = rng.UnitOpen();
  constexpr double kTwoPi = 6.283185307179586476925287;
  return stddev * std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

// Post-processing applied to every noisy value before release: negative
// values clamp to zero and the rest round to the nearest integer (ties away
// from zero). Integer outputs close the floating-point side channel of raw
// noise samples, and clamping keeps counts plausible; neither step costs
// any privacy.
inline std::int64_t ThresholdRound(double x) {
  if (!(x > 0.0)) return 0;
  return std::llround(x);
}

// Noise parameterization for one interval of a t-fold composed release.
struct DerivedBudget {
  double delta = 0.0;  // 0 for the pure mechanisms.
  double rho = 0.0;    // 0 for the pure mechanisms.
  // Laplace scale t/epsilon for the pure mechanisms; Gaussian standard
  // deviation sqrt(t / (2 rho)) for the zCDP-based ones.
  double per_interval_scale = 0.0;
};

// Budget for the Laplace mechanisms: splitting epsilon across t intervals
// puts scale t/epsilon on each.
inline DerivedBudget DerivePureBudget(const PrivacyParams& params) {
  params.Validate();
  DerivedBudget budget;
  budget.per_interval_scale = static_cast<double>(params.t) / params.epsilon;
  return budget;
}

// Budget for the Gaussian mechanisms: the whole release must be rho-zCDP,
// each of the t intervals gets rho/t, i.e. noise variance t/(2 rho).
inline DerivedBudget DeriveGaussianBudget(const PrivacyParams& params) {
  params.Validate();
  if (!params.delta_prime.has_value()) {
    throw ValidationError(
        "delta_prime is required for the (epsilon, delta) mechanisms");
  }
  DerivedBudget budget;
  budget.delta =
      DeltaFromPrime(*params.delta_prime, params.notion, params.user_count);
  budget.rho = RhoFromEpsDelta(params.epsilon, budget.delta);
  budget.per_interval_scale =
      std::sqrt(static_cast<double>(params.t) / (2.0 * budget.rho));
  return budget;
}

}  // namespace arpdp

#endif  // ARPDP_DP_CORE_HPP_
