// Copyright 2026 The robustht Authors
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

// Sample-complexity predictors, the exact product-measure oracle, and the
// private sample-complexity curves.

#ifndef ROBUSTHT_COMPLEXITY_HPP_
#define ROBUSTHT_COMPLEXITY_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "robustht/dist.hpp"

namespace robustht {

// Refuse enumerations larger than this many count vectors.
inline constexpr double kMaxEnumerationStates = 1e7;

// Number of count vectors of length k summing to n, as a double.
double CountVectors(std::size_t k, std::int64_t n);

// tv(p^{⊗n}, q^{⊗n}) by summing over all count vectors. `jobs` workers split
// the first coordinate; the reduction order is fixed.
double ProductTv(const Dist& p, const Dist& q, std::int64_t n, int jobs = 1);

// tv(p^{⊗n}, q^{⊗n}) for n = 1..n_max. Throws StateSpaceExceeded when the
// largest enumeration would exceed kMaxEnumerationStates.
std::vector<double> ProductTvCurve(const Dist& p, const Dist& q,
                                   std::int64_t n_max, int jobs = 1);

// Smallest n <= n_max with tv(p^{⊗n}, q^{⊗n}) >= 1 - target_error.
std::optional<std::int64_t> ExactSampleComplexity(const Dist& p, const Dist& q,
                                                  double target_error,
                                                  std::int64_t n_max,
                                                  int jobs = 1);

// 1/hel^2. Throws DomainError when p == q.
double PredictedSampleComplexity(const Dist& p, const Dist& q);

struct ComplexityEstimate {
  Model model = Model::kTv;
  double eps = 0.0;
  double hel_sq = 0.0;
  double predicted_n = 0.0;
  std::optional<std::int64_t> exact_n;
};

// Builds the LFDs and reports their Hellinger divergence. Requires
// eps <= tv(p,q)/4. When exact_n_max > 0 the exact oracle is also run on the
// LFD pair.
ComplexityEstimate RobustComplexity(const Dist& p, const Dist& q, double eps,
                                    Model model, std::int64_t exact_n_max = 0,
                                    double target_error = 0.1);

// Sum of q f_gamma(p/q) with f_gamma(t) = (t-1) clamp(log t, -gamma, gamma).
// gamma may be +inf.
double DGamma(const Dist& p, const Dist& q, double gamma);

// Multiplicative constants for the privacy-to-robustness transformation.
struct PrivacyConstants {
  double n_scale = 1.0;      // multiplies the returned sample counts
  double gamma_scale = 1.0;  // multiplies gamma*(n) in n * gamma*(n)
  double eta_scale = 1.0;    // multiplies eta in the 1/eta budget
};

struct PrivacyCurve {
  std::vector<double> gamma_grid;
  std::vector<double> n_priv;      // per gamma
  std::vector<double> n_grid;
  std::vector<double> gamma_star;  // per n; +inf when unattained
  std::vector<double> eta_grid;
  std::vector<double> n_transformation;  // per eta; +inf when unattained
  double hel_sq = 0.0;
  double tv = 0.0;
};

// n_priv(gamma) = 1/hel^2 + 1/D_gamma, gamma*(n) = min{gamma : n_priv <= n}
// and N_T(eta) = min{n : n gamma*(n) <= 1/eta}, all over the given grids.
PrivacyCurve PrivacyCurves(const Dist& p, const Dist& q,
                           std::vector<double> gamma_grid,
                           std::vector<double> n_grid,
                           std::vector<double> eta_grid,
                           const PrivacyConstants& constants = {});

// Log-spaced grid with `per_decade` points per factor of 10, endpoints
// included.
std::vector<double> LogGrid(double lo, double hi, int per_decade);
// LogGrid rounded to integers, with repeats dropped.
std::vector<double> IntegerLogGrid(double lo, double hi, int per_decade);
// Geometric grid lo, lo*ratio, ... up to hi.
std::vector<double> GeometricGrid(double lo, double hi, double ratio);

// CSV rows (x, value, regime_label) for the three curves.
std::string PrivacyCurveCsv(const PrivacyCurve& curve);

}  // namespace robustht

#endif  // ROBUSTHT_COMPLEXITY_HPP_
