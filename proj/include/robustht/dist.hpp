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

// Finite distributions, divergences, likelihood-ratio partitions and
// uncertainty-set membership.

#ifndef ROBUSTHT_DIST_HPP_
#define ROBUSTHT_DIST_HPP_

#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace robustht {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Tolerance on |sum - 1| for a vector to count as a distribution.
inline constexpr double kSumTolerance = 1e-12;
// Largest deviation Dist::Normalized will silently rescale.
inline constexpr double kRescaleTolerance = 1e-9;
// Slack used by the membership predicates.
inline constexpr double kMembershipTolerance = 1e-12;

enum class Model { kHub, kTv, kSub };

std::string_view ModelName(Model m);
// Accepts "hub", "tv", "sub" in any case. Throws DomainError otherwise.
Model ParseModel(std::string_view name);

class Dist {
 public:
  // Takes the masses as-is. Throws InvalidDistribution on a negative or
  // non-finite mass, or if the sum is off by more than `tolerance`.
  explicit Dist(std::vector<double> probs, double tolerance = kSumTolerance);

  // Rescales to sum 1 when the deviation is at most kRescaleTolerance.
  static Dist Normalized(std::vector<double> masses);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  const std::vector<double>& probs() const { return probs_; }

  bool operator==(const Dist& other) const = default;

 private:
  std::vector<double> probs_;
};

// Likelihood-ratio clips. `upper` may be +inf and `lower` may be 0 only in
// the degenerate subtractive cases, which are flagged.
struct ClipPair {
  double lower = 0.0;
  double upper = kInf;
  bool degenerate_low = false;
  bool degenerate_high = false;
};

// Index sets of the support (indices with p+q > 0) split by p/q against a
// clip pair. Ties with a clip land in `mid`.
struct LrPartition {
  std::vector<std::size_t> low;
  std::vector<std::size_t> mid;
  std::vector<std::size_t> high;
  std::vector<std::size_t> bar_low;   // q > 0, p = 0
  std::vector<std::size_t> bar_high;  // p > 0, q = 0
};

// p/q with the conventions x/0 = inf for x > 0. Returns NaN for 0/0.
double LikelihoodRatio(double p, double q);

double TvDistance(const Dist& p, const Dist& q);
double TvDistance(const std::vector<double>& p, const std::vector<double>& q);

// Sum of (sqrt(p) - sqrt(q))^2. Works on any nonnegative measures.
double HellingerSq(const Dist& p, const Dist& q);
double HellingerSq(const std::vector<double>& p, const std::vector<double>& q);

LrPartition LrPartitionOf(const Dist& p, const Dist& q, const ClipPair& clips);

bool SetMembership(const Dist& candidate, const Dist& center, double eps,
                   Model model);

}  // namespace robustht

#endif  // ROBUSTHT_DIST_HPP_
