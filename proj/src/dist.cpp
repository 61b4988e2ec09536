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

#include "robustht/dist.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "robustht/errors.hpp"

namespace robustht {

std::string_view ModelName(Model m) {
  switch (m) {
    case Model::kHub:
      return "hub";
    case Model::kTv:
      return "tv";
    case Model::kSub:
      return "sub";
  }
  return "?";
}

Model ParseModel(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "hub" || lower == "huber") return Model::kHub;
  if (lower == "tv") return Model::kTv;
  if (lower == "sub" || lower == "subtractive") return Model::kSub;
  throw DomainError("unknown model '" + std::string(name) + "'");
}

namespace {

double CheckedSum(const std::vector<double>& v) {
  if (v.empty()) throw InvalidDistribution("empty distribution");
  double s = 0.0;
  for (double x : v) {
    if (!std::isfinite(x) || x < 0.0) {
      throw InvalidDistribution("masses must be finite and nonnegative");
    }
    s += x;
  }
  return s;
}

void CheckSameSize(std::size_t a, std::size_t b) {
  if (a != b) throw AlphabetMismatch(a, b);
}

}  // namespace

Dist::Dist(std::vector<double> probs, double tolerance)
    : probs_(std::move(probs)) {
  double s = CheckedSum(probs_);
  if (std::abs(s - 1.0) > tolerance) {
    throw InvalidDistribution("masses sum to " + std::to_string(s));
  }
}

Dist Dist::Normalized(std::vector<double> masses) {
  double s = CheckedSum(masses);
  if (std::abs(s - 1.0) > kRescaleTolerance) {
    throw InvalidDistribution("masses sum to " + std::to_string(s) +
                              ", too far from 1 to rescale");
  }
  for (double& x : masses) x /= s;
  return Dist(std::move(masses), kRescaleTolerance);
}

double LikelihoodRatio(double p, double q) {
  if (q > 0.0) return p / q;
  if (p > 0.0) return kInf;
  return std::numeric_limits<double>::quiet_NaN();
}

double TvDistance(const std::vector<double>& p, const std::vector<double>& q) {
  CheckSameSize(p.size(), q.size());
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

double TvDistance(const Dist& p, const Dist& q) {
  return TvDistance(p.probs(), q.probs());
}

double HellingerSq(const std::vector<double>& p,
                   const std::vector<double>& q) {
  CheckSameSize(p.size(), q.size());
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0 || q[i] < 0.0) {
      throw InvalidDistribution("negative mass in Hellinger divergence");
    }
    double root_sum = std::sqrt(p[i]) + std::sqrt(q[i]);
    if (root_sum == 0.0) continue;
    // (p - q)/(sqrt p + sqrt q) avoids cancellation when p and q are close.
    double d = (p[i] - q[i]) / root_sum;
    s += d * d;
  }
  return s;
}

double HellingerSq(const Dist& p, const Dist& q) {
  return HellingerSq(p.probs(), q.probs());
}

LrPartition LrPartitionOf(const Dist& p, const Dist& q, const ClipPair& clips) {
  CheckSameSize(p.size(), q.size());
  LrPartition part;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0 && q[i] == 0.0) continue;
    double r = LikelihoodRatio(p[i], q[i]);
    if (q[i] == 0.0) part.bar_high.push_back(i);
    if (p[i] == 0.0) part.bar_low.push_back(i);
    if (r < clips.lower) {
      part.low.push_back(i);
    } else if (r > clips.upper) {
      part.high.push_back(i);
    } else {
      part.mid.push_back(i);
    }
  }
  return part;
}

bool SetMembership(const Dist& candidate, const Dist& center, double eps,
                   Model model) {
  CheckSameSize(candidate.size(), center.size());
  switch (model) {
    case Model::kTv:
      return TvDistance(candidate, center) <= eps + kMembershipTolerance;
    case Model::kHub:
      for (std::size_t i = 0; i < center.size(); ++i) {
        if (candidate[i] < (1.0 - eps) * center[i] - kMembershipTolerance) {
          return false;
        }
      }
      return true;
    case Model::kSub:
      for (std::size_t i = 0; i < center.size(); ++i) {
        if (candidate[i] > (1.0 + eps) * center[i] + kMembershipTolerance) {
          return false;
        }
      }
      return true;
  }
  return false;
}

}  // namespace robustht
