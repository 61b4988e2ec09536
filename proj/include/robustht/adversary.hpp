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

// Monte Carlo simulation of oblivious and adaptive contamination against
// concrete tests.

#ifndef ROBUSTHT_ADVERSARY_HPP_
#define ROBUSTHT_ADVERSARY_HPP_

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "robustht/dist.hpp"
#include "robustht/lfd.hpp"

namespace robustht {

// A dataset is a sequence of symbol indices. Deleted samples are kBottom.
using Sample = std::vector<int>;
inline constexpr int kBottom = -1;

enum class AdversaryModel { kHub, kTv, kSub, kAHub, kATv, kASub };
enum class Strategy { kLfdSampler, kFixedDist, kGreedyAdaptive };

std::string_view AdversaryModelName(AdversaryModel m);
AdversaryModel ParseAdversaryModel(std::string_view name);
bool IsAdaptive(AdversaryModel m);

struct AdversarySpec {
  AdversaryModel model = AdversaryModel::kTv;
  double eps = 0.0;
  Strategy strategy = Strategy::kLfdSampler;
  // Used by kFixedDist: the distributions presented under p and under q.
  std::optional<Dist> fixed_p;
  std::optional<Dist> fixed_q;
};

enum class TestKind { kClippedLr, kScheffe, kHStat };

std::string_view TestKindName(TestKind k);
TestKind ParseTestKind(std::string_view name);

struct TestSpec {
  TestKind kind = TestKind::kClippedLr;
  // Calibration of the clipped LR test.
  Model calib_model = Model::kTv;
  double calib_eps = 0.0;
  // Decision threshold of the clipped LR test. The other tests derive theirs
  // from the reference pair.
  double threshold = 0.0;
  // Probability of deciding p when the statistic equals the threshold.
  double tie_randomization = 1.0;
};

// A test instantiated on a reference pair. Every statistic is either a sum
// (clipped LR) or a mean over non-deleted samples (h, Scheffe) of a
// per-symbol score; this is what the greedy adversaries exploit.
class Test {
 public:
  static Test Make(const Dist& p, const Dist& q, const TestSpec& spec);

  TestKind kind() const { return spec_.kind; }
  const TestSpec& spec() const { return spec_; }
  double threshold() const { return threshold_; }
  // Per-symbol scores; NaN marks symbols outside the test's domain.
  const std::vector<double>& scores() const { return scores_; }
  double Score(int symbol) const;
  double Statistic(const Sample& sample) const;
  // Symbols with the smallest and largest valid score.
  int ArgMinSymbol() const { return argmin_; }
  int ArgMaxSymbol() const { return argmax_; }
  // Set for the clipped LR test.
  const std::optional<LfdPair>& lfds() const { return lfds_; }

 private:
  TestSpec spec_;
  std::vector<double> scores_;
  double threshold_ = 0.0;
  int argmin_ = 0;
  int argmax_ = 0;
  std::optional<LfdPair> lfds_;
};

struct TrialReport {
  std::int64_t n = 0;
  std::int64_t trials = 0;
  double type1 = 0.0;  // decided q when the data came from the p side
  double type2 = 0.0;  // decided p when the data came from the q side
  double ci1 = 0.0;    // 1.96 sqrt(e(1-e)/trials) for type1
  double ci2 = 0.0;
  double ci_radius = 0.0;  // max(ci1, ci2)
  std::uint64_t seed = 0;

  bool operator==(const TrialReport&) const = default;
};

// Sum of log(p*/q*) over the sample. Deleted samples contribute 0.
double ClippedLrStatistic(const Sample& sample, const LfdPair& lfds);

// Mean of h(x) = (sqrt p - sqrt q)/(sqrt p + sqrt q) over non-deleted samples.
double HStatistic(const Sample& sample, const Dist& p, const Dist& q);
// Expectations of h under p and under q.
std::pair<double, double> HMeans(const Dist& p, const Dist& q);

// Scheffe's test on A = {p >= q}: true means "decide p".
bool ScheffeTest(const Sample& sample, const Dist& p, const Dist& q);

// True means "decide p". `u` resolves ties.
bool Decide(const Test& test, double statistic, double u);

// i.i.d. sampling from p_true (for type I) and q_true (for type II).
TrialReport RunObliviousTrial(const Dist& p_true, const Dist& q_true,
                              const Test& test, std::int64_t n,
                              std::int64_t trials, std::uint64_t seed,
                              int jobs = 1);

// Clean data from p and q, corrupted by a greedy adaptive adversary.
TrialReport RunAdaptiveTrial(const Dist& p, const Dist& q,
                             const AdversarySpec& adversary, const Test& test,
                             std::int64_t n, std::int64_t trials,
                             std::uint64_t seed, int jobs = 1);

// Dispatches on the adversary model. Oblivious models sample from the LFDs
// (kLfdSampler) or from the fixed distributions.
TrialReport RunAdversaryTrial(const Dist& p, const Dist& q,
                              const AdversarySpec& adversary, const Test& test,
                              std::int64_t n, std::int64_t trials,
                              std::uint64_t seed, int jobs = 1);

// Smallest n with type1 + type2 + ci1 + ci2 <= target_error, found by
// doubling and then bisection, with common seeds across n.
std::int64_t EmpiricalComplexitySearch(const Dist& p, const Dist& q,
                                       const AdversarySpec& adversary,
                                       const Test& test, double target_error,
                                       std::int64_t trials, std::uint64_t seed,
                                       std::int64_t n_max = 1 << 22,
                                       int jobs = 1);

}  // namespace robustht

#endif  // ROBUSTHT_ADVERSARY_HPP_
