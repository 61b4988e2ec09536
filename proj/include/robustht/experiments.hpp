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

// Scripted experiments: the jump family, breakdown under underestimated
// contamination, sandwich certification, no-simulation witnesses and the
// privacy example.

#ifndef ROBUSTHT_EXPERIMENTS_HPP_
#define ROBUSTHT_EXPERIMENTS_HPP_

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "robustht/adversary.hpp"
#include "robustht/dist.hpp"
#include "robustht/lfd.hpp"

namespace robustht {

// p = (1/2 - 10 eps, 1/2 + 8 eps, 2 eps), q = (1/2, 1/2, 0). eps <= 0.05.
std::pair<Dist, Dist> JumpPair(double eps);

// The larger contamination level eps2 of the jump theorem: eps for TV,
// 2eps/(1+2eps) for Huber, 2eps/(1-2eps) for subtractive.
double JumpEps2(Model model, double eps);

struct JumpFamilyInstance {
  Model model = Model::kTv;
  double eps = 0.0;
  double t = 0.0;
  Dist p{std::vector<double>{1.0}};
  Dist q{std::vector<double>{1.0}};
  double eps1 = 0.0;  // eps2 - eps^(1+t)
  double eps2 = 0.0;
};

// Validates 0 < eps1 < eps2 <= tv/4 and the model's range of t.
JumpFamilyInstance MakeJumpInstance(Model model, double eps, double t);

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Least-squares line through (log x, log y).
LogLogFit FitLogLog(const std::vector<double>& x, const std::vector<double>& y);

struct JumpRow {
  double eps = 0.0;
  double eps1 = 0.0;
  double eps2 = 0.0;
  double hel_sq1 = 0.0;
  double hel_sq2 = 0.0;
};

struct JumpResult {
  Model model = Model::kTv;
  double t = 0.0;
  std::vector<JumpRow> rows;
  LogLogFit fit1;  // hel^2(eps1) against eps
  LogLogFit fit2;  // hel^2(eps2) against eps
};

// {1e-2, 1e-2.5, 1e-3, 1e-3.5, 1e-4}.
std::vector<double> DefaultEpsGrid();

JumpResult JumpExperiment(const std::vector<double>& eps_grid, double t,
                          Model model);

// Expected clipped log-likelihood ratio of the eps1-calibrated test under
// the eps2-LFD of the opposite hypothesis: under q*(eps2) for TV and Huber,
// under p*(eps2) for subtractive.
double BreakdownExpectedZ(Model model, double eps, double t);
// Positive for TV and Huber, negative for subtractive.
bool BreakdownSignHolds(Model model, double expected_z);

struct BreakdownResult {
  JumpFamilyInstance instance;
  double expected_z = 0.0;
  bool sign_holds = false;
  // Monte Carlo of the eps1-calibrated test on data from the eps2-LFDs.
  // The error that should tend to 1 is type2 for TV/Huber, type1 for Sub.
  std::vector<TrialReport> mc;
};

// Throws ConditionNotMet when the sign fails and require_sign is set.
BreakdownResult BreakdownExperiment(Model model, double eps, double t,
                                    const std::vector<std::int64_t>& n_grid,
                                    std::int64_t trials, std::uint64_t seed,
                                    int jobs = 1, bool require_sign = true);

struct OnsetScan {
  std::vector<std::pair<double, double>> points;  // (eps, expected Z)
  // Largest scanned eps from which the sign holds at every smaller scanned
  // eps. Zero when it never settles.
  double onset = 0.0;
};

// Scans eps = eps_start, eps_start/factor, ... down to eps_min.
OnsetScan BreakdownOnsetScan(Model model, double t, double eps_start,
                             double eps_min, double factor = std::sqrt(10.0));

struct CorpusInstance {
  std::uint64_t id = 0;
  Dist p{std::vector<double>{1.0}};
  Dist q{std::vector<double>{1.0}};
  double eps = 0.0;
};

// Flat-Dirichlet pairs on 2..8 points with full support and eps uniform in
// (0, tv/4]. Instance i depends only on (seed, i).
std::vector<CorpusInstance> RandomCorpus(std::size_t count, std::uint64_t seed,
                                         std::size_t k_min = 2,
                                         std::size_t k_max = 8);

struct ApproxHellinger {
  double h_a = 0.0;  // exact sum over A = {p/q >= 1}
  double h_b = 0.0;  // exact sum over B = {p/q < 1}
  double tilde_a = 0.0;
  double tilde_b = 0.0;
};

// Exact region sums of (sqrt p - sqrt q)^2 and their surrogates, with A1 =
// [1, 1+delta0), A2 = [1+delta0, inf], B1 = [1/(1+delta0), 1) and
// B2 = [0, 1/(1+delta0)).
ApproxHellinger ApproxHellingerDecomposition(const std::vector<double>& p,
                                             const std::vector<double>& q,
                                             double delta0 = 1.0);

// Sub-LFD contributions on A and B (regions of the original pair) at eps1
// are at least half of those at eps2.
bool MonotoneContributionCheck(const Dist& p, const Dist& q, double eps1,
                               double eps2);

struct SandwichReport {
  std::uint64_t id = 0;
  double hel_tv = 0.0;       // hel^2 of the TV LFDs at eps
  double hel_hub = 0.0;
  double hel_sub = 0.0;
  double hel_tv_half = 0.0;  // TV LFDs at eps/2
  bool tv_le_hub = false;
  bool half_hub_le_tv_half = false;
  bool clip_order = false;
  bool sub_ge_tv = false;
  bool sub_ge_hub = false;
  bool monotone_contribution = false;
  // hel^2 TV((2+delta0) eps) / hel^2 Sub(eps) and hel^2 Hub((1+delta0) eps)
  // / hel^2 Sub(eps). NaN when the rescaled sets overlap.
  double ratio_tv_rescaled = 0.0;
  double ratio_hub_rescaled = 0.0;
  // hel^2 of the Sub LFDs over its surrogate tilde_a + tilde_b.
  double surrogate_ratio = 0.0;

  bool all_pass() const {
    return tv_le_hub && half_hub_le_tv_half && clip_order && sub_ge_tv &&
           sub_ge_hub && monotone_contribution;
  }
};

std::vector<SandwichReport> SandwichCertify(
    const std::vector<CorpusInstance>& corpus, double delta0 = 1.0,
    int jobs = 1);

struct Delta0Row {
  double eps = 0.0;
  double eps1 = 0.0;          // eps - eps^(1+t)
  double eps2 = 0.0;          // 2eps/(1-2eps) - eps^(1+t)
  double hel_tv_eps1 = 0.0;   // TV LFDs at eps1
  double hel_sub_2eps1 = 0.0; // Sub LFDs at 2 eps1
  // n_TV(eps1) / n_Sub(2 eps1) = hel_sub_2eps1 / hel_tv_eps1.
  double ratio = 0.0;
  bool eps2_exceeds_2eps1 = false;
};

// The jump family example showing that the factor 2 in the TV/Sub sandwich
// needs slack.
std::vector<Delta0Row> Delta0Counterexample(const std::vector<double>& eps_grid,
                                            double t);

struct Witness {
  std::string part;   // "i", "ii", "iv", "v"
  std::string label;
  double c = 0.0;     // the constant C (or c in part ii)
  double eps = 0.0;
  // (center, candidate) pairs. A pair of LFDs is two entries.
  std::vector<std::pair<Dist, Dist>> members;
  Model in_model = Model::kTv;
  double in_eps = 0.0;
  Model out_model = Model::kTv;
  double out_eps = 0.0;
  bool in_observed = false;   // every candidate is in its in-set
  bool out_observed = true;   // every candidate is in its out-set
  bool closed_form_ok = true; // constructed LFDs equal the stated ones

  bool reproduced() const { return in_observed && !out_observed && closed_form_ok; }
};

// The explicit two-point witnesses for C in `cs`, with eps = 0.01/C.
std::vector<Witness> NoSimulationWitnesses(const std::vector<double>& cs = {
                                               2.0, 10.0, 100.0});

// p = (0, 1/2, 1/2), q = (2a^1.5, 1/2 + a - a^1.5, 1/2 - a - a^1.5).
std::pair<Dist, Dist> PrivacyExample(double alpha);

}  // namespace robustht

#endif  // ROBUSTHT_EXPERIMENTS_HPP_
