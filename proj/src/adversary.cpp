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

#include "robustht/adversary.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "robustht/errors.hpp"
#include "robustht/parallel.hpp"
#include "robustht/random.hpp"

namespace robustht {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

double HScore(double p, double q) {
  if (p == 0.0 && q == 0.0) return kNaN;
  double sp = std::sqrt(p);
  double sq = std::sqrt(q);
  return (sp - sq) / (sp + sq);
}

double LogRatio(double p, double q) {
  if (p == 0.0 && q == 0.0) return kNaN;
  if (q == 0.0) return kInf;
  if (p == 0.0) return -kInf;
  return std::log(p / q);
}

// Inverse-CDF sampler over a finite alphabet. Zero-mass symbols are never
// drawn.
class Sampler {
 public:
  explicit Sampler(const Dist& d) : cdf_(d.size()) {
    double s = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      s += d[i];
      cdf_[i] = s;
    }
  }

  int Draw(KeyedRng& rng) const {
    double u = rng.Uniform() * cdf_.back();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    // Walk back over trailing zero-mass symbols that upper_bound cannot skip
    // when u rounds onto the total.
    std::size_t i = static_cast<std::size_t>(it - cdf_.begin());
    while (i > 0 && cdf_[i] == cdf_[i - 1]) --i;
    return static_cast<int>(i);
  }

  void Fill(KeyedRng& rng, std::int64_t count, Sample& out) const {
    for (std::int64_t i = 0; i < count; ++i) out.push_back(Draw(rng));
  }

 private:
  std::vector<double> cdf_;
};

double CiRadius(double e, std::int64_t trials) {
  return 1.96 * std::sqrt(e * (1.0 - e) / static_cast<double>(trials));
}

TrialReport MakeReport(std::int64_t n, std::int64_t trials, std::uint64_t seed,
                       const std::vector<char>& err_p,
                       const std::vector<char>& err_q) {
  TrialReport r;
  r.n = n;
  r.trials = trials;
  r.seed = seed;
  std::int64_t e1 = std::accumulate(err_p.begin(), err_p.end(), std::int64_t{0});
  std::int64_t e2 = std::accumulate(err_q.begin(), err_q.end(), std::int64_t{0});
  r.type1 = static_cast<double>(e1) / static_cast<double>(trials);
  r.type2 = static_cast<double>(e2) / static_cast<double>(trials);
  r.ci1 = CiRadius(r.type1, trials);
  r.ci2 = CiRadius(r.type2, trials);
  r.ci_radius = std::max(r.ci1, r.ci2);
  return r;
}

void CheckRunArgs(std::int64_t n, std::int64_t trials) {
  if (n < 0) throw PreconditionViolated("n must be nonnegative");
  if (trials < 1) throw PreconditionViolated("trials must be positive");
}

void CheckAlphabet(const Dist& d, const Test& test) {
  if (d.size() != test.scores().size()) {
    throw AlphabetMismatch(d.size(), test.scores().size());
  }
}

// Runs both sides of every trial. `make` fills the dataset for one side and
// returns it; trial t uses keys 2t (p side) and 2t+1 (q side).
template <typename MakeFn>
TrialReport RunTrials(const Test& test, std::int64_t n, std::int64_t trials,
                      std::uint64_t seed, int jobs, MakeFn make) {
  std::vector<char> err_p(static_cast<std::size_t>(trials), 0);
  std::vector<char> err_q(static_cast<std::size_t>(trials), 0);
  ParallelFor(static_cast<std::size_t>(trials), jobs, [&](std::size_t t) {
    Sample x;
    x.reserve(static_cast<std::size_t>(n));
    for (int side = 0; side < 2; ++side) {
      KeyedRng rng(seed, 2 * static_cast<std::uint64_t>(t) +
                             static_cast<std::uint64_t>(side));
      x.clear();
      make(side == 0, rng, x);
      double stat = test.Statistic(x);
      bool decide_p = Decide(test, stat, rng.Uniform());
      if (side == 0) {
        err_p[t] = decide_p ? 0 : 1;
      } else {
        err_q[t] = decide_p ? 1 : 0;
      }
    }
  });
  return MakeReport(n, trials, seed, err_p, err_q);
}

double MeanScore(const Test& test, const Sample& x) {
  double s = 0.0;
  std::int64_t c = 0;
  for (int v : x) {
    if (v == kBottom) continue;
    s += test.Score(v);
    ++c;
  }
  return c == 0 ? kNaN : s / static_cast<double>(c);
}

// Positions of the m samples whose scores most favour the truth: largest
// scores when the truth is p, smallest when it is q. Ties break by position.
std::vector<std::size_t> MostFavourable(const Test& test, const Sample& x,
                                        std::int64_t m, bool truth_p) {
  std::vector<std::size_t> idx;
  idx.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != kBottom) idx.push_back(i);
  }
  std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(m), idx.size());
  auto better = [&](std::size_t a, std::size_t b) {
    double sa = test.Score(x[a]);
    double sb = test.Score(x[b]);
    if (sa != sb) return truth_p ? sa > sb : sa < sb;
    return a < b;
  };
  std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k),
                   idx.end(), better);
  idx.resize(k);
  return idx;
}

}  // namespace

std::string_view AdversaryModelName(AdversaryModel m) {
  switch (m) {
    case AdversaryModel::kHub: return "hub";
    case AdversaryModel::kTv: return "tv";
    case AdversaryModel::kSub: return "sub";
    case AdversaryModel::kAHub: return "a-hub";
    case AdversaryModel::kATv: return "a-tv";
    case AdversaryModel::kASub: return "a-sub";
  }
  return "?";
}

AdversaryModel ParseAdversaryModel(std::string_view name) {
  std::string s = Lower(name);
  if (s == "hub" || s == "huber") return AdversaryModel::kHub;
  if (s == "tv") return AdversaryModel::kTv;
  if (s == "sub" || s == "subtractive") return AdversaryModel::kSub;
  if (s == "a-hub") return AdversaryModel::kAHub;
  if (s == "a-tv") return AdversaryModel::kATv;
  if (s == "a-sub") return AdversaryModel::kASub;
  throw DomainError("unknown adversary model: " + std::string(name));
}

bool IsAdaptive(AdversaryModel m) {
  return m == AdversaryModel::kAHub || m == AdversaryModel::kATv ||
         m == AdversaryModel::kASub;
}

std::string_view TestKindName(TestKind k) {
  switch (k) {
    case TestKind::kClippedLr: return "clipped-lr";
    case TestKind::kScheffe: return "scheffe";
    case TestKind::kHStat: return "h-stat";
  }
  return "?";
}

TestKind ParseTestKind(std::string_view name) {
  std::string s = Lower(name);
  if (s == "clipped-lr") return TestKind::kClippedLr;
  if (s == "scheffe") return TestKind::kScheffe;
  if (s == "h-stat") return TestKind::kHStat;
  throw DomainError("unknown test kind: " + std::string(name));
}

Test Test::Make(const Dist& p, const Dist& q, const TestSpec& spec) {
  if (p.size() != q.size()) throw AlphabetMismatch(p.size(), q.size());
  if (!(spec.tie_randomization >= 0.0 && spec.tie_randomization <= 1.0)) {
    throw PreconditionViolated("tie_randomization must lie in [0,1]");
  }
  Test t;
  t.spec_ = spec;
  const std::size_t k = p.size();
  t.scores_.resize(k);
  switch (spec.kind) {
    case TestKind::kClippedLr: {
      t.lfds_ = BuildLfds(p, q, spec.calib_eps, spec.calib_model);
      for (std::size_t i = 0; i < k; ++i) {
        t.scores_[i] = LogRatio(t.lfds_->p_star[i], t.lfds_->q_star[i]);
      }
      t.threshold_ = spec.threshold;
      break;
    }
    case TestKind::kHStat: {
      for (std::size_t i = 0; i < k; ++i) t.scores_[i] = HScore(p[i], q[i]);
      auto [mp, mq] = HMeans(p, q);
      t.threshold_ = 0.5 * (mp + mq);
      break;
    }
    case TestKind::kScheffe: {
      double pa = 0.0;
      double qa = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        bool in_a = p[i] >= q[i];
        t.scores_[i] = (p[i] == 0.0 && q[i] == 0.0) ? kNaN : (in_a ? 1.0 : 0.0);
        if (in_a) {
          pa += p[i];
          qa += q[i];
        }
      }
      t.threshold_ = 0.5 * (pa + qa);
      break;
    }
  }
  bool any = false;
  for (std::size_t i = 0; i < k; ++i) {
    double s = t.scores_[i];
    if (std::isnan(s)) continue;
    int si = static_cast<int>(i);
    if (!any) {
      t.argmin_ = t.argmax_ = si;
      any = true;
      continue;
    }
    if (s < t.scores_[static_cast<std::size_t>(t.argmin_)]) t.argmin_ = si;
    if (s > t.scores_[static_cast<std::size_t>(t.argmax_)]) t.argmax_ = si;
  }
  return t;
}

double Test::Score(int symbol) const {
  if (symbol == kBottom) return 0.0;
  if (symbol < 0 || static_cast<std::size_t>(symbol) >= scores_.size()) {
    throw DomainError("symbol out of range: " + std::to_string(symbol));
  }
  double s = scores_[static_cast<std::size_t>(symbol)];
  if (std::isnan(s)) {
    throw DomainError("symbol " + std::to_string(symbol) +
                      " has zero mass under both reference distributions");
  }
  return s;
}

double Test::Statistic(const Sample& sample) const {
  if (spec_.kind == TestKind::kClippedLr) {
    double s = 0.0;
    for (int v : sample) s += Score(v);
    return s;
  }
  return MeanScore(*this, sample);
}

bool Decide(const Test& test, double statistic, double u) {
  double thr = test.threshold();
  if (statistic > thr) return true;
  if (statistic < thr) return false;
  return u < test.spec().tie_randomization;  // ties and NaN
}

double ClippedLrStatistic(const Sample& sample, const LfdPair& lfds) {
  double s = 0.0;
  for (int v : sample) {
    if (v == kBottom) continue;
    if (v < 0 || static_cast<std::size_t>(v) >= lfds.p_star.size()) {
      throw DomainError("symbol out of range: " + std::to_string(v));
    }
    auto i = static_cast<std::size_t>(v);
    double r = LogRatio(lfds.p_star[i], lfds.q_star[i]);
    if (std::isnan(r)) {
      throw DomainError("symbol " + std::to_string(v) +
                        " has zero mass under both LFDs");
    }
    s += r;
  }
  return s;
}

double HStatistic(const Sample& sample, const Dist& p, const Dist& q) {
  if (p.size() != q.size()) throw AlphabetMismatch(p.size(), q.size());
  if (sample.empty()) throw PreconditionViolated("h statistic of empty sample");
  double s = 0.0;
  std::int64_t c = 0;
  for (int v : sample) {
    if (v == kBottom) continue;
    if (v < 0 || static_cast<std::size_t>(v) >= p.size()) {
      throw DomainError("symbol out of range: " + std::to_string(v));
    }
    auto i = static_cast<std::size_t>(v);
    double h = HScore(p[i], q[i]);
    if (std::isnan(h)) {
      throw DomainError("symbol " + std::to_string(v) +
                        " has zero mass under p and q");
    }
    s += h;
    ++c;
  }
  return c == 0 ? kNaN : s / static_cast<double>(c);
}

std::pair<double, double> HMeans(const Dist& p, const Dist& q) {
  if (p.size() != q.size()) throw AlphabetMismatch(p.size(), q.size());
  double mp = 0.0;
  double mq = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double h = HScore(p[i], q[i]);
    if (std::isnan(h)) continue;
    mp += p[i] * h;
    mq += q[i] * h;
  }
  return {mp, mq};
}

bool ScheffeTest(const Sample& sample, const Dist& p, const Dist& q) {
  Test t = Test::Make(p, q, TestSpec{.kind = TestKind::kScheffe});
  return Decide(t, t.Statistic(sample), 0.0);
}

TrialReport RunObliviousTrial(const Dist& p_true, const Dist& q_true,
                              const Test& test, std::int64_t n,
                              std::int64_t trials, std::uint64_t seed,
                              int jobs) {
  CheckRunArgs(n, trials);
  CheckAlphabet(p_true, test);
  CheckAlphabet(q_true, test);
  Sampler sp(p_true);
  Sampler sq(q_true);
  return RunTrials(test, n, trials, seed, jobs,
                   [&](bool truth_p, KeyedRng& rng, Sample& x) {
                     (truth_p ? sp : sq).Fill(rng, n, x);
                   });
}

TrialReport RunAdaptiveTrial(const Dist& p, const Dist& q,
                             const AdversarySpec& adversary, const Test& test,
                             std::int64_t n, std::int64_t trials,
                             std::uint64_t seed, int jobs) {
  CheckRunArgs(n, trials);
  if (!IsAdaptive(adversary.model)) {
    throw PreconditionViolated("adaptive trial needs an adaptive model");
  }
  if (adversary.strategy != Strategy::kGreedyAdaptive) {
    throw PreconditionViolated("adaptive models use the greedy strategy");
  }
  if (!(adversary.eps >= 0.0 && adversary.eps < 1.0)) {
    throw PreconditionViolated("eps must lie in [0,1)");
  }
  CheckAlphabet(p, test);
  CheckAlphabet(q, test);
  const std::int64_t m = static_cast<std::int64_t>(
      std::floor(static_cast<double>(n) * adversary.eps + 1e-9));
  const double eps = adversary.eps;
  const bool sum_statistic = test.kind() == TestKind::kClippedLr;
  const bool check_shift = test.kind() == TestKind::kHStat &&
                           adversary.model == AdversaryModel::kATv;
  Sampler sp(p);
  Sampler sq(q);
  return RunTrials(test, n, trials, seed, jobs, [&](bool truth_p, KeyedRng& rng,
                                                    Sample& x) {
    const Sampler& s = truth_p ? sp : sq;
    // The adversary pushes towards the wrong hypothesis.
    const int target = truth_p ? test.ArgMinSymbol() : test.ArgMaxSymbol();
    switch (adversary.model) {
      case AdversaryModel::kATv: {
        s.Fill(rng, n, x);
        double before = check_shift ? MeanScore(test, x) : 0.0;
        for (std::size_t i : MostFavourable(test, x, m, truth_p)) x[i] = target;
        if (check_shift && n > 0) {
          double after = MeanScore(test, x);
          if (std::fabs(before - after) > 2.0 * eps + 1e-12) {
            throw std::logic_error("A-TV moved the h statistic by more than 2 eps");
          }
        }
        break;
      }
      case AdversaryModel::kAHub:
        s.Fill(rng, n - m, x);
        x.insert(x.end(), static_cast<std::size_t>(m), target);
        break;
      case AdversaryModel::kASub:
        s.Fill(rng, n, x);
        for (std::size_t i : MostFavourable(test, x, m, truth_p)) {
          // Deleting from a sum only helps when the term favours the truth.
          // For means, removing the current extreme always helps.
          if (sum_statistic) {
            double s = test.Score(x[i]);
            if (truth_p ? !(s > 0.0) : !(s < 0.0)) continue;
          }
          x[i] = kBottom;
        }
        break;
      default:
        break;
    }
  });
}

TrialReport RunAdversaryTrial(const Dist& p, const Dist& q,
                              const AdversarySpec& adversary, const Test& test,
                              std::int64_t n, std::int64_t trials,
                              std::uint64_t seed, int jobs) {
  if (IsAdaptive(adversary.model)) {
    return RunAdaptiveTrial(p, q, adversary, test, n, trials, seed, jobs);
  }
  Model model = adversary.model == AdversaryModel::kHub  ? Model::kHub
                : adversary.model == AdversaryModel::kTv ? Model::kTv
                                                         : Model::kSub;
  switch (adversary.strategy) {
    case Strategy::kLfdSampler: {
      if (adversary.eps == 0.0) {
        return RunObliviousTrial(p, q, test, n, trials, seed, jobs);
      }
      LfdPair lfd = BuildLfds(p, q, adversary.eps, model);
      return RunObliviousTrial(lfd.p_star, lfd.q_star, test, n, trials, seed,
                               jobs);
    }
    case Strategy::kFixedDist: {
      if (!adversary.fixed_p || !adversary.fixed_q) {
        throw PreconditionViolated("fixed-dist strategy needs both distributions");
      }
      if (!SetMembership(*adversary.fixed_p, p, adversary.eps, model) ||
          !SetMembership(*adversary.fixed_q, q, adversary.eps, model)) {
        throw PreconditionViolated(
            "fixed distributions lie outside the uncertainty sets");
      }
      return RunObliviousTrial(*adversary.fixed_p, *adversary.fixed_q, test, n,
                               trials, seed, jobs);
    }
    case Strategy::kGreedyAdaptive:
      break;
  }
  throw PreconditionViolated("greedy strategy needs an adaptive model");
}

std::int64_t EmpiricalComplexitySearch(const Dist& p, const Dist& q,
                                       const AdversarySpec& adversary,
                                       const Test& test, double target_error,
                                       std::int64_t trials, std::uint64_t seed,
                                       std::int64_t n_max, int jobs) {
  if (!(target_error > 0.0 && target_error < 1.0)) {
    throw PreconditionViolated("target error must lie in (0,1)");
  }
  auto run = [&](std::int64_t n) {
    return RunAdversaryTrial(p, q, adversary, test, n, trials, seed, jobs);
  };
  auto passes = [&](const TrialReport& r) {
    return r.type1 + r.type2 + r.ci1 + r.ci2 <= target_error;
  };
  std::int64_t lo = 0;  // largest n known to fail
  std::int64_t hi = 1;
  while (!passes(run(hi))) {
    lo = hi;
    if (hi >= n_max) {
      throw BudgetExhausted("no n <= " + std::to_string(n_max) +
                            " reached the target error");
    }
    hi = std::min(2 * hi, n_max);
  }
  while (hi - lo > 1) {
    std::int64_t mid = lo + (hi - lo) / 2;
    if (passes(run(mid))) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  // Spot check that the error curve is nonincreasing, up to the CIs.
  std::vector<std::int64_t> probes{std::max<std::int64_t>(1, hi / 4),
                                   std::max<std::int64_t>(1, hi / 2), hi};
  double prev_err = 2.0;
  double prev_ci = 0.0;
  for (std::int64_t n : probes) {
    TrialReport r = run(n);
    double err = r.type1 + r.type2;
    double ci = r.ci1 + r.ci2;
    if (err - ci > prev_err + prev_ci + 1e-12) {
      throw DomainError("error is not monotone in n; search result invalid");
    }
    prev_err = err;
    prev_ci = ci;
  }
  return hi;
}

}  // namespace robustht
