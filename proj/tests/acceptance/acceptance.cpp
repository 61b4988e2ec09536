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

// Acceptance checks. `robustht_acceptance N` runs check N and prints one
// PASS/FAIL line; with no argument every check runs. The exit status is
// nonzero when any selected check fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "clip_oracle.hpp"
#include "robustht/adversary.hpp"
#include "robustht/complexity.hpp"
#include "robustht/dist.hpp"
#include "robustht/errors.hpp"
#include "robustht/experiments.hpp"
#include "robustht/lfd.hpp"
#include "robustht/random.hpp"

namespace robustht {
namespace {

constexpr std::uint64_t kSeed = 20260315;
constexpr Model kModels[] = {Model::kTv, Model::kHub, Model::kSub};

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
};

int Jobs() {
  unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::clamp(hw, 1u, 16u));
}

double MaxAbsDiff(const Dist& d, const std::vector<double>& expected) {
  double m = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    m = std::max(m, std::abs(d[i] - expected[i]));
  }
  return m;
}

// Closed-form LFDs on the jump family.
void Criterion1(Outcome& out) {
  const double tol = 1e-12;
  std::vector<std::string> failed;
  double worst = 0.0;
  auto check = [&](const std::string& name, double err) {
    worst = std::max(worst, err);
    if (!(err <= tol)) {
      std::ostringstream s;
      s << name << "=" << err;
      failed.push_back(s.str());
    }
  };
  for (double e : {0.01, 0.005}) {
    auto [p, q] = JumpPair(e);
    std::string tag = "eps=" + std::to_string(e).substr(0, 5) + " ";

    LfdPair tv2 = BuildLfds(p, q, e, Model::kTv);
    check(tag + "tv2.p", MaxAbsDiff(tv2.p_star, {0.5 - 9 * e, 0.5 + 8 * e, e}));
    check(tag + "tv2.q", MaxAbsDiff(tv2.q_star, {0.5 - e, 0.5, e}));
    const double d_tv = std::pow(e, 1.25);
    LfdPair tv1 = BuildLfds(p, q, e - d_tv, Model::kTv);
    check(tag + "tv1.p3", std::abs(tv1.p_star[2] - (e + d_tv)));
    check(tag + "tv1.q3", std::abs(tv1.q_star[2] - (e - d_tv)));

    const double h2 = JumpEps2(Model::kHub, e);
    LfdPair hub2 = BuildLfds(p, q, h2, Model::kHub);
    check(tag + "hub2.p",
          MaxAbsDiff(hub2.p_star, {p[0] + (p[1] + p[2]) * h2, p[1] * (1 - h2),
                                   p[2] * (1 - h2)}));
    check(tag + "hub2.q", MaxAbsDiff(hub2.q_star, {q[0] * (1 - h2), q[1] * (1 - h2),
                                                   (q[0] + q[1]) * h2}));
    check(tag + "hub2.p3=eps2", std::abs(hub2.p_star[2] - h2));
    check(tag + "hub2.q3=eps2", std::abs(hub2.q_star[2] - h2));
    const double h1 = h2 - std::pow(e, 1.25);
    LfdPair hub1 = BuildLfds(p, q, h1, Model::kHub);
    check(tag + "hub1.p3", std::abs(hub1.p_star[2] - 2 * e * (1 - h1)));
    check(tag + "hub1.q3", std::abs(hub1.q_star[2] - h1));

    const double s2 = JumpEps2(Model::kSub, e);
    LfdPair sub2 = BuildLfds(p, q, s2, Model::kSub);
    check(tag + "sub2.p", MaxAbsDiff(sub2.p_star, {p[0] * (1 + s2), p[1] * (1 + s2), 0.0}));
    check(tag + "sub2.q", MaxAbsDiff(sub2.q_star, {q[0] * (1 - s2), q[1] * (1 + s2), 0.0}));
    const double s1 = s2 - std::pow(e, 1.5);
    LfdPair sub1 = BuildLfds(p, q, s1, Model::kSub);
    check(tag + "sub1.p3", std::abs(sub1.p_star[2] - (2 * e * (1 + s1) - s1)));
    check(tag + "sub1.q3", std::abs(sub1.q_star[2]));
  }
  out.pass = failed.empty();
  out.detail << "max deviation " << worst << " (tol " << tol << ")";
  if (!failed.empty()) {
    out.detail << "; mismatches:";
    for (const std::string& f : failed) out.detail << " " << f;
  }
}

// Clip solver against the breakpoint-enumeration oracle.
void Criterion2(Outcome& out) {
  std::vector<CorpusInstance> corpus = RandomCorpus(1000, kSeed);
  double worst_clip = 0.0, worst_res = 0.0;
  int failures = 0;
  for (const CorpusInstance& c : corpus) {
    for (Model m : kModels) {
      ClipPair clips = SolveClips(c.p, c.q, c.eps, m);
      double up = testing::EnumeratedUpperClip(c.p.probs(), c.q.probs(), c.eps, m);
      double lo = testing::EnumeratedLowerClip(c.p.probs(), c.q.probs(), c.eps, m);
      double du = std::abs(clips.upper - up) / std::max(1.0, up);
      double dl = std::abs(clips.lower - lo);
      double t = CalibrationTarget(m, c.eps);
      double ru = std::abs(UpperCalibrationLhs(c.p, c.q, clips.upper, m) - t);
      double rl = std::abs(LowerCalibrationLhs(c.p, c.q, clips.lower, m) - t);
      double dc = std::max(du, dl);
      double r = std::max(ru, rl);
      if (std::isnan(dc)) dc = kInf;
      worst_clip = std::max(worst_clip, dc);
      worst_res = std::max(worst_res, r);
      if (!(dc <= 1e-9) || !(r <= 1e-10)) ++failures;
    }
  }
  out.pass = failures == 0;
  out.detail << "instances=" << corpus.size() << " x 3 models, failures="
             << failures << ", max clip diff " << worst_clip
             << ", max residual " << worst_res;
}

// Log-log slopes of the LFD Hellinger divergences on the jump family.
void Criterion3(Outcome& out) {
  for (Model m : kModels) {
    double t = m == Model::kSub ? 0.5 : 0.25;
    double want1 = m == Model::kSub ? 1 + t : 1 + 2 * t;
    JumpResult r = JumpExperiment(DefaultEpsGrid(), t, m);
    bool ok2 = std::abs(r.fit2.slope - 2.0) <= 0.1;
    bool ok1 = std::abs(r.fit1.slope - want1) <= 0.1;
    out.pass = out.pass && ok1 && ok2;
    out.detail << ModelName(m) << ": eps2 slope " << r.fit2.slope
               << (ok2 ? "" : " (off)") << ", eps1 slope " << r.fit1.slope
               << " want " << want1 << (ok1 ? "" : " (off)") << "; ";
  }
}

// Exact oracle against the Bhattacharyya corridor and the frozen band.
void Criterion4(Outcome& out) {
  const double band_lo = 1.2, band_hi = 4.0;
  int taken = 0, corridor_fail = 0, band_fail = 0, monotone_fail = 0;
  double lo_seen = kInf, hi_seen = 0.0;
  for (std::uint64_t i = 0; taken < 50; ++i) {
    KeyedRng rng(kSeed + 4, i);
    std::size_t k = rng.Uniform() < 0.5 ? 2 : 3;
    Dist p = Dist::Normalized(rng.FlatDirichlet(k));
    Dist q = Dist::Normalized(rng.FlatDirichlet(k));
    double h = HellingerSq(p, q);
    if (1.0 / h > 60.0) continue;
    std::optional<std::int64_t> n = ExactSampleComplexity(p, q, 0.1, 200, Jobs());
    if (!n) continue;
    ++taken;
    double bc = 1.0 - h / 2.0;
    double lower = std::log(1.0 / 0.19) / (2.0 * std::log(1.0 / bc));
    double upper = std::ceil(std::log(10.0) / std::log(1.0 / bc));
    if (static_cast<double>(*n) < lower || static_cast<double>(*n) > upper) {
      ++corridor_fail;
    }
    double nh = static_cast<double>(*n) * h;
    lo_seen = std::min(lo_seen, nh);
    hi_seen = std::max(hi_seen, nh);
    if (nh < band_lo || nh > band_hi) ++band_fail;
    std::vector<double> curve = ProductTvCurve(p, q, *n, Jobs());
    for (std::size_t j = 1; j < curve.size(); ++j) {
      if (curve[j] < curve[j - 1] - 1e-12) {
        ++monotone_fail;
        break;
      }
    }
  }
  out.pass = corridor_fail == 0 && band_fail == 0 && monotone_fail == 0;
  out.detail << "instances=" << taken << ", corridor failures=" << corridor_fail
             << ", n*hel^2 in [" << lo_seen << ", " << hi_seen << "] vs band ["
             << band_lo << ", " << band_hi << "], monotonicity failures="
             << monotone_fail;
}

// Sandwich orderings on the random corpus.
void Criterion5(Outcome& out) {
  std::vector<SandwichReport> rs = SandwichCertify(RandomCorpus(1000, kSeed), 1.0, Jobs());
  int a = 0, b = 0, c = 0, d = 0;
  for (const SandwichReport& r : rs) {
    if (!r.tv_le_hub || !r.half_hub_le_tv_half) ++a;
    if (!r.clip_order) ++b;
    if (!r.sub_ge_tv || !r.sub_ge_hub) ++c;
    if (!r.monotone_contribution) ++d;
  }
  out.pass = a + b + c + d == 0;
  out.detail << "instances=" << rs.size() << ", failures (a)=" << a << " (b)=" << b
             << " (c)=" << c << " (d)=" << d;
}

// Uncalibrated TV Hellinger is monotone in each clip.
void Criterion6(Outcome& out) {
  int violations = 0, checks = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    KeyedRng rng(kSeed + 6, i);
    std::size_t k = 2 + static_cast<std::size_t>(rng.Uniform() * 7);
    Dist p = Dist::Normalized(rng.FlatDirichlet(k));
    Dist q = Dist::Normalized(rng.FlatDirichlet(k));
    auto hel = [&](double lo, double hi) {
      auto [ps, qs] = BuildLfdsUncalibrated(p, q, ClipPair{lo, hi}, Model::kTv, 0.0);
      return HellingerSq(ps, qs);
    };
    for (int j = 0; j < 20; ++j) {
      double lo = rng.Uniform();
      double hi = 1.0 / std::max(1e-3, rng.Uniform());
      double hi2 = hi * (1.0 + 2.0 * rng.Uniform());
      double lo2 = lo + (1.0 - lo) * rng.Uniform();
      double base = hel(lo, hi);
      checks += 2;
      if (hel(lo, hi2) < base) ++violations;
      if (hel(lo2, hi) > base) ++violations;
    }
  }
  out.pass = violations == 0;
  out.detail << "checks=" << checks << ", violations=" << violations;
}

// Breakdown under underestimated contamination.
void Criterion7(Outcome& out) {
  struct Case {
    Model m;
    double t;
  };
  for (Case c : {Case{Model::kTv, 0.2}, Case{Model::kHub, 0.3}, Case{Model::kSub, 0.5}}) {
    BreakdownResult r =
        BreakdownExperiment(c.m, 0.02, c.t, {50000}, 2000, kSeed + 7, Jobs(), false);
    const TrialReport& mc = r.mc.front();
    double err = c.m == Model::kSub ? mc.type1 : mc.type2;
    bool ok = r.sign_holds && err >= 0.9;
    out.pass = out.pass && ok;
    OnsetScan scan = BreakdownOnsetScan(c.m, c.t, 0.02, 1e-8);
    out.detail << ModelName(c.m) << ": E[Z]=" << r.expected_z
               << (r.sign_holds ? " (sign ok)" : " (wrong sign)") << ", error "
               << err << " at n=50000, sign onset eps=" << scan.onset << "; ";
  }
}

TestSpec ClippedLr(Model m, double eps) {
  TestSpec s;
  s.kind = TestKind::kClippedLr;
  s.calib_model = m;
  s.calib_eps = eps;
  return s;
}

// Greedy adaptive adversaries against a test calibrated at twice their level.
void Criterion8(Outcome& out) {
  const double eps = 0.05;
  auto [p, q] = JumpPair(eps);
  struct Case {
    AdversaryModel adv;
    Model base;
  };
  for (Case c : {Case{AdversaryModel::kATv, Model::kTv},
                 Case{AdversaryModel::kAHub, Model::kHub},
                 Case{AdversaryModel::kASub, Model::kSub}}) {
    Test test = Test::Make(p, q, ClippedLr(c.base, 2 * eps));
    const LfdPair& l = *test.lfds();
    auto n = static_cast<std::int64_t>(std::ceil(40.0 / HellingerSq(l.p_star, l.q_star)));
    AdversarySpec a;
    a.model = c.adv;
    a.eps = eps;
    a.strategy = Strategy::kGreedyAdaptive;
    TrialReport r = RunAdaptiveTrial(p, q, a, test, n, 2000, kSeed + 8, Jobs());
    double total = r.type1 + r.type2 + r.ci1 + r.ci2;
    out.pass = out.pass && total <= 0.2;
    out.detail << AdversaryModelName(c.adv) << ": n=" << n << " errors "
               << r.type1 << "+" << r.type2 << " (+CI " << r.ci1 + r.ci2 << ") = "
               << total << "; ";
  }
}

// The h statistic under greedy replacement at eps = hel^2/8.
void Criterion9(Outcome& out) {
  Dist p({0.6, 0.4});
  Dist q({0.4, 0.6});
  const double h = HellingerSq(p, q);
  const double eps = h / 8.0;
  auto n = static_cast<std::int64_t>(std::ceil(320.0 / h));
  TestSpec spec;
  spec.kind = TestKind::kHStat;
  Test test = Test::Make(p, q, spec);
  AdversarySpec a;
  a.model = AdversaryModel::kATv;
  a.eps = eps;
  a.strategy = Strategy::kGreedyAdaptive;
  TrialReport r = RunAdaptiveTrial(p, q, a, test, n, 2000, kSeed + 9, Jobs());
  bool mc_ok = r.type1 + r.type2 <= 0.1;

  double worst = 0.0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    KeyedRng rng(kSeed + 90, i);
    std::size_t k = 2 + static_cast<std::size_t>(rng.Uniform() * 7);
    Dist a1 = Dist::Normalized(rng.FlatDirichlet(k));
    Dist b1 = Dist::Normalized(rng.FlatDirichlet(k));
    auto [mp, mq] = HMeans(a1, b1);
    worst = std::max(worst, std::abs(mp - mq - HellingerSq(a1, b1)));
  }
  bool id_ok = worst <= 1e-12;
  out.pass = mc_ok && id_ok;
  out.detail << "hel^2=" << h << ", eps=" << eps << ", n=" << n << ", errors "
             << r.type1 << "+" << r.type2 << "; identity max deviation " << worst;
}

// Private sample-complexity curve shape.
void Criterion10(Outcome& out) {
  for (double alpha : {0.01, 0.003}) {
    auto [p, q] = PrivacyExample(alpha);
    PrivacyCurve c = PrivacyCurves(p, q, LogGrid(1e-6, 1e6, 100),
                                   IntegerLogGrid(1.0, 1e10, 200),
                                   GeometricGrid(1e-5, 0.5, 2.0));
    double lo = kInf, hi = 0.0;
    const double g_hi = c.tv * c.tv / c.hel_sq;
    for (std::size_t i = 0; i < c.gamma_grid.size(); ++i) {
      double g = c.gamma_grid[i];
      if (g > c.tv && g < g_hi) {
        lo = std::min(lo, c.n_priv[i]);
        hi = std::max(hi, c.n_priv[i]);
      }
    }
    double flat = hi / lo;
    // Grid points on either side of hel^2.
    std::size_t above = 0;
    while (above < c.eta_grid.size() && c.eta_grid[above] < c.hel_sq) ++above;
    double jump = 0.0;
    if (above > 0 && above < c.eta_grid.size()) {
      jump = c.n_transformation[above] / c.n_transformation[above - 1];
    }
    double need = 0.1 * c.tv * c.tv / (c.hel_sq * c.hel_sq);
    bool ok = flat <= 3.0 && jump >= need;
    out.pass = out.pass && ok;
    out.detail << "alpha=" << alpha << ": n_priv max/min on (tv, tv^2/hel^2) = "
               << flat << (flat <= 3.0 ? "" : " (off)") << ", N_T jump "
               << jump << " vs required " << need << (jump >= need ? "" : " (off)")
               << "; ";
  }
}

void Criterion11(Outcome& out) {
  std::vector<Witness> w = NoSimulationWitnesses({2.0, 10.0, 100.0});
  int bad = 0;
  for (const Witness& x : w) {
    if (!x.reproduced()) {
      ++bad;
      out.detail << "[" << x.label << " C=" << x.c << "] ";
    }
  }
  out.pass = bad == 0 && w.size() == 24;
  out.detail << "witnesses=" << w.size() << ", not reproduced=" << bad;
}

struct Criterion {
  std::function<void(Outcome&)> run;
  double limit_s;
};

int Run(int id, const Criterion& c) {
  Outcome out;
  auto start = std::chrono::steady_clock::now();
  try {
    c.run(out);
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail << "exception: " << e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bool in_time = secs < c.limit_s;
  bool pass = out.pass && in_time;
  std::printf("criterion %d: %s %s [%.2f s, limit %.0f s%s]\n", id, pass ? "PASS" : "FAIL",
              out.detail.str().c_str(), secs, c.limit_s, in_time ? "" : ", too slow");
  std::fflush(stdout);
  return pass ? 0 : 1;
}

}  // namespace
}  // namespace robustht

int main(int argc, char** argv) {
  using robustht::Criterion;
  const std::vector<Criterion> all{
      {robustht::Criterion1, 1},   {robustht::Criterion2, 30},
      {robustht::Criterion3, 5},   {robustht::Criterion4, 120},
      {robustht::Criterion5, 60},  {robustht::Criterion6, 10},
      {robustht::Criterion7, 120}, {robustht::Criterion8, 120},
      {robustht::Criterion9, 60},  {robustht::Criterion10, 10},
      {robustht::Criterion11, 1}};
  std::vector<int> ids;
  if (argc > 1) {
    for (int i = 1; i < argc; ++i) {
      int id = std::atoi(argv[i]);
      if (id < 1 || id > static_cast<int>(all.size())) {
        std::fprintf(stderr, "usage: %s [1-%zu ...]\n", argv[0], all.size());
        return 2;
      }
      ids.push_back(id);
    }
  } else {
    for (int i = 1; i <= static_cast<int>(all.size()); ++i) ids.push_back(i);
  }
  int failed = 0;
  for (int id : ids) failed += robustht::Run(id, all[static_cast<std::size_t>(id - 1)]);
  return failed == 0 ? 0 : 1;
}
