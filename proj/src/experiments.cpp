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

#include "robustht/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "robustht/errors.hpp"
#include "robustht/parallel.hpp"
#include "robustht/random.hpp"

namespace robustht {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Relative slack for the hel^2 orderings.
constexpr double kOrderSlack = 1e-9;
// Relative slack for the clip ordering.
constexpr double kClipSlack = 1e-12;

bool Leq(double a, double b, double rel) {
  return a <= b + rel * std::fabs(b) + 1e-15;
}

double LfdHel(const Dist& p, const Dist& q, double eps, Model model) {
  LfdPair l = BuildLfds(p, q, eps, model);
  return HellingerSq(l.p_star, l.q_star);
}

bool CloseTo(const Dist& d, const std::vector<double>& expected) {
  if (d.size() != expected.size()) return false;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (std::fabs(d[i] - expected[i]) > 1e-12) return false;
  }
  return true;
}

Witness NewWitness(std::string part, std::string label, double c, double eps) {
  Witness w;
  w.part = std::move(part);
  w.label = std::move(label);
  w.c = c;
  w.eps = eps;
  return w;
}

}  // namespace

std::pair<Dist, Dist> JumpPair(double eps) {
  if (!(eps > 0.0 && eps <= 0.05)) {
    throw PreconditionViolated("jump family needs 0 < eps <= 0.05");
  }
  // The third coordinates are set from the first two so the sums are exact
  // to rounding.
  double a = 0.5 - 10.0 * eps;
  double b = 0.5 + 8.0 * eps;
  return {Dist({a, b, 2.0 * eps}), Dist({0.5, 0.5, 0.0})};
}

double JumpEps2(Model model, double eps) {
  switch (model) {
    case Model::kTv: return eps;
    case Model::kHub: return 2.0 * eps / (1.0 + 2.0 * eps);
    case Model::kSub: return 2.0 * eps / (1.0 - 2.0 * eps);
  }
  return eps;
}

JumpFamilyInstance MakeJumpInstance(Model model, double eps, double t) {
  double t_max = model == Model::kSub ? 1.0 : 0.5;
  if (!(t > 0.0 && t < t_max)) {
    std::ostringstream msg;
    msg << "t must lie in (0, " << t_max << ") for " << ModelName(model);
    throw PreconditionViolated(msg.str());
  }
  auto [p, q] = JumpPair(eps);
  JumpFamilyInstance inst{model, eps, t, p, q, 0.0, 0.0};
  inst.eps2 = JumpEps2(model, eps);
  inst.eps1 = inst.eps2 - std::pow(eps, 1.0 + t);
  if (!(inst.eps1 > 0.0 && inst.eps2 <= 2.5 * eps * (1.0 + 1e-12))) {
    throw PreconditionViolated("jump instance needs 0 < eps1 < eps2 <= tv/4");
  }
  return inst;
}

LogLogFit FitLogLog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw PreconditionViolated("log-log fit needs two or more matched points");
  }
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) {
      throw PreconditionViolated("log-log fit needs positive values");
    }
    sx += std::log(x[i]);
    sy += std::log(y[i]);
  }
  double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double dx = std::log(x[i]) - mx;
    double dy = std::log(y[i]) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  LogLogFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return f;
}

std::vector<double> DefaultEpsGrid() {
  return {1e-2, std::pow(10.0, -2.5), 1e-3, std::pow(10.0, -3.5), 1e-4};
}

JumpResult JumpExperiment(const std::vector<double>& eps_grid, double t,
                          Model model) {
  JumpResult r;
  r.model = model;
  r.t = t;
  std::vector<double> e, h1, h2;
  for (double eps : eps_grid) {
    JumpFamilyInstance inst = MakeJumpInstance(model, eps, t);
    JumpRow row{eps, inst.eps1, inst.eps2,
                LfdHel(inst.p, inst.q, inst.eps1, model),
                LfdHel(inst.p, inst.q, inst.eps2, model)};
    r.rows.push_back(row);
    e.push_back(eps);
    h1.push_back(row.hel_sq1);
    h2.push_back(row.hel_sq2);
  }
  r.fit1 = FitLogLog(e, h1);
  r.fit2 = FitLogLog(e, h2);
  return r;
}

double BreakdownExpectedZ(Model model, double eps, double t) {
  JumpFamilyInstance inst = MakeJumpInstance(model, eps, t);
  LfdPair calibrated = BuildLfds(inst.p, inst.q, inst.eps1, model);
  LfdPair opposing = BuildLfds(inst.p, inst.q, inst.eps2, model);
  const Dist& data = model == Model::kSub ? opposing.p_star : opposing.q_star;
  double z = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data[i] == 0.0) continue;
    double a = calibrated.p_star[i];
    double b = calibrated.q_star[i];
    if (a == 0.0 && b == 0.0) continue;
    if (b == 0.0) return kInf;
    if (a == 0.0) return -kInf;
    z += data[i] * std::log1p((a - b) / b);
  }
  return z;
}

bool BreakdownSignHolds(Model model, double expected_z) {
  return model == Model::kSub ? expected_z < 0.0 : expected_z > 0.0;
}

BreakdownResult BreakdownExperiment(Model model, double eps, double t,
                                    const std::vector<std::int64_t>& n_grid,
                                    std::int64_t trials, std::uint64_t seed,
                                    int jobs, bool require_sign) {
  BreakdownResult r;
  r.instance = MakeJumpInstance(model, eps, t);
  r.expected_z = BreakdownExpectedZ(model, eps, t);
  r.sign_holds = BreakdownSignHolds(model, r.expected_z);
  if (!r.sign_holds && require_sign) {
    std::ostringstream msg;
    msg << "breakdown sign condition not met for " << ModelName(model)
        << " at eps=" << eps << ", t=" << t << ": expected statistic "
        << r.expected_z << (model == Model::kSub ? " is not < 0" : " is not > 0");
    throw ConditionNotMet(msg.str());
  }
  LfdPair opposing = BuildLfds(r.instance.p, r.instance.q, r.instance.eps2, model);
  TestSpec spec;
  spec.kind = TestKind::kClippedLr;
  spec.calib_model = model;
  spec.calib_eps = r.instance.eps1;
  Test test = Test::Make(r.instance.p, r.instance.q, spec);
  for (std::int64_t n : n_grid) {
    r.mc.push_back(RunObliviousTrial(opposing.p_star, opposing.q_star, test, n,
                                     trials, seed, jobs));
  }
  return r;
}

OnsetScan BreakdownOnsetScan(Model model, double t, double eps_start,
                             double eps_min, double factor) {
  if (!(factor > 1.0) || !(eps_min > 0.0)) {
    throw PreconditionViolated("scan needs factor > 1 and eps_min > 0");
  }
  OnsetScan s;
  for (double eps = eps_start; eps >= eps_min * (1.0 - 1e-12); eps /= factor) {
    s.points.emplace_back(eps, BreakdownExpectedZ(model, eps, t));
  }
  for (auto it = s.points.rbegin(); it != s.points.rend(); ++it) {
    if (!BreakdownSignHolds(model, it->second)) break;
    s.onset = it->first;
  }
  return s;
}

std::vector<CorpusInstance> RandomCorpus(std::size_t count, std::uint64_t seed,
                                         std::size_t k_min, std::size_t k_max) {
  if (k_min < 2 || k_max < k_min) {
    throw PreconditionViolated("corpus needs 2 <= k_min <= k_max");
  }
  std::vector<CorpusInstance> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    KeyedRng rng(seed, i);
    for (;;) {
      auto k = k_min + static_cast<std::size_t>(
                           rng.Uniform() * static_cast<double>(k_max - k_min + 1));
      std::vector<double> p = rng.FlatDirichlet(k);
      std::vector<double> q = rng.FlatDirichlet(k);
      bool full = std::all_of(p.begin(), p.end(), [](double v) { return v > 0.0; }) &&
                  std::all_of(q.begin(), q.end(), [](double v) { return v > 0.0; });
      if (!full) continue;
      Dist dp = Dist::Normalized(p);
      Dist dq = Dist::Normalized(q);
      double tv = TvDistance(dp, dq);
      double eps = 0.25 * tv * (1.0 - rng.Uniform());
      if (!(eps > 0.0)) continue;
      out.push_back(CorpusInstance{i, dp, dq, eps});
      break;
    }
  }
  return out;
}

ApproxHellinger ApproxHellingerDecomposition(const std::vector<double>& p,
                                             const std::vector<double>& q,
                                             double delta0) {
  if (p.size() != q.size()) throw AlphabetMismatch(p.size(), q.size());
  if (!(delta0 > 0.0)) throw PreconditionViolated("delta0 must be positive");
  const double hi = 1.0 + delta0;
  const double lo = 1.0 / hi;
  ApproxHellinger a;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0 && q[i] == 0.0) continue;
    double r = LikelihoodRatio(p[i], q[i]);
    double d = std::sqrt(p[i]) - std::sqrt(q[i]);
    double diff = p[i] - q[i];
    if (r >= 1.0) {
      a.h_a += d * d;
      a.tilde_a += r >= hi ? p[i] : diff * diff / p[i];
    } else {
      a.h_b += d * d;
      a.tilde_b += r < lo ? q[i] : diff * diff / q[i];
    }
  }
  return a;
}

bool MonotoneContributionCheck(const Dist& p, const Dist& q, double eps1,
                               double eps2) {
  if (eps1 > eps2) throw PreconditionViolated("needs eps1 <= eps2");
  auto contributions = [&](double eps) {
    LfdPair l = BuildLfds(p, q, eps, Model::kSub);
    double ha = 0.0, hb = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] == 0.0 && q[i] == 0.0) continue;
      double d = std::sqrt(l.p_star[i]) - std::sqrt(l.q_star[i]);
      (p[i] >= q[i] ? ha : hb) += d * d;
    }
    return std::pair{ha, hb};
  };
  auto [a1, b1] = contributions(eps1);
  auto [a2, b2] = contributions(eps2);
  return Leq(0.5 * a2, a1, kOrderSlack) && Leq(0.5 * b2, b1, kOrderSlack);
}

std::vector<SandwichReport> SandwichCertify(
    const std::vector<CorpusInstance>& corpus, double delta0, int jobs) {
  std::vector<SandwichReport> out(corpus.size());
  ParallelFor(corpus.size(), jobs, [&](std::size_t i) {
    const CorpusInstance& c = corpus[i];
    SandwichReport& r = out[i];
    r.id = c.id;
    try {
      LfdPair tv = BuildLfds(c.p, c.q, c.eps, Model::kTv);
      LfdPair hub = BuildLfds(c.p, c.q, c.eps, Model::kHub);
      LfdPair sub = BuildLfds(c.p, c.q, c.eps, Model::kSub);
      LfdPair tv_half = BuildLfds(c.p, c.q, c.eps / 2.0, Model::kTv);
      r.hel_tv = HellingerSq(tv.p_star, tv.q_star);
      r.hel_hub = HellingerSq(hub.p_star, hub.q_star);
      r.hel_sub = HellingerSq(sub.p_star, sub.q_star);
      r.hel_tv_half = HellingerSq(tv_half.p_star, tv_half.q_star);
      r.tv_le_hub = Leq(r.hel_tv, r.hel_hub, kOrderSlack);
      r.half_hub_le_tv_half = Leq(0.5 * r.hel_hub, r.hel_tv_half, kOrderSlack);
      r.clip_order = Leq(tv_half.clips.lower, hub.clips.lower, kClipSlack) &&
                     Leq(hub.clips.upper, tv_half.clips.upper, kClipSlack);
      r.sub_ge_tv = Leq(r.hel_tv, r.hel_sub, kOrderSlack);
      r.sub_ge_hub = Leq(r.hel_hub, r.hel_sub, kOrderSlack);
      r.monotone_contribution =
          MonotoneContributionCheck(c.p, c.q, c.eps / 2.0, c.eps);
      auto rescaled = [&](double eps, Model m) {
        try {
          return LfdHel(c.p, c.q, eps, m) / r.hel_sub;
        } catch (const SetsOverlap&) {
          return kNaN;
        }
      };
      r.ratio_tv_rescaled = rescaled((2.0 + delta0) * c.eps, Model::kTv);
      r.ratio_hub_rescaled = rescaled((1.0 + delta0) * c.eps, Model::kHub);
      ApproxHellinger a = ApproxHellingerDecomposition(sub.p_star.probs(),
                                                       sub.q_star.probs(), delta0);
      r.surrogate_ratio = r.hel_sub / (a.tilde_a + a.tilde_b);
    } catch (const DomainError&) {
      r.tv_le_hub = r.half_hub_le_tv_half = r.clip_order = false;
      r.sub_ge_tv = r.sub_ge_hub = r.monotone_contribution = false;
    }
  });
  return out;
}

std::vector<Delta0Row> Delta0Counterexample(const std::vector<double>& eps_grid,
                                            double t) {
  if (!(t > 0.0 && t < 0.5)) throw PreconditionViolated("needs 0 < t < 1/2");
  std::vector<Delta0Row> rows;
  for (double eps : eps_grid) {
    auto [p, q] = JumpPair(eps);
    Delta0Row r;
    r.eps = eps;
    double d = std::pow(eps, 1.0 + t);
    r.eps1 = eps - d;
    r.eps2 = 2.0 * eps / (1.0 - 2.0 * eps) - d;
    r.hel_tv_eps1 = LfdHel(p, q, r.eps1, Model::kTv);
    r.hel_sub_2eps1 = LfdHel(p, q, 2.0 * r.eps1, Model::kSub);
    r.ratio = r.hel_sub_2eps1 / r.hel_tv_eps1;
    r.eps2_exceeds_2eps1 = r.eps2 > 2.0 * r.eps1;
    rows.push_back(r);
  }
  return rows;
}

std::vector<Witness> NoSimulationWitnesses(const std::vector<double>& cs) {
  std::vector<Witness> out;
  auto finish = [](Witness& w) {
    w.in_observed = true;
    w.out_observed = true;
    for (const auto& [center, cand] : w.members) {
      w.in_observed = w.in_observed && SetMembership(cand, center, w.in_eps, w.in_model);
      w.out_observed =
          w.out_observed && SetMembership(cand, center, w.out_eps, w.out_model);
    }
  };
  for (double big_c : cs) {
    if (!(big_c >= 1.0)) throw PreconditionViolated("witnesses need C >= 1");
    const double e = 0.01 / big_c;
    const double ce = big_c * e;

    {
      Witness w = NewWitness("i", "TV(eps) not in Hub(C eps)", big_c, e);
      w.members.emplace_back(Dist({e, 1.0 - e}), Dist({0.0, 1.0}));
      w.in_model = Model::kTv;
      w.in_eps = e;
      w.out_model = Model::kHub;
      w.out_eps = ce;
      finish(w);
      out.push_back(w);
    }
    {
      Witness w = NewWitness("i", "TV(eps) not in Sub(C eps)", big_c, e);
      w.members.emplace_back(Dist({0.0, 1.0}), Dist({e, 1.0 - e}));
      w.in_model = Model::kTv;
      w.in_eps = e;
      w.out_model = Model::kSub;
      w.out_eps = ce;
      finish(w);
      out.push_back(w);
    }
    {
      const double c = 1.0 / big_c;
      Witness w = NewWitness("ii", "Hub(c eps) not in Sub(eps)", c, e);
      w.members.emplace_back(Dist({1.0, 0.0}), Dist({1.0 - c * e, c * e}));
      w.in_model = Model::kHub;
      w.in_eps = c * e;
      w.out_model = Model::kSub;
      w.out_eps = e;
      finish(w);
      out.push_back(w);
    }
    {
      const double a = e / (1.0 + e);
      Witness w = NewWitness("ii", "Sub(eps) not in Hub(C eps)", big_c, e);
      w.members.emplace_back(Dist({a, 1.0 - a}), Dist({0.0, 1.0}));
      w.in_model = Model::kSub;
      w.in_eps = e;
      w.out_model = Model::kHub;
      w.out_eps = ce;
      finish(w);
      out.push_back(w);
    }

    const Dist p({0.0, 1.0});
    const Dist q({10.0 * e, 1.0 - 10.0 * e});
    LfdPair tv = BuildLfds(p, q, e, Model::kTv);
    bool tv_ok = CloseTo(tv.p_star, {e, 1.0 - e}) &&
                 CloseTo(tv.q_star, {9.0 * e, 1.0 - 9.0 * e});
    for (Model out_model : {Model::kHub, Model::kSub}) {
      Witness w = NewWitness("iv",
                std::string("TV LFDs not in ") +
                    (out_model == Model::kHub ? "Hub" : "Sub") + "(C eps)^2",
                big_c, e);
      w.members.emplace_back(p, tv.p_star);
      w.members.emplace_back(q, tv.q_star);
      w.in_model = Model::kTv;
      w.in_eps = e;
      w.out_model = out_model;
      w.out_eps = ce;
      finish(w);
      w.closed_form_ok = tv_ok;
      out.push_back(w);
    }
    {
      LfdPair hub = BuildLfds(p, q, e, Model::kHub);
      Witness w = NewWitness("v", "Hub LFDs not in Sub(C eps)^2", big_c, e);
      w.members.emplace_back(p, hub.p_star);
      w.members.emplace_back(q, hub.q_star);
      w.in_model = Model::kHub;
      w.in_eps = e;
      w.out_model = Model::kSub;
      w.out_eps = ce;
      finish(w);
      w.closed_form_ok =
          CloseTo(hub.p_star, {e, 1.0 - e}) &&
          CloseTo(hub.q_star, {10.0 * e * (1.0 - e), 1.0 - 10.0 * e + 10.0 * e * e});
      out.push_back(w);
    }
    {
      LfdPair sub = BuildLfds(p, q, e, Model::kSub);
      Witness w = NewWitness("v", "Sub LFDs not in Hub(C eps)^2", big_c, e);
      w.members.emplace_back(p, sub.p_star);
      w.members.emplace_back(q, sub.q_star);
      w.in_model = Model::kSub;
      w.in_eps = e;
      w.out_model = Model::kHub;
      w.out_eps = ce;
      finish(w);
      w.closed_form_ok =
          CloseTo(sub.p_star, {0.0, 1.0}) &&
          CloseTo(sub.q_star, {9.0 * e + 10.0 * e * e, (1.0 - 10.0 * e) * (1.0 + e)});
      out.push_back(w);
    }
  }
  return out;
}

std::pair<Dist, Dist> PrivacyExample(double alpha) {
  if (!(alpha > 0.0 && alpha < 0.25)) {
    throw PreconditionViolated("privacy example needs 0 < alpha < 1/4");
  }
  double a15 = std::pow(alpha, 1.5);
  return {Dist({0.0, 0.5, 0.5}),
          Dist({2.0 * a15, 0.5 + alpha - a15, 0.5 - alpha - a15})};
}

}  // namespace robustht
