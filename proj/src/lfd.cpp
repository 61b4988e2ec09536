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

#include "robustht/lfd.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "robustht/errors.hpp"

namespace robustht {

namespace {

void CheckEps(double eps, Model model) {
  if (!(eps > 0.0) || !(eps < 1.0)) {
    std::ostringstream msg;
    msg << "contamination level must lie in (0,1) for model "
        << ModelName(model) << ", got " << eps;
    throw PreconditionViolated(msg.str());
  }
}

// Masses of a region of the alphabet.
struct Masses {
  double p = 0.0;
  double q = 0.0;
};

// Breakpoint data for one side: distinct finite likelihood ratios strictly
// beyond 1 with the masses sitting at each, plus the mass at the extreme
// ratio (inf above, 0 below).
struct Side {
  std::vector<double> ratios;  // ascending above 1, descending below 1
  std::vector<Masses> at;      // masses at each ratio
  Masses extreme;              // bar H or bar L
};

Side CollectSide(const Dist& p, const Dist& q, bool upper) {
  std::vector<std::pair<double, Masses>> pts;
  Side s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0 && q[i] == 0.0) continue;
    double r = LikelihoodRatio(p[i], q[i]);
    if (upper && std::isinf(r)) {
      s.extreme.p += p[i];
    } else if (!upper && r == 0.0) {
      s.extreme.q += q[i];
    } else if (upper ? r > 1.0 : r < 1.0) {
      pts.push_back({r, {p[i], q[i]}});
    }
  }
  std::sort(pts.begin(), pts.end(), [upper](const auto& a, const auto& b) {
    return upper ? a.first < b.first : a.first > b.first;
  });
  for (const auto& [r, m] : pts) {
    if (s.ratios.empty() || s.ratios.back() != r) {
      s.ratios.push_back(r);
      s.at.push_back({});
    }
    s.at.back().p += m.p;
    s.at.back().q += m.q;
  }
  return s;
}

// beyond[j] = masses strictly beyond ratios[j] (away from 1), including the
// extreme set; beyond[-1] is everything on this side.
std::vector<Masses> BeyondSums(const Side& s) {
  const std::size_t m = s.ratios.size();
  std::vector<Masses> beyond(m + 1);
  beyond[m] = s.extreme;  // sentinel index m stands for "past the last"
  Masses acc = s.extreme;
  for (std::size_t j = m; j-- > 0;) {
    beyond[j] = acc;
    acc.p += s.at[j].p;
    acc.q += s.at[j].q;
  }
  beyond.push_back(acc);  // index m+1: the whole side
  return beyond;
}

Masses AboveMasses(const Dist& p, const Dist& q, double c) {
  Masses m;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0 && q[i] == 0.0) continue;
    if (LikelihoodRatio(p[i], q[i]) > c) {
      m.p += p[i];
      m.q += q[i];
    }
  }
  return m;
}

Masses BelowMasses(const Dist& p, const Dist& q, double c) {
  Masses m;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0 && q[i] == 0.0) continue;
    if (LikelihoodRatio(p[i], q[i]) < c) {
      m.p += p[i];
      m.q += q[i];
    }
  }
  return m;
}

double UpperLhs(Masses h, double c, Model model) {
  switch (model) {
    case Model::kTv:
      return (h.p - c * h.q) / (1.0 + c);
    case Model::kHub:
      return h.p / c - h.q;
    case Model::kSub:
      return h.p - c * h.q;
  }
  return 0.0;
}

double LowerLhs(Masses l, double c, Model model) {
  switch (model) {
    case Model::kTv:
      return (c * l.q - l.p) / (1.0 + c);
    case Model::kHub:
      return c * l.q - l.p;
    case Model::kSub:
      return c == 0.0 ? l.q : l.q - l.p / c;
  }
  return 0.0;
}

// Root of UpperLhs(h, c) = target for a fixed H.
double SolveUpperSegment(Masses h, double target, Model model) {
  switch (model) {
    case Model::kTv:
      return (h.p - target) / (h.q + target);
    case Model::kHub:
      return h.p / (h.q + target);
    case Model::kSub:
      return h.q > 0.0 ? (h.p - target) / h.q : kInf;
  }
  return kInf;
}

// Root of LowerLhs(l, c) = target for a fixed L.
double SolveLowerSegment(Masses l, double target, Model model) {
  switch (model) {
    case Model::kTv:
      return (l.p + target) / (l.q - target);
    case Model::kHub:
      return (l.p + target) / l.q;
    case Model::kSub:
      return l.p > 0.0 ? l.p / (l.q - target) : 0.0;
  }
  return 0.0;
}

void CheckSeparated(const Dist& p, const Dist& q, double target, Model model,
                    double eps) {
  // Both sides share the value tv(p,q) (or tv/2 for TV) at c = 1.
  double at_one = UpperLhs(AboveMasses(p, q, 1.0), 1.0, model);
  if (at_one <= target) {
    std::ostringstream msg;
    msg << "sets overlap: " << ModelName(model) << " uncertainty sets at eps="
        << eps << " intersect (requires ";
    switch (model) {
      case Model::kTv:
        msg << "tv(p,q) > 2*eps";
        break;
      case Model::kHub:
        msg << "tv(p,q) > eps/(1-eps)";
        break;
      case Model::kSub:
        msg << "tv(p,q) > eps/(1+eps)";
        break;
    }
    msg << ", tv(p,q)=" << TvDistance(p, q) << ")";
    throw SetsOverlap(msg.str());
  }
}

// Smallest c > 1 with UpperLhs(c) <= target; sets degenerate_high for Sub
// when no finite root exists.
void SolveUpper(const Dist& p, const Dist& q, double target, Model model,
                ClipPair& clips) {
  Side side = CollectSide(p, q, /*upper=*/true);
  if (model == Model::kSub &&
      side.extreme.p > target * (1.0 + kDegeneracyTolerance)) {
    clips.upper = kInf;
    clips.degenerate_high = true;
    return;
  }
  const std::size_t m = side.ratios.size();
  std::vector<Masses> beyond = BeyondSums(side);
  double prev = 1.0;
  Masses h = beyond[m + 1];  // H on the segment (prev, r_j)
  for (std::size_t j = 0; j < m; ++j) {
    double r = side.ratios[j];
    if (UpperLhs(beyond[j], r, model) <= target) {
      clips.upper = std::clamp(SolveUpperSegment(h, target, model), prev, r);
      if (clips.upper <= 1.0) clips.upper = std::nextafter(1.0, 2.0);
      return;
    }
    prev = r;
    h = beyond[j];
  }
  // Last segment: H = bar H.
  if (model != Model::kSub && side.extreme.p == 0.0) {
    throw NoFiniteClip("upper calibration equation has no root");
  }
  double c = SolveUpperSegment(side.extreme, target, model);
  if (!std::isfinite(c)) {
    // Sub with p(bar H) equal to the target up to tolerance: every c past
    // the last breakpoint solves the equation; take the smallest.
    c = prev;
  }
  clips.upper = std::max(c, prev);
  if (clips.upper <= 1.0) clips.upper = std::nextafter(1.0, 2.0);
}

// Largest c < 1 with LowerLhs(c) <= target; sets degenerate_low for Sub
// when no positive root exists.
void SolveLower(const Dist& p, const Dist& q, double target, Model model,
                ClipPair& clips) {
  Side side = CollectSide(p, q, /*upper=*/false);
  if (model == Model::kSub &&
      side.extreme.q > target * (1.0 + kDegeneracyTolerance)) {
    clips.lower = 0.0;
    clips.degenerate_low = true;
    return;
  }
  const std::size_t m = side.ratios.size();
  std::vector<Masses> beyond = BeyondSums(side);
  double prev = 1.0;
  Masses l = beyond[m + 1];
  for (std::size_t j = 0; j < m; ++j) {
    double s = side.ratios[j];
    if (LowerLhs(beyond[j], s, model) <= target) {
      clips.lower = std::clamp(SolveLowerSegment(l, target, model), s, prev);
      if (clips.lower >= 1.0) clips.lower = std::nextafter(1.0, 0.0);
      return;
    }
    prev = s;
    l = beyond[j];
  }
  if (model != Model::kSub && side.extreme.q == 0.0) {
    throw NoFiniteClip("lower calibration equation has no root");
  }
  // Sub here has a flat residual below the last breakpoint: take the
  // largest root.
  double c = model == Model::kSub
                 ? prev
                 : SolveLowerSegment(side.extreme, target, model);
  clips.lower = std::min(c, prev);
  if (clips.lower >= 1.0) clips.lower = std::nextafter(1.0, 0.0);
}

}  // namespace

double CalibrationTarget(Model model, double eps) {
  switch (model) {
    case Model::kTv:
      return eps;
    case Model::kHub:
      return eps / (1.0 - eps);
    case Model::kSub:
      return eps / (1.0 + eps);
  }
  return eps;
}

double UpperCalibrationLhs(const Dist& p, const Dist& q, double c,
                           Model model) {
  if (std::isinf(c)) {
    if (model == Model::kSub) return CollectSide(p, q, true).extreme.p;
    return 0.0;
  }
  return UpperLhs(AboveMasses(p, q, c), c, model);
}

double LowerCalibrationLhs(const Dist& p, const Dist& q, double c,
                           Model model) {
  if (c == 0.0) {
    if (model == Model::kSub) return CollectSide(p, q, false).extreme.q;
    return 0.0;
  }
  return LowerLhs(BelowMasses(p, q, c), c, model);
}

ClipPair SolveClips(const Dist& p, const Dist& q, double eps, Model model) {
  if (p.size() != q.size()) throw AlphabetMismatch(p.size(), q.size());
  if (model == Model::kSub) return SolveSubClips(p, q, eps, eps);
  CheckEps(eps, model);
  double target = CalibrationTarget(model, eps);
  CheckSeparated(p, q, target, model, eps);
  ClipPair clips;
  SolveUpper(p, q, target, model, clips);
  SolveLower(p, q, target, model, clips);
  return clips;
}

ClipPair SolveSubClips(const Dist& p, const Dist& q, double eps_p,
                       double eps_q) {
  if (p.size() != q.size()) throw AlphabetMismatch(p.size(), q.size());
  CheckEps(eps_p, Model::kSub);
  CheckEps(eps_q, Model::kSub);
  double target_p = CalibrationTarget(Model::kSub, eps_p);
  double target_q = CalibrationTarget(Model::kSub, eps_q);
  double overlap = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    overlap += std::min((1.0 + eps_p) * p[i], (1.0 + eps_q) * q[i]);
  }
  if (overlap >= 1.0) {
    std::ostringstream msg;
    msg << "sets overlap: sub uncertainty sets at eps_p=" << eps_p
        << ", eps_q=" << eps_q << " intersect (requires sum_i min((1+eps_p)p,"
        << " (1+eps_q)q) < 1)";
    throw SetsOverlap(msg.str());
  }
  if (eps_p == eps_q) {
    CheckSeparated(p, q, target_p, Model::kSub, eps_p);
  } else if (TvDistance(p, q) <= std::max(target_p, target_q)) {
    throw PreconditionViolated(
        "asymmetric sub calibration needs tv(p,q) > eps/(1+eps) for both "
        "levels");
  }
  ClipPair clips;
  SolveUpper(p, q, target_p, Model::kSub, clips);
  SolveLower(p, q, target_q, Model::kSub, clips);
  return clips;
}

std::pair<std::vector<double>, std::vector<double>> BuildLfdsUncalibrated(
    const Dist& p, const Dist& q, const ClipPair& clips, Model model,
    double eps, double eps_q) {
  if (p.size() != q.size()) throw AlphabetMismatch(p.size(), q.size());
  if (eps_q < 0.0) eps_q = eps;
  const std::size_t k = p.size();
  std::vector<double> ps(k, 0.0), qs(k, 0.0);
  LrPartition part = LrPartitionOf(p, q, clips);
  const double cl = clips.lower;
  const double cu = clips.upper;

  switch (model) {
    case Model::kTv:
      for (std::size_t i : part.mid) {
        ps[i] = p[i];
        qs[i] = q[i];
      }
      for (std::size_t i : part.low) {
        ps[i] = cl * (p[i] + q[i]) / (1.0 + cl);
        qs[i] = (p[i] + q[i]) / (1.0 + cl);
      }
      for (std::size_t i : part.high) {
        ps[i] = cu * (p[i] + q[i]) / (1.0 + cu);
        qs[i] = (p[i] + q[i]) / (1.0 + cu);
      }
      break;
    case Model::kHub:
      for (std::size_t i = 0; i < k; ++i) {
        ps[i] = (1.0 - eps) * p[i];
        qs[i] = (1.0 - eps) * q[i];
      }
      for (std::size_t i : part.low) ps[i] = (1.0 - eps) * cl * q[i];
      for (std::size_t i : part.high) qs[i] = (1.0 - eps) * p[i] / cu;
      break;
    case Model::kSub: {
      for (std::size_t i = 0; i < k; ++i) {
        ps[i] = (1.0 + eps) * p[i];
        qs[i] = (1.0 + eps_q) * q[i];
      }
      for (std::size_t i : part.high) ps[i] = cu * (1.0 + eps) * q[i];
      for (std::size_t i : part.low) qs[i] = (1.0 + eps_q) * p[i] / cl;
      if (clips.degenerate_high) {
        double bar = 0.0;
        for (std::size_t i : part.bar_high) bar += p[i];
        double keep = 1.0 - eps / ((1.0 + eps) * bar);
        for (std::size_t i : part.bar_high) ps[i] = (1.0 + eps) * p[i] * keep;
      }
      if (clips.degenerate_low) {
        double bar = 0.0;
        for (std::size_t i : part.bar_low) bar += q[i];
        double keep = 1.0 - eps_q / ((1.0 + eps_q) * bar);
        for (std::size_t i : part.bar_low) qs[i] = (1.0 + eps_q) * q[i] * keep;
      }
      break;
    }
  }
  return {std::move(ps), std::move(qs)};
}

namespace {

Dist AsLfd(std::vector<double> masses, const char* which) {
  try {
    return Dist(std::move(masses), kLfdSumTolerance);
  } catch (const InvalidDistribution& e) {
    throw std::logic_error(std::string("LFD ") + which +
                           " failed to normalise: " + e.what());
  }
}

}  // namespace

LfdPair BuildLfds(const Dist& p, const Dist& q, double eps, Model model) {
  if (model == Model::kSub) return BuildSubLfds(p, q, eps, eps);
  ClipPair clips = SolveClips(p, q, eps, model);
  auto [ps, qs] = BuildLfdsUncalibrated(p, q, clips, model, eps);
  LfdPair out;
  out.model = model;
  out.eps = eps;
  out.eps_q = eps;
  out.p_star = AsLfd(std::move(ps), "p*");
  out.q_star = AsLfd(std::move(qs), "q*");
  out.clips = clips;
  return out;
}

LfdPair BuildSubLfds(const Dist& p, const Dist& q, double eps_p,
                     double eps_q) {
  ClipPair clips = SolveSubClips(p, q, eps_p, eps_q);
  auto [ps, qs] =
      BuildLfdsUncalibrated(p, q, clips, Model::kSub, eps_p, eps_q);
  LfdPair out;
  out.model = Model::kSub;
  out.eps = eps_p;
  out.eps_q = eps_q;
  out.p_star = AsLfd(std::move(ps), "p*");
  out.q_star = AsLfd(std::move(qs), "q*");
  out.clips = clips;
  return out;
}

Dist NearestInnerPoint(const Dist& p_eps, const Dist& center, double eps,
                       double eps0, Model model) {
  if (p_eps.size() != center.size()) {
    throw AlphabetMismatch(p_eps.size(), center.size());
  }
  if (!(eps0 >= 0.0) || eps0 > eps) {
    throw PreconditionViolated("nearest_inner_point needs 0 <= eps0 <= eps");
  }
  if (!SetMembership(p_eps, center, eps, model)) {
    throw PreconditionViolated("p_eps is not in the eps-set around center");
  }
  if (eps0 == eps) return p_eps;
  const std::size_t k = center.size();
  std::vector<double> out(k);
  if (model == Model::kHub) {
    // p_eps = (1-eps) center + eps h; keep h and shrink its weight.
    for (std::size_t i = 0; i < k; ++i) {
      double h = std::max(0.0, (p_eps[i] - (1.0 - eps) * center[i]) / eps);
      out[i] = (1.0 - eps0) * center[i] + eps0 * h;
    }
  } else {
    double w = eps0 / eps;
    for (std::size_t i = 0; i < k; ++i) {
      out[i] = (1.0 - w) * center[i] + w * p_eps[i];
    }
  }
  return Dist::Normalized(std::move(out));
}

}  // namespace robustht
