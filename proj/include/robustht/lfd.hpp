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

// Clip calibration and least-favourable distribution pairs for Huber, TV and
// subtractive contamination.

#ifndef ROBUSTHT_LFD_HPP_
#define ROBUSTHT_LFD_HPP_

#include <utility>
#include <vector>

#include "robustht/dist.hpp"

namespace robustht {

// Required bound on the calibration residuals.
inline constexpr double kResidualTolerance = 1e-10;
// Relative slack in the subtractive "p(bar H) > eps/(1+eps)" degeneracy test.
inline constexpr double kDegeneracyTolerance = 1e-12;
// LFD masses must sum to one within this.
inline constexpr double kLfdSumTolerance = 1e-10;

struct LfdPair {
  Model model = Model::kTv;
  double eps = 0.0;    // contamination around p
  double eps_q = 0.0;  // contamination around q; equals eps except for Sub
  Dist p_star{std::vector<double>{1.0}};
  Dist q_star{std::vector<double>{1.0}};
  ClipPair clips;
  bool degenerate_high() const { return clips.degenerate_high; }
  bool degenerate_low() const { return clips.degenerate_low; }
};

// Right-hand side of the calibration equations: eps for TV, eps/(1-eps) for
// Huber, eps/(1+eps) for subtractive.
double CalibrationTarget(Model model, double eps);

// Left-hand sides of the calibration equations evaluated at a clip, with
// H = {p/q > c} and L = {p/q < c}. Both are monotone in c.
double UpperCalibrationLhs(const Dist& p, const Dist& q, double c, Model model);
double LowerCalibrationLhs(const Dist& p, const Dist& q, double c, Model model);

// Solves the calibration equations by walking the sorted likelihood-ratio
// breakpoints and solving the closed form on the segment holding the root.
// Throws SetsOverlap when the uncertainty sets intersect.
ClipPair SolveClips(const Dist& p, const Dist& q, double eps, Model model);

// Subtractive contamination with eps_p around p and eps_q around q.
ClipPair SolveSubClips(const Dist& p, const Dist& q, double eps_p,
                       double eps_q);

LfdPair BuildLfds(const Dist& p, const Dist& q, double eps, Model model);
LfdPair BuildSubLfds(const Dist& p, const Dist& q, double eps_p, double eps_q);

// Applies the per-region LFD formulas at the given clips with no calibration.
// The result need not normalise. For Sub, eps_q < 0 means eps_q = eps.
std::pair<std::vector<double>, std::vector<double>> BuildLfdsUncalibrated(
    const Dist& p, const Dist& q, const ClipPair& clips, Model model,
    double eps, double eps_q = -1.0);

// Given p_eps in the eps-set around `center`, returns a point of the
// eps0-set within TV distance eps - eps0 of p_eps.
Dist NearestInnerPoint(const Dist& p_eps, const Dist& center, double eps,
                       double eps0, Model model);

}  // namespace robustht

#endif  // ROBUSTHT_LFD_HPP_
