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

#include "robustht/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "robustht/errors.hpp"
#include "robustht/io.hpp"
#include "robustht/lfd.hpp"
#include "robustht/parallel.hpp"

namespace robustht {

namespace {

constexpr double kNegInf = -kInf;

// Support of the pair with zero/zero symbols removed; they only ever take
// count zero and contribute nothing.
struct Support {
  std::vector<double> log_p;
  std::vector<double> log_q;
};

Support PairSupport(const Dist& p, const Dist& q) {
  if (p.size() != q.size()) throw AlphabetMismatch(p.size(), q.size());
  Support s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0 && q[i] == 0.0) continue;
    s.log_p.push_back(p[i] > 0.0 ? std::log(p[i]) : kNegInf);
    s.log_q.push_back(q[i] > 0.0 ? std::log(q[i]) : kNegInf);
  }
  return s;
}

// Log-probability increment for count c of a symbol with log-mass lm.
inline double CountTerm(std::int64_t c, double lm, double lgf) {
  if (c == 0) return -lgf;  // lgf = lgamma(1) = 0
  if (lm == kNegInf) return kNegInf;
  return static_cast<double>(c) * lm - lgf;
}

class Enumerator {
 public:
  Enumerator(const Support& s, std::int64_t n) : s_(s), n_(n) {
    lgf_.resize(static_cast<std::size_t>(n) + 1);
    for (std::int64_t c = 0; c <= n; ++c) {
      lgf_[static_cast<std::size_t>(c)] = std::lgamma(static_cast<double>(c) + 1.0);
    }
  }

  // Sum of |P(c) - Q(c)| over count vectors whose first coordinate is c0.
  double SliceSum(std::int64_t c0) const {
    const double base = lgf_[static_cast<std::size_t>(n_)];
    double lp = base + CountTerm(c0, s_.log_p[0], Lgf(c0));
    double lq = base + CountTerm(c0, s_.log_q[0], Lgf(c0));
    if (lp == kNegInf && lq == kNegInf) return 0.0;
    double sum = 0.0;
    Recurse(1, n_ - c0, lp, lq, sum);
    return sum;
  }

 private:
  double Lgf(std::int64_t c) const { return lgf_[static_cast<std::size_t>(c)]; }

  void Recurse(std::size_t i, std::int64_t left, double lp, double lq,
               double& sum) const {
    const std::size_t k = s_.log_p.size();
    if (i + 1 == k || i == k) {
      if (i == k) {
        if (left != 0) return;
      } else {
        lp += CountTerm(left, s_.log_p[i], Lgf(left));
        lq += CountTerm(left, s_.log_q[i], Lgf(left));
      }
      sum += AbsDiffExp(lp, lq);
      return;
    }
    for (std::int64_t c = 0; c <= left; ++c) {
      double np = lp + CountTerm(c, s_.log_p[i], Lgf(c));
      double nq = lq + CountTerm(c, s_.log_q[i], Lgf(c));
      if (np == kNegInf && nq == kNegInf) continue;
      Recurse(i + 1, left - c, np, nq, sum);
    }
  }

  static double AbsDiffExp(double a, double b) {
    if (a == kNegInf && b == kNegInf) return 0.0;
    double hi = std::max(a, b);
    double lo = std::min(a, b);
    if (lo == kNegInf) return std::exp(hi);
    return std::exp(hi) * -std::expm1(lo - hi);
  }

  const Support& s_;
  std::int64_t n_;
  std::vector<double> lgf_;
};

}  // namespace

double CountVectors(std::size_t k, std::int64_t n) {
  if (k == 0) return 0.0;
  // C(n + k - 1, k - 1) in log space.
  double v = std::lgamma(static_cast<double>(n + static_cast<std::int64_t>(k))) -
             std::lgamma(static_cast<double>(n) + 1.0) -
             std::lgamma(static_cast<double>(k));
  return std::round(std::exp(v));
}

double ProductTv(const Dist& p, const Dist& q, std::int64_t n, int jobs) {
  if (n < 0) throw PreconditionViolated("sample count must be nonnegative");
  Support s = PairSupport(p, q);
  if (n == 0 || s.log_p.empty()) return 0.0;
  if (CountVectors(s.log_p.size(), n) > kMaxEnumerationStates) {
    throw StateSpaceExceeded("exact enumeration would visit more than 1e7 "
                             "count vectors");
  }
  Enumerator e(s, n);
  std::vector<double> slices(static_cast<std::size_t>(n) + 1, 0.0);
  ParallelFor(slices.size(), jobs, [&](std::size_t c0) {
    slices[c0] = e.SliceSum(static_cast<std::int64_t>(c0));
  });
  double total = 0.0;
  for (double x : slices) total += x;
  return std::min(1.0, 0.5 * total);
}

std::vector<double> ProductTvCurve(const Dist& p, const Dist& q,
                                   std::int64_t n_max, int jobs) {
  Support s = PairSupport(p, q);
  if (n_max < 1) throw PreconditionViolated("n_max must be positive");
  if (CountVectors(s.log_p.size(), n_max) > kMaxEnumerationStates) {
    throw StateSpaceExceeded("exact enumeration would visit more than 1e7 "
                             "count vectors");
  }
  std::vector<double> curve;
  curve.reserve(static_cast<std::size_t>(n_max));
  for (std::int64_t n = 1; n <= n_max; ++n) {
    curve.push_back(ProductTv(p, q, n, jobs));
  }
  return curve;
}

std::optional<std::int64_t> ExactSampleComplexity(const Dist& p, const Dist& q,
                                                  double target_error,
                                                  std::int64_t n_max,
                                                  int jobs) {
  if (!(target_error > 0.0 && target_error < 1.0)) {
    throw PreconditionViolated("target error must lie in (0,1)");
  }
  Support s = PairSupport(p, q);
  if (n_max < 1) throw PreconditionViolated("n_max must be positive");
  if (CountVectors(s.log_p.size(), n_max) > kMaxEnumerationStates) {
    throw StateSpaceExceeded("exact enumeration would visit more than 1e7 "
                             "count vectors");
  }
  double prev = 0.0;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    double tv = ProductTv(p, q, n, jobs);
    if (tv < prev - 1e-9) {
      throw std::logic_error("product TV decreased in n");
    }
    prev = tv;
    if (tv >= 1.0 - target_error) return n;
  }
  return std::nullopt;
}

double PredictedSampleComplexity(const Dist& p, const Dist& q) {
  double h = HellingerSq(p, q);
  if (h == 0.0) throw DomainError("p and q coincide; no test exists");
  return 1.0 / h;
}

ComplexityEstimate RobustComplexity(const Dist& p, const Dist& q, double eps,
                                    Model model, std::int64_t exact_n_max,
                                    double target_error) {
  double tv = TvDistance(p, q);
  if (eps > tv / 4.0 * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "robust complexity needs eps <= tv(p,q)/4 = " << tv / 4.0
        << ", got " << eps;
    throw PreconditionViolated(msg.str());
  }
  LfdPair lfd = BuildLfds(p, q, eps, model);
  ComplexityEstimate est;
  est.model = model;
  est.eps = eps;
  est.hel_sq = HellingerSq(lfd.p_star, lfd.q_star);
  est.predicted_n = 1.0 / est.hel_sq;
  if (exact_n_max > 0) {
    est.exact_n =
        ExactSampleComplexity(lfd.p_star, lfd.q_star, target_error, exact_n_max);
  }
  return est;
}

double DGamma(const Dist& p, const Dist& q, double gamma) {
  if (p.size() != q.size()) throw AlphabetMismatch(p.size(), q.size());
  if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0 && q[i] == 0.0) continue;
    if (q[i] == 0.0) {
      s += gamma * p[i];
    } else if (p[i] == 0.0) {
      s += gamma * q[i];
    } else {
      double t = p[i] / q[i];
      double l = std::clamp(std::log(t), -gamma, gamma);
      s += q[i] * (t - 1.0) * l;
    }
  }
  return s;
}

PrivacyCurve PrivacyCurves(const Dist& p, const Dist& q,
                           std::vector<double> gamma_grid,
                           std::vector<double> n_grid,
                           std::vector<double> eta_grid,
                           const PrivacyConstants& constants) {
  auto check_grid = [](const std::vector<double>& g, const char* name) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!(g[i] > 0.0) || (i > 0 && !(g[i] > g[i - 1]))) {
        throw PreconditionViolated(std::string(name) +
                                   " grid must be positive and increasing");
      }
    }
  };
  check_grid(gamma_grid, "gamma");
  check_grid(n_grid, "n");
  check_grid(eta_grid, "eta");

  PrivacyCurve c;
  c.hel_sq = HellingerSq(p, q);
  c.tv = TvDistance(p, q);
  const double inv_hel = c.hel_sq > 0.0 ? 1.0 / c.hel_sq : kInf;

  c.gamma_grid = std::move(gamma_grid);
  c.n_priv.reserve(c.gamma_grid.size());
  for (double g : c.gamma_grid) {
    double d = DGamma(p, q, g);
    c.n_priv.push_back(inv_hel + (d > 0.0 ? 1.0 / d : kInf));
  }
  for (std::size_t i = 1; i < c.n_priv.size(); ++i) {
    if (c.n_priv[i] > c.n_priv[i - 1] * (1.0 + 1e-12)) {
      throw std::logic_error("n_priv increased in gamma");
    }
  }

  c.n_grid = std::move(n_grid);
  c.gamma_star.reserve(c.n_grid.size());
  for (double n : c.n_grid) {
    double gs = kInf;
    for (std::size_t i = 0; i < c.gamma_grid.size(); ++i) {
      if (c.n_priv[i] <= n) {
        gs = c.gamma_grid[i];
        break;
      }
    }
    c.gamma_star.push_back(gs);
  }

  c.eta_grid = std::move(eta_grid);
  c.n_transformation.reserve(c.eta_grid.size());
  for (double eta : c.eta_grid) {
    double budget = 1.0 / (constants.eta_scale * eta);
    double nt = kInf;
    for (std::size_t j = 0; j < c.n_grid.size(); ++j) {
      if (c.n_grid[j] * constants.gamma_scale * c.gamma_star[j] <= budget) {
        nt = constants.n_scale * c.n_grid[j];
        break;
      }
    }
    c.n_transformation.push_back(nt);
  }
  return c;
}

std::vector<double> LogGrid(double lo, double hi, int per_decade) {
  if (!(lo > 0.0) || !(hi >= lo) || per_decade < 1) {
    throw PreconditionViolated("log grid needs 0 < lo <= hi, per_decade >= 1");
  }
  int steps =
      static_cast<int>(std::lround(std::log10(hi / lo) * per_decade));
  std::vector<double> g;
  for (int i = 0; i <= steps; ++i) {
    g.push_back(lo * std::pow(10.0, static_cast<double>(i) / per_decade));
  }
  return g;
}

std::vector<double> IntegerLogGrid(double lo, double hi, int per_decade) {
  std::vector<double> g;
  for (double x : LogGrid(lo, hi, per_decade)) {
    double r = std::round(x);
    if (g.empty() || r > g.back()) g.push_back(r);
  }
  return g;
}

std::vector<double> GeometricGrid(double lo, double hi, double ratio) {
  if (!(lo > 0.0) || !(hi >= lo) || !(ratio > 1.0)) {
    throw PreconditionViolated("geometric grid needs 0 < lo <= hi, ratio > 1");
  }
  std::vector<double> g;
  for (int i = 0;; ++i) {
    double x = lo * std::pow(ratio, i);
    if (x > hi * (1.0 + 1e-12)) break;
    g.push_back(x);
  }
  return g;
}

std::string PrivacyCurveCsv(const PrivacyCurve& c) {
  std::ostringstream out;
  out << "curve,x,value,regime_label\n";
  const double upper_gamma = c.tv * c.tv / c.hel_sq;
  for (std::size_t i = 0; i < c.gamma_grid.size(); ++i) {
    double g = c.gamma_grid[i];
    const char* label = g <= c.tv            ? "gamma<=tv"
                        : g < upper_gamma    ? "tv<gamma<tv^2/hel^2"
                                             : "gamma>=tv^2/hel^2";
    out << "n_priv," << FormatDouble(g) << ',' << FormatDouble(c.n_priv[i])
        << ',' << label << '\n';
  }
  for (std::size_t j = 0; j < c.n_grid.size(); ++j) {
    double n = c.n_grid[j];
    const char* label = n < 1.0 / c.hel_sq             ? "n<1/hel^2"
                        : n <= 1.0 / (c.tv * c.tv)     ? "1/hel^2<=n<=1/tv^2"
                                                       : "n>1/tv^2";
    out << "gamma_star," << FormatDouble(n) << ','
        << FormatDouble(c.gamma_star[j]) << ',' << label << '\n';
  }
  for (std::size_t j = 0; j < c.eta_grid.size(); ++j) {
    double eta = c.eta_grid[j];
    const char* label = eta < c.hel_sq ? "eta<hel^2" : "eta>=hel^2";
    out << "n_transformation," << FormatDouble(eta) << ','
        << FormatDouble(c.n_transformation[j]) << ',' << label << '\n';
  }
  return out.str();
}

}  // namespace robustht
