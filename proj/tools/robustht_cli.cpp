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

// robustht: command-line front end.
//
// Exit codes: 0 success, 1 domain error, 2 usage or parse error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "robustht/adversary.hpp"
#include "robustht/complexity.hpp"
#include "robustht/dist.hpp"
#include "robustht/errors.hpp"
#include "robustht/experiments.hpp"
#include "robustht/io.hpp"
#include "robustht/lfd.hpp"
#include "robustht/parallel.hpp"

namespace robustht {
namespace {

struct Options {
  std::string p_path;
  std::string q_path;
  std::string model = "tv";
  double eps = 0.01;
  double eps_q = -1.0;
  std::string out;
  std::string format;
  int jobs = 1;
  std::optional<std::uint64_t> seed;

  // complexity / curve
  std::int64_t exact_n_max = 0;
  double target_error = 0.1;
  double eps_min = 0.0;
  double eps_max = 0.0;
  int per_decade = 10;

  // jump / breakdown
  double t = 0.25;
  std::vector<std::string> eps_grid{"default"};
  std::vector<std::int64_t> n_list{50000};
  std::int64_t trials = 2000;
  double scan_min = 1e-8;

  // sandwich
  std::size_t count = 1000;
  double delta0 = 1.0;

  // simulate
  std::string adversary = "a-tv";
  std::string strategy;
  std::string fixed_p;
  std::string fixed_q;
  std::string test = "clipped-lr";
  std::string calib_model;
  double calib = 0.1;
  double threshold = 0.0;
  double tie = 1.0;
  std::int64_t n = 1000;
  double jump_eps = 0.05;
  bool search = false;
  std::int64_t search_n_max = 1 << 22;

  // privacy
  double alpha = 0.0;
  double gamma_min = 1e-6;
  double gamma_max = 1e6;
  int gamma_per_decade = 100;
  double n_max = 1e10;
  int n_per_decade = 200;
  double eta_min = 1e-5;
  double eta_max = 0.5;
  double eta_ratio = 2.0;
  double n_scale = 1.0;
  double gamma_scale = 1.0;
  double eta_scale = 1.0;

  // nosim
  std::vector<double> cs{2.0, 10.0, 100.0};
};

const std::set<std::string> kModelNames{"hub", "tv", "sub"};
const std::set<std::string> kAdversaryNames{"hub", "tv", "sub",
                                            "a-hub", "a-tv", "a-sub"};

// Every option of the subcommand with its resolved value. --jobs, --out and
// --config are left out so the bytes of an output do not depend on them.
Json ResolvedConfig(const CLI::App& sub, const Options& o) {
  Json j;
  j["command"] = sub.get_name();
  for (const CLI::Option* opt : sub.get_options()) {
    std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "jobs" || name == "out" ||
        name == "config" || name == "seed") {
      continue;
    }
    std::vector<std::string> vals;
    if (opt->count() > 0) {
      vals = opt->results();
    } else {
      std::string d = opt->get_default_str();
      if (d.empty()) continue;
      if (d.size() > 1 && d.front() == '[' && d.back() == ']') {
        std::stringstream ss(d.substr(1, d.size() - 2));
        std::string item;
        while (std::getline(ss, item, ',')) {
          item.erase(0, item.find_first_not_of(' '));
          vals.push_back(item);
        }
      } else {
        vals.push_back(d);
      }
    }
    if (opt->get_expected_max() > 1) {
      j[name] = vals;
    } else if (opt->get_type_size() == 0) {
      j[name] = opt->count() > 0;
    } else {
      j[name] = vals.empty() ? std::string() : vals.back();
    }
  }
  if (o.seed) j["seed"] = *o.seed;
  return j;
}

std::uint64_t ResolveSeed(Options& o) {
  if (!o.seed) {
    std::random_device rd;
    o.seed = (static_cast<std::uint64_t>(rd()) << 32) | rd();
    std::cerr << "seed: " << *o.seed << "\n";
  }
  return *o.seed;
}

void Emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw ParseError("cannot write " + o.out);
  f << text;
}

void EmitJson(const Options& o, const Json& j) { Emit(o, DumpJson(j) + "\n"); }

std::string CsvWithConfig(const Json& config, const std::string& body) {
  return "# config: " + DumpJson(config, -1) + "\n" + body;
}

std::pair<Dist, Dist> ReadPair(const Options& o) {
  if (o.p_path.empty() || o.q_path.empty()) {
    throw ParseError("--p and --q are required");
  }
  Dist p = ReadDistFile(o.p_path);
  Dist q = ReadDistFile(o.q_path);
  if (p.size() != q.size()) throw AlphabetMismatch(p.size(), q.size());
  return {p, q};
}

std::vector<double> EpsGrid(const Options& o) {
  if (o.eps_grid.size() == 1 && o.eps_grid[0] == "default") {
    return DefaultEpsGrid();
  }
  std::vector<double> g;
  for (const std::string& s : o.eps_grid) {
    try {
      g.push_back(std::stod(s));
    } catch (const std::exception&) {
      throw ParseError("bad eps grid value: " + s);
    }
  }
  return g;
}

Json FitJson(const LogLogFit& f) {
  return Json{{"slope", f.slope},
              {"intercept", f.intercept},
              {"r_squared", f.r_squared}};
}

int CmdClips(const CLI::App& sub, Options& o) {
  auto [p, q] = ReadPair(o);
  Model m = ParseModel(o.model);
  ClipPair c = (m == Model::kSub && o.eps_q >= 0.0)
                   ? SolveSubClips(p, q, o.eps, o.eps_q)
                   : SolveClips(p, q, o.eps, m);
  Json j;
  j["config"] = ResolvedConfig(sub, o);
  j["clips"] = ToJson(c);
  EmitJson(o, j);
  return 0;
}

int CmdLfd(const CLI::App& sub, Options& o) {
  auto [p, q] = ReadPair(o);
  Model m = ParseModel(o.model);
  LfdPair l = (m == Model::kSub && o.eps_q >= 0.0)
                  ? BuildSubLfds(p, q, o.eps, o.eps_q)
                  : BuildLfds(p, q, o.eps, m);
  Json j;
  j["config"] = ResolvedConfig(sub, o);
  j["lfd"] = ToJson(l);
  j["hel_sq"] = HellingerSq(l.p_star, l.q_star);
  j["tv"] = TvDistance(l.p_star, l.q_star);
  EmitJson(o, j);
  return 0;
}

int CmdComplexity(const CLI::App& sub, Options& o) {
  auto [p, q] = ReadPair(o);
  ComplexityEstimate e = RobustComplexity(p, q, o.eps, ParseModel(o.model),
                                          o.exact_n_max, o.target_error);
  Json j;
  j["config"] = ResolvedConfig(sub, o);
  j["tv"] = TvDistance(p, q);
  j["hel_sq_clean"] = HellingerSq(p, q);
  j["estimate"] = {{"model", std::string(ModelName(e.model))},
                   {"eps", e.eps},
                   {"hel_sq", e.hel_sq},
                   {"predicted_n", e.predicted_n},
                   {"exact_n", e.exact_n ? Json(*e.exact_n) : Json(nullptr)}};
  EmitJson(o, j);
  return 0;
}

int CmdCurve(const CLI::App& sub, Options& o) {
  auto [p, q] = ReadPair(o);
  Model m = ParseModel(o.model);
  double tv = TvDistance(p, q);
  double hi = o.eps_max > 0.0 ? o.eps_max : tv / 4.0;
  double lo = o.eps_min > 0.0 ? o.eps_min : hi * 1e-3;
  std::vector<double> grid = LogGrid(lo, hi, o.per_decade);
  Json config = ResolvedConfig(sub, o);
  Json rows = Json::array();
  std::string csv = "eps,hel_sq,predicted_n\n";
  for (double e : grid) {
    LfdPair l = BuildLfds(p, q, e, m);
    double h = HellingerSq(l.p_star, l.q_star);
    rows.push_back({{"eps", e}, {"hel_sq", h}, {"predicted_n", 1.0 / h}});
    csv += FormatDouble(e) + "," + FormatDouble(h) + "," + FormatDouble(1.0 / h) + "\n";
  }
  if (o.format == "json") {
    EmitJson(o, Json{{"config", config}, {"rows", rows}});
  } else {
    Emit(o, CsvWithConfig(config, csv));
  }
  return 0;
}

int CmdJump(const CLI::App& sub, Options& o) {
  Model m = ParseModel(o.model);
  JumpResult r = JumpExperiment(EpsGrid(o), o.t, m);
  Json config = ResolvedConfig(sub, o);
  if (o.format == "csv") {
    std::string csv = "eps,eps1,eps2,hel_sq1,hel_sq2\n";
    for (const JumpRow& row : r.rows) {
      csv += FormatDouble(row.eps) + "," + FormatDouble(row.eps1) + "," +
             FormatDouble(row.eps2) + "," + FormatDouble(row.hel_sq1) + "," +
             FormatDouble(row.hel_sq2) + "\n";
    }
    Emit(o, CsvWithConfig(config, csv));
    return 0;
  }
  Json rows = Json::array();
  for (const JumpRow& row : r.rows) {
    rows.push_back({{"eps", row.eps},
                    {"eps1", row.eps1},
                    {"eps2", row.eps2},
                    {"hel_sq1", row.hel_sq1},
                    {"hel_sq2", row.hel_sq2}});
  }
  double expected1 = m == Model::kSub ? 1.0 + o.t : 1.0 + 2.0 * o.t;
  EmitJson(o, Json{{"config", config},
                   {"model", std::string(ModelName(m))},
                   {"t", o.t},
                   {"fit_eps2", FitJson(r.fit2)},
                   {"fit_eps1", FitJson(r.fit1)},
                   {"expected_slope_eps2", 2.0},
                   {"expected_slope_eps1", expected1},
                   {"rows", rows}});
  return 0;
}

int CmdBreakdown(const CLI::App& sub, Options& o) {
  Model m = ParseModel(o.model);
  std::uint64_t seed = ResolveSeed(o);
  Json j;
  j["config"] = ResolvedConfig(sub, o);
  JumpFamilyInstance inst = MakeJumpInstance(m, o.eps, o.t);
  j["eps1"] = inst.eps1;
  j["eps2"] = inst.eps2;
  j["expectation"] = m == Model::kSub ? "E_P2" : "E_Q2";
  j["error_of_interest"] = m == Model::kSub ? "type1" : "type2";
  OnsetScan scan = BreakdownOnsetScan(m, o.t, o.eps, o.scan_min);
  Json pts = Json::array();
  for (auto [e, z] : scan.points) pts.push_back({e, NumberJson(z)});
  j["onset_scan"] = {{"onset", scan.onset}, {"points", pts}};
  try {
    BreakdownResult r =
        BreakdownExperiment(m, o.eps, o.t, o.n_list, o.trials, seed, o.jobs);
    j["expected_z"] = NumberJson(r.expected_z);
    j["sign_holds"] = true;
    j["status"] = "ok";
    Json mc = Json::array();
    for (const TrialReport& t : r.mc) mc.push_back(ToJson(t));
    j["mc"] = mc;
    EmitJson(o, j);
    return 0;
  } catch (const ConditionNotMet& e) {
    j["expected_z"] = NumberJson(BreakdownExpectedZ(m, o.eps, o.t));
    j["sign_holds"] = false;
    j["status"] = "condition-not-met";
    j["message"] = e.what();
    EmitJson(o, j);
    std::cerr << "condition not met: " << e.what() << "\n";
    return 1;
  }
}

int CmdSandwich(const CLI::App& sub, Options& o) {
  std::uint64_t seed = ResolveSeed(o);
  std::vector<CorpusInstance> corpus = RandomCorpus(o.count, seed);
  std::vector<SandwichReport> reports = SandwichCertify(corpus, o.delta0, o.jobs);
  Json config = ResolvedConfig(sub, o);
  if (o.format == "csv") {
    std::string csv =
        "id,eps,hel_tv,hel_hub,hel_sub,hel_tv_half,tv_le_hub,"
        "half_hub_le_tv_half,clip_order,sub_ge_tv,sub_ge_hub,"
        "monotone_contribution,ratio_tv_rescaled,ratio_hub_rescaled,"
        "surrogate_ratio\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const SandwichReport& r = reports[i];
      std::ostringstream row;
      row << r.id << ',' << FormatDouble(corpus[i].eps) << ','
          << FormatDouble(r.hel_tv) << ',' << FormatDouble(r.hel_hub) << ','
          << FormatDouble(r.hel_sub) << ',' << FormatDouble(r.hel_tv_half)
          << ',' << r.tv_le_hub << ',' << r.half_hub_le_tv_half << ','
          << r.clip_order << ',' << r.sub_ge_tv << ',' << r.sub_ge_hub << ','
          << r.monotone_contribution << ',' << FormatDouble(r.ratio_tv_rescaled)
          << ',' << FormatDouble(r.ratio_hub_rescaled) << ','
          << FormatDouble(r.surrogate_ratio) << '\n';
      csv += row.str();
    }
    Emit(o, CsvWithConfig(config, csv));
    return 0;
  }
  std::int64_t f[6] = {0, 0, 0, 0, 0, 0};
  double lo_tv = kInf, hi_tv = 0.0, lo_hub = kInf, hi_hub = 0.0;
  for (const SandwichReport& r : reports) {
    f[0] += !r.tv_le_hub;
    f[1] += !r.half_hub_le_tv_half;
    f[2] += !r.clip_order;
    f[3] += !r.sub_ge_tv;
    f[4] += !r.sub_ge_hub;
    f[5] += !r.monotone_contribution;
    if (!std::isnan(r.ratio_tv_rescaled)) {
      lo_tv = std::min(lo_tv, r.ratio_tv_rescaled);
      hi_tv = std::max(hi_tv, r.ratio_tv_rescaled);
    }
    if (!std::isnan(r.ratio_hub_rescaled)) {
      lo_hub = std::min(lo_hub, r.ratio_hub_rescaled);
      hi_hub = std::max(hi_hub, r.ratio_hub_rescaled);
    }
  }
  bool pass = std::all_of(std::begin(f), std::end(f), [](auto x) { return x == 0; });
  EmitJson(o, Json{{"config", config},
                   {"instances", reports.size()},
                   {"failures",
                    {{"tv_le_hub", f[0]},
                     {"half_hub_le_tv_half", f[1]},
                     {"clip_order", f[2]},
                     {"sub_ge_tv", f[3]},
                     {"sub_ge_hub", f[4]},
                     {"monotone_contribution", f[5]}}},
                   {"ratio_tv_rescaled", {NumberJson(lo_tv), NumberJson(hi_tv)}},
                   {"ratio_hub_rescaled", {NumberJson(lo_hub), NumberJson(hi_hub)}},
                   {"pass", pass}});
  return 0;
}

int CmdSimulate(const CLI::App& sub, Options& o) {
  std::uint64_t seed = ResolveSeed(o);
  Dist p{std::vector<double>{1.0}};
  Dist q{std::vector<double>{1.0}};
  if (o.p_path.empty() && o.q_path.empty()) {
    std::tie(p, q) = JumpPair(o.jump_eps);
  } else {
    std::tie(p, q) = ReadPair(o);
  }
  AdversarySpec adv;
  adv.model = ParseAdversaryModel(o.adversary);
  adv.eps = o.eps;
  if (o.strategy.empty()) {
    adv.strategy = IsAdaptive(adv.model) ? Strategy::kGreedyAdaptive
                                         : Strategy::kLfdSampler;
  } else if (o.strategy == "lfd-sampler") {
    adv.strategy = Strategy::kLfdSampler;
  } else if (o.strategy == "fixed-dist") {
    adv.strategy = Strategy::kFixedDist;
    adv.fixed_p = ReadDistFile(o.fixed_p);
    adv.fixed_q = ReadDistFile(o.fixed_q);
  } else {
    adv.strategy = Strategy::kGreedyAdaptive;
  }
  TestSpec ts;
  ts.kind = ParseTestKind(o.test);
  std::string base = o.adversary.substr(o.adversary.find('-') == std::string::npos
                                            ? 0
                                            : o.adversary.find('-') + 1);
  ts.calib_model = ParseModel(o.calib_model.empty() ? base : o.calib_model);
  ts.calib_eps = o.calib;
  ts.threshold = o.threshold;
  ts.tie_randomization = o.tie;
  Test test = Test::Make(p, q, ts);
  Json j;
  j["config"] = ResolvedConfig(sub, o);
  j["report"] = ToJson(RunAdversaryTrial(p, q, adv, test, o.n, o.trials, seed, o.jobs));
  if (o.search) {
    j["empirical_n"] = EmpiricalComplexitySearch(p, q, adv, test, o.target_error,
                                                 o.trials, seed, o.search_n_max,
                                                 o.jobs);
  }
  EmitJson(o, j);
  return 0;
}

int CmdPrivacy(const CLI::App& sub, Options& o) {
  Dist p{std::vector<double>{1.0}};
  Dist q{std::vector<double>{1.0}};
  if (o.p_path.empty() && o.q_path.empty()) {
    if (!(o.alpha > 0.0)) throw ParseError("give --p/--q or --alpha");
    std::tie(p, q) = PrivacyExample(o.alpha);
  } else {
    std::tie(p, q) = ReadPair(o);
  }
  std::vector<double> n_grid = IntegerLogGrid(1.0, o.n_max, o.n_per_decade);
  PrivacyConstants k{o.n_scale, o.gamma_scale, o.eta_scale};
  PrivacyCurve c = PrivacyCurves(
      p, q, LogGrid(o.gamma_min, o.gamma_max, o.gamma_per_decade), n_grid,
      GeometricGrid(o.eta_min, o.eta_max, o.eta_ratio), k);
  Json config = ResolvedConfig(sub, o);
  if (o.format == "json") {
    auto arr = [](const std::vector<double>& v) {
      Json a = Json::array();
      for (double x : v) a.push_back(NumberJson(x));
      return a;
    };
    EmitJson(o, Json{{"config", config},
                     {"hel_sq", c.hel_sq},
                     {"tv", c.tv},
                     {"gamma_grid", arr(c.gamma_grid)},
                     {"n_priv", arr(c.n_priv)},
                     {"n_grid", arr(c.n_grid)},
                     {"gamma_star", arr(c.gamma_star)},
                     {"eta_grid", arr(c.eta_grid)},
                     {"n_transformation", arr(c.n_transformation)}});
  } else {
    Emit(o, CsvWithConfig(config, PrivacyCurveCsv(c)));
  }
  return 0;
}

int CmdNosim(const CLI::App& sub, Options& o) {
  std::vector<Witness> ws = NoSimulationWitnesses(o.cs);
  Json arr = Json::array();
  bool all = true;
  for (const Witness& w : ws) {
    all = all && w.reproduced();
    Json members = Json::array();
    for (const auto& [center, cand] : w.members) {
      members.push_back({{"center", ToJson(center)}, {"candidate", ToJson(cand)}});
    }
    arr.push_back({{"part", w.part},
                   {"label", w.label},
                   {"C", w.c},
                   {"eps", w.eps},
                   {"members", members},
                   {"in_set", {std::string(ModelName(w.in_model)), w.in_eps}},
                   {"out_set", {std::string(ModelName(w.out_model)), w.out_eps}},
                   {"in_observed", w.in_observed},
                   {"out_observed", w.out_observed},
                   {"closed_form_ok", w.closed_form_ok},
                   {"reproduced", w.reproduced()}});
  }
  EmitJson(o, Json{{"config", ResolvedConfig(sub, o)},
                   {"witnesses", arr},
                   {"all_reproduced", all}});
  return 0;
}

// Turns a JSON config object into argv tokens for the keys not already
// given on the command line.
std::vector<std::string> ConfigTokens(const std::string& path,
                                      const std::vector<std::string>& argv,
                                      std::string* command) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open config " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("bad config JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  auto given = [&](const std::string& flag) {
    for (const std::string& a : argv) {
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    }
    return false;
  };
  auto scalar = [](const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  };
  std::vector<std::string> out;
  for (const auto& [key, v] : j.items()) {
    if (key == "command") {
      *command = v.get<std::string>();
      continue;
    }
    std::string flag = "--" + key;
    if (given(flag)) continue;
    if (v.is_boolean()) {
      if (v.get<bool>()) out.push_back(flag);
    } else if (v.is_array()) {
      out.push_back(flag);
      for (const auto& x : v) out.push_back(scalar(x));
    } else {
      out.push_back(flag);
      out.push_back(scalar(v));
    }
  }
  return out;
}

int Main(int argc, char** argv) {
  Options o;
  o.jobs = DefaultJobs();
  CLI::App app{"Robust hypothesis testing toolkit"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  std::string config_path;

  auto add_common = [&](CLI::App* s) {
    s->add_option("--out", o.out, "Output file (default stdout)");
    s->add_option("--jobs", o.jobs, "Worker threads (default $ROBUSTHT_JOBS or 1)")
        ->check(CLI::PositiveNumber);
    s->add_option("--config", config_path, "JSON file of option values");
  };
  auto add_pair = [&](CLI::App* s) {
    s->add_option("--p", o.p_path, "Distribution p (.json array or .csv row)");
    s->add_option("--q", o.q_path, "Distribution q");
  };
  auto add_model = [&](CLI::App* s) {
    s->add_option("--model", o.model, "hub, tv or sub")
        ->check(CLI::IsMember(kModelNames, CLI::ignore_case));
  };
  auto add_seed = [&](CLI::App* s) {
    s->add_option("--seed", o.seed, "Master seed (drawn and echoed if absent)");
  };
  auto add_format = [&](CLI::App* s, const std::string& def) {
    o.format.clear();
    s->add_option("--format", o.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->default_str(def);
  };

  CLI::App* clips = app.add_subcommand("clips", "Solve the calibration clips");
  add_pair(clips);
  add_model(clips);
  clips->add_option("--eps", o.eps, "Contamination level")->required();
  clips->add_option("--eps-q", o.eps_q, "Subtractive level around q (default eps)")
      ->default_str("");
  add_common(clips);

  CLI::App* lfd = app.add_subcommand("lfd", "Least-favourable distributions");
  add_pair(lfd);
  add_model(lfd);
  lfd->add_option("--eps", o.eps, "Contamination level")->required();
  lfd->add_option("--eps-q", o.eps_q, "Subtractive level around q (default eps)")
      ->default_str("");
  add_common(lfd);

  CLI::App* cx = app.add_subcommand("complexity", "Robust sample complexity");
  add_pair(cx);
  add_model(cx);
  cx->add_option("--eps", o.eps, "Contamination level")->required();
  cx->add_option("--exact-n-max", o.exact_n_max, "Run the exact oracle up to this n");
  cx->add_option("--target-error", o.target_error, "Target type1 + type2");
  add_common(cx);

  CLI::App* curve = app.add_subcommand("curve", "Sample complexity against eps");
  add_pair(curve);
  add_model(curve);
  curve->add_option("--eps-min", o.eps_min, "Smallest eps (default eps-max/1000)")
      ->default_str("");
  curve->add_option("--eps-max", o.eps_max, "Largest eps (default tv/4)")
      ->default_str("");
  curve->add_option("--per-decade", o.per_decade, "Grid points per decade");
  add_format(curve, "csv");
  add_common(curve);

  CLI::App* jump = app.add_subcommand("jump", "Jump-family slope experiment");
  add_model(jump);
  jump->add_option("--t", o.t, "Exponent t in eps1 = eps2 - eps^(1+t)");
  jump->add_option("--eps-grid", o.eps_grid, "'default' or a list of eps");
  add_format(jump, "json");
  add_common(jump);

  CLI::App* bd = app.add_subcommand("breakdown", "Underestimated contamination");
  add_model(bd);
  bd->add_option("--eps", o.eps, "Jump-family eps")->required();
  bd->add_option("--t", o.t, "Exponent t");
  bd->add_option("--n", o.n_list, "Sample sizes for the Monte Carlo");
  bd->add_option("--trials", o.trials, "Trials per side")->check(CLI::PositiveNumber);
  bd->add_option("--scan-min", o.scan_min, "Smallest eps of the onset scan");
  add_seed(bd);
  add_common(bd);

  CLI::App* sw = app.add_subcommand("sandwich", "Certify the model comparisons");
  sw->add_option("--count", o.count, "Corpus size");
  sw->add_option("--delta0", o.delta0, "Slack delta0");
  add_seed(sw);
  add_format(sw, "json");
  add_common(sw);

  CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo error estimate");
  add_pair(sim);
  sim->add_option("--adversary", o.adversary, "hub, tv, sub, a-hub, a-tv or a-sub")
      ->check(CLI::IsMember(kAdversaryNames, CLI::ignore_case));
  sim->add_option("--eps", o.eps, "Adversary level");
  sim->add_option("--strategy", o.strategy, "lfd-sampler, fixed-dist or greedy-adaptive")
      ->check(CLI::IsMember({"lfd-sampler", "fixed-dist", "greedy-adaptive"}));
  sim->add_option("--fixed-p", o.fixed_p, "Presented distribution under p");
  sim->add_option("--fixed-q", o.fixed_q, "Presented distribution under q");
  sim->add_option("--test", o.test, "clipped-lr, scheffe or h-stat")
      ->check(CLI::IsMember({"clipped-lr", "scheffe", "h-stat"}));
  sim->add_option("--calib", o.calib, "Calibration eps of the clipped LR test");
  sim->add_option("--calib-model", o.calib_model, "Calibration model (default: adversary's)")
      ->check(CLI::IsMember(kModelNames, CLI::ignore_case));
  sim->add_option("--threshold", o.threshold, "Clipped LR threshold");
  sim->add_option("--tie", o.tie, "Probability of deciding p on a tie")
      ->check(CLI::Range(0.0, 1.0));
  sim->add_option("--n", o.n, "Samples per trial");
  sim->add_option("--trials", o.trials, "Trials per side")->check(CLI::PositiveNumber);
  sim->add_option("--jump-eps", o.jump_eps, "Jump-family eps when --p/--q are absent");
  sim->add_flag("--search", o.search, "Also run the empirical complexity search");
  sim->add_option("--target-error", o.target_error, "Search target");
  sim->add_option("--search-n-max", o.search_n_max, "Search budget");
  add_seed(sim);
  add_common(sim);

  CLI::App* pv = app.add_subcommand("privacy", "Private sample-complexity curves");
  add_pair(pv);
  pv->add_option("--alpha", o.alpha, "Example parameter when --p/--q are absent");
  pv->add_option("--gamma-min", o.gamma_min);
  pv->add_option("--gamma-max", o.gamma_max);
  pv->add_option("--gamma-per-decade", o.gamma_per_decade);
  pv->add_option("--n-max", o.n_max);
  pv->add_option("--n-per-decade", o.n_per_decade);
  pv->add_option("--eta-min", o.eta_min);
  pv->add_option("--eta-max", o.eta_max);
  pv->add_option("--eta-ratio", o.eta_ratio);
  pv->add_option("--n-scale", o.n_scale);
  pv->add_option("--gamma-scale", o.gamma_scale);
  pv->add_option("--eta-scale", o.eta_scale);
  add_format(pv, "csv");
  add_common(pv);

  CLI::App* ns = app.add_subcommand("nosim", "No-simulation witnesses");
  ns->add_option("--c", o.cs, "Constants C");
  add_common(ns);

  std::vector<std::string> args(argv + 1, argv + argc);
  // Expand --config before the real parse.
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      continue;
    }
    std::string command;
    std::vector<std::string> extra = ConfigTokens(path, args, &command);
    if (!command.empty() && (args.empty() || args[0].rfind("-", 0) == 0)) {
      args.insert(args.begin(), command);
    }
    args.insert(args.end(), extra.begin(), extra.end());
    break;
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (o.format.empty()) o.format = "json";
  for (const CLI::App* s : app.get_subcommands()) {
    const std::string& name = s->get_name();
    // add_format's default_str only fills the help text; resolve it here.
    if (s->get_option_no_throw("--format") != nullptr &&
        s->get_option("--format")->count() == 0) {
      o.format = s->get_option("--format")->get_default_str();
    }
    if (name == "clips") return CmdClips(*s, o);
    if (name == "lfd") return CmdLfd(*s, o);
    if (name == "complexity") return CmdComplexity(*s, o);
    if (name == "curve") return CmdCurve(*s, o);
    if (name == "jump") return CmdJump(*s, o);
    if (name == "breakdown") return CmdBreakdown(*s, o);
    if (name == "sandwich") return CmdSandwich(*s, o);
    if (name == "simulate") return CmdSimulate(*s, o);
    if (name == "privacy") return CmdPrivacy(*s, o);
    if (name == "nosim") return CmdNosim(*s, o);
  }
  return 2;
}

}  // namespace
}  // namespace robustht

int main(int argc, char** argv) {
  try {
    return robustht::Main(argc, argv);
  } catch (const robustht::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const robustht::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
