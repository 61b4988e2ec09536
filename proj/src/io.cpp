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

#include "robustht/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace robustht {

namespace {

bool EndsWith(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string Trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double ParseReal(const std::string& token) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    throw ParseError("not a number: '" + token + "'");
  }
  if (used != token.size()) throw ParseError("not a number: '" + token + "'");
  return v;
}

void Dump(const Json& j, int indent, int depth, std::string& out) {
  auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(k).dump();
        out += indent < 0 ? ":" : ": ";
        Dump(v, indent, depth + 1, out);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& v : j) flat = flat && !v.is_structured();
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += flat && indent >= 0 ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        Dump(v, indent, depth + 1, out);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float:
      out += FormatDouble(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string FormatDouble(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

Dist ParseDist(std::string_view text, bool csv) {
  std::vector<double> v;
  if (csv) {
    std::string body = Trim(text);
    if (body.empty()) throw ParseError("empty CSV distribution");
    if (body.find('\n') != std::string::npos) {
      throw ParseError("CSV distribution must be a single row");
    }
    std::stringstream ss(body);
    std::string cell;
    while (std::getline(ss, cell, ',')) v.push_back(ParseReal(Trim(cell)));
  } else {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw ParseError(std::string("bad JSON: ") + e.what());
    }
    if (!j.is_array()) throw ParseError("distribution JSON must be an array");
    for (const auto& x : j) {
      if (!x.is_number()) throw ParseError("distribution entries must be numbers");
      v.push_back(x.get<double>());
    }
  }
  if (v.empty()) throw ParseError("empty distribution");
  return Dist(std::move(v));
}

Dist ReadDistFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseDist(ss.str(), EndsWith(path, ".csv"));
}

Json NumberJson(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

Json ToJson(const Dist& d) {
  Json a = Json::array();
  for (double x : d.probs()) a.push_back(x);
  return a;
}

Json ToJson(const ClipPair& c) {
  Json j;
  j["lower"] = NumberJson(c.lower);
  j["upper"] = NumberJson(c.upper);
  j["degenerate_low"] = c.degenerate_low;
  j["degenerate_high"] = c.degenerate_high;
  return j;
}

Json ToJson(const LfdPair& l) {
  Json j;
  j["model"] = std::string(ModelName(l.model));
  j["eps"] = l.eps;
  if (l.model == Model::kSub) j["eps_q"] = l.eps_q;
  j["clips"] = {{"lower", NumberJson(l.clips.lower)},
                {"upper", NumberJson(l.clips.upper)}};
  j["p_star"] = ToJson(l.p_star);
  j["q_star"] = ToJson(l.q_star);
  j["degenerate_high"] = l.degenerate_high();
  j["degenerate_low"] = l.degenerate_low();
  return j;
}

Json ToJson(const TrialReport& r) {
  Json j;
  j["n"] = r.n;
  j["trials"] = r.trials;
  j["type1"] = r.type1;
  j["type2"] = r.type2;
  j["ci1"] = r.ci1;
  j["ci2"] = r.ci2;
  j["ci_radius"] = r.ci_radius;
  j["seed"] = r.seed;
  return j;
}

std::string DumpJson(const Json& j, int indent) {
  std::string out;
  Dump(j, indent, 0, out);
  return out;
}

}  // namespace robustht
