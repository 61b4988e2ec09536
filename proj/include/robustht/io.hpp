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

// Reading distributions and writing results as JSON and CSV.

#ifndef ROBUSTHT_IO_HPP_
#define ROBUSTHT_IO_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"
#include "robustht/adversary.hpp"
#include "robustht/dist.hpp"
#include "robustht/lfd.hpp"

namespace robustht {

using Json = nlohmann::ordered_json;

// Malformed input files or values. The CLI maps this to exit code 2.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// 17 significant digits; "inf", "-inf" and "nan" for non-finite values.
std::string FormatDouble(double x);

// Parses a JSON array of reals or a one-row CSV. Throws ParseError on bad
// syntax and InvalidDistribution when the masses are not a distribution.
Dist ParseDist(std::string_view text, bool csv);
// Picks the format by extension: .csv is CSV, anything else JSON.
Dist ReadDistFile(const std::string& path);

// Non-finite doubles become the strings "inf"/"-inf"; NaN becomes null.
Json NumberJson(double x);
Json ToJson(const Dist& d);
Json ToJson(const ClipPair& c);
Json ToJson(const LfdPair& l);
Json ToJson(const TrialReport& r);

// Serializes with every float printed by FormatDouble, so output is
// byte-stable across runs and platforms.
std::string DumpJson(const Json& j, int indent = 2);

}  // namespace robustht

#endif  // ROBUSTHT_IO_HPP_
