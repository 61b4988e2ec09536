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

#ifndef ROBUSTHT_PARALLEL_HPP_
#define ROBUSTHT_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace robustht {

// Worker count from ROBUSTHT_JOBS, or 1 when unset or malformed.
int DefaultJobs();

// Calls fn(i) for i in [0, count) on up to `jobs` threads. Each index runs
// exactly once; callers write results into per-index slots so the outcome
// does not depend on scheduling. The first exception thrown is rethrown.
void ParallelFor(std::size_t count, int jobs,
                 const std::function<void(std::size_t)>& fn);

}  // namespace robustht

#endif  // ROBUSTHT_PARALLEL_HPP_
