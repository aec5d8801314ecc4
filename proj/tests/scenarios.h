// Copyright 2026 The vapeval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VAPEVAL_TESTS_SCENARIOS_H_
#define VAPEVAL_TESTS_SCENARIOS_H_

// Constructed two-party scenarios with metrics worked out by hand from the
// frame windows (see the comments in scenarios.cc). Used by the acceptance
// suite and the CLI tests.

#include <string>
#include <vector>

#include "json.hpp"
#include "vapeval/alignment.h"
#include "vapeval/predictor.h"
#include "vapeval/turn_metrics.h"

namespace vapeval::testing {

struct OracleCase {
  std::string name;
  VaScenario va;
  Alignment alignment;
  TurnMetrics expected;
};

std::vector<OracleCase> oracle_cases();

// Scenario JSON accepted by `vapeval oracle-sim`, alignment included.
nlohmann::json case_to_json(const OracleCase& c);

}  // namespace vapeval::testing

#endif  // VAPEVAL_TESTS_SCENARIOS_H_
