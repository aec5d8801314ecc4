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

#ifndef VAPEVAL_TESTS_EVAL_BUNDLE_H_
#define VAPEVAL_TESTS_EVAL_BUNDLE_H_

// Trace fixtures for `vapeval evaluate`, checked in under
// tests/data/eval_bundle and regenerated by make_eval_bundle.
//
//   alignments/<system>/<condition>/<id>.json
//   traces/<system>/<condition>/<id>.{vapt,trace,ptrace}
//   external_metrics.csv
//
// System "oracle" holds the oracle cases in all three trace formats plus
// one alignment without a trace. System "fig2" holds hand-shaped p-traces
// on the fig2.json alignment for every condition.

#include <string>

#include "vapeval/turn_metrics.h"

namespace vapeval::testing {

void write_eval_bundle(const std::string& root, const std::string& fig2_alignment);

// Metrics the fig2 traces were shaped to produce.
TurnMetrics fig2_expected(const std::string& condition, int index);
inline constexpr int kFig2Samples = 3;

}  // namespace vapeval::testing

#endif  // VAPEVAL_TESTS_EVAL_BUNDLE_H_
